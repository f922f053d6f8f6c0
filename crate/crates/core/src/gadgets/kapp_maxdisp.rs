//! k-approval under maximum displacement, radius 2, with prices.
//!
//! Unit-price voters encode the formula; expensive voters (price `10mn`,
//! above the budget `m+n`) only pad scores so that the target has 10
//! approvals, every named rival has 10 as well before bribery, and each rival
//! must give up exactly one.

use alloc::format;
use alloc::vec::Vec;

use super::{chosen_slot, permute, Builder, GadgetInstance, Reduction, Role, Slot};
use crate::election::{is_unique_winner, Preference, VotingRule};
use crate::gadgets::sat::Sat3B2Instance;
use crate::instance::BriberyInstance;
use crate::metrics::Metric;
use crate::{Error, Result};

/// Fillers before each unlisted named alternative.
const SEP: usize = 10;
const PAD: u8 = 0;

fn voter_count(s: &Sat3B2Instance) -> usize {
    let (n, m) = (s.vars(), s.len());
    2 * n + 3 * m + 10 + 8 * 6 * n + 7 * m
}

/// Smallest filler pool: no filler may sit in the top `k+10` of two voters,
/// and each voter must be able to draw all its fillers without repeats.
pub fn kapp_maxdisp_filler_floor(sat: &Sat3B2Instance, k: usize) -> usize {
    let named = 6 * sat.vars() + sat.len() + 1;
    let per_voter = k + 2 + SEP * named;
    (voter_count(sat) * (k + 10)).max(per_voter)
}

pub fn gen_kapproval_maxdisp_priced_gadget(
    sat: &Sat3B2Instance,
    k: usize,
    filler_size: Option<usize>,
) -> Result<GadgetInstance> {
    if k < 2 {
        return Err(Error::Gadget(format!("k must be at least 2, got {k}")));
    }
    let floor = kapp_maxdisp_filler_floor(sat, k);
    let count = filler_size.unwrap_or(floor);
    if count < floor {
        return Err(Error::Gadget(format!("filler size {count} below the floor {floor}")));
    }
    let (n, m) = (sat.vars(), sat.len());
    let expensive = 10 * (m * n) as u64;
    let mut b = Builder::new();
    let c = b.alt("special", "c".into(), "c".into());
    // per variable: a, abar, b, bbar, w, w'
    let mut f = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in 1..=n as i32 {
        let mut fi = [0; 2];
        let mut gi = [0; 2];
        for neg in 0..2 {
            let bar = if neg == 1 { "~" } else { "" };
            let tag = if neg == 1 { "n" } else { "" };
            fi[neg] = b.alt("literal", format!("{bar}a_{i}"), format!("{tag}a{i}"));
            gi[neg] = b.alt("literal", format!("{bar}b_{i}"), format!("{tag}b{i}"));
        }
        let wi = b.alt("variable", format!("w_{i}"), format!("w{i}"));
        let wpi = b.alt("variable", format!("w'_{i}"), format!("wp{i}"));
        f.push(fi);
        g.push(gi);
        w.push([wi, wpi]);
    }
    let y: Vec<usize> = (1..=m).map(|j| b.alt("clause", format!("y_{j}"), format!("y{j}"))).collect();
    let idx = |l: i32| (l.unsigned_abs() as usize - 1, (l < 0) as usize);

    let top = k - 2;
    let spec = |items: &[Slot]| {
        let mut v = alloc::vec![Slot::Filler; top];
        v.extend_from_slice(items);
        v
    };
    use Slot::{Alt, Filler};
    for i in 0..n {
        let v = i as i32 + 1;
        for l in [v, -v] {
            let (vi, neg) = idx(l);
            let s = spec(&[Alt(w[i][0]), Alt(w[i][1]), Alt(f[vi][neg]), Alt(g[vi][neg])]);
            b.voter(&s, SEP, Role::Literal(l), 1);
        }
    }
    for (j, cl) in sat.clauses().iter().enumerate() {
        for (r, &l) in cl.iter().enumerate() {
            let (vi, neg) = idx(l);
            let h = if sat.occurrences(l)[0] == j { f[vi][neg] } else { g[vi][neg] };
            let s = spec(&[Filler, Alt(y[j]), Alt(h), Filler]);
            b.voter(&s, SEP, Role::Clause { clause: j, slot: r }, 1);
        }
    }
    b.voters(10, &spec(&[Alt(c), Filler]), SEP, Role::Block(PAD), expensive);
    for i in 0..n {
        for x in [f[i][0], f[i][1], g[i][0], g[i][1], w[i][0], w[i][1]] {
            b.voters(8, &spec(&[Alt(x), Filler]), SEP, Role::Block(PAD), expensive);
        }
    }
    for &x in &y {
        b.voters(7, &spec(&[Alt(x), Filler]), SEP, Role::Block(PAD), expensive);
    }
    debug_assert_eq!(b.skeletons.len(), voter_count(sat));

    let (profile, names, fillers, roles, prices) = b.finish("f", count, k + 10)?;
    let nv = profile.n();
    let instance = BriberyInstance {
        profile,
        target: c,
        deltas: alloc::vec![2; nv],
        prices,
        budget: (m + n) as u64,
        rule: VotingRule::KApproval(k),
        metric: Metric::MaxDisplacement,
    };
    instance.validate()?;
    if is_unique_winner(&instance.profile, &instance.rule, c)? {
        return Err(Error::Internal("target already wins the generated instance".into()));
    }
    Ok(GadgetInstance {
        instance,
        reduction: Reduction::KApprovalMaxDispPriced,
        sat: sat.clone(),
        source_vars: sat.vars(),
        pad: count,
        k,
        names,
        fillers,
        borda: None,
        roles,
    })
}

pub(crate) fn witness(g: &GadgetInstance, a: &[bool]) -> Vec<Preference> {
    let at = g.k - 2;
    let chosen: Vec<Option<usize>> = (0..g.sat.len()).map(|j| chosen_slot(&g.sat, a, j)).collect();
    g.instance
        .profile
        .prefs()
        .iter()
        .zip(&g.roles)
        .map(|(p, role)| match *role {
            // the false literal's pair takes the approvals from w, w'
            Role::Literal(l) if !Sat3B2Instance::literal_true(a, l) => permute(p, at, &[2, 3, 0, 1]),
            Role::Clause { clause, slot } if chosen[clause] == Some(slot) => permute(p, at, &[0, 2, 1, 3]),
            _ => p.clone(),
        })
        .collect()
}
