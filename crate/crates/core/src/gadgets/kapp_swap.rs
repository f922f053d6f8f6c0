//! k-approval under swap distance, radius 2, unpriced.
//!
//! Variable voters `w_i > a(l,0) > a(l,1) > z_i` decide which literal's pair
//! of alternatives takes an approval; clause voters `y_j > d_j > a(l,f) > d'_j`
//! can demote `y_j` only by lifting a literal alternative. Large blocks headed
//! by `u` set every rival's score one below or at the target's.
//!
//! For `k > 2` each voter gets `k-2` private dummies on top.

use alloc::format;
use alloc::vec::Vec;

use super::{chosen_slot, even_sat, lit_symbol, lit_tag, permute, Builder, GadgetInstance, Reduction, Role, Slot};
use crate::election::{is_unique_winner, Preference, VotingRule};
use crate::gadgets::sat::Sat3B2Instance;
use crate::instance::BriberyInstance;
use crate::metrics::Metric;
use crate::{Error, Result};

/// Smallest copy parameter for which the score table holds: `d_1` collects
/// four approvals in the bribed profile and must stay below it.
pub const KAPP_SWAP_MIN_PAD: usize = 5;

const C_VOTER: u8 = 0;
const U_C: u8 = 1;
const U_PAIR: u8 = 2;

/// The generous copy parameter `100 m^2 n^2`, on the (even) formula actually
/// encoded.
pub fn safe_pad(sat: &Sat3B2Instance) -> usize {
    let s = even_sat(sat);
    100 * s.len() * s.len() * s.vars() * s.vars()
}

pub fn gen_kapproval_swap_gadget(sat: &Sat3B2Instance, delta_pad: Option<usize>, k: usize) -> Result<GadgetInstance> {
    if k < 2 {
        return Err(Error::Gadget(format!("k must be at least 2, got {k}")));
    }
    let s = even_sat(sat);
    let pad = delta_pad.unwrap_or(KAPP_SWAP_MIN_PAD);
    if pad < KAPP_SWAP_MIN_PAD {
        return Err(Error::Gadget(format!("padding {pad} below the floor {KAPP_SWAP_MIN_PAD}")));
    }
    let (n, m) = (s.vars(), s.len());
    let mut b = Builder::new();
    // a[v][neg][mu]
    let mut a = Vec::with_capacity(n);
    for v in 1..=n as i32 {
        let mut per = [[0usize; 2]; 2];
        for (neg, l) in [v, -v].into_iter().enumerate() {
            for mu in 0..2 {
                per[neg][mu] = b.alt(
                    "literal",
                    format!("a({},{mu})", lit_symbol(l)),
                    format!("a{}_{mu}", lit_tag(l)),
                );
            }
        }
        a.push(per);
    }
    let c = b.alt("special", "c".into(), "c".into());
    let u = b.alt("special", "u".into(), "u".into());
    let w: Vec<usize> = (1..=n).map(|i| b.alt("variable", format!("w_{i}"), format!("w{i}"))).collect();
    let z: Vec<usize> = (1..=n).map(|i| b.alt("variable", format!("z_{i}"), format!("z{i}"))).collect();
    let y: Vec<usize> = (1..=m).map(|j| b.alt("clause", format!("y_{j}"), format!("y{j}"))).collect();
    let d: Vec<usize> = (1..=m).map(|j| b.alt("clause", format!("d_{j}"), format!("d{j}"))).collect();
    let dp: Vec<usize> = (1..=m).map(|j| b.alt("clause", format!("d'_{j}"), format!("dp{j}"))).collect();
    let lit_alt = |l: i32, mu: usize| a[l.unsigned_abs() as usize - 1][(l < 0) as usize][mu];

    let top = k - 2;
    let voter = |b: &mut Builder, copies: usize, named: &[usize], role: Role| {
        let mut spec = alloc::vec![Slot::Filler; top];
        spec.extend(named.iter().map(|&x| Slot::Alt(x)));
        b.voters(copies, &spec, 0, role, 0);
    };

    for i in 0..n {
        let v = i as i32 + 1;
        for l in [v, -v] {
            voter(&mut b, 1, &[w[i], lit_alt(l, 0), lit_alt(l, 1), z[i]], Role::Literal(l));
        }
    }
    for (j, cl) in s.clauses().iter().enumerate() {
        for (r, &l) in cl.iter().enumerate() {
            let f = if s.occurrences(l)[0] == j { 0 } else { 1 };
            voter(&mut b, 1, &[y[j], d[j], lit_alt(l, f), dp[j]], Role::Clause { clause: j, slot: r });
        }
    }
    voter(&mut b, 1, &[c, d[0], d[1], d[2]], Role::Block(C_VOTER));
    voter(&mut b, pad + 2, &[u, d[0], d[1], c], Role::Block(U_C));
    for i in 0..n / 2 {
        voter(&mut b, pad + 1, &[u, w[2 * i], w[2 * i + 1], d[0]], Role::Block(U_PAIR));
    }
    for i in 0..n {
        let v = i as i32 + 1;
        voter(&mut b, pad + 1, &[u, lit_alt(v, 1), lit_alt(-v, 1), d[0]], Role::Block(U_PAIR));
        voter(&mut b, pad + 1, &[u, lit_alt(v, 0), lit_alt(-v, 0), d[0]], Role::Block(U_PAIR));
    }
    for j in 0..m / 2 {
        voter(&mut b, pad, &[u, y[2 * j], y[2 * j + 1], d[0]], Role::Block(U_PAIR));
    }

    let voters = b.skeletons.len();
    let (profile, names, fillers, roles, prices) = b.finish("e", voters * top, top)?;
    let nv = profile.n();
    let instance = BriberyInstance {
        profile,
        target: c,
        deltas: alloc::vec![2; nv],
        prices,
        budget: 0,
        rule: VotingRule::KApproval(k),
        metric: Metric::Swap,
    };
    instance.validate()?;
    if is_unique_winner(&instance.profile, &instance.rule, c)? {
        return Err(Error::Internal("target already wins the generated instance".into()));
    }
    Ok(GadgetInstance {
        instance,
        reduction: Reduction::KApprovalSwap,
        sat: s,
        source_vars: sat.vars(),
        pad,
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
            // true: w z a0 a1, false: a0 a1 w z
            Role::Literal(l) if Sat3B2Instance::literal_true(a, l) => permute(p, at, &[0, 3, 1, 2]),
            Role::Literal(_) => permute(p, at, &[1, 2, 0, 3]),
            Role::Clause { clause, slot } if chosen[clause] == Some(slot) => permute(p, at, &[1, 2, 0, 3]),
            Role::Block(U_C) => permute(p, at, &[0, 3, 1, 2]),
            Role::Block(U_PAIR) => permute(p, at, &[1, 2, 0, 3]),
            _ => p.clone(),
        })
        .collect()
}
