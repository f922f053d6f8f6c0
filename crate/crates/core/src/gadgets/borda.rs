//! Borda, unpriced, radius 1 (swap, max displacement) or 2 (footrule).
//!
//! Formula voters: `z_i > a_i > d > d' > c` and `z_i > ~a_i > d > d' > c`
//! per variable, `y_j > f(l) > d > c` per clause occurrence. Then one pair
//! of padding voters per rival `x`:
//!
//! ```text
//! A:  x  _  (t fillers)  _  c  r1 _  r2 _ ... r_{M-2} _
//! B:  r_{M-2} _ ... r1 _  _  c  x  _
//! ```
//!
//! Apart from the gap, each rival sits at the same total rank as every other
//! rival across the pair. The gap lowers `c` and all other rivals by `t` in
//! A, so it raises `x` by exactly `t` against everyone. Gaps are solved for
//! so that, relative to the target's pre-bribery score,
//!
//! - `z_i` and `y_j` sit at `G + L`,
//! - `a_i` and `~a_i` sit at `G + L - 2`,
//!
//! where `G` is what the target gains in the bribed profile and `L` is what
//! each rival loses across the padding voters (one per padding voter under
//! max displacement, none under swap and footrule, where the single allowed
//! exchange is spent on lifting `c`).
//!
//! Fillers come from a rotating queue whose window is sized so that no filler
//! gets near the target's score.

use alloc::format;
use alloc::vec::Vec;

use super::{chosen_slot, permute, Builder, GadgetInstance, Reduction, Role, Slot};
use crate::election::{is_unique_winner, Preference, VotingRule};
use crate::gadgets::sat::Sat3B2Instance;
use crate::instance::BriberyInstance;
use crate::metrics::Metric;
use crate::{Error, Result};

const SEP: usize = 10;
const PAD: u8 = 0;

/// Bookkeeping of a Borda gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BordaLedger {
    /// Formula voters.
    pub n1: usize,
    /// Padding voters.
    pub n2: usize,
    /// Target's gain in the bribed profile.
    pub gain: i64,
    /// Each rival's loss across the padding voters in the bribed profile.
    pub loss: i64,
    /// Filler window of the rotating queue.
    pub window: usize,
    /// Gap used in the padding pair of each rival.
    pub gaps: Vec<(usize, usize)>,
}

struct Named {
    c: usize,
    z: Vec<usize>,
    a: Vec<[usize; 2]>,
    y: Vec<usize>,
    rivals: Vec<usize>,
}

fn named(b: &mut Builder, n: usize, m: usize) -> Named {
    let c = b.alt("special", "c".into(), "c".into());
    let mut z = Vec::new();
    let mut a = Vec::new();
    for i in 1..=n {
        z.push(b.alt("variable", format!("z_{i}"), format!("z{i}")));
        let ai = b.alt("literal", format!("a_{i}"), format!("a{i}"));
        let nai = b.alt("literal", format!("~a_{i}"), format!("na{i}"));
        a.push([ai, nai]);
    }
    let y: Vec<usize> = (1..=m).map(|j| b.alt("clause", format!("y_{j}"), format!("y{j}"))).collect();
    let rivals = (0..b.named()).filter(|&x| x != c).collect();
    Named { c, z, a, y, rivals }
}

fn build(sat: &Sat3B2Instance, gaps: &[usize]) -> (Builder, Named) {
    let (n, m) = (sat.vars(), sat.len());
    let mut b = Builder::new();
    let nm = named(&mut b, n, m);
    use Slot::{Alt, Filler};
    let f = |l: i32| nm.a[l.unsigned_abs() as usize - 1][(l < 0) as usize];
    for i in 0..n {
        let v = i as i32 + 1;
        for l in [v, -v] {
            b.voter(&[Alt(nm.z[i]), Alt(f(l)), Filler, Filler, Alt(nm.c)], SEP, Role::Literal(l), 0);
        }
    }
    for (j, cl) in sat.clauses().iter().enumerate() {
        for (r, &l) in cl.iter().enumerate() {
            b.voter(&[Alt(nm.y[j]), Alt(f(l)), Filler, Alt(nm.c)], SEP, Role::Clause { clause: j, slot: r }, 0);
        }
    }
    for (xi, &x) in nm.rivals.iter().enumerate() {
        let rest: Vec<usize> = nm.rivals.iter().copied().filter(|&r| r != x).collect();
        let mut a = alloc::vec![Alt(x), Filler];
        a.extend(core::iter::repeat_n(Filler, gaps[xi]));
        a.extend([Filler, Alt(nm.c)]);
        for (k, &r) in rest.iter().enumerate() {
            if k > 0 {
                a.push(Filler);
            }
            a.push(Alt(r));
        }
        a.push(Filler);
        let mut bb = Vec::new();
        for &r in rest.iter().rev() {
            bb.extend([Alt(r), Filler]);
        }
        bb.extend([Filler, Alt(nm.c), Alt(x), Filler]);
        b.voter(&a, SEP, Role::Block(PAD), 0);
        b.voter(&bb, SEP, Role::Block(PAD), 0);
    }
    (b, nm)
}

/// Sum over voters of (rank of `c`) minus (rank of `x`), for every named `x`:
/// the Borda lead of `x` over `c`.
fn leads(b: &Builder, c: usize) -> Vec<i64> {
    let mut lead = alloc::vec![0i64; b.named()];
    for sk in &b.skeletons {
        let mut pos = alloc::vec![0i64; b.named()];
        for (p, s) in sk.iter().enumerate() {
            if let Slot::Alt(a) = *s {
                pos[a] = p as i64;
            }
        }
        for x in 0..b.named() {
            lead[x] += pos[c] - pos[x];
        }
    }
    lead
}

pub fn gen_borda_gadget(sat: &Sat3B2Instance, metric: Metric, filler_size: Option<usize>) -> Result<GadgetInstance> {
    let (n, m) = (sat.vars(), sat.len());
    let delta = if metric == Metric::Footrule { 2 } else { 1 };
    let (probe, nm) = build(sat, &alloc::vec![0; 3 * n + m]);
    let n1 = 2 * n + 3 * m;
    let n2 = 2 * nm.rivals.len();
    let (gain, loss) = match metric {
        Metric::MaxDisplacement => ((n1 + n2) as i64, n2 as i64),
        Metric::Swap | Metric::Footrule => ((2 * m + n2) as i64, 0),
    };
    let target = |x: usize| {
        if nm.a.iter().any(|p| p.contains(&x)) { gain + loss - 2 } else { gain + loss }
    };
    let base = leads(&probe, nm.c);
    let mut gaps = Vec::with_capacity(nm.rivals.len());
    for &x in &nm.rivals {
        let t = target(x) - base[x];
        if t < 0 {
            return Err(Error::Internal(format!("padding cannot lower rival {x} by {}", -t)));
        }
        gaps.push(t as usize);
    }
    let (b, nm) = build(sat, &gaps);

    // filler score <= N(|A|-1) - window * N(N-1)/2, target's = N|A| - sum of its ranks
    let nv = b.skeletons.len();
    let rank_sum: usize = b
        .skeletons
        .iter()
        .map(|sk| sk.iter().position(|s| *s == Slot::Alt(nm.c)).expect("target placed") + 1)
        .sum();
    let margin = 10 * m * m * n * n + nv;
    let window = (rank_sum + margin) / (nv * (nv - 1) / 2) + 1;
    let floor = (nv * window).max(b.max_fillers_used());
    let count = filler_size.unwrap_or(floor);
    if count < floor {
        return Err(Error::Gadget(format!("filler size {count} below the floor {floor}")));
    }
    let ledger = BordaLedger {
        n1,
        n2,
        gain,
        loss,
        window,
        gaps: nm.rivals.iter().copied().zip(gaps.iter().copied()).collect(),
    };
    let (profile, names, fillers, roles, prices) = b.finish("d", count, window)?;
    let instance = BriberyInstance {
        deltas: alloc::vec![delta; profile.n()],
        profile,
        target: nm.c,
        prices,
        budget: 0,
        rule: VotingRule::Borda,
        metric,
    };
    instance.validate()?;
    let g = GadgetInstance {
        instance,
        reduction: Reduction::Borda,
        sat: sat.clone(),
        source_vars: n,
        pad: count,
        k: 0,
        names,
        fillers,
        borda: Some(ledger),
        roles,
    };
    check_table(&g, &nm)?;
    Ok(g)
}

fn check_table(g: &GadgetInstance, nm: &Named) -> Result<()> {
    let s = super::scores(g, g.instance.profile.prefs())?;
    let (n, m) = (g.sat.vars() as i64, g.sat.len() as i64);
    let l = g.borda.as_ref().expect("ledger");
    let sc = s[nm.c];
    for &x in &nm.rivals {
        let want = if nm.a.iter().any(|p| p.contains(&x)) { l.gain + l.loss - 2 } else { l.gain + l.loss };
        if s[x] - sc != want {
            return Err(Error::Internal(format!("rival {x} leads by {}, expected {want}", s[x] - sc)));
        }
    }
    if g.fillers.clone().any(|d| s[d] >= sc - 10 * m * m * n * n) {
        return Err(Error::Internal("a filler gets too close to the target".into()));
    }
    if is_unique_winner(&g.instance.profile, &g.instance.rule, nm.c)? {
        return Err(Error::Internal("target already wins the generated instance".into()));
    }
    Ok(())
}

/// Lifts `c` by one; under max displacement also pushes every rival down one.
fn shift_padding(p: &Preference, c: usize, named: usize, rivals_too: bool) -> Preference {
    let mut v = p.order().to_vec();
    if rivals_too {
        let mut i = 0;
        while i < v.len() {
            if v[i] < named && v[i] != c {
                v.swap(i, i + 1);
                i += 2;
            } else {
                i += 1;
            }
        }
    }
    let pc = v.iter().position(|&a| a == c).expect("target ranked");
    v.swap(pc - 1, pc);
    Preference::from_vec_unchecked(v)
}

pub(crate) fn witness(g: &GadgetInstance, a: &[bool]) -> Vec<Preference> {
    let md = g.instance.metric == Metric::MaxDisplacement;
    let c = g.instance.target;
    let named = g.fillers.start;
    let chosen: Vec<Option<usize>> = (0..g.sat.len()).map(|j| chosen_slot(&g.sat, a, j)).collect();
    g.instance
        .profile
        .prefs()
        .iter()
        .zip(&g.roles)
        .map(|(p, role)| match *role {
            // z a d d' c: true -> z d a c d', false -> a z d c d'
            Role::Literal(l) if Sat3B2Instance::literal_true(a, l) => {
                permute(p, 0, if md { &[0, 2, 1, 4, 3] } else { &[0, 2, 1] })
            }
            Role::Literal(_) => permute(p, 0, if md { &[1, 0, 2, 4, 3] } else { &[1, 0] }),
            // y f d c: chosen -> f y c d, otherwise y f c d
            Role::Clause { clause, slot } if chosen[clause] == Some(slot) => {
                permute(p, 0, if md { &[1, 0, 3, 2] } else { &[1, 0] })
            }
            Role::Clause { .. } => permute(p, 0, &[0, 1, 3, 2]),
            Role::Block(_) => shift_padding(p, c, named, md),
        })
        .collect()
}
