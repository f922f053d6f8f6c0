//! k-approval and simplified Bucklin under max-displacement, unpriced.
//!
//! With radius `d` and boundary `k`, ranks `1..=k-d` stay approved whatever
//! happens ("locked"), ranks past `k+d` stay out, and everything in between
//! (the window) can be pushed either side. The target is pulled into the top
//! `k` whenever it sits within `k+d`. The remaining top-`k` slots of each
//! voter are filled from its window by a bipartite flow that respects every
//! rival's remaining allowance.
//!
//! Decoding is a stable partition: the chosen `k` first in their original
//! order, then the rest in theirs. A chosen alternative at rank `p` rises by
//! the number of chosen ones after it, all of which sit in `(p, k+d]`; an
//! unchosen one sinks by the number of chosen ones after it, which at least
//! `k-d` locked predecessors leave at most `d`. So nobody moves more than `d`.

use alloc::format;
use alloc::vec::Vec;

use super::{as_k_approval, Best};
use crate::election::{Preference, VotingRule};
use crate::flow::{max_flow_with_edges, FlowNetwork};
use crate::instance::{certify, BriberyInstance, BriberyOutcome};
use crate::metrics::Metric;
use crate::{Error, Result};

fn check_form(inst: &BriberyInstance, what: &str) -> Result<u64> {
    inst.validate()?;
    if inst.metric != Metric::MaxDisplacement {
        return Err(Error::Unsupported(format!("{what} window solver needs max-displacement")));
    }
    if !inst.is_unpriced() {
        return Err(Error::Unsupported(format!(
            "{what} window solver needs a uniform radius and zero prices"
        )));
    }
    Ok(inst.deltas[0])
}

/// Per-voter split at boundary `k` with radius `d`.
struct Split {
    locked: usize,
    // 0-based ranks [lo, hi) form the window
    lo: usize,
    hi: usize,
    target_in: bool,
}

fn split(pref: &Preference, k: usize, d: usize, c: usize) -> Split {
    let m = pref.len();
    let lo = k.saturating_sub(d);
    let hi = (k + d).min(m);
    let pos_c = pref.order().iter().position(|&a| a == c).expect("target ranked");
    Split { locked: lo, lo, hi, target_in: pos_c < hi }
}

/// How often each alternative is locked into the top `k`, and how many voters
/// can hold the target there.
fn locked_counts(inst: &BriberyInstance, k: usize, d: usize) -> (Vec<i64>, i64) {
    let c = inst.target;
    let mut locked = alloc::vec![0i64; inst.m()];
    let mut holders = 0;
    for p in inst.profile.prefs() {
        let sp = split(p, k, d, c);
        for &a in &p.order()[..sp.locked] {
            locked[a] += 1;
        }
        holders += sp.target_in as i64;
    }
    (locked, holders)
}

/// Bipartite network for boundary `k`, radius `d`, rival allowances `cap`.
/// Nodes: 0 source, 1 sink, voters from 2, alternatives after them.
/// Returns the network, the number of slots to fill, and (voter, alternative, edge).
pub fn window_network(
    inst: &BriberyInstance,
    k: usize,
    d: usize,
    cap: &[i64],
) -> (FlowNetwork, i64, Vec<(usize, usize, usize)>) {
    let (n, m, c) = (inst.n(), inst.m(), inst.target);
    let mut g = FlowNetwork::new(2 + n + m, 0, 1);
    let mut slots_total = 0;
    let mut picks = Vec::new();
    for (i, p) in inst.profile.prefs().iter().enumerate() {
        let sp = split(p, k, d, c);
        let c_here = sp.target_in && p.order()[..sp.locked].iter().all(|&a| a != c);
        let slots = (k - sp.locked - c_here as usize) as i64;
        slots_total += slots;
        g.add_edge(0, 2 + i, 0, slots, 0);
        for &y in &p.order()[sp.lo..sp.hi] {
            if y != c {
                picks.push((i, y, g.add_edge(2 + i, 2 + n + y, 0, 1, 0)));
            }
        }
    }
    for y in 0..m {
        if y != c {
            g.add_edge(2 + n + y, 1, 0, cap[y].max(0), 0);
        }
    }
    (g, slots_total, picks)
}

/// Fills every voter's slots within the allowances, or `None`.
fn fill(inst: &BriberyInstance, k: usize, d: usize, cap: &[i64]) -> Result<Option<Vec<Preference>>> {
    let c = inst.target;
    let (g, slots, picks) = window_network(inst, k, d, cap);
    let (value, flow) = max_flow_with_edges(&g)?;
    if value < slots {
        return Ok(None);
    }
    let mut chosen: Vec<Vec<bool>> = alloc::vec![alloc::vec![false; inst.m()]; inst.n()];
    for (i, p) in inst.profile.prefs().iter().enumerate() {
        let sp = split(p, k, d, c);
        for &a in &p.order()[..sp.locked] {
            chosen[i][a] = true;
        }
        if sp.target_in {
            chosen[i][c] = true;
        }
    }
    for (i, y, e) in picks {
        if flow[e] == 1 {
            chosen[i][y] = true;
        }
    }
    let prefs = inst
        .profile
        .prefs()
        .iter()
        .zip(&chosen)
        .map(|(p, ch)| {
            let (mut top, rest): (Vec<usize>, Vec<usize>) = p.order().iter().partition(|&&a| ch[a]);
            debug_assert_eq!(top.len(), k);
            top.extend(rest);
            Preference::from_vec_unchecked(top)
        })
        .collect();
    Ok(Some(prefs))
}

pub fn solve_kapproval_maxdisp(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    let d = check_form(inst, "k-approval")? as usize;
    let m = inst.m();
    let k = as_k_approval(&inst.rule, m)
        .ok_or_else(|| Error::Unsupported(format!("k-approval solver called on rule {}", inst.rule)))?;
    let c = inst.target;
    let (locked, holders) = locked_counts(inst, k, d);
    if (0..m).any(|y| y != c && locked[y] >= holders) {
        return Ok(BriberyOutcome::No);
    }
    let cap: Vec<i64> = locked.iter().map(|&l| holders - 1 - l).collect();
    match fill(inst, k, d, &cap)? {
        Some(prefs) => Ok(BriberyOutcome::Yes(certify(inst, prefs)?)),
        None => Ok(BriberyOutcome::No),
    }
}

/// Tries every level at which the target can hold a strict majority, lowest first.
pub fn solve_sbucklin_maxdisp(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    let d = check_form(inst, "simplified Bucklin")? as usize;
    if inst.rule != VotingRule::SimplifiedBucklin {
        return Err(Error::Unsupported(format!("simplified Bucklin solver called on rule {}", inst.rule)));
    }
    let (n, m, c) = (inst.n() as i64, inst.m(), inst.target);
    if m < 2 {
        return super::solve_trivial(inst);
    }
    let half = n / 2;
    let mut best = Best::default();
    for level in 1..m {
        let (locked, holders) = locked_counts(inst, level, d);
        if holders <= half || (0..m).any(|y| y != c && locked[y] > half) {
            continue;
        }
        let cap: Vec<i64> = locked.iter().map(|&l| half - l).collect();
        if let Some(prefs) = fill(inst, level, d, &cap)? {
            best.offer(level as i64, certify(inst, prefs)?);
            break;
        }
    }
    Ok(best.outcome())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::Profile;

    #[test]
    fn unconstrained_radius() {
        let p = Profile::from_strs(4, &["a>b>c>d", "b>a>d>c", "a>d>b>c"]).unwrap();
        let inst = BriberyInstance::uniform(p.clone(), 3, 3, VotingRule::KApproval(2), Metric::MaxDisplacement);
        assert!(solve_kapproval_maxdisp(&inst).unwrap().is_yes());
        let inst = BriberyInstance::uniform(p, 3, 3, VotingRule::SimplifiedBucklin, Metric::MaxDisplacement);
        assert!(solve_sbucklin_maxdisp(&inst).unwrap().is_yes());
    }

    #[test]
    fn zero_radius_is_status_quo() {
        let p = Profile::from_strs(4, &["a>c>b>d", "c>a>d>b", "c>d>b>a"]).unwrap();
        let inst = BriberyInstance::uniform(p.clone(), 2, 0, VotingRule::KApproval(2), Metric::MaxDisplacement);
        assert!(solve_kapproval_maxdisp(&inst).unwrap().is_yes());
        let inst = BriberyInstance::uniform(p, 0, 0, VotingRule::KApproval(2), Metric::MaxDisplacement);
        assert!(!solve_kapproval_maxdisp(&inst).unwrap().is_yes());
    }

    #[test]
    fn priced_rejected() {
        let p = Profile::from_strs(3, &["a>b>c"]).unwrap();
        let mut inst = BriberyInstance::uniform(p, 2, 1, VotingRule::KApproval(2), Metric::MaxDisplacement);
        inst.prices[0] = 1;
        assert!(matches!(solve_kapproval_maxdisp(&inst), Err(Error::Unsupported(_))));
    }
}
