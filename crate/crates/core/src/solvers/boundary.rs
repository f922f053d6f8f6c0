//! k-approval and simplified Bucklin at small radius.
//!
//! At swap radius 1 (footrule radius 3, max-displacement radius 1) the only
//! move that changes a voter's top-`k` set is exchanging ranks `k` and `k+1`.
//! One flow unit per approval starts at its current holder; a voter who
//! exchanges the boundary pair carries one unit from `x_k` to `x_{k+1}`.

use alloc::format;
use alloc::vec::Vec;

use super::{as_k_approval, max_delta, Best};
use crate::election::{Preference, VotingRule};
use crate::flow::{min_cost_flow_with_demands, FlowNetwork};
use crate::instance::{certify, BriberyInstance, BriberyOutcome};
use crate::metrics::Metric;
use crate::{Error, Result};

fn can_exchange(inst: &BriberyInstance, i: usize) -> bool {
    let d = inst.effective_delta(i);
    match inst.metric {
        Metric::Swap | Metric::MaxDisplacement => d >= 1,
        Metric::Footrule => d >= 2,
    }
}

fn check_radius(inst: &BriberyInstance) -> Result<()> {
    let d = max_delta(inst);
    let ok = match inst.metric {
        Metric::Swap | Metric::MaxDisplacement => d <= 1,
        Metric::Footrule => d <= 3,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "small-radius solver needs radius <= {} under {}",
            if inst.metric == Metric::Footrule { 3 } else { 1 },
            inst.metric
        )))
    }
}

/// Network for the top-`level` boundary. The target's sink edge carries
/// `[c_lb, c_cap]`, every rival's at most `rival_cap`.
/// Nodes: 0 source, 1 sink, then one per alternative.
/// Returns the network, the flow value, and (voter, edge) for each exchange.
pub fn boundary_network(
    inst: &BriberyInstance,
    level: usize,
    c_lb: i64,
    c_cap: i64,
    rival_cap: i64,
) -> (FlowNetwork, i64, Vec<(usize, usize)>) {
    let (m, c) = (inst.m(), inst.target);
    let mut held = alloc::vec![0i64; m];
    for p in inst.profile.prefs() {
        for &a in &p.order()[..level] {
            held[a] += 1;
        }
    }
    let mut g = FlowNetwork::new(2 + m, 0, 1);
    for a in 0..m {
        if held[a] > 0 {
            g.add_edge(0, 2 + a, held[a], held[a], 0);
        }
    }
    let mut moves = Vec::new();
    for (i, p) in inst.profile.prefs().iter().enumerate() {
        let (out, inn) = (p.order()[level - 1], p.order()[level]);
        // pushing the target out of the top never helps
        if out == c || !can_exchange(inst, i) {
            continue;
        }
        moves.push((i, g.add_edge(2 + out, 2 + inn, 0, 1, inst.prices[i] as i64)));
    }
    for a in 0..m {
        if a == c {
            g.add_edge(2 + a, 1, c_lb, c_cap, 0);
        } else {
            g.add_edge(2 + a, 1, 0, rival_cap.max(0), 0);
        }
    }
    (g, (level * inst.n()) as i64, moves)
}

/// Solves one boundary network; returns the exchanged profile if affordable.
fn try_level(
    inst: &BriberyInstance,
    level: usize,
    c_lb: i64,
    c_cap: i64,
    rival_cap: i64,
) -> Result<Option<Vec<Preference>>> {
    let (g, value, moves) = boundary_network(inst, level, c_lb, c_cap, rival_cap);
    let r = min_cost_flow_with_demands(&g, value)?;
    if !r.feasible || r.cost as u64 > inst.budget {
        return Ok(None);
    }
    let mut prefs = inst.profile.prefs().to_vec();
    for (i, e) in moves {
        if r.flow[e] == 1 {
            let mut o = prefs[i].clone().into_order();
            o.swap(level - 1, level);
            prefs[i] = Preference::from_vec_unchecked(o);
        }
    }
    Ok(Some(prefs))
}

pub fn solve_kapproval_small_radius(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    inst.validate()?;
    let k = as_k_approval(&inst.rule, inst.m())
        .ok_or_else(|| Error::Unsupported(format!("k-approval solver called on rule {}", inst.rule)))?;
    check_radius(inst)?;
    let c = inst.target;
    let s_c = inst.profile.prefs().iter().filter(|p| p.order()[..k].contains(&c)).count() as i64;
    let mut best = Best::default();
    for guess in s_c.max(1)..=inst.n() as i64 {
        if let Some(prefs) = try_level(inst, k, guess, guess, guess - 1)? {
            best.offer(guess, certify(inst, prefs)?);
        }
    }
    Ok(best.outcome())
}

/// Guesses the level at which the target first holds a strict majority; at
/// that level no rival may hold one.
pub fn solve_sbucklin_small_radius(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    inst.validate()?;
    if inst.rule != VotingRule::SimplifiedBucklin {
        return Err(Error::Unsupported(format!("simplified Bucklin solver called on rule {}", inst.rule)));
    }
    check_radius(inst)?;
    let (n, m) = (inst.n() as i64, inst.m());
    if m < 2 {
        return super::solve_trivial(inst);
    }
    let half = n / 2;
    let mut best = Best::default();
    for level in 1..m {
        if let Some(prefs) = try_level(inst, level, half + 1, n, half)? {
            // the conditions are exact, but a failed check only drops this guess
            if let Ok(w) = crate::instance::verify(inst, &prefs) {
                best.offer(level as i64, w);
            }
        }
    }
    Ok(best.outcome())
}
