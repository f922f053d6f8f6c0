//! Plurality and veto with per-voter radii and prices.
//!
//! Guess the target's final score, then route every voter to the alternative
//! it will end up ranking first (plurality) or last (veto). Edge demands pin
//! the target's score; capacities keep every rival strictly behind.

use alloc::format;
use alloc::vec::Vec;

use super::{as_k_approval, bottom_reachable, relocate, top_reachable, Best};
use crate::election::Preference;
use crate::flow::{min_cost_flow_with_demands, FlowNetwork};
use crate::instance::{certify, BriberyInstance, BriberyOutcome};
use crate::{Error, Result};

fn first_places(inst: &BriberyInstance) -> Vec<i64> {
    let mut s = alloc::vec![0i64; inst.m()];
    for p in inst.profile.prefs() {
        s[p.order()[0]] += 1;
    }
    s
}

/// Voters whose unit can still move: everyone not already ranking the target first.
fn movable(inst: &BriberyInstance) -> Vec<usize> {
    (0..inst.n()).filter(|&i| inst.profile.prefs()[i].order()[0] != inst.target).collect()
}

/// Network for plurality at guessed final score `guess`.
/// Nodes: 0 source, 1 sink, then one per movable voter, then one per alternative.
pub fn plurality_network(inst: &BriberyInstance, guess: i64) -> Result<(FlowNetwork, Vec<(usize, usize, usize)>)> {
    let (m, c) = (inst.m(), inst.target);
    let q = movable(inst);
    let s_c = first_places(inst)[c];
    let mut g = FlowNetwork::new(2 + q.len() + m, 0, 1);
    let alt = |a: usize| 2 + q.len() + a;
    // (voter, alternative, edge index)
    let mut choice = Vec::new();
    for (j, &i) in q.iter().enumerate() {
        let pref = &inst.profile.prefs()[i];
        g.add_edge(0, 2 + j, 0, 1, 0);
        for a in top_reachable(pref, inst.effective_delta(i), inst.metric) {
            let cost = if a == pref.order()[0] { 0 } else { inst.prices[i] as i64 };
            choice.push((i, a, g.add_edge(2 + j, alt(a), 0, 1, cost)));
        }
    }
    for a in 0..m {
        if a == c {
            let need = (guess - s_c).max(0);
            g.add_edge(alt(a), 1, need, need, 0);
        } else {
            g.add_edge(alt(a), 1, 0, (guess - 1).max(0), 0);
        }
    }
    Ok((g, choice))
}

/// Network for veto at a guessed final veto count `guess` of the target.
pub fn veto_network(inst: &BriberyInstance, guess: i64) -> Result<(FlowNetwork, Vec<(usize, usize, usize)>)> {
    let (n, m, c) = (inst.n(), inst.m(), inst.target);
    let mut g = FlowNetwork::new(2 + n + m, 0, 1);
    let alt = |a: usize| 2 + n + a;
    let mut choice = Vec::new();
    for (i, pref) in inst.profile.prefs().iter().enumerate() {
        g.add_edge(0, 2 + i, 0, 1, 0);
        let last = pref.order()[m - 1];
        for a in bottom_reachable(pref, inst.effective_delta(i), inst.metric) {
            let cost = if a == last { 0 } else { inst.prices[i] as i64 };
            choice.push((i, a, g.add_edge(2 + i, alt(a), 0, 1, cost)));
        }
    }
    for a in 0..m {
        if a == c {
            g.add_edge(alt(a), 1, 0, guess, 0);
        } else {
            g.add_edge(alt(a), 1, guess + 1, n as i64, 0);
        }
    }
    Ok((g, choice))
}

fn check_rule(inst: &BriberyInstance, want: usize, name: &str) -> Result<()> {
    inst.validate()?;
    if as_k_approval(&inst.rule, inst.m()) != Some(want) {
        return Err(Error::Unsupported(format!("{name} solver called on rule {}", inst.rule)));
    }
    Ok(())
}

pub fn solve_plurality(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    if inst.m() < 2 {
        return super::solve_trivial(inst);
    }
    check_rule(inst, 1, "plurality")?;
    let s_c = first_places(inst)[inst.target];
    plurality_over(inst, s_c.max(1)..=inst.n() as i64)
}

pub(crate) fn plurality_over(inst: &BriberyInstance, guesses: impl IntoIterator<Item = i64>) -> Result<BriberyOutcome> {
    let q_len = movable(inst).len() as i64;
    let mut best = Best::default();
    for guess in guesses {
        let (g, choice) = plurality_network(inst, guess)?;
        let r = min_cost_flow_with_demands(&g, q_len)?;
        if !r.feasible || r.cost as u64 > inst.budget {
            continue;
        }
        let mut prefs: Vec<Preference> = inst.profile.prefs().to_vec();
        for &(i, a, e) in &choice {
            if r.flow[e] == 1 {
                prefs[i] = relocate(&prefs[i], a, 0);
            }
        }
        best.offer(guess, certify(inst, prefs)?);
    }
    Ok(best.outcome())
}

pub fn solve_veto(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    if inst.m() < 2 {
        return super::solve_trivial(inst);
    }
    check_rule(inst, inst.m() - 1, "veto")?;
    let (n, m) = (inst.n() as i64, inst.m() as i64);
    let mut best = Best::default();
    for guess in 0..=n {
        if (m - 1) * (guess + 1) > n {
            break;
        }
        let (g, choice) = veto_network(inst, guess)?;
        let r = min_cost_flow_with_demands(&g, n)?;
        if !r.feasible || r.cost as u64 > inst.budget {
            continue;
        }
        let mut prefs: Vec<Preference> = inst.profile.prefs().to_vec();
        for &(i, a, e) in &choice {
            if r.flow[e] == 1 {
                let last = prefs[i].len() - 1;
                prefs[i] = relocate(&prefs[i], a, last);
            }
        }
        best.offer(guess, certify(inst, prefs)?);
    }
    Ok(best.outcome())
}
