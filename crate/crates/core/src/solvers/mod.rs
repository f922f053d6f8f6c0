//! Polynomial-time solvers and the dispatch table that picks one.
//!
//! Every solver decodes a witness from its flow and runs it through
//! [`crate::instance::verify`] before answering YES. Among feasible guesses the
//! cheapest witness wins, ties going to the lowest guess.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::election::{is_unique_winner, Preference, VotingRule};
use crate::instance::{certify, BriberyInstance, BriberyOutcome, Witness};
use crate::metrics::Metric;
use crate::{Error, Result};

mod boundary;
mod plurality;
mod window;

pub use boundary::{boundary_network, solve_kapproval_small_radius, solve_sbucklin_small_radius};
pub use plurality::{plurality_network, solve_plurality, solve_veto, veto_network};
pub use window::{solve_kapproval_maxdisp, solve_sbucklin_maxdisp, window_network};

/// How far toward the top (or bottom) an alternative can travel: moving it
/// `j` places costs `j` under swap and max-displacement, `2j` under footrule.
fn reach(delta: u64, metric: Metric) -> u64 {
    match metric {
        Metric::Swap | Metric::MaxDisplacement => delta,
        Metric::Footrule => delta / 2,
    }
}

/// Alternatives that can be put first within `delta`, best first.
pub fn top_reachable(pref: &Preference, delta: u64, metric: Metric) -> Vec<usize> {
    let w = reach(delta, metric).min(pref.len() as u64 - 1) as usize;
    pref.order()[..=w].to_vec()
}

/// Alternatives that can be put last within `delta`, best first.
pub fn bottom_reachable(pref: &Preference, delta: u64, metric: Metric) -> Vec<usize> {
    let m = pref.len();
    let w = reach(delta, metric).min(m as u64 - 1) as usize;
    pref.order()[m - 1 - w..].to_vec()
}

/// `a` moved to rank `to` (0-based), everything else keeps its relative order.
pub(crate) fn relocate(pref: &Preference, a: usize, to: usize) -> Preference {
    let mut order: Vec<usize> = pref.order().iter().copied().filter(|&x| x != a).collect();
    order.insert(to, a);
    Preference::from_vec_unchecked(order)
}

/// `k` if the rule is k-approval in disguise (two distinct score levels).
pub fn as_k_approval(rule: &VotingRule, m: usize) -> Option<usize> {
    let alpha = rule.score_vector(m)?;
    if m < 2 {
        return None;
    }
    let lo = alpha[m - 1];
    let k = alpha.iter().filter(|&&a| a != lo).count();
    if alpha[..k].iter().all(|&a| a == alpha[0]) && k >= 1 && k < m {
        Some(k)
    } else {
        None
    }
}

fn no_voter_can_move(inst: &BriberyInstance) -> bool {
    (0..inst.n()).all(|i| {
        let d = inst.effective_delta(i);
        d == 0 || (inst.metric == Metric::Footrule && d == 1)
    })
}

fn max_delta(inst: &BriberyInstance) -> u64 {
    inst.deltas.iter().copied().max().unwrap_or(0)
}

/// Which algorithm `solve_auto` uses for an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Route {
    /// Nobody can move; just evaluate the current profile.
    Trivial,
    Plurality,
    Veto,
    KApprovalSmallRadius,
    KApprovalMaxDisp,
    SBucklinSmallRadius,
    SBucklinMaxDisp,
    /// No polynomial algorithm applies; the reason cites the hardness result.
    Hard(String),
}

impl Route {
    pub fn is_poly(&self) -> bool {
        !matches!(self, Route::Hard(_))
    }
}

fn small_radius(inst: &BriberyInstance) -> bool {
    let d = max_delta(inst);
    match inst.metric {
        Metric::Swap | Metric::MaxDisplacement => d <= 1,
        Metric::Footrule => d <= 3,
    }
}

fn hard_radius(metric: Metric) -> &'static str {
    match metric {
        Metric::Swap => "radius 2",
        Metric::Footrule => "radius 4",
        Metric::MaxDisplacement => "radius 2 with prices",
    }
}

pub fn route(inst: &BriberyInstance) -> Route {
    let m = inst.m();
    if no_voter_can_move(inst) {
        return Route::Trivial;
    }
    let metric = inst.metric;
    match as_k_approval(&inst.rule, m) {
        Some(1) => return Route::Plurality,
        Some(k) if k + 1 == m => return Route::Veto,
        Some(k) => {
            return if small_radius(inst) {
                Route::KApprovalSmallRadius
            } else if metric == Metric::MaxDisplacement && inst.is_unpriced() {
                Route::KApprovalMaxDisp
            } else {
                Route::Hard(format!(
                    "{k}-approval under {metric} is NP-complete (already at {}); rerun with --oracle",
                    hard_radius(metric)
                ))
            };
        }
        None => {}
    }
    let one = match metric {
        Metric::Footrule => 2,
        _ => 1,
    };
    let hard = |name: &str| {
        Route::Hard(format!(
            "{name} under {metric} is NP-complete (already at radius {one}); rerun with --oracle"
        ))
    };
    match &inst.rule {
        VotingRule::SimplifiedBucklin => {
            if small_radius(inst) {
                Route::SBucklinSmallRadius
            } else if metric == Metric::MaxDisplacement && inst.is_unpriced() {
                Route::SBucklinMaxDisp
            } else {
                Route::Hard(format!(
                    "simplified Bucklin under {metric} is NP-complete (already at {}); rerun with --oracle",
                    hard_radius(metric)
                ))
            }
        }
        VotingRule::Borda => hard("Borda"),
        VotingRule::Maximin => hard("maximin"),
        VotingRule::Copeland(_) => hard("Copeland"),
        VotingRule::Bucklin => hard("Bucklin"),
        _ => Route::Hard(format!(
            "no polynomial algorithm is known for this scoring rule under {metric} (Borda-like vectors are NP-complete); rerun with --oracle"
        )),
    }
}

/// Answers from the current profile alone.
pub fn solve_trivial(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    inst.validate()?;
    if is_unique_winner(&inst.profile, &inst.rule, inst.target)? {
        Ok(BriberyOutcome::Yes(certify(inst, inst.profile.prefs().to_vec())?))
    } else {
        Ok(BriberyOutcome::No)
    }
}

/// Dispatches to the polynomial solver for this cell, or refuses.
pub fn solve_auto(inst: &BriberyInstance) -> Result<BriberyOutcome> {
    inst.validate()?;
    match route(inst) {
        Route::Trivial => solve_trivial(inst),
        Route::Plurality => solve_plurality(inst),
        Route::Veto => solve_veto(inst),
        Route::KApprovalSmallRadius => solve_kapproval_small_radius(inst),
        Route::KApprovalMaxDisp => solve_kapproval_maxdisp(inst),
        Route::SBucklinSmallRadius => solve_sbucklin_small_radius(inst),
        Route::SBucklinMaxDisp => solve_sbucklin_maxdisp(inst),
        Route::Hard(why) => Err(Error::Unsupported(why)),
    }
}

/// Keeps the cheapest witness; on equal cost the earlier guess stays.
#[derive(Default)]
struct Best {
    found: Option<(u64, i64, Witness)>,
}

impl Best {
    fn offer(&mut self, guess: i64, w: Witness) {
        let better = match &self.found {
            None => true,
            Some((c, g, _)) => (w.cost, guess) < (*c, *g),
        };
        if better {
            self.found = Some((w.cost, guess, w));
        }
    }

    fn outcome(self) -> BriberyOutcome {
        match self.found {
            Some((_, _, w)) => BriberyOutcome::Yes(w),
            None => BriberyOutcome::No,
        }
    }
}
