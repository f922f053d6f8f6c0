//! Exact search for any rule and metric, for small instances.
//!
//! Every rule here is additive over voters: plurality-style scores, pairwise
//! margins, or rank histograms. The search walks the voters in order and
//! memoizes on (voter index, running tally), so two prefixes that leave the
//! same tally are explored once. Ball elements with the same contribution to
//! the tally are merged, keeping the cheapest and then lexicographically
//! smallest representative.
//!
//! Among all cheapest witnesses the lexicographically smallest profile is
//! returned.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::election::{Preference, Scorer, VotingRule};
use crate::instance::{certify, BriberyInstance, BriberyOutcome};
use crate::metrics::ball;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest ball materialized for a single voter.
    pub max_ball: usize,
    /// Largest number of distinct (voter, tally) states expanded.
    pub max_nodes: u64,
    /// Wall-clock limit in milliseconds; only enforced with the `std` feature.
    pub time_limit_ms: u64,
    /// Bound-based pruning; never changes the answer.
    pub prune: bool,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_ball: 100_000, max_nodes: 1_000_000, time_limit_ms: 60_000, prune: true }
    }
}

struct Choice {
    pref: Preference,
    contrib: Vec<i64>,
    cost: u64,
}

/// Per-voter options: keep, or any distinct-tally member of the ball.
fn choices(inst: &BriberyInstance, scorer: &Scorer, i: usize, limits: &OracleBudget) -> Result<Vec<Choice>> {
    let orig = &inst.profile.prefs()[i];
    let contrib_of = |p: &Preference| {
        let mut v = vec![0; scorer.width()];
        scorer.add(p.order(), &mut v);
        v
    };
    let d = inst.effective_delta(i);
    if d == 0 {
        return Ok(vec![Choice { pref: orig.clone(), contrib: contrib_of(orig), cost: 0 }]);
    }
    let members = ball(orig, inst.metric, d, limits.max_ball).map_err(|e| match e {
        Error::BallTooLarge { limit } => {
            Error::ResourceExceeded(format!("ball of voter {} has more than {limit} elements", i + 1))
        }
        e => e,
    })?;
    // the ball is in lexicographic order, so the first hit per tally is the smallest
    let mut groups: BTreeMap<Vec<i64>, Choice> = BTreeMap::new();
    for q in members {
        let cost = if &q == orig { 0 } else { inst.prices[i] };
        let contrib = contrib_of(&q);
        match groups.get_mut(&contrib) {
            Some(ch) if ch.cost <= cost => {}
            Some(ch) => {
                ch.pref = q;
                ch.cost = cost;
            }
            None => {
                groups.insert(contrib.clone(), Choice { pref: q, contrib, cost });
            }
        }
    }
    let mut out: Vec<Choice> = groups.into_values().collect();
    out.sort_by(|a, b| a.pref.cmp(&b.pref));
    Ok(out)
}

/// Optimistic bounds for pruning, by suffix of voters.
enum Bounds {
    None,
    // best[i]: max target score from voters i.., worst[i][a]: min score of a
    Positional { best: Vec<i64>, worst: Vec<Vec<i64>> },
    // hi[i][x*m+y] / lo[i][x*m+y]: extreme margin contribution from voters i..
    Margins { hi: Vec<Vec<i64>>, lo: Vec<Vec<i64>> },
    // same layout over cumulative level counts
    Levels { hi: Vec<Vec<i64>>, lo: Vec<Vec<i64>>, half: i64 },
}

fn bounds(inst: &BriberyInstance, opts: &[Vec<Choice>], width: usize) -> Bounds {
    let n = opts.len();
    let c = inst.target;
    let suffix = |pick: fn(i64, i64) -> i64| {
        let mut acc = vec![vec![0i64; width]; n + 1];
        for i in (0..n).rev() {
            for k in 0..width {
                let v = opts[i].iter().map(|ch| ch.contrib[k]).reduce(pick).unwrap_or(0);
                acc[i][k] = acc[i + 1][k] + v;
            }
        }
        acc
    };
    match inst.rule {
        VotingRule::Maximin => Bounds::Margins { hi: suffix(i64::max), lo: suffix(i64::min) },
        VotingRule::SimplifiedBucklin => {
            Bounds::Levels { hi: suffix(i64::max), lo: suffix(i64::min), half: (n / 2) as i64 }
        }
        VotingRule::Copeland(_) | VotingRule::Bucklin => Bounds::None,
        _ => {
            let hi = suffix(i64::max);
            Bounds::Positional { best: hi.iter().map(|v| v[c]).collect(), worst: suffix(i64::min) }
        }
    }
}

impl Bounds {
    /// False only if no completion of voters `i..` can make `c` the unique winner.
    fn may_win(&self, i: usize, state: &[i64], c: usize, m: usize) -> bool {
        match self {
            Bounds::None => true,
            Bounds::Positional { best, worst } => {
                let top = state[c] + best[i];
                (0..m).all(|a| a == c || top > state[a] + worst[i][a])
            }
            Bounds::Margins { hi, lo } => {
                if m < 2 {
                    return true;
                }
                let score = |x: usize, ext: &Vec<Vec<i64>>| {
                    (0..m).filter(|&z| z != x).map(|z| state[x * m + z] + ext[i][x * m + z]).min().unwrap()
                };
                let top = score(c, hi);
                (0..m).all(|y| y == c || top > score(y, lo))
            }
            // some level must still be winnable by the target and free of rival majorities
            Bounds::Levels { hi, lo, half } => (0..m).any(|l| {
                state[c * m + l] + hi[i][c * m + l] > *half
                    && (0..m).all(|y| y == c || state[y * m + l] + lo[i][y * m + l] <= *half)
            }),
        }
    }
}

/// Tally -> cheapest completion cost and chosen option, per voter.
type Memo = BTreeMap<Vec<i64>, Option<(u64, usize)>>;

struct Search<'a> {
    inst: &'a BriberyInstance,
    scorer: Scorer,
    opts: Vec<Vec<Choice>>,
    bounds: Bounds,
    limits: OracleBudget,
    // per voter: tally -> (min cost to finish, choice index)
    memo: Vec<Memo>,
    nodes: u64,
    #[cfg(feature = "std")]
    started: std::time::Instant,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::ResourceExceeded(format!("more than {} search nodes", self.limits.max_nodes)));
        }
        #[cfg(feature = "std")]
        if self.nodes % 256 == 0 && self.started.elapsed().as_millis() as u64 > self.limits.time_limit_ms {
            return Err(Error::ResourceExceeded(format!("time limit of {} ms", self.limits.time_limit_ms)));
        }
        Ok(())
    }

    fn step(&self, state: &[i64], k: usize, i: usize) -> Vec<i64> {
        let mut next: Vec<i64> = state.iter().zip(&self.opts[i][k].contrib).map(|(s, d)| s + d).collect();
        self.canon(&mut next);
        next
    }

    /// Simplified Bucklin only asks whether a cumulative count passes `n/2`,
    /// so counts saturate there. Once some rival passes at level `l`, no
    /// level from `l` on can ever be the target's winning level, and those
    /// columns collapse to the saturated value. Both steps commute with
    /// adding further voters, so memoizing on the canonical state is exact.
    fn canon(&self, state: &mut [i64]) {
        if self.inst.rule != VotingRule::SimplifiedBucklin {
            return;
        }
        let (m, c) = (self.inst.m(), self.inst.target);
        let cap = (self.opts.len() / 2) as i64 + 1;
        for x in state.iter_mut() {
            *x = (*x).min(cap);
        }
        if let Some(dead) = (0..m).find(|&l| (0..m).any(|y| y != c && state[y * m + l] >= cap)) {
            for a in 0..m {
                for l in dead..m {
                    state[a * m + l] = cap;
                }
            }
        }
    }

    fn best(&mut self, i: usize, state: &mut Vec<i64>) -> Result<Option<u64>> {
        let n = self.opts.len();
        if i == n {
            return Ok(self.scorer.is_unique(n, state, self.inst.target).then_some(0));
        }
        if let Some(hit) = self.memo[i].get(state.as_slice()) {
            return Ok(hit.map(|(c, _)| c));
        }
        self.tick()?;
        let mut found: Option<(u64, usize)> = None;
        if !self.limits.prune || self.bounds.may_win(i, state, self.inst.target, self.inst.m()) {
            for k in 0..self.opts[i].len() {
                let cost = self.opts[i][k].cost;
                if cost > self.inst.budget {
                    continue;
                }
                let mut next = self.step(state, k, i);
                if let Some(rest) = self.best(i + 1, &mut next)? {
                    let total = rest + cost;
                    if found.map_or(true, |(b, _)| total < b) {
                        found = Some((total, k));
                    }
                }
            }
        }
        self.memo[i].insert(state.clone(), found);
        Ok(found.map(|(c, _)| c))
    }
}

/// Exact decision and cheapest witness, or `ResourceExceeded`.
pub fn solve_exhaustive(inst: &BriberyInstance, limits: &OracleBudget) -> Result<BriberyOutcome> {
    inst.validate()?;
    let scorer = Scorer::new(&inst.rule, inst.m())?;
    let opts = (0..inst.n()).map(|i| choices(inst, &scorer, i, limits)).collect::<Result<Vec<_>>>()?;
    let bounds = bounds(inst, &opts, scorer.width());
    let width = scorer.width();
    let mut s = Search {
        inst,
        scorer,
        opts,
        bounds,
        limits: *limits,
        memo: (0..inst.n()).map(|_| BTreeMap::new()).collect(),
        nodes: 0,
        #[cfg(feature = "std")]
        started: std::time::Instant::now(),
    };
    let mut state = vec![0i64; width];
    let Some(cost) = s.best(0, &mut state)? else {
        return Ok(BriberyOutcome::No);
    };
    if cost > inst.budget {
        return Ok(BriberyOutcome::No);
    }
    // replay the recorded choices
    let mut prefs = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let (_, k) = s.memo[i][&state].ok_or_else(|| Error::Internal(format!("lost trail at voter {i}")))?;
        prefs.push(s.opts[i][k].pref.clone());
        state = s.step(&state, k, i);
    }
    Ok(BriberyOutcome::Yes(certify(inst, prefs)?))
}
