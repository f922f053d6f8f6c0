//! Bribery instances, outcomes, and the witness verifier.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::election::{Preference, Profile, Scorer, VotingRule};
use crate::metrics::{distance, Metric};
use crate::{Error, Result};

/// Largest price sum accepted, keeps every flow cost well inside `i64`.
pub const MAX_TOTAL_PRICE: u64 = 1 << 40;

/// Profile, target, per-voter radius and price, budget, rule and metric.
///
/// The unpriced problem is the special case of a uniform radius, zero prices
/// and zero budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BriberyInstance {
    pub profile: Profile,
    pub target: usize,
    pub deltas: Vec<u64>,
    pub prices: Vec<u64>,
    pub budget: u64,
    pub rule: VotingRule,
    pub metric: Metric,
}

impl BriberyInstance {
    /// Unpriced instance with a uniform radius.
    pub fn uniform(profile: Profile, target: usize, delta: u64, rule: VotingRule, metric: Metric) -> Self {
        let n = profile.n();
        BriberyInstance {
            profile,
            target,
            deltas: alloc::vec![delta; n],
            prices: alloc::vec![0; n],
            budget: 0,
            rule,
            metric,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.profile.n();
        let m = self.profile.m();
        if self.target >= m {
            return Err(Error::UnknownAlternative(self.target));
        }
        if self.deltas.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: self.deltas.len() });
        }
        if self.prices.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: self.prices.len() });
        }
        let total = self.prices.iter().try_fold(0u64, |a, &p| a.checked_add(p)).ok_or(Error::Overflow)?;
        if total > MAX_TOTAL_PRICE || self.budget > MAX_TOTAL_PRICE {
            return Err(Error::InvalidInstance("prices and budget must stay below 2^40".to_string()));
        }
        self.rule.validate(m)
    }

    /// Uniform radius, no prices: the unpriced problem.
    pub fn is_unpriced(&self) -> bool {
        self.prices.iter().all(|&p| p == 0) && self.deltas.windows(2).all(|w| w[0] == w[1])
    }

    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn m(&self) -> usize {
        self.profile.m()
    }

    /// Radius actually usable by voter `i`: zero if the voter is unaffordable.
    pub fn effective_delta(&self, i: usize) -> u64 {
        if self.prices[i] > self.budget { 0 } else { self.deltas[i] }
    }
}

/// A bribed profile together with who changed and what it cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub profile: Profile,
    pub bribed: Vec<usize>,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BriberyOutcome {
    Yes(Witness),
    No,
}

impl BriberyOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, BriberyOutcome::Yes(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            BriberyOutcome::Yes(w) => Some(w),
            BriberyOutcome::No => None,
        }
    }

    pub fn cost(&self) -> Option<u64> {
        self.witness().map(|w| w.cost)
    }
}

/// Checks a proposed final profile against `inst`: only changed voters are
/// bribed, each stays within its radius, the total price fits the budget,
/// and the target is the unique winner.
pub fn verify(inst: &BriberyInstance, prefs: &[Preference]) -> Result<Witness> {
    inst.validate()?;
    let n = inst.n();
    if prefs.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: prefs.len() });
    }
    let mut bribed = Vec::new();
    let mut cost = 0u64;
    for (i, (old, new)) in inst.profile.prefs().iter().zip(prefs).enumerate() {
        if old == new {
            continue;
        }
        let d = distance(inst.metric, old, new)?;
        if d > inst.deltas[i] {
            return Err(Error::InvalidInstance(format!(
                "voter {} moved {d} > radius {}",
                i + 1,
                inst.deltas[i]
            )));
        }
        bribed.push(i);
        cost = cost.checked_add(inst.prices[i]).ok_or(Error::Overflow)?;
    }
    if cost > inst.budget {
        return Err(Error::InvalidInstance(format!("cost {cost} exceeds budget {}", inst.budget)));
    }
    let profile = inst.profile.with_prefs(prefs.to_vec())?;
    let scorer = Scorer::new(&inst.rule, inst.m())?;
    if !scorer.is_unique(n, &scorer.aggregate(&profile), inst.target) {
        return Err(Error::InvalidInstance("target is not the unique winner".to_string()));
    }
    Ok(Witness { profile, bribed, cost })
}

/// Gate used by every solver before returning YES.
pub(crate) fn certify(inst: &BriberyInstance, prefs: Vec<Preference>) -> Result<Witness> {
    verify(inst, &prefs).map_err(|e| Error::Internal(format!("solver produced a bad witness: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verifier_conditions() {
        let prof = Profile::from_strs(3, &["a>c>b", "b>c>a"]).unwrap();
        let mut inst = BriberyInstance::uniform(prof, 2, 1, VotingRule::Plurality, Metric::Swap);
        let alts = inst.profile.alternatives().clone();
        let p = |s: &str| Preference::parse(&alts, s).unwrap();
        // c first in both
        let w = verify(&inst, &[p("c>a>b"), p("c>b>a")]).unwrap();
        assert_eq!(w.bribed, [0, 1]);
        assert_eq!(w.cost, 0);
        // too far
        assert!(verify(&inst, &[p("c>b>a"), p("c>b>a")]).is_err());
        // tie
        assert!(verify(&inst, &[p("c>a>b"), p("b>c>a")]).is_err());
        inst.prices = alloc::vec![1, 1];
        inst.budget = 1;
        assert!(verify(&inst, &[p("c>a>b"), p("c>b>a")]).is_err());
    }
}
