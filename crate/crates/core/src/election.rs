//! Alternatives, preferences, profiles and winner determination.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Ordered set of alternative names. Identity is the index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternativeSet {
    names: Vec<String>,
    lookup: BTreeMap<String, usize>,
}

impl AlternativeSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = AlternativeSet { names: Vec::new(), lookup: BTreeMap::new() };
        for name in names {
            let name: String = name.into();
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if out.lookup.insert(name.clone(), out.names.len()).is_some() {
                return Err(Error::DuplicateName(name));
            }
            out.names.push(name);
        }
        if out.names.is_empty() {
            return Err(Error::InvalidInstance("no alternatives".to_string()));
        }
        Ok(out)
    }

    /// `a`, `b`, ..., `z`, then `a26`, `a27`, ...
    pub fn letters(m: usize) -> Self {
        let names = (0..m).map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("a{i}")
            }
        });
        Self::new(names).expect("generated names are distinct")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }
}

/// A strict ranking, best first. Stores alternative indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Preference {
    order: Vec<usize>,
}

impl Preference {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        let mut seen = vec![false; m];
        for &a in &order {
            if a >= m || seen[a] {
                return Err(Error::NotAPermutation(format!("{order:?}")));
            }
            seen[a] = true;
        }
        Ok(Preference { order })
    }

    /// Caller guarantees `order` is a permutation of `0..len`.
    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Preference::new(order.clone()).is_ok());
        Preference { order }
    }

    pub fn identity(m: usize) -> Self {
        Preference { order: (0..m).collect() }
    }

    /// Parses `a > b > c` against `alts`.
    pub fn parse(alts: &AlternativeSet, text: &str) -> Result<Self> {
        let mut order = Vec::with_capacity(alts.len());
        for tok in text.split('>') {
            let tok = tok.trim();
            let i = alts.index_of(tok).ok_or_else(|| Error::UnknownName(tok.to_string()))?;
            order.push(i);
        }
        if order.len() != alts.len() {
            return Err(Error::LengthMismatch { expected: alts.len(), found: order.len() });
        }
        Preference::new(order)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    /// Alternative at 1-based rank `p`.
    pub fn at(&self, p: usize) -> usize {
        self.order[p - 1]
    }

    /// 0-based rank of every alternative.
    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.order.len()];
        for (i, &a) in self.order.iter().enumerate() {
            r[a] = i;
        }
        r
    }

    /// 1-based rank of `a`.
    pub fn position(&self, a: usize) -> Result<usize> {
        self.order
            .iter()
            .position(|&x| x == a)
            .map(|i| i + 1)
            .ok_or(Error::UnknownAlternative(a))
    }

    pub fn display<'a>(&'a self, alts: &'a AlternativeSet) -> DisplayPref<'a> {
        DisplayPref { pref: self, alts }
    }
}

pub struct DisplayPref<'a> {
    pref: &'a Preference,
    alts: &'a AlternativeSet,
}

impl fmt::Display for DisplayPref<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &a) in self.pref.order.iter().enumerate() {
            if i > 0 {
                f.write_str(" > ")?;
            }
            f.write_str(self.alts.name(a))?;
        }
        Ok(())
    }
}

/// 1-based rank of `a` in `pref`.
pub fn position(pref: &Preference, a: usize) -> Result<usize> {
    pref.position(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    alternatives: AlternativeSet,
    prefs: Vec<Preference>,
}

impl Profile {
    pub fn new(alternatives: AlternativeSet, prefs: Vec<Preference>) -> Result<Self> {
        if prefs.is_empty() {
            return Err(Error::InvalidInstance("profile has no voters".to_string()));
        }
        for p in &prefs {
            if p.len() != alternatives.len() {
                return Err(Error::LengthMismatch { expected: alternatives.len(), found: p.len() });
            }
        }
        Ok(Profile { alternatives, prefs })
    }

    /// Convenience for tests and examples: `["a>b>c", "b>a>c"]` over letter names.
    pub fn from_strs(m: usize, prefs: &[&str]) -> Result<Self> {
        let alts = AlternativeSet::letters(m);
        let prefs = prefs.iter().map(|s| Preference::parse(&alts, s)).collect::<Result<Vec<_>>>()?;
        Profile::new(alts, prefs)
    }

    pub fn alternatives(&self) -> &AlternativeSet {
        &self.alternatives
    }

    pub fn prefs(&self) -> &[Preference] {
        &self.prefs
    }

    pub fn m(&self) -> usize {
        self.alternatives.len()
    }

    pub fn n(&self) -> usize {
        self.prefs.len()
    }

    pub fn with_prefs(&self, prefs: Vec<Preference>) -> Result<Self> {
        Profile::new(self.alternatives.clone(), prefs)
    }
}

/// Non-increasing score vector with `alpha[0] > alpha[m-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreVector {
    alpha: Vec<u64>,
}

impl ScoreVector {
    pub fn new(alpha: Vec<u64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidRule("empty score vector".to_string()));
        }
        if alpha.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidRule("score vector must be non-increasing".to_string()));
        }
        if alpha.len() > 1 && alpha[0] == alpha[alpha.len() - 1] {
            return Err(Error::InvalidRule("score vector must have alpha_1 > alpha_m".to_string()));
        }
        Ok(ScoreVector { alpha })
    }

    pub fn k_approval(m: usize, k: usize) -> Self {
        ScoreVector { alpha: (0..m).map(|i| (i < k) as u64).collect() }
    }

    pub fn borda(m: usize) -> Self {
        ScoreVector { alpha: (0..m).map(|i| (m - 1 - i) as u64).collect() }
    }

    pub fn alpha(&self) -> &[u64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// Exact rational in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidRule(format!("copeland parameter {num}/{den} not in [0,1]")));
        }
        Ok(Ratio { num, den })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VotingRule {
    Plurality,
    Veto,
    KApproval(usize),
    Positional(ScoreVector),
    Borda,
    Maximin,
    Copeland(Ratio),
    Bucklin,
    SimplifiedBucklin,
}

impl VotingRule {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            VotingRule::KApproval(k) if *k == 0 || *k >= m => {
                Err(Error::InvalidRule(format!("{k}-approval needs 1 <= k <= m-1 (m = {m})")))
            }
            VotingRule::Positional(sv) if sv.len() != m => {
                Err(Error::LengthMismatch { expected: m, found: sv.len() })
            }
            VotingRule::Copeland(r) => Ratio::new(r.num, r.den).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Positional score vector, or `None` for pairwise and Bucklin-type rules.
    /// Veto is the approval-style `(1, ..., 1, 0)`.
    pub fn score_vector(&self, m: usize) -> Option<Vec<i64>> {
        let v: Vec<i64> = match self {
            VotingRule::Plurality => (0..m).map(|i| (i == 0) as i64).collect(),
            VotingRule::Veto => (0..m).map(|i| (i + 1 < m) as i64).collect(),
            VotingRule::KApproval(k) => (0..m).map(|i| (i < *k) as i64).collect(),
            VotingRule::Positional(sv) => sv.alpha().iter().map(|&a| a as i64).collect(),
            VotingRule::Borda => (0..m).map(|i| (m - 1 - i) as i64).collect(),
            _ => return None,
        };
        Some(v)
    }

    pub fn is_positional(&self) -> bool {
        self.score_vector(2).is_some()
    }
}

impl fmt::Display for VotingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VotingRule::Plurality => f.write_str("plurality"),
            VotingRule::Veto => f.write_str("veto"),
            VotingRule::KApproval(k) => write!(f, "kapproval {k}"),
            VotingRule::Positional(sv) => {
                f.write_str("positional ")?;
                for (i, a) in sv.alpha().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            }
            VotingRule::Borda => f.write_str("borda"),
            VotingRule::Maximin => f.write_str("maximin"),
            VotingRule::Copeland(r) => write!(f, "copeland {}/{}", r.num, r.den),
            VotingRule::Bucklin => f.write_str("bucklin"),
            VotingRule::SimplifiedBucklin => f.write_str("sbucklin"),
        }
    }
}

/// Pairwise margins `D[x][y] = N(x,y) - N(y,x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMajorityGraph {
    m: usize,
    margins: Vec<i64>,
}

impl WeightedMajorityGraph {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn margin(&self, x: usize, y: usize) -> i64 {
        self.margins[x * self.m + y]
    }
}

pub fn positional_scores(profile: &Profile, alpha: &ScoreVector) -> Result<Vec<i64>> {
    if alpha.len() != profile.m() {
        return Err(Error::LengthMismatch { expected: profile.m(), found: alpha.len() });
    }
    let mut s = vec![0i64; profile.m()];
    for p in profile.prefs() {
        for (i, &a) in p.order().iter().enumerate() {
            s[a] += alpha.alpha()[i] as i64;
        }
    }
    Ok(s)
}

pub fn weighted_majority_graph(profile: &Profile) -> WeightedMajorityGraph {
    let m = profile.m();
    let mut margins = vec![0i64; m * m];
    for p in profile.prefs() {
        add_pairwise(p.order(), m, &mut margins);
    }
    WeightedMajorityGraph { m, margins }
}

fn add_pairwise(order: &[usize], m: usize, acc: &mut [i64]) {
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            acc[x * m + y] += 1;
            acc[y * m + x] -= 1;
        }
    }
}

/// Number of voters ranking each alternative last.
pub fn veto_counts(profile: &Profile) -> Vec<u64> {
    let mut v = vec![0; profile.m()];
    for p in profile.prefs() {
        v[p.order()[p.len() - 1]] += 1;
    }
    v
}

/// Simplified Bucklin score of every alternative (lower is better).
pub fn simplified_bucklin_scores(profile: &Profile) -> Vec<usize> {
    let s = Scorer::new(&VotingRule::SimplifiedBucklin, profile.m()).expect("always valid");
    let agg = s.aggregate(profile);
    s.bucklin_levels(profile.n(), &agg)
}

/// How a rule summarizes a profile. Every rule here is additive over voters,
/// so the exact search can work on sums of per-voter contributions.
#[derive(Debug, Clone)]
pub(crate) struct Scorer {
    rule: VotingRule,
    m: usize,
    alpha: Option<Vec<i64>>,
}

impl Scorer {
    pub(crate) fn new(rule: &VotingRule, m: usize) -> Result<Self> {
        rule.validate(m)?;
        Ok(Scorer { rule: rule.clone(), m, alpha: rule.score_vector(m) })
    }

    /// Length of an aggregate vector.
    pub(crate) fn width(&self) -> usize {
        if self.alpha.is_some() { self.m } else { self.m * self.m }
    }

    pub(crate) fn add(&self, order: &[usize], acc: &mut [i64]) {
        let m = self.m;
        match (&self.alpha, &self.rule) {
            (Some(alpha), _) => {
                for (i, &a) in order.iter().enumerate() {
                    acc[a] += alpha[i];
                }
            }
            (None, VotingRule::Maximin | VotingRule::Copeland(_)) => add_pairwise(order, m, acc),
            // cumulative: acc[a*m + l] counts voters with a within the top l+1
            (None, _) => {
                for (i, &a) in order.iter().enumerate() {
                    for l in i..m {
                        acc[a * m + l] += 1;
                    }
                }
            }
        }
    }

    pub(crate) fn aggregate(&self, profile: &Profile) -> Vec<i64> {
        let mut acc = vec![0; self.width()];
        for p in profile.prefs() {
            self.add(p.order(), &mut acc);
        }
        acc
    }

    fn bucklin_levels(&self, n: usize, acc: &[i64]) -> Vec<usize> {
        let m = self.m;
        let half = (n / 2) as i64;
        (0..m)
            .map(|a| (0..m).find(|&l| acc[a * m + l] > half).map_or(m, |l| l + 1))
            .collect()
    }

    /// Co-winners given the aggregate of `n` voters.
    pub(crate) fn winners(&self, n: usize, acc: &[i64]) -> Vec<usize> {
        let m = self.m;
        if m == 1 {
            return vec![0];
        }
        let keys: Vec<i64> = match &self.rule {
            _ if self.alpha.is_some() => acc.to_vec(),
            VotingRule::Maximin => (0..m)
                .map(|x| (0..m).filter(|&y| y != x).map(|y| acc[x * m + y]).min().unwrap_or(0))
                .collect(),
            VotingRule::Copeland(r) => (0..m)
                .map(|x| {
                    let mut s = 0i64;
                    for y in (0..m).filter(|&y| y != x) {
                        let d = acc[x * m + y];
                        if d > 0 {
                            s += r.den as i64;
                        } else if d == 0 {
                            s += r.num as i64;
                        }
                    }
                    s
                })
                .collect(),
            VotingRule::SimplifiedBucklin => {
                self.bucklin_levels(n, acc).into_iter().map(|l| -(l as i64)).collect()
            }
            VotingRule::Bucklin => {
                let levels = self.bucklin_levels(n, acc);
                let k = *levels.iter().min().expect("m >= 1");
                (0..m).map(|a| acc[a * m + k - 1]).collect()
            }
            _ => unreachable!("positional rules handled above"),
        };
        let best = *keys.iter().max().expect("m >= 1");
        (0..m).filter(|&a| keys[a] == best).collect()
    }

    pub(crate) fn is_unique(&self, n: usize, acc: &[i64], c: usize) -> bool {
        let w = self.winners(n, acc);
        w.len() == 1 && w[0] == c
    }
}

/// All co-winners, ascending by index. Ties are never broken.
pub fn winners(profile: &Profile, rule: &VotingRule) -> Result<Vec<usize>> {
    let s = Scorer::new(rule, profile.m())?;
    Ok(s.winners(profile.n(), &s.aggregate(profile)))
}

pub fn is_unique_winner(profile: &Profile, rule: &VotingRule, c: usize) -> Result<bool> {
    if c >= profile.m() {
        return Err(Error::UnknownAlternative(c));
    }
    Ok(winners(profile, rule)? == [c])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(m: usize, prefs: &[&str]) -> Profile {
        Profile::from_strs(m, prefs).unwrap()
    }

    #[test]
    fn positions() {
        let alts = AlternativeSet::letters(3);
        let abc = Preference::parse(&alts, "a>b>c").unwrap();
        assert_eq!(position(&abc, 0).unwrap(), 1);
        assert_eq!(position(&abc, 2).unwrap(), 3);
        let bac = Preference::parse(&alts, "b > a > c").unwrap();
        assert_eq!(position(&bac, 0).unwrap(), 2);
        assert_eq!(position(&bac, 7), Err(Error::UnknownAlternative(7)));
    }

    #[test]
    fn bad_preferences() {
        assert!(Preference::new(vec![0, 0, 1]).is_err());
        assert!(Preference::new(vec![0, 3, 1]).is_err());
        let alts = AlternativeSet::letters(3);
        assert!(Preference::parse(&alts, "a>b").is_err());
        assert!(Preference::parse(&alts, "a>b>q").is_err());
        assert!(AlternativeSet::new(["a", "a"]).is_err());
    }

    #[test]
    fn scoring() {
        let prof = p(3, &["a>b>c", "a>c>b"]);
        assert_eq!(positional_scores(&prof, &ScoreVector::borda(3)).unwrap(), [4, 1, 1]);
        let prof = p(3, &["a>b>c"]);
        assert_eq!(positional_scores(&prof, &ScoreVector::k_approval(3, 1)).unwrap(), [1, 0, 0]);
        let cyc = p(3, &["a>b>c", "b>c>a", "c>a>b"]);
        assert_eq!(positional_scores(&cyc, &ScoreVector::borda(3)).unwrap(), [3, 3, 3]);
        assert!(positional_scores(&cyc, &ScoreVector::borda(4)).is_err());
    }

    #[test]
    fn margins() {
        let w = weighted_majority_graph(&p(2, &["a>b", "a>b"]));
        assert_eq!(w.margin(0, 1), 2);
        let w = weighted_majority_graph(&p(2, &["a>b", "b>a"]));
        assert_eq!(w.margin(0, 1), 0);
        let w = weighted_majority_graph(&p(3, &["a>b>c", "b>c>a", "c>a>b"]));
        assert_eq!((w.margin(0, 1), w.margin(1, 2), w.margin(2, 0)), (1, 1, 1));
        assert_eq!(w.margin(1, 0), -1);
    }

    #[test]
    fn rule_winners() {
        let half = VotingRule::Copeland(Ratio::new(1, 2).unwrap());
        assert_eq!(winners(&p(3, &["a>b>c", "a>c>b"]), &VotingRule::Maximin).unwrap(), [0]);
        assert_eq!(winners(&p(3, &["a>b>c", "b>c>a", "c>a>b"]), &half).unwrap(), [0, 1, 2]);
        let sb = p(3, &["a>b>c", "a>b>c", "b>a>c"]);
        assert_eq!(winners(&sb, &VotingRule::SimplifiedBucklin).unwrap(), [0]);
        let bk = p(3, &["c>a>b", "a>c>b", "a>c>b"]);
        assert_eq!(winners(&bk, &VotingRule::Bucklin).unwrap(), [0]);
        assert!(!is_unique_winner(&bk, &VotingRule::Bucklin, 2).unwrap());
    }

    #[test]
    fn unique_winner() {
        assert!(is_unique_winner(&p(2, &["a>b", "a>b"]), &VotingRule::Plurality, 0).unwrap());
        assert!(!is_unique_winner(&p(2, &["a>b", "b>a"]), &VotingRule::Plurality, 0).unwrap());
    }

    #[test]
    fn veto_and_levels() {
        let prof = p(3, &["a>b>c", "b>a>c", "c>a>b"]);
        assert_eq!(veto_counts(&prof), [0, 1, 2]);
        assert_eq!(winners(&prof, &VotingRule::Veto).unwrap(), [0]);
        assert_eq!(simplified_bucklin_scores(&prof), [2, 2, 3]);
    }

    #[test]
    fn rule_validation() {
        assert!(VotingRule::KApproval(0).validate(3).is_err());
        assert!(VotingRule::KApproval(3).validate(3).is_err());
        assert!(VotingRule::KApproval(2).validate(3).is_ok());
        assert!(Ratio::new(3, 2).is_err());
        assert!(ScoreVector::new(vec![1, 2]).is_err());
        assert!(ScoreVector::new(vec![1, 1]).is_err());
    }
}
