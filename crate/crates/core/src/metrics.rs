//! Rank distances and bounded neighborhoods.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::election::Preference;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Metric {
    /// Kendall tau: number of discordant pairs.
    Swap,
    /// Spearman footrule: sum of absolute rank differences.
    Footrule,
    /// Chebyshev: largest absolute rank difference.
    MaxDisplacement,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Swap, Metric::Footrule, Metric::MaxDisplacement];
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Swap => "swap",
            Metric::Footrule => "footrule",
            Metric::MaxDisplacement => "maxdisp",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "swap" => Ok(Metric::Swap),
            "footrule" => Ok(Metric::Footrule),
            "maxdisp" | "max-displacement" => Ok(Metric::MaxDisplacement),
            _ => Err(Error::InvalidInstance(alloc::format!("unknown metric `{s}`"))),
        }
    }
}

/// Default cap on materialized balls.
pub const DEFAULT_BALL_LIMIT: usize = 1_000_000;

pub fn distance(metric: Metric, p1: &Preference, p2: &Preference) -> Result<u64> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch { expected: p1.len(), found: p2.len() });
    }
    let r1 = p1.ranks();
    Ok(match metric {
        Metric::Swap => {
            // p2 rewritten in p1-ranks; count inversions with a Fenwick tree
            let seq: Vec<usize> = p2.order().iter().map(|&a| r1[a]).collect();
            inversions(&seq)
        }
        Metric::Footrule => p2
            .order()
            .iter()
            .enumerate()
            .map(|(i, &a)| i.abs_diff(r1[a]) as u64)
            .sum(),
        Metric::MaxDisplacement => p2
            .order()
            .iter()
            .enumerate()
            .map(|(i, &a)| i.abs_diff(r1[a]) as u64)
            .max()
            .unwrap_or(0),
    })
}

fn inversions(seq: &[usize]) -> u64 {
    let n = seq.len();
    let mut bit = vec![0u64; n + 1];
    let mut inv = 0;
    for (seen, &v) in seq.iter().enumerate() {
        // number of earlier values <= v
        let mut i = v + 1;
        let mut le = 0;
        while i > 0 {
            le += bit[i];
            i &= i - 1;
        }
        inv += seen as u64 - le;
        let mut i = v + 1;
        while i <= n {
            bit[i] += 1;
            i += i & i.wrapping_neg();
        }
    }
    inv
}

/// Every preference within `radius` of `pref`, in lexicographic order of the
/// rank sequence. Fails with `BallTooLarge` past `limit` elements.
pub fn ball(pref: &Preference, metric: Metric, radius: u64, limit: usize) -> Result<Vec<Preference>> {
    if pref.len() <= 8 {
        ball_by_filter(pref, metric, radius, limit)
    } else {
        ball_by_search(pref, metric, radius, limit)
    }
}

fn ball_by_filter(pref: &Preference, metric: Metric, radius: u64, limit: usize) -> Result<Vec<Preference>> {
    let m = pref.len();
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        let q = Preference::from_vec_unchecked(cur.clone());
        if distance(metric, pref, &q)? <= radius {
            if out.len() == limit {
                return Err(Error::BallTooLarge { limit });
            }
            out.push(q);
        }
        if !next_permutation(&mut cur) {
            return Ok(out);
        }
    }
}

/// Lexicographic successor in place; false once `v` was the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

struct Search<'a> {
    metric: Metric,
    radius: u64,
    limit: usize,
    order: &'a [usize],
    // ranks of the not-yet-placed alternatives, ascending
    pending: Vec<usize>,
    cur: Vec<usize>,
    out: Vec<Preference>,
}

impl Search<'_> {
    // `spent`: inversions so far (swap) or displacement so far (footrule)
    fn go(&mut self, spent: u64) -> Result<()> {
        let j = self.cur.len();
        if self.pending.is_empty() {
            if self.out.len() == self.limit {
                return Err(Error::BallTooLarge { limit: self.limit });
            }
            self.out.push(Preference::from_vec_unchecked(self.cur.clone()));
            return Ok(());
        }
        let slack = self.radius - spent;
        // (index into pending, cost after placing it at j)
        let mut cands: Vec<(usize, u64)> = Vec::new();
        match self.metric {
            Metric::Swap => {
                // placing the t-th pending rank jumps over t earlier ones
                for t in 0..self.pending.len().min(slack as usize + 1) {
                    cands.push((t, spent + t as u64));
                }
            }
            Metric::MaxDisplacement => {
                let r = self.radius as usize;
                if self.pending[0] + r <= j {
                    cands.push((0, 0));
                } else {
                    for (t, &home) in self.pending.iter().enumerate() {
                        if home > j + r {
                            break;
                        }
                        cands.push((t, 0));
                    }
                }
            }
            Metric::Footrule => {
                // everything left behind lands at j+1 or later
                let lag: u64 = self
                    .pending
                    .iter()
                    .take_while(|&&h| h <= j)
                    .map(|&h| (j + 1 - h) as u64)
                    .sum();
                for (t, &home) in self.pending.iter().enumerate() {
                    if home > j + slack as usize {
                        break;
                    }
                    let own_lag = if home <= j { (j + 1 - home) as u64 } else { 0 };
                    let s = spent + home.abs_diff(j) as u64;
                    if s + lag - own_lag <= self.radius {
                        cands.push((t, s));
                    }
                }
            }
        }
        // lexicographic output: try alternatives by index
        cands.sort_by_key(|&(t, _)| self.order[self.pending[t]]);
        for (t, next) in cands {
            let home = self.pending.remove(t);
            self.cur.push(self.order[home]);
            let res = self.go(next);
            self.cur.pop();
            self.pending.insert(t, home);
            res?;
        }
        Ok(())
    }
}

fn ball_by_search(pref: &Preference, metric: Metric, radius: u64, limit: usize) -> Result<Vec<Preference>> {
    let m = pref.len();
    let radius = radius.min((m * m) as u64);
    let mut s = Search {
        metric,
        radius,
        limit,
        order: pref.order(),
        pending: (0..m).collect(),
        cur: Vec::with_capacity(m),
        out: Vec::new(),
    };
    s.go(0)?;
    Ok(s.out)
}

/// Over-estimate of the ball size for `m` alternatives, saturating.
pub fn ball_size_bound(m: usize, metric: Metric, radius: u64) -> u128 {
    let fact = factorial(m);
    let bound = match metric {
        // swap <= footrule, so the swap ball of the same radius contains it
        Metric::Swap | Metric::Footrule => mahonian_upto(m, radius),
        Metric::MaxDisplacement => {
            let base = 2 * radius.min(m as u64) as u128 + 1;
            let mut b: u128 = 1;
            for _ in 0..m {
                b = b.saturating_mul(base);
                if b >= fact {
                    break;
                }
            }
            b
        }
    };
    bound.min(fact)
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Number of permutations of `m` items with at most `r` inversions.
fn mahonian_upto(m: usize, r: u64) -> u128 {
    let full = (m as u64) * (m as u64).saturating_sub(1) / 2;
    if r >= full {
        return factorial(m);
    }
    let r = r as usize;
    // row[k] = #perms with exactly k inversions, truncated at r
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for i in 1..=m {
        // new element adds 0..i-1 inversions
        let mut pre = vec![0u128; r + 2];
        for k in 0..=r {
            pre[k + 1] = pre[k].saturating_add(row[k]);
        }
        if pre[r + 1] == u128::MAX {
            return factorial(m);
        }
        for k in 0..=r {
            let lo = k.saturating_sub(i - 1);
            row[k] = pre[k + 1].saturating_sub(pre[lo]);
        }
    }
    row.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::AlternativeSet;

    fn pr(m: usize, s: &str) -> Preference {
        Preference::parse(&AlternativeSet::letters(m), s).unwrap()
    }

    #[test]
    fn distances() {
        let abc = pr(3, "a>b>c");
        let cba = pr(3, "c>b>a");
        assert_eq!(distance(Metric::Swap, &abc, &cba).unwrap(), 3);
        assert_eq!(distance(Metric::Footrule, &abc, &cba).unwrap(), 4);
        assert_eq!(distance(Metric::MaxDisplacement, &abc, &cba).unwrap(), 2);
        for metric in Metric::ALL {
            assert_eq!(distance(metric, &abc, &abc).unwrap(), 0);
        }
        assert_eq!(distance(Metric::Swap, &pr(4, "a>b>c>d"), &pr(4, "b>a>d>c")).unwrap(), 2);
        assert!(distance(Metric::Swap, &abc, &pr(4, "a>b>c>d")).is_err());
    }

    #[test]
    fn small_balls() {
        let abc = pr(3, "a>b>c");
        let names = |v: Vec<Preference>| v.into_iter().map(|p| p.into_order()).collect::<Vec<_>>();
        assert_eq!(names(ball(&abc, Metric::Swap, 0, 10).unwrap()), [vec![0, 1, 2]]);
        let one = [vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2]];
        assert_eq!(names(ball(&abc, Metric::Swap, 1, 10).unwrap()), one);
        assert_eq!(names(ball(&abc, Metric::Footrule, 2, 10).unwrap()), one);
        assert_eq!(ball(&abc, Metric::MaxDisplacement, 2, 10).unwrap().len(), 6);
        assert_eq!(ball(&abc, Metric::MaxDisplacement, 2, 5), Err(Error::BallTooLarge { limit: 5 }));
    }

    #[test]
    fn search_matches_filter() {
        let p = Preference::new(vec![3, 0, 5, 1, 4, 2, 6]).unwrap();
        for metric in Metric::ALL {
            for r in 0..6 {
                let a = ball_by_filter(&p, metric, r, usize::MAX).unwrap();
                let b = ball_by_search(&p, metric, r, usize::MAX).unwrap();
                assert_eq!(a, b, "{metric} r={r}");
            }
        }
    }

    #[test]
    fn large_m_ball() {
        let p = Preference::identity(12);
        assert_eq!(ball(&p, Metric::Swap, 1, 100).unwrap().len(), 12);
        assert_eq!(ball(&p, Metric::Footrule, 3, 100).unwrap().len(), 12);
        let b = ball(&p, Metric::Swap, 2, 1000).unwrap();
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn size_bounds() {
        assert!(ball_size_bound(3, Metric::Swap, 0) >= 1);
        assert_eq!(ball_size_bound(4, Metric::Swap, 1), 4);
        assert_eq!(ball_size_bound(5, Metric::Swap, 10), 120);
        assert_eq!(ball_size_bound(5, Metric::MaxDisplacement, 4), 120);
        assert_eq!(mahonian_upto(4, 2), 1 + 3 + 5);
        assert_eq!(ball_size_bound(40, Metric::Swap, 10_000), factorial(40));
    }

    #[test]
    fn permutation_successor() {
        let mut v = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut v) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(v, [2, 1, 0]);
    }
}
