//! Profiles with a prescribed weighted majority graph on a core set, with the
//! core alternatives kept far apart by fillers.
//!
//! Even margins come from pairs of preferences `a > b > rest` and
//! `rev(rest) > a > b`, which add 2 to `D(a,b)` and cancel on every other core
//! pair. Odd margins first subtract one anchor preference `b1 > ... > bl`.
//! Two padding pairs (an order and its reverse) make every core alternative
//! beat every filler even when all margins are zero.
//!
//! Every preference interleaves the core with `ceil(K/2)` fillers of its own,
//! before the first, between consecutive, and after the last core
//! alternative; all other fillers follow at the bottom.

use alloc::format;
use alloc::vec::Vec;

use crate::election::{weighted_majority_graph, AlternativeSet, Preference, Profile};
use crate::{Error, Result};

/// Core alternatives are `0..core`, fillers `core..core+fillers`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmgTarget {
    pub core: usize,
    pub fillers: usize,
    /// Row-major `core x core` margins.
    pub z: Vec<i64>,
    /// Spacing parameter.
    pub k: usize,
}

impl WmgTarget {
    pub fn margin(&self, a: usize, b: usize) -> i64 {
        self.z[a * self.core + b]
    }

    fn spacing(&self) -> usize {
        self.k.div_ceil(2)
    }

    fn odd(&self) -> bool {
        self.core >= 2 && self.margin(0, 1).rem_euclid(2) == 1
    }

    /// Margins actually built by pairs: odd targets lose the anchor.
    fn even_part(&self) -> Vec<i64> {
        let l = self.core;
        let mut z = self.z.clone();
        if self.odd() {
            for i in 0..l {
                for j in 0..l {
                    if i < j {
                        z[i * l + j] -= 1;
                    } else if i > j {
                        z[i * l + j] += 1;
                    }
                }
            }
        }
        z
    }

    fn preference_count(&self) -> usize {
        let pairs: i64 = self.even_part().iter().filter(|&&v| v > 0).map(|v| v / 2).sum();
        2 * pairs as usize + 4 + self.odd() as usize
    }

    /// Fewest fillers this construction needs.
    pub fn min_fillers(&self) -> usize {
        self.preference_count() * self.spacing() * (self.core + 1)
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.core;
        if l == 0 {
            return Err(Error::Wmg("empty core".into()));
        }
        if self.z.len() != l * l {
            return Err(Error::Wmg(format!("expected {} margins, got {}", l * l, self.z.len())));
        }
        if self.k == 0 {
            return Err(Error::Wmg("spacing parameter must be positive".into()));
        }
        let mut parity = None;
        for a in 0..l {
            if self.margin(a, a) != 0 {
                return Err(Error::Wmg(format!("nonzero diagonal at {a}")));
            }
            for b in a + 1..l {
                if self.margin(a, b) != -self.margin(b, a) {
                    return Err(Error::Wmg(format!("margins ({a},{b}) not antisymmetric")));
                }
                let p = self.margin(a, b).rem_euclid(2);
                if *parity.get_or_insert(p) != p {
                    return Err(Error::Wmg("margins mix parities".into()));
                }
            }
        }
        if self.fillers < self.min_fillers() {
            return Err(Error::Wmg(format!("need at least {} fillers, got {}", self.min_fillers(), self.fillers)));
        }
        Ok(())
    }
}

pub fn realize_wmg(target: &WmgTarget) -> Result<Profile> {
    target.validate()?;
    let l = target.core;
    let mut orders: Vec<Vec<usize>> = Vec::new();
    let z = target.even_part();
    for a in 0..l {
        for b in 0..l {
            let v = z[a * l + b];
            if v <= 0 {
                continue;
            }
            let rest: Vec<usize> = (0..l).filter(|&x| x != a && x != b).collect();
            let mut first = alloc::vec![a, b];
            first.extend(&rest);
            let mut second: Vec<usize> = rest.iter().rev().copied().collect();
            second.extend([a, b]);
            for _ in 0..v / 2 {
                orders.push(first.clone());
                orders.push(second.clone());
            }
        }
    }
    let ident: Vec<usize> = (0..l).collect();
    let rev: Vec<usize> = (0..l).rev().collect();
    for _ in 0..2 {
        orders.push(ident.clone());
        orders.push(rev.clone());
    }
    if target.odd() {
        orders.push(ident);
    }

    let s = target.spacing();
    let own = s * (l + 1);
    let total = l + target.fillers;
    let prefs = orders
        .iter()
        .enumerate()
        .map(|(v, core)| {
            let fresh = l + v * own..l + (v + 1) * own;
            let mut next = fresh.clone();
            let mut out = Vec::with_capacity(total);
            for &b in core {
                out.extend(next.by_ref().take(s));
                out.push(b);
            }
            out.extend(next);
            out.extend((l..total).filter(|f| !fresh.contains(f)));
            Preference::from_vec_unchecked(out)
        })
        .collect();
    let names = (1..=l).map(|i| format!("b{i}")).chain((1..=target.fillers).map(|i| format!("c{i}")));
    let profile = Profile::new(AlternativeSet::new(names)?, prefs)?;
    debug_assert!(check_wmg_conditions(target, &profile).is_ok());
    Ok(profile)
}

/// Margins on the core equal the target, every core alternative beats every
/// filler, every core alternative has only fillers within `ceil(K/2)` on both
/// sides, and each filler comes within `K/2` of the core in at most one
/// preference.
pub fn check_wmg_conditions(target: &WmgTarget, profile: &Profile) -> Result<()> {
    let l = target.core;
    let g = weighted_majority_graph(profile);
    for a in 0..l {
        for b in 0..l {
            if a != b && g.margin(a, b) != target.margin(a, b) {
                return Err(Error::Wmg(format!(
                    "margin ({a},{b}) is {}, expected {}",
                    g.margin(a, b),
                    target.margin(a, b)
                )));
            }
        }
        for f in l..profile.m() {
            if g.margin(a, f) <= 0 {
                return Err(Error::Wmg(format!("core {a} does not beat filler {f}")));
            }
        }
    }
    let s = target.spacing();
    let mut near = alloc::vec![0usize; profile.m()];
    for (v, p) in profile.prefs().iter().enumerate() {
        let o = p.order();
        let core_pos: Vec<usize> = (0..o.len()).filter(|&i| o[i] < l).collect();
        for &i in &core_pos {
            if i < s || i + s >= o.len() || (i - s..=i + s).any(|j| j != i && o[j] < l) {
                return Err(Error::Wmg(format!("voter {}: core alternative at rank {} lacks spacing", v + 1, i + 1)));
            }
        }
        for (i, &f) in o.iter().enumerate() {
            if f >= l && core_pos.iter().any(|&q| 2 * q.abs_diff(i) < target.k) {
                near[f] += 1;
            }
        }
    }
    if let Some(f) = (l..profile.m()).find(|&f| near[f] > 1) {
        return Err(Error::Wmg(format!("filler {f} is near the core in {} preferences", near[f])));
    }
    Ok(())
}
