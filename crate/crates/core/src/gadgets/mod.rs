//! Reduction gadgets.
//!
//! Each generator turns a (3,B2)-SAT formula into a bribery instance whose
//! YES answer encodes satisfiability, and knows how to build the bribed
//! profile from a satisfying assignment. Padding sizes are parameters with
//! enforced floors; the defaults are the floors, not the loose asymptotic
//! values, so that instances stay small enough to check.

mod borda;
mod kapp_maxdisp;
mod kapp_swap;
pub mod sat;
pub mod wmg;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use crate::election::{AlternativeSet, Preference, Profile};
use crate::instance::{verify, BriberyInstance};
use crate::metrics::distance;
use crate::{Error, Result};

pub use borda::{gen_borda_gadget, BordaLedger};
pub use kapp_maxdisp::{gen_kapproval_maxdisp_priced_gadget, kapp_maxdisp_filler_floor};
pub use kapp_swap::{gen_kapproval_swap_gadget, safe_pad as kapp_swap_safe_pad, KAPP_SWAP_MIN_PAD};
pub use sat::{parse_and_validate_3b2, Sat3B2Instance};
pub use wmg::{check_wmg_conditions, realize_wmg, WmgTarget};

/// Largest `voters × alternatives` a generator will materialize.
pub const MAX_GADGET_CELLS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reduction {
    KApprovalSwap,
    KApprovalMaxDispPriced,
    Borda,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::KApprovalSwap => "kapp-swap",
            Reduction::KApprovalMaxDispPriced => "kapp-maxdisp-priced",
            Reduction::Borda => "borda",
        })
    }
}

impl FromStr for Reduction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kapp-swap" => Ok(Reduction::KApprovalSwap),
            "kapp-maxdisp-priced" => Ok(Reduction::KApprovalMaxDispPriced),
            "borda" => Ok(Reduction::Borda),
            _ => Err(Error::Gadget(format!("unknown reduction `{s}`"))),
        }
    }
}

/// What a voter encodes; the witness builder edits by role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Role {
    Literal(i32),
    Clause { clause: usize, slot: usize },
    Block(u8),
}

/// One line of the name map: kind, symbol, alternative index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NameEntry {
    pub kind: &'static str,
    pub symbol: String,
    pub alt: usize,
}

/// A generated instance plus the bookkeeping needed to read it back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub instance: BriberyInstance,
    pub reduction: Reduction,
    /// Formula actually encoded (after doubling, if any).
    pub sat: Sat3B2Instance,
    /// Variable count of the formula as given.
    pub source_vars: usize,
    /// Padding actually used: the copy parameter for `kapp-swap`, the number
    /// of filler alternatives otherwise.
    pub pad: usize,
    pub k: usize,
    pub names: Vec<NameEntry>,
    /// Filler (or dummy) alternatives.
    pub fillers: Range<usize>,
    pub borda: Option<BordaLedger>,
    pub(crate) roles: Vec<Role>,
}

impl GadgetInstance {
    /// Alternative for a symbol such as `w_1` or `a(x2,0)`.
    pub fn alt(&self, symbol: &str) -> Option<usize> {
        self.names.iter().find(|e| e.symbol == symbol).map(|e| e.alt)
    }

    /// Symbols of one kind, with their alternatives.
    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a NameEntry> + 'a {
        self.names.iter().filter(move |e| e.kind == kind)
    }

    /// Sidecar text: `literal a(x1,0) -> alt 7`, one line per symbol, and a
    /// range line for the fillers. Indices are 0-based.
    pub fn name_map(&self) -> String {
        let mut s = format!("reduction {}\n", self.reduction);
        for e in &self.names {
            s += &format!("{} {} -> alt {}\n", e.kind, e.symbol, e.alt);
        }
        if !self.fillers.is_empty() {
            s += &format!("filler D -> alts {}..{}\n", self.fillers.start, self.fillers.end);
        }
        s
    }
}

/// The bribed profile built from an assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetWitness {
    pub prefs: Vec<Preference>,
    /// Whether the assignment satisfies the formula; if not, nothing is
    /// promised about the winner.
    pub satisfies: bool,
}

/// Builds the forward-direction bribed profile. The assignment may cover the
/// formula as given (it is copied onto the doubled half) or the encoded one.
pub fn witness_from_assignment(g: &GadgetInstance, assignment: &[bool]) -> Result<GadgetWitness> {
    let full: Vec<bool> = if assignment.len() == g.sat.vars() {
        assignment.to_vec()
    } else if assignment.len() == g.source_vars && g.sat.vars() == 2 * g.source_vars {
        assignment.iter().chain(assignment).copied().collect()
    } else {
        return Err(Error::LengthMismatch { expected: g.source_vars, found: assignment.len() });
    };
    let prefs = match g.reduction {
        Reduction::KApprovalSwap => kapp_swap::witness(g, &full),
        Reduction::KApprovalMaxDispPriced => kapp_maxdisp::witness(g, &full),
        Reduction::Borda => borda::witness(g, &full),
    };
    let inst = &g.instance;
    for (i, (old, new)) in inst.profile.prefs().iter().zip(&prefs).enumerate() {
        let d = distance(inst.metric, old, new)?;
        if d > inst.deltas[i] {
            return Err(Error::Internal(format!("witness moves voter {} by {d}", i + 1)));
        }
    }
    let satisfies = g.sat.satisfies(&full);
    if satisfies {
        verify(inst, &prefs).map_err(|e| Error::Internal(format!("witness rejected: {e}")))?;
    }
    Ok(GadgetWitness { prefs, satisfies })
}

/// First slot of clause `j` made true by `a`.
pub(crate) fn chosen_slot(sat: &Sat3B2Instance, a: &[bool], j: usize) -> Option<usize> {
    sat.clauses()[j].iter().position(|&l| Sat3B2Instance::literal_true(a, l))
}

/// Reorders `order[at..at+perm.len()]` so that slot `i` takes old slot `perm[i]`.
pub(crate) fn permute(p: &Preference, at: usize, perm: &[usize]) -> Preference {
    let old = p.order();
    let mut v = old.to_vec();
    for (i, &j) in perm.iter().enumerate() {
        v[at + i] = old[at + j];
    }
    Preference::from_vec_unchecked(v)
}

/// A formula with an even number of variables and clauses.
pub(crate) fn even_sat(sat: &Sat3B2Instance) -> Sat3B2Instance {
    if sat.vars() % 2 == 1 || sat.len() % 2 == 1 { sat.doubled() } else { sat.clone() }
}

pub(crate) fn lit_symbol(l: i32) -> String {
    if l > 0 { format!("x{l}") } else { format!("~x{}", -l) }
}

pub(crate) fn lit_tag(l: i32) -> String {
    if l > 0 { format!("x{l}") } else { format!("nx{}", -l) }
}

/// Slot of a voter skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    Alt(usize),
    Filler,
}

/// Filler queue: voter `v` draws fillers cyclically starting at `v * window`,
/// so with `count >= voters * window` no filler is among the first `window`
/// drawn by two different voters.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fillers {
    pub start: usize,
    pub count: usize,
    pub window: usize,
}

impl Fillers {
    fn get(&self, voter: usize, j: usize) -> usize {
        self.start + (voter * self.window + j) % self.count
    }
}

/// Named prefix, then every unplaced named alternative preceded by `sep`
/// fillers, in index order. Fillers at the tail are implicit.
pub(crate) fn skeleton(spec: &[Slot], named: usize, sep: usize) -> Vec<Slot> {
    let mut used = alloc::vec![false; named];
    let mut out = spec.to_vec();
    for s in spec {
        if let Slot::Alt(a) = *s {
            used[a] = true;
        }
    }
    for a in 0..named {
        if !used[a] {
            out.extend(core::iter::repeat_n(Slot::Filler, sep));
            out.push(Slot::Alt(a));
        }
    }
    out
}

pub(crate) fn fillers_used(sk: &[Slot]) -> usize {
    sk.iter().filter(|s| **s == Slot::Filler).count()
}

/// Profile, name map, filler range, voter roles, prices.
pub(crate) type Finished = (Profile, Vec<NameEntry>, Range<usize>, Vec<Role>, Vec<u64>);

/// Collects alternatives, voters and roles.
pub(crate) struct Builder {
    pub alt_names: Vec<String>,
    pub names: Vec<NameEntry>,
    pub skeletons: Vec<Vec<Slot>>,
    pub roles: Vec<Role>,
    pub prices: Vec<u64>,
}

impl Builder {
    pub fn new() -> Self {
        Builder { alt_names: Vec::new(), names: Vec::new(), skeletons: Vec::new(), roles: Vec::new(), prices: Vec::new() }
    }

    pub fn alt(&mut self, kind: &'static str, symbol: String, name: String) -> usize {
        let i = self.alt_names.len();
        self.alt_names.push(name);
        self.names.push(NameEntry { kind, symbol, alt: i });
        i
    }

    pub fn named(&self) -> usize {
        self.alt_names.len()
    }

    pub fn voter(&mut self, spec: &[Slot], sep: usize, role: Role, price: u64) {
        let sk = skeleton(spec, self.named(), sep);
        self.skeletons.push(sk);
        self.roles.push(role);
        self.prices.push(price);
    }

    pub fn voters(&mut self, copies: usize, spec: &[Slot], sep: usize, role: Role, price: u64) {
        for _ in 0..copies {
            self.voter(spec, sep, role, price);
        }
    }

    /// Fillers the busiest voter draws.
    pub fn max_fillers_used(&self) -> usize {
        self.skeletons.iter().map(|s| fillers_used(s)).max().unwrap_or(0)
    }

    /// Adds `count` fillers named `{prefix}{i}` and turns skeletons into
    /// full preferences.
    pub fn finish(mut self, prefix: &str, count: usize, window: usize) -> Result<Finished> {
        let named = self.named();
        let cells = (named + count).saturating_mul(self.skeletons.len());
        if cells > MAX_GADGET_CELLS {
            return Err(Error::Gadget(format!(
                "{} voters over {} alternatives is too large; lower the padding",
                self.skeletons.len(),
                named + count
            )));
        }
        if count < self.max_fillers_used() {
            return Err(Error::Internal("filler pool smaller than one voter's draw".into()));
        }
        let fil = Fillers { start: named, count, window };
        for i in 0..count {
            self.alt_names.push(format!("{prefix}{}", i + 1));
        }
        let alts = AlternativeSet::new(self.alt_names)?;
        let mut prefs = Vec::with_capacity(self.skeletons.len());
        for (v, sk) in self.skeletons.iter().enumerate() {
            let mut order = Vec::with_capacity(named + count);
            let mut j = 0;
            for s in sk {
                match *s {
                    Slot::Alt(a) => order.push(a),
                    Slot::Filler => {
                        order.push(fil.get(v, j));
                        j += 1;
                    }
                }
            }
            while j < count {
                order.push(fil.get(v, j));
                j += 1;
            }
            prefs.push(Preference::from_vec_unchecked(order));
        }
        let profile = Profile::new(alts, prefs)?;
        Ok((profile, self.names, named..named + count, self.roles, self.prices))
    }
}

/// Positional scores over a gadget profile.
pub fn scores(g: &GadgetInstance, prefs: &[Preference]) -> Result<Vec<i64>> {
    let m = g.instance.m();
    let alpha = g.instance.rule.score_vector(m).ok_or_else(|| Error::Unsupported("not a positional rule".to_string()))?;
    let mut s = alloc::vec![0i64; m];
    for p in prefs {
        for (i, &a) in p.order().iter().enumerate() {
            s[a] += alpha[i];
        }
    }
    Ok(s)
}
