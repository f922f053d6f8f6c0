//! 3-CNF formulas where every literal occurs in exactly two clauses.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::{Error, Result};

/// Variables are `1..=vars`; a literal is `±v` as in DIMACS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sat3B2Instance {
    vars: usize,
    clauses: Vec<[i32; 3]>,
}

/// Largest formula the brute-force search accepts.
pub const BRUTE_FORCE_MAX_VARS: usize = 20;

fn lit_name(l: i32) -> String {
    if l > 0 { format!("x{l}") } else { format!("~x{}", -l) }
}

impl Sat3B2Instance {
    pub fn new(vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::Sat("no variables".into()));
        }
        if vars > i32::MAX as usize / 2 {
            return Err(Error::Sat("too many variables".into()));
        }
        let mut count = alloc::vec![[0usize; 2]; vars];
        for (j, cl) in clauses.iter().enumerate() {
            for (r, &l) in cl.iter().enumerate() {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::Sat(format!("clause {}: literal {l} out of range", j + 1)));
                }
                if cl[..r].iter().any(|&o| o.abs() == l.abs()) {
                    return Err(Error::Sat(format!(
                        "clause {}: variable x{} repeated",
                        j + 1,
                        l.abs()
                    )));
                }
                count[l.unsigned_abs() as usize - 1][(l < 0) as usize] += 1;
            }
        }
        for (v, c) in count.iter().enumerate() {
            for (neg, &k) in c.iter().enumerate() {
                if k != 2 {
                    let l = if neg == 1 { -(v as i32 + 1) } else { v as i32 + 1 };
                    return Err(Error::Sat(format!(
                        "literal {} occurs {k} times, expected exactly 2",
                        lit_name(l)
                    )));
                }
            }
        }
        Ok(Sat3B2Instance { vars, clauses })
    }

    /// Variable count.
    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// Clause count.
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// The two clauses containing literal `l`, in increasing order.
    pub fn occurrences(&self, l: i32) -> [usize; 2] {
        let mut out = [usize::MAX; 2];
        let mut k = 0;
        for (j, cl) in self.clauses.iter().enumerate() {
            if cl.contains(&l) {
                out[k] = j;
                k += 1;
            }
        }
        debug_assert_eq!(k, 2);
        out
    }

    /// Disjoint union with a renamed copy of itself.
    pub fn doubled(&self) -> Self {
        let shift = self.vars as i32;
        let mut clauses = self.clauses.clone();
        clauses.extend(self.clauses.iter().map(|cl| cl.map(|l| if l > 0 { l + shift } else { l - shift })));
        Sat3B2Instance { vars: 2 * self.vars, clauses }
    }

    pub fn literal_true(assignment: &[bool], l: i32) -> bool {
        assignment[l.unsigned_abs() as usize - 1] == (l > 0)
    }

    pub fn satisfies(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.vars
            && self.clauses.iter().all(|cl| cl.iter().any(|&l| Self::literal_true(assignment, l)))
    }

    /// Every satisfying assignment, in binary counting order with `x1` as the
    /// most significant bit.
    pub fn solutions(&self) -> Result<Vec<Vec<bool>>> {
        if self.vars > BRUTE_FORCE_MAX_VARS {
            return Err(Error::Unsupported(format!(
                "brute-force search handles at most {BRUTE_FORCE_MAX_VARS} variables"
            )));
        }
        let n = self.vars;
        let mut out = Vec::new();
        for bits in 0u32..(1 << n) {
            let a: Vec<bool> = (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect();
            if self.satisfies(&a) {
                out.push(a);
            }
        }
        Ok(out)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for cl in &self.clauses {
            let _ = writeln!(s, "{} {} {} 0", cl[0], cl[1], cl[2]);
        }
        s
    }
}

/// Parses DIMACS text (`c` comments, `p cnf V C`, clauses ended by `0`) and
/// checks the occurrence pattern.
pub fn parse_and_validate_3b2(text: &str) -> Result<Sat3B2Instance> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut cur: Vec<i32> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let at = |msg: String| Error::Sat(format!("line {}: {msg}", ln + 1));
        if line.starts_with('p') {
            let f: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || f.len() != 4 || f[1] != "cnf" {
                return Err(at("malformed header, expected `p cnf <vars> <clauses>`".into()));
            }
            let v = f[2].parse().map_err(|_| at(format!("bad variable count `{}`", f[2])))?;
            let c = f[3].parse().map_err(|_| at(format!("bad clause count `{}`", f[3])))?;
            header = Some((v, c));
            continue;
        }
        if header.is_none() {
            return Err(at("clause before header".into()));
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| at(format!("bad literal `{tok}`")))?;
            if l != 0 {
                cur.push(l);
                continue;
            }
            if cur.len() != 3 {
                return Err(at(format!("clause {} has {} literals, expected 3", clauses.len() + 1, cur.len())));
            }
            clauses.push([cur[0], cur[1], cur[2]]);
            cur.clear();
        }
    }
    let (vars, count) = header.ok_or_else(|| Error::Sat("missing `p cnf` header".into()))?;
    if !cur.is_empty() {
        return Err(Error::Sat("last clause not terminated by 0".into()));
    }
    if clauses.len() != count {
        return Err(Error::Sat(format!("header declares {count} clauses, found {}", clauses.len())));
    }
    Sat3B2Instance::new(vars, clauses)
}

/// Smallest valid shape: 3 variables, 4 clauses. Satisfiable. This is the
/// first hit of the exhaustive search in the tests.
pub fn fixture_small() -> Sat3B2Instance {
    Sat3B2Instance::new(3, alloc::vec![[1, 2, 3], [1, 2, -3], [3, -1, -2], [-1, -2, -3]]).expect("valid")
}

/// 6 variables, 8 clauses. Satisfiable.
pub fn fixture_medium() -> Sat3B2Instance {
    Sat3B2Instance::new(
        6,
        alloc::vec![
            [1, 2, 3],
            [-1, -2, 4],
            [1, -3, 5],
            [-1, 2, 6],
            [3, -4, -5],
            [-2, 4, -6],
            [-3, 5, 6],
            [-4, -5, -6],
        ],
    )
    .expect("valid")
}
