//! Exhaustive enumeration of closed terms by size.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Atom, Term};

/// Which connectives enumerated terms may use. Constants and atoms are
/// always included.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    /// `!`, `&&`, `||` and `ite`.
    Full,
    /// `!`, `&&`, `||`.
    Scl,
    /// `ite` only.
    Conditional,
}

impl Signature {
    fn has_connectives(self) -> bool {
        matches!(self, Signature::Full | Signature::Scl)
    }

    fn has_cond(self) -> bool {
        matches!(self, Signature::Full | Signature::Conditional)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::Full => "full",
            Signature::Scl => "scl",
            Signature::Conditional => "conditional",
        })
    }
}

impl FromStr for Signature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Signature::Full),
            "scl" => Ok(Signature::Scl),
            "conditional" => Ok(Signature::Conditional),
            _ => Err(format!("unknown signature `{s}` (expected full, scl or conditional)")),
        }
    }
}

/// Number of closed terms of each size `0..=max_size` (index 0 is always 0).
fn counts_by_size(n_atoms: usize, max_size: usize, sig: Signature) -> Vec<u128> {
    let mut c = vec![0u128; max_size + 1];
    for n in 1..=max_size {
        if n == 1 {
            c[1] = 2 + n_atoms as u128;
            continue;
        }
        let mut total = 0u128;
        if sig.has_connectives() {
            total += c[n - 1];
            let pairs: u128 = (1..n - 1).map(|l| c[l] * c[n - 1 - l]).sum();
            total += 2 * pairs;
        }
        if sig.has_cond() && n >= 4 {
            for g in 1..n - 2 {
                for t in 1..n - 1 - g {
                    let e = n - 1 - g - t;
                    total += c[g] * c[t] * c[e];
                }
            }
        }
        c[n] = total;
    }
    c
}

/// Number of closed terms with at most `max_size` nodes.
pub fn count_terms(atoms: &[Atom], max_size: usize, sig: Signature) -> u128 {
    let distinct: std::collections::BTreeSet<&Atom> = atoms.iter().collect();
    counts_by_size(distinct.len(), max_size, sig).iter().sum()
}

/// Every closed term over `atoms` with at most `max_size` nodes, each once.
///
/// Terms come in order of size. Within a size the order is: constants and
/// atoms (size 1 only), then negations, conjunctions, disjunctions and
/// conditionals, each ordered by the sizes and then the order of their
/// operands from left to right.
pub fn enumerate_terms(atoms: &[Atom], max_size: usize, sig: Signature) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); max_size + 1];
    for n in 1..=max_size {
        let mut level = Vec::new();
        if n == 1 {
            level.push(Term::True);
            level.push(Term::False);
            let mut seen = std::collections::BTreeSet::new();
            level.extend(
                atoms
                    .iter()
                    .filter(|a| seen.insert((*a).clone()))
                    .map(|a| Term::Atom(a.clone())),
            );
        } else {
            if sig.has_connectives() {
                level.extend(by_size[n - 1].iter().map(|t| Term::not(t.clone())));
                for make in [Term::and as fn(Term, Term) -> Term, Term::or] {
                    for l in 1..n - 1 {
                        for x in &by_size[l] {
                            for y in &by_size[n - 1 - l] {
                                level.push(make(x.clone(), y.clone()));
                            }
                        }
                    }
                }
            }
            if sig.has_cond() && n >= 4 {
                for g in 1..n - 2 {
                    for t in 1..n - 1 - g {
                        let e = n - 1 - g - t;
                        for gt in &by_size[g] {
                            for tt in &by_size[t] {
                                for et in &by_size[e] {
                                    level.push(Term::ite(gt.clone(), tt.clone(), et.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
        by_size[n] = level;
    }
    by_size.into_iter().flatten().collect()
}
