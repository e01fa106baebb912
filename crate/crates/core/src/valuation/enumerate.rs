//! Enumeration of valuation classes over a small atom alphabet.
//!
//! Sizes for two atoms: free valuations with depth bound 3 have 14 reply
//! bits (16384 valuations); memorizing valuations have 6 fresh-atom
//! decisions (64); static valuations are the 4 assignments; automata with
//! up to 3 states number 46656 + 256 + 4 before filtering.

use std::collections::{BTreeMap, HashSet};

use crate::error::ModelError;
use crate::term::Atom;
use crate::tree::Logic;

use super::{Automaton, FreeValuation, Memorizing, ReactiveValuation, StaticValuation};

/// Refuse enumerations with more than this many candidates.
const MAX_CANDIDATES: u128 = 1 << 20;

fn distinct(atoms: &[Atom]) -> Vec<Atom> {
    let mut v = atoms.to_vec();
    v.sort();
    v.dedup();
    v
}

fn mem_decisions(k: usize) -> usize {
    // partial assignments with j atoms stored, times the k - j fresh atoms
    (0..k)
        .map(|j| binomial(k, j) * 2usize.pow(j as u32) * (k - j))
        .sum()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn automata_candidates(k: usize, state_bound: usize) -> u128 {
    (1..=state_bound as u128)
        .map(|n| (2 * n).pow((n as usize * k) as u32))
        .sum()
}

/// Number of candidates an enumeration would have to inspect.
pub fn valuation_count(atoms: &[Atom], class: Logic, depth_bound: usize, state_bound: usize) -> u128 {
    let k = distinct(atoms).len();
    match class {
        Logic::Fr => 1u128
            .checked_shl((FreeValuation::node_count(k, depth_bound) * k) as u32)
            .unwrap_or(u128::MAX),
        Logic::Mem => 1u128 << mem_decisions(k).min(127),
        Logic::St => 1u128 << k.min(127),
        Logic::Rp | Logic::Cr => automata_candidates(k, state_bound),
    }
}

/// All valuations of a class, in a fixed order.
///
/// `fr`: every reply trie over histories shorter than `depth_bound`.
/// `mem`: every response function on (stored assignment, fresh atom).
/// `st`: every total assignment. `rp`/`cr`: every automaton with at most
/// `state_bound` states satisfying the class constraint, keeping one per
/// reply behaviour on histories shorter than `depth_bound`.
pub fn enumerate_valuations(
    atoms: &[Atom],
    class: Logic,
    depth_bound: usize,
    state_bound: usize,
) -> Result<Vec<ReactiveValuation>, ModelError> {
    let atoms = distinct(atoms);
    let k = atoms.len();
    let count = valuation_count(&atoms, class, depth_bound, state_bound);
    if count > MAX_CANDIDATES {
        return Err(ModelError::BoundTooLarge(format!(
            "{count} {class} valuations over {k} atoms"
        )));
    }
    Ok(match class {
        Logic::Fr => {
            let bits = FreeValuation::node_count(k, depth_bound) * k;
            (0..1u64 << bits)
                .map(|m| {
                    let replies = (0..bits).map(|i| m >> i & 1 == 1).collect();
                    ReactiveValuation::Free(
                        FreeValuation::new(atoms.clone(), depth_bound, replies).expect("sized"),
                    )
                })
                .collect()
        }
        Logic::Mem => {
            let n = mem_decisions(k);
            (0..1u64 << n)
                .map(|m| {
                    let mut bit = 0;
                    // decisions are consumed in the order `from_fn` asks for them
                    ReactiveValuation::Memorizing(Memorizing::from_fn(atoms.clone(), |_, _| {
                        let r = m >> bit & 1 == 1;
                        bit += 1;
                        r
                    }))
                })
                .collect()
        }
        Logic::St => (0..1u32 << k)
            .map(|m| {
                let assignment: BTreeMap<Atom, bool> = atoms
                    .iter()
                    .enumerate()
                    .map(|(i, a)| (a.clone(), m >> i & 1 == 1))
                    .collect();
                ReactiveValuation::Static(StaticValuation::new(assignment))
            })
            .collect(),
        Logic::Rp | Logic::Cr => automata(&atoms, class, depth_bound, state_bound)
            .into_iter()
            .map(ReactiveValuation::Automaton)
            .collect(),
    })
}

fn automata(atoms: &[Atom], class: Logic, depth_bound: usize, state_bound: usize) -> Vec<Automaton> {
    let k = atoms.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 1..=state_bound {
        let cells = n * k;
        let transitions = n.pow(cells as u32);
        for outputs in 0..1usize << cells {
            for mut code in 0..transitions {
                let output: Vec<Vec<bool>> = (0..n)
                    .map(|s| (0..k).map(|i| outputs >> (s * k + i) & 1 == 1).collect())
                    .collect();
                let next: Vec<Vec<usize>> = (0..n)
                    .map(|_| {
                        (0..k)
                            .map(|_| {
                                let t = code % n;
                                code /= n;
                                t
                            })
                            .collect()
                    })
                    .collect();
                let m = Automaton::new(atoms.to_vec(), 0, output, next).expect("well-formed tables");
                let ok = match class {
                    Logic::Rp => m.is_rp(),
                    _ => m.is_cr(),
                };
                if ok && seen.insert(behaviour(&m, depth_bound)) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Replies to every atom after every history shorter than `depth`.
fn behaviour(m: &Automaton, depth: usize) -> Vec<bool> {
    let k = m.atoms().len();
    let mut out = Vec::new();
    let mut frontier = vec![m.init()];
    for _ in 0..depth {
        let mut next_frontier = Vec::with_capacity(frontier.len() * k);
        for &s in &frontier {
            for i in 0..k {
                let (r, t) = m.step_index(s, i);
                out.push(r);
                next_frontier.push(t);
            }
        }
        frontier = next_frontier;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;
    use crate::valuation::evaluate;

    fn ab() -> Vec<Atom> {
        vec![Atom::new("a"), Atom::new("b")]
    }

    #[test]
    fn pinned_counts() {
        assert_eq!(enumerate_valuations(&[Atom::new("a")], Logic::St, 3, 3).unwrap().len(), 2);
        assert_eq!(enumerate_valuations(&ab(), Logic::St, 3, 3).unwrap().len(), 4);
        assert_eq!(enumerate_valuations(&ab(), Logic::Mem, 3, 3).unwrap().len(), 64);
        assert_eq!(enumerate_valuations(&ab(), Logic::Fr, 3, 3).unwrap().len(), 16384);
        assert_eq!(mem_decisions(3), 27);
    }

    #[test]
    fn free_valuations_separate_a_from_a_and_a() {
        let vals = enumerate_valuations(&[Atom::new("a")], Logic::Fr, 2, 0).unwrap();
        let (a, aa) = (parse("a").unwrap(), parse("a && a").unwrap());
        assert!(vals.iter().any(|v| {
            evaluate(&a, v).unwrap().result && !evaluate(&aa, v).unwrap().result
        }));
    }

    #[test]
    fn automata_satisfy_their_class() {
        let rp = enumerate_valuations(&ab(), Logic::Rp, 3, 2).unwrap();
        let cr = enumerate_valuations(&ab(), Logic::Cr, 3, 2).unwrap();
        assert!(!rp.is_empty() && !cr.is_empty());
        assert!(cr.len() <= rp.len());
        for v in &rp {
            let ReactiveValuation::Automaton(m) = v else { panic!() };
            assert!(m.is_rp());
        }
        for v in &cr {
            let ReactiveValuation::Automaton(m) = v else { panic!() };
            assert!(m.is_cr());
        }
    }

    #[test]
    fn guard_rails() {
        let many: Vec<Atom> = ["a", "b", "c", "d"].into_iter().map(Atom::new).collect();
        assert!(matches!(
            enumerate_valuations(&many, Logic::Fr, 3, 3),
            Err(ModelError::BoundTooLarge(_))
        ));
        assert!(enumerate_valuations(&many, Logic::Mem, 3, 3).is_err());
        assert!(enumerate_valuations(&ab(), Logic::Rp, 3, 5).is_err());
    }
}
