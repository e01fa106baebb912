//! Bounded bidirectional breadth-first search for rewrite proofs.

use std::collections::HashSet;

use indexmap::IndexSet;

use crate::term::{Equation, Term};
use crate::tree::equal;

use super::lemmas::LemmaBook;
use super::proof::{Direction, ProofStep, ProofTrace};
use super::rewrite::{head, Rule, HEADS};
use super::AxiomSet;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Longest chain, counting a lemma application as one step.
    pub max_depth: usize,
    /// Stop after this many distinct terms have been visited.
    pub max_terms: usize,
    /// Intermediate terms may exceed the larger goal side by this much.
    pub size_slack: usize,
    /// Candidates for variables that occur only on the produced side.
    pub fresh_pool: Vec<Term>,
    /// Also draw such variables from the subterms of the rewritten term.
    pub fresh_from_subterms: bool,
    /// Use orientations whose source is a bare variable (`X -> T && X`).
    pub expansions: bool,
    /// Use the lemma book when one is available for the set.
    pub lemmas: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_depth: 12,
            max_terms: 200_000,
            size_slack: 10,
            fresh_pool: vec![Term::True, Term::False],
            fresh_from_subterms: true,
            expansions: false,
            lemmas: true,
        }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// `trace` uses only equations of the set; `outline` is the same proof
    /// with lemma applications kept as single steps.
    Found { trace: ProofTrace, outline: ProofTrace },
    /// The sides differ under the set's home logic, so no proof exists.
    Refuted,
    /// Every term reachable from either side within the size limit was
    /// visited. Conclusive only for the rule set searched: orientations
    /// left out by the options were never tried.
    NotFound { explored: usize },
    /// Depth or term budget ran out first; inconclusive.
    BoundExhausted { explored: usize, depth: usize },
}

/// Search for a proof of `lhs = rhs` from `set` within the given bounds,
/// with the default options otherwise.
pub fn rewrite_search(lhs: &Term, rhs: &Term, set: &AxiomSet, max_depth: usize, max_terms: usize) -> SearchOutcome {
    let opts = SearchOptions {
        max_depth,
        max_terms,
        ..SearchOptions::default()
    };
    Prover::new(set, &opts).search(lhs, rhs, &opts)
}

/// A rule set ready for searching: the set's equations in both
/// orientations, plus proven lemmas as macro steps.
pub struct Prover {
    set: AxiomSet,
    equations: Vec<Equation>,
    /// For lemma equations, the proof from `lhs` to `rhs` in set equations.
    proofs: Vec<Option<ProofTrace>>,
    rules: Vec<Rule>,
    /// Rule indices by the head symbol of their source side.
    by_head: Vec<Vec<usize>>,
    /// Rules whose source is a bare variable.
    expansions: Vec<usize>,
}

impl Prover {
    pub fn new(set: &AxiomSet, opts: &SearchOptions) -> Prover {
        let book = if opts.lemmas { LemmaBook::for_set(set) } else { None };
        let mut equations: Vec<Equation> = set.equations.clone();
        let mut proofs = vec![None; equations.len()];
        if let Some(book) = book {
            for lemma in book.lemmas() {
                equations.push(lemma.equation.clone());
                proofs.push(Some(lemma.proof.clone()));
            }
        }
        Prover::from_parts(set.clone(), equations, proofs)
    }

    pub(crate) fn from_parts(set: AxiomSet, equations: Vec<Equation>, proofs: Vec<Option<ProofTrace>>) -> Prover {
        let rules: Vec<Rule> = equations
            .iter()
            .enumerate()
            .flat_map(|(i, e)| Rule::both(i, e))
            .collect();
        let mut by_head = vec![Vec::new(); HEADS];
        let mut expansions = Vec::new();
        for (i, r) in rules.iter().enumerate() {
            match head(&r.from) {
                Some(h) => by_head[h as usize].push(i),
                None => expansions.push(i),
            }
        }
        Prover {
            set,
            equations,
            proofs,
            rules,
            by_head,
            expansions,
        }
    }

    /// Scheme templates are expanded over the atoms of the goal.
    fn expand_schemes(&self, lhs: &Term, rhs: &Term) -> Prover {
        let mut atoms: Vec<_> = lhs.atoms().into_iter().collect();
        atoms.extend(rhs.atoms());
        atoms.sort();
        atoms.dedup();
        let mut equations = Vec::new();
        let mut proofs = Vec::new();
        for (e, p) in self.equations.iter().zip(&self.proofs) {
            if e.scheme_atom.is_some() {
                for a in &atoms {
                    // a concrete instance, no longer a template
                    equations.push(Equation {
                        scheme_atom: None,
                        ..e.at_atom(a)
                    });
                    proofs.push(None);
                }
            } else {
                equations.push(e.clone());
                proofs.push(p.clone());
            }
        }
        Prover::from_parts(self.set.clone(), equations, proofs)
    }

    pub fn search(&self, lhs: &Term, rhs: &Term, opts: &SearchOptions) -> SearchOutcome {
        if lhs.is_closed() && rhs.is_closed() && !equal(lhs, rhs, self.set.logic_home).unwrap_or(true) {
            return SearchOutcome::Refuted;
        }
        if self.equations.iter().any(|e| e.scheme_atom.is_some()) {
            return self.expand_schemes(lhs, rhs).search(lhs, rhs, opts);
        }
        if lhs == rhs {
            let tr = ProofTrace::empty(lhs.clone());
            return SearchOutcome::Found {
                trace: tr.clone(),
                outline: tr,
            };
        }
        let limit = lhs.size().max(rhs.size()) + opts.size_slack;
        let mut sides = [Side::new(lhs.clone()), Side::new(rhs.clone())];
        let mut depth = [0usize, 0usize];
        let mut exhausted = [false, false];
        let mut next = Vec::new();
        loop {
            let explored = sides[0].terms.len() + sides[1].terms.len();
            if depth[0] + depth[1] >= opts.max_depth {
                return SearchOutcome::BoundExhausted {
                    explored,
                    depth: depth[0] + depth[1],
                };
            }
            // grow the shallower side; on ties, the one with the smaller
            // frontier. Without expansions the rule set is not symmetric, so
            // neither side may starve the other of depth.
            let s = if exhausted[0] {
                1
            } else if exhausted[1] {
                0
            } else if depth[0] != depth[1] {
                usize::from(depth[1] < depth[0])
            } else {
                usize::from(sides[1].frontier_len() < sides[0].frontier_len())
            };
            let [left, right] = &mut sides;
            let (this, other) = if s == 0 { (left, &*right) } else { (right, &*left) };
            let (start, end) = (this.frontier_start, this.terms.len());
            this.frontier_start = end;
            for id in start..end {
                let term = this.terms[id].clone();
                let pool = self.pool(&term, opts);
                next.clear();
                self.successors(&term, &pool, limit, opts, &mut next);
                for (path, rule, t) in next.drain(..) {
                    if this.terms.contains(&t) {
                        continue;
                    }
                    let other_id = other.terms.get_index_of(&t);
                    let nid = this.push(t, (id as u32, path, rule as u32));
                    if let Some(oid) = other_id {
                        let (ia, ib) = if s == 0 { (nid, oid) } else { (oid, nid) };
                        return self.found(&sides[0], ia, &sides[1], ib);
                    }
                    if this.terms.len() + other.terms.len() >= opts.max_terms {
                        return SearchOutcome::BoundExhausted {
                            explored: this.terms.len() + other.terms.len(),
                            depth: depth[0] + depth[1] + 1,
                        };
                    }
                }
            }
            depth[s] += 1;
            if this.frontier_len() == 0 {
                exhausted[s] = true;
                if exhausted[0] && exhausted[1] {
                    return SearchOutcome::NotFound {
                        explored: sides[0].terms.len() + sides[1].terms.len(),
                    };
                }
            }
        }
    }

    fn pool(&self, term: &Term, opts: &SearchOptions) -> Vec<Term> {
        let mut pool = opts.fresh_pool.clone();
        if opts.fresh_from_subterms {
            let mut seen: HashSet<Term> = pool.iter().cloned().collect();
            for p in term.positions() {
                let sub = term.at(&p).expect("position");
                if seen.insert(sub.clone()) {
                    pool.push(sub.clone());
                }
            }
        }
        pool
    }

    fn successors(
        &self,
        term: &Term,
        pool: &[Term],
        limit: usize,
        opts: &SearchOptions,
        out: &mut Vec<(Box<[u8]>, usize, Term)>,
    ) {
        let mut results = Vec::new();
        let size = term.size();
        for path in term.positions() {
            let sub = term.at(&path).expect("position");
            let by_head = head(sub).map(|h| &self.by_head[h as usize][..]).unwrap_or(&[]);
            let any: &[usize] = if opts.expansions { &self.expansions } else { &[] };
            for &ri in by_head.iter().chain(any) {
                results.clear();
                self.rules[ri].apply(sub, pool, &mut results);
                for r in results.drain(..) {
                    if size - sub.size() + r.size() > limit {
                        continue;
                    }
                    let next = term.replace_at(&path, r).expect("position");
                    let p: Box<[u8]> = path.iter().map(|&i| i as u8).collect();
                    out.push((p, ri, next));
                }
            }
        }
    }

    /// Stitch the chains from both roots to the meeting point.
    fn found(&self, left: &Side, li: usize, right: &Side, ri: usize) -> SearchOutcome {
        let mut outline = ProofTrace::empty(left.terms[0].clone());
        let mut trace = outline.clone();
        for id in left.chain(li) {
            self.extend(&mut outline, &mut trace, left, id);
        }
        let mut tail_outline = ProofTrace::empty(right.terms[0].clone());
        let mut tail_trace = tail_outline.clone();
        for id in right.chain(ri) {
            self.extend(&mut tail_outline, &mut tail_trace, right, id);
        }
        SearchOutcome::Found {
            trace: trace.then(tail_trace.reversed()),
            outline: outline.then(tail_outline.reversed()),
        }
    }

    fn extend(&self, outline: &mut ProofTrace, trace: &mut ProofTrace, side: &Side, id: usize) {
        let after = &side.terms[id];
        let (parent, path, ri) = side.parents[id].as_ref().expect("non-root");
        let path: Vec<usize> = path.iter().map(|&i| i as usize).collect();
        let before = &side.terms[*parent as usize];
        let rule = &self.rules[*ri as usize];
        let e = &self.equations[rule.equation];
        let step = ProofStep {
            position: path.clone(),
            equation: e.name.clone(),
            direction: rule.direction,
            result: after.clone(),
        };
        outline.steps.push(step.clone());
        outline.rhs = after.clone();
        let piece = match &self.proofs[rule.equation] {
            Some(proof) => {
                let binding = rule
                    .binding_for(before.at(&path).expect("position"), after.at(&path).expect("position"))
                    .expect("recorded step replays");
                let proof = match rule.direction {
                    Direction::Forward => proof.clone(),
                    Direction::Backward => proof.reversed(),
                };
                proof.instantiate(&binding).embed(before, &path)
            }
            None => ProofTrace {
                lhs: before.clone(),
                rhs: after.clone(),
                steps: vec![step],
            },
        };
        let t = std::mem::replace(trace, ProofTrace::empty(Term::True));
        *trace = t.then(piece);
    }
}

/// Parent id, path and rule of a visited term.
type Parent = (u32, Box<[u8]>, u32);

struct Side {
    terms: IndexSet<Term>,
    parents: Vec<Option<Parent>>,
    frontier_start: usize,
}

impl Side {
    fn new(root: Term) -> Side {
        let mut terms = IndexSet::new();
        terms.insert(root);
        Side {
            terms,
            parents: vec![None],
            frontier_start: 0,
        }
    }

    fn frontier_len(&self) -> usize {
        self.terms.len() - self.frontier_start
    }

    fn push(&mut self, term: Term, parent: Parent) -> usize {
        let (id, _) = self.terms.insert_full(term);
        self.parents.push(Some(parent));
        id
    }

    /// Node ids from just below the root down to `id`.
    fn chain(&self, mut id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, ..)) = &self.parents[id] {
            out.push(id);
            id = *p as usize;
        }
        out.reverse();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_trace;
    use crate::term::parse;

    fn found(o: SearchOutcome) -> ProofTrace {
        match o {
            SearchOutcome::Found { trace, .. } => trace,
            other => panic!("no proof: {other:?}"),
        }
    }

    #[test]
    fn trivial_goal_has_empty_trace() {
        let set = AxiomSet::builtin("eqfscl").unwrap();
        let a = parse("a").unwrap();
        assert!(found(rewrite_search(&a, &a, &set, 4, 1000)).is_empty());
    }

    #[test]
    fn scheme_sets_are_searched_over_goal_atoms() {
        let set = AxiomSet::builtin("cscl").unwrap();
        let (l, r) = (parse("a || (a && b)").unwrap(), parse("a").unwrap());
        let tr = found(rewrite_search(&l, &r, &set, 4, 10_000));
        assert!(verify_trace(&tr, &set), "{tr}");
    }

    #[test]
    fn scl8_star_instance_in_eqfscl() {
        // both sides must grow before they meet, so expansions are needed
        let set = AxiomSet::builtin("eqfscl").unwrap();
        let (l, r) = (parse("a && F").unwrap(), parse("!a && F").unwrap());
        let opts = SearchOptions {
            max_depth: 8,
            expansions: true,
            size_slack: 8,
            ..SearchOptions::default()
        };
        let tr = found(Prover::new(&set, &opts).search(&l, &r, &opts));
        assert!(verify_trace(&tr, &set), "{tr}");
        assert_eq!((tr.lhs.clone(), tr.rhs.clone()), (l, r));
    }

    #[test]
    fn unequal_sides_are_refuted() {
        let set = AxiomSet::builtin("eqfscl").unwrap();
        let (l, r) = (parse("a && b").unwrap(), parse("b && a").unwrap());
        assert!(matches!(rewrite_search(&l, &r, &set, 4, 1000), SearchOutcome::Refuted));
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let set = AxiomSet::builtin("eqfscl").unwrap();
        let (l, r) = (parse("a && F").unwrap(), parse("!a && F").unwrap());
        assert!(matches!(
            rewrite_search(&l, &r, &set, 1, 1000),
            SearchOutcome::BoundExhausted { .. }
        ));
    }
}
