//! Matching and single-step rewriting with oriented equations.

use std::collections::BTreeMap;

use crate::term::{Equation, Term, Var};

use super::proof::Direction;

pub type Binding = BTreeMap<Var, Term>;

/// Extend `binding` so that `pattern` instantiated by it is `subject`.
/// Variables in `subject` are treated as rigid constants.
pub fn match_pattern(pattern: &Term, subject: &Term, binding: &mut Binding) -> bool {
    match (pattern, subject) {
        (Term::Var(x), _) => match binding.get(x) {
            Some(bound) => bound == subject,
            None => {
                binding.insert(x.clone(), subject.clone());
                true
            }
        },
        (Term::True, Term::True) | (Term::False, Term::False) => true,
        (Term::Atom(a), Term::Atom(b)) => a == b,
        (Term::Not(p), Term::Not(s)) => match_pattern(p, s, binding),
        (Term::And(p1, p2), Term::And(s1, s2)) | (Term::Or(p1, p2), Term::Or(s1, s2)) => {
            match_pattern(p1, s1, binding) && match_pattern(p2, s2, binding)
        }
        (
            Term::Cond {
                then: p1,
                guard: p2,
                otherwise: p3,
            },
            Term::Cond {
                then: s1,
                guard: s2,
                otherwise: s3,
            },
        ) => {
            match_pattern(p2, s2, binding)
                && match_pattern(p1, s1, binding)
                && match_pattern(p3, s3, binding)
        }
        _ => false,
    }
}

/// One orientation of an equation.
#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub equation: usize,
    pub direction: Direction,
    pub from: Term,
    pub to: Term,
    /// Variables of `to` that `from` does not bind.
    pub fresh: Vec<Var>,
}

impl Rule {
    pub fn both(index: usize, e: &Equation) -> [Rule; 2] {
        let orient = |direction, from: &Term, to: &Term| {
            let bound = from.vars();
            Rule {
                equation: index,
                direction,
                from: from.clone(),
                to: to.clone(),
                fresh: to.vars().into_iter().filter(|v| !bound.contains(v)).collect(),
            }
        };
        [
            orient(Direction::Forward, &e.lhs, &e.rhs),
            orient(Direction::Backward, &e.rhs, &e.lhs),
        ]
    }

    /// Every result of applying the rule to `subject` at the root. Fresh
    /// variables range over `pool`.
    pub fn apply(&self, subject: &Term, pool: &[Term], out: &mut Vec<Term>) {
        let mut binding = Binding::new();
        if !match_pattern(&self.from, subject, &mut binding) {
            return;
        }
        if self.fresh.is_empty() {
            out.push(self.to.instantiate(&binding));
            return;
        }
        if pool.is_empty() {
            return;
        }
        let k = self.fresh.len();
        let mut idx = vec![0usize; k];
        loop {
            for (v, &i) in self.fresh.iter().zip(&idx) {
                binding.insert(v.clone(), pool[i].clone());
            }
            out.push(self.to.instantiate(&binding));
            // odometer over pool^k
            let mut j = 0;
            loop {
                if j == k {
                    return;
                }
                idx[j] += 1;
                if idx[j] < pool.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    /// The binding used to rewrite `before` into `after` at the root.
    pub fn binding_for(&self, before: &Term, after: &Term) -> Option<Binding> {
        let mut b = Binding::new();
        (match_pattern(&self.from, before, &mut b) && match_pattern(&self.to, after, &mut b)).then_some(b)
    }
}

/// Top symbol of a term, for indexing rules by the head of their source.
pub(crate) fn head(t: &Term) -> Option<u8> {
    Some(match t {
        Term::True => 0,
        Term::False => 1,
        Term::Atom(_) => 2,
        Term::Var(_) => return None,
        Term::Not(_) => 3,
        Term::And(..) => 4,
        Term::Or(..) => 5,
        Term::Cond { .. } => 6,
    })
}

pub(crate) const HEADS: usize = 7;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse, parse_equation};

    #[test]
    fn matching_binds_consistently() {
        let p = parse("X && (X || Y)").unwrap();
        let mut b = Binding::new();
        assert!(match_pattern(&p, &parse("a && (a || !b)").unwrap(), &mut b));
        assert_eq!(b[&Var::new("Y")], parse("!b").unwrap());
        let mut b = Binding::new();
        assert!(!match_pattern(&p, &parse("a && (b || a)").unwrap(), &mut b));
        // atoms in patterns match only themselves
        let mut b = Binding::new();
        assert!(!match_pattern(&parse("a && X").unwrap(), &parse("b && a").unwrap(), &mut b));
    }

    #[test]
    fn fresh_variables_range_over_pool() {
        let e = parse_equation("SCL6 : F && X = F").unwrap();
        let [fwd, back] = Rule::both(0, &e);
        assert!(fwd.fresh.is_empty() && back.fresh == vec![Var::new("X")]);
        let mut out = Vec::new();
        back.apply(&Term::False, &[Term::True, Term::False], &mut out);
        let results: Vec<String> = out.iter().map(|t| t.to_string()).collect();
        assert_eq!(results, ["F && T", "F && F"]);
    }
}
