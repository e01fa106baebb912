//! Derived equations of EqMSCL and of the mirrored static conditional
//! axioms, with proofs in the axioms.
//!
//! Proof search on closed goals uses these as single macro steps; every
//! macro step expands back into axiom steps, so the traces handed out
//! mention only equations of the set. Each lemma is proved on open terms
//! (variables are rigid constants) by searching between hand-picked
//! waypoints. Every SCL lemma also brings its dual: the dual proof is built
//! mechanically from the original one by De Morgan.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::term::{parse, parse_equation, Equation, Term, Var};

use super::proof::{check_trace_against, Direction, ProofStep, ProofTrace};
use super::search::{Prover, SearchOptions, SearchOutcome};
use super::AxiomSet;

#[derive(Clone, Debug)]
pub struct Lemma {
    pub equation: Equation,
    /// From `equation.lhs` to `equation.rhs`, in axiom steps only.
    pub proof: ProofTrace,
}

#[derive(Clone, Debug)]
pub struct LemmaBook {
    base: AxiomSet,
    lemmas: Vec<Lemma>,
}

/// Lemma statements with the waypoints their proofs pass through. Axioms
/// listed without a statement only contribute their duals. The first
/// group needs SCL1-SCL7 only, so it serves EqFSCL as well.
const CORE_LEMMAS: &[(&str, &[&str])] = &[
    ("SCL4", &[]),
    ("SCL5", &[]),
    ("SCL6", &[]),
    ("SCL7", &[]),
    ("NotF : !F = T", &["!!T"]),
];

const MSCL_LEMMAS: &[(&str, &[&str])] = &[
    ("SCL8*", &[]),
    ("MSCL1", &[]),
    ("MSCL2", &[]),
    ("MSCL3", &[]),
    ("MSCL4", &[]),
    (
        "Switch : (X && Y) || (!X && Z) = (X || Z) && (!X || Y)",
        &["((X && Y) || (!X && Z)) && T", "(X || (Z && T)) && (!X || (Y && T))"],
    ),
    ("Idem : X && X = X", &["X && (X || F)"]),
    (
        "Eq4 : X && !X = X && F",
        &["(X || F) && (!X || F)", "(X && F) || (!X && F)", "(X && F) || (X && F)"],
    ),
    ("Eq4n : !X && X = !X && F", &["!X && !!X"]),
    (
        "Eq5 : X && Y = X && (!X || Y)",
        &["X && (F || Y)", "(X && F) || (X && Y)", "(X && !X) || (X && Y)"],
    ),
    ("Eq10 : X = X && (!X || T)", &["X && T"]),
    ("Absorb : X && F = (X && F) && Y", &["X && (F && Y)"]),
    (
        "Eq8' : (X || Y) && Z = (X || (Y && Z)) && (!X || Z)",
        &[
            "(X || (!X && Y)) && Z",
            "((X && T) || (!X && Y)) && Z",
            "(X || (Y && Z)) && (!X || (T && Z))",
        ],
    ),
    (
        "AA : ((X && Y) || (!X && Z)) && U = (X && (Y && U)) || (!X && (Z && U))",
        &["(X || (Z && U)) && (!X || (Y && U))"],
    ),
    (
        "BB : (X || !X) && U = (X && U) || (!X && U)",
        &[
            "((X && X) || (!X && !X)) && U",
            "(X && (X && U)) || (!X && (!X && U))",
            "((X && X) && U) || ((!X && !X) && U)",
        ],
    ),
];

/// From CP1, CP2, CP3-sym, CP4 and CP5-sym back to CP3* and CP5, going
/// through negations `ite(X, F, T)`.
const SYM_LEMMAS: &[(&str, &[&str])] = &[
    ("Id : ite(X, T, F) = X", &["ite(T, X, F)"]),
    ("DN : ite(ite(X, F, T), F, T) = X", &["ite(X, ite(F, F, T), ite(T, F, T))", "ite(X, T, F)"]),
    ("Swap : ite(ite(X, F, T), Y, Z) = ite(X, Z, Y)", &["ite(X, ite(F, Y, Z), ite(T, Y, Z))"]),
    (
        "CP3* : ite(X, T, Y) = ite(Y, T, X)",
        &[
            "ite(ite(X, F, T), Y, T)",
            "ite(ite(ite(X, F, T), ite(Y, F, T), F), F, T)",
            "ite(ite(ite(Y, F, T), ite(X, F, T), F), F, T)",
            "ite(ite(Y, F, T), X, T)",
        ],
    ),
    (
        "CP5 : ite(Y, ite(Y, X, Z), F) = ite(Y, X, F)",
        &[
            "ite(Y, ite(Y, ite(ite(X, F, T), F, T), ite(ite(Z, F, T), F, T)), F)",
            "ite(ite(Y, ite(Y, ite(X, F, T), ite(Z, F, T)), T), F, T)",
            "ite(ite(ite(Y, F, T), T, ite(ite(Y, F, T), ite(Z, F, T), ite(X, F, T))), F, T)",
            "ite(ite(ite(Y, F, T), T, ite(X, F, T)), F, T)",
            "ite(ite(Y, ite(X, F, T), T), F, T)",
        ],
    ),
];

fn core_axioms() -> AxiomSet {
    let mut set = AxiomSet::builtin("eqfscl").expect("built-in");
    set.name = "SCL1-SCL7".into();
    set.equations.truncate(7);
    set
}

impl LemmaBook {
    /// The richest book whose base axioms all belong to `set`.
    pub fn for_set(set: &AxiomSet) -> Option<&'static LemmaBook> {
        let covers = |base: &AxiomSet| base.equations.iter().all(|e| set.equations.contains(e));
        if covers(&AxiomSet::builtin("eqmscl").expect("built-in")) {
            Some(LemmaBook::eqmscl())
        } else if covers(&core_axioms()) {
            Some(LemmaBook::core())
        } else if covers(&AxiomSet::builtin("cpstat-star-sym").expect("built-in")) {
            Some(LemmaBook::cpstat_sym())
        } else {
            None
        }
    }

    /// Duals of SCL4-SCL7 and `!F = T`, from SCL1-SCL7.
    pub fn core() -> &'static LemmaBook {
        static BOOK: OnceLock<LemmaBook> = OnceLock::new();
        BOOK.get_or_init(|| LemmaBook::prove(core_axioms(), &[CORE_LEMMAS], true).expect("lemma proofs"))
    }

    /// CP3*, CP5 and helpers, from the mirrored set.
    pub fn cpstat_sym() -> &'static LemmaBook {
        static BOOK: OnceLock<LemmaBook> = OnceLock::new();
        BOOK.get_or_init(|| {
            let base = AxiomSet::builtin("cpstat-star-sym").expect("built-in");
            LemmaBook::prove(base, &[SYM_LEMMAS], false).expect("lemma proofs")
        })
    }

    pub fn eqmscl() -> &'static LemmaBook {
        static BOOK: OnceLock<LemmaBook> = OnceLock::new();
        BOOK.get_or_init(|| {
            let base = AxiomSet::builtin("eqmscl").expect("built-in");
            LemmaBook::prove(base, &[CORE_LEMMAS, MSCL_LEMMAS], true).expect("lemma proofs")
        })
    }

    pub fn lemmas(&self) -> &[Lemma] {
        &self.lemmas
    }

    pub fn get(&self, name: &str) -> Option<&Lemma> {
        self.lemmas.iter().find(|l| l.equation.name == name)
    }

    /// The base set extended with the lemmas as extra equations, for
    /// checking traces that use lemma steps directly.
    pub fn extended_set(&self) -> AxiomSet {
        let mut set = self.base.clone();
        set.name = format!("{}+lemmas", set.name);
        set.equations.extend(self.lemmas.iter().map(|l| l.equation.clone()));
        set
    }

    fn prove(base: AxiomSet, groups: &[&[(&str, &[&str])]], duals: bool) -> Result<LemmaBook, String> {
        let mut book = LemmaBook {
            base,
            lemmas: Vec::new(),
        };
        for (statement, waypoints) in groups.iter().flat_map(|g| g.iter()) {
            let lemma = match book.base.lookup(statement) {
                Some(e) => Lemma {
                    proof: single_step(&e),
                    equation: e,
                },
                None => book.prove_one(statement, waypoints)?,
            };
            let dual_lemma = if duals { Some(book.dualize(&lemma)?) } else { None };
            if !book.base.equations.contains(&lemma.equation) {
                book.lemmas.push(lemma);
            }
            book.lemmas.extend(dual_lemma);
        }
        Ok(book)
    }

    fn prove_one(&self, statement: &str, waypoints: &[&str]) -> Result<Lemma, String> {
        let equation = parse_equation(statement).map_err(|e| e.to_string())?;
        let mut stops = vec![equation.lhs.clone()];
        for w in waypoints {
            stops.push(parse(w).map_err(|e| e.to_string())?);
        }
        stops.push(equation.rhs.clone());
        let mut equations = self.base.equations.clone();
        let mut proofs = vec![None; equations.len()];
        for l in &self.lemmas {
            equations.push(l.equation.clone());
            proofs.push(Some(l.proof.clone()));
        }
        let prover = Prover::from_parts(self.base.clone(), equations, proofs);
        let opts = SearchOptions {
            max_depth: 6,
            max_terms: 50_000,
            size_slack: 4,
            fresh_pool: vec![Term::True, Term::False],
            fresh_from_subterms: true,
            expansions: false,
            lemmas: false,
        };
        let mut proof = ProofTrace::empty(equation.lhs.clone());
        for pair in stops.windows(2) {
            match prover.search(&pair[0], &pair[1], &opts) {
                SearchOutcome::Found { trace, .. } => proof = proof.then(trace),
                other => {
                    return Err(format!("{}: no proof of {} = {}: {other:?}", equation.name, pair[0], pair[1]))
                }
            }
        }
        check_trace_against(&proof, &self.base.equations).map_err(|e| format!("{}: {e}", equation.name))?;
        Ok(Lemma { equation, proof })
    }

    /// Prove the dual of a lemma: rewrite the dual left side into the
    /// negation of the left side with negated variables, replay the
    /// original proof under the negation, and come back out on the right.
    fn dualize(&self, lemma: &Lemma) -> Result<Lemma, String> {
        let mut equation = lemma.equation.dual().map_err(|e| e.to_string())?;
        // the dual of a primed lemma is the unprimed one
        if let Some(name) = lemma.equation.name.strip_suffix('\'') {
            equation.name = name.to_string();
        }
        let negated: BTreeMap<Var, Term> = lemma
            .equation
            .vars()
            .into_iter()
            .map(|v| (v.clone(), Term::not(Term::Var(v))))
            .collect();
        let hole = Term::not(Term::True);
        let lifted = lemma.proof.instantiate(&negated).embed(&hole, &[0]);
        let proof = de_morgan(&equation.lhs)
            .then(lifted)
            .then(de_morgan(&equation.rhs).reversed());
        check_trace_against(&proof, &self.base.equations).map_err(|e| format!("{}: {e}", equation.name))?;
        Ok(Lemma { equation, proof })
    }
}

fn single_step(e: &Equation) -> ProofTrace {
    ProofTrace {
        lhs: e.lhs.clone(),
        rhs: e.rhs.clone(),
        steps: vec![ProofStep {
            position: Vec::new(),
            equation: e.name.clone(),
            direction: Direction::Forward,
            result: e.rhs.clone(),
        }],
    }
}

fn step(before: &Term, position: &[usize], equation: &str, direction: Direction, sub: Term) -> ProofTrace {
    let result = before.replace_at(position, sub).expect("position");
    ProofTrace {
        lhs: before.clone(),
        rhs: result.clone(),
        steps: vec![ProofStep {
            position: position.to_vec(),
            equation: equation.into(),
            direction,
            result,
        }],
    }
}

/// A proof from `d` to `!t` where `d` is the dual of `t` and `t` has every
/// variable `X` replaced by `!X`. Uses SCL1, SCL2 and SCL3 only.
fn de_morgan(d: &Term) -> ProofTrace {
    match d {
        // X = !!X
        Term::Var(_) => step(d, &[], "SCL3", Direction::Backward, Term::not(Term::not(d.clone()))),
        // F = !T
        Term::False => step(d, &[], "SCL1", Direction::Forward, Term::not(Term::True)),
        // T = !!T = !F
        Term::True => {
            let first = step(d, &[], "SCL3", Direction::Backward, Term::not(Term::not(Term::True)));
            let second = step(&first.rhs, &[0], "SCL1", Direction::Backward, Term::False);
            first.then(second)
        }
        Term::Not(s) => de_morgan(s).embed(d, &[0]),
        Term::Or(l, r) => {
            // dl || dr = !l' || !r' = !(!!l' && !!r') = !(l' && r')
            let left = de_morgan(l).embed(d, &[0]);
            let right = de_morgan(r).embed(&left.rhs, &[1]);
            let mid = left.then(right);
            let Term::Or(nl, nr) = &mid.rhs else { unreachable!() };
            let (Term::Not(l1), Term::Not(r1)) = (&**nl, &**nr) else { unreachable!() };
            let (l1, r1) = ((**l1).clone(), (**r1).clone());
            let s2 = step(
                &mid.rhs,
                &[],
                "SCL2",
                Direction::Forward,
                Term::not(Term::and(Term::not(Term::not(l1.clone())), Term::not(Term::not(r1.clone())))),
            );
            let s3 = step(&s2.rhs, &[0, 0], "SCL3", Direction::Forward, l1);
            let s4 = step(&s3.rhs, &[0, 1], "SCL3", Direction::Forward, r1);
            mid.then(s2).then(s3).then(s4)
        }
        Term::And(l, r) => {
            // dl && dr = !l' && !r' = !!(!l' && !r') = !(l' || r')
            let left = de_morgan(l).embed(d, &[0]);
            let right = de_morgan(r).embed(&left.rhs, &[1]);
            let mid = left.then(right);
            let Term::And(nl, nr) = &mid.rhs else { unreachable!() };
            let (Term::Not(l1), Term::Not(r1)) = (&**nl, &**nr) else { unreachable!() };
            let s2 = step(&mid.rhs, &[], "SCL3", Direction::Backward, Term::not(Term::not(mid.rhs.clone())));
            let s3 = step(
                &s2.rhs,
                &[0],
                "SCL2",
                Direction::Backward,
                Term::or((**l1).clone(), (**r1).clone()),
            );
            mid.then(s2).then(s3)
        }
        Term::Atom(_) | Term::Cond { .. } => unreachable!("lemmas are over variables and SCL connectives"),
    }
}
