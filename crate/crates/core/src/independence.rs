//! Independence models for the static conditional axioms CPstat*.
//!
//! Each model interprets closed conditional terms over the atoms `a` and `b`
//! and satisfies all axioms of CPstat* but one.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::axioms::{rewrite_search, soundness_check, AxiomSet, ProofTrace, SearchOutcome, SoundnessReport};
use crate::error::EvalError;
use crate::term::{desugar, enumerate_terms, Atom, Equation, Signature, Term, Var};
use crate::tree::{normalize, EvalTree, Logic};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Bool(bool),
    Int(BigInt),
    Tree(EvalTree),
}

impl Value {
    fn int(n: i64) -> Value {
        Value::Int(BigInt::from(n))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(true) => f.write_str("T"),
            Value::Bool(false) => f.write_str("F"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Tree(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Bool(b) => s.serialize_bool(*b),
            Value::Int(n) => match i64::try_from(n) {
                Ok(n) => s.serialize_i64(n),
                Err(_) => s.serialize_str(&n.to_string()),
            },
            Value::Tree(t) => s.serialize_str(&t.to_string()),
        }
    }
}

/// One of the five built-in interpretations, numbered after the axiom of
/// CPstat* it refutes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "u8")]
pub struct Interpretation(u8);

impl From<Interpretation> for u8 {
    fn from(m: Interpretation) -> u8 {
        m.0
    }
}

impl Interpretation {
    pub const ALL: [Interpretation; 5] = [
        Interpretation(1),
        Interpretation(2),
        Interpretation(3),
        Interpretation(4),
        Interpretation(5),
    ];

    pub fn model(index: u8) -> Option<Interpretation> {
        (1..=5).contains(&index).then_some(Interpretation(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    /// The axiom of CPstat* this model violates.
    pub fn refutes(self) -> &'static str {
        ["CP1", "CP2", "CP3*", "CP4", "CP5"][self.0 as usize - 1]
    }

    pub fn domain(self) -> &'static str {
        match self.0 {
            1 | 2 => "booleans",
            3 => "memorizing evaluation trees over a, b",
            4 => "natural numbers",
            _ => "integers",
        }
    }

    fn constant(self, t: &Term) -> Result<Value, EvalError> {
        let code = match t {
            Term::True => 0,
            Term::False => 1,
            Term::Atom(a) if a.name() == "a" => 2,
            Term::Atom(a) if a.name() == "b" => 3,
            Term::Atom(a) => return Err(EvalError::UnknownAtom(a.to_string())),
            _ => unreachable!("constant() called on a compound term"),
        };
        Ok(match self.0 {
            1 => Value::Bool(code != 0),
            2 => Value::Bool(code != 1),
            3 => Value::Tree(match t {
                Term::Atom(a) => EvalTree::atom(a.clone()),
                _ => EvalTree::Leaf(code == 0),
            }),
            _ => Value::int(code),
        })
    }

    /// The value of `P◁Q▷R` given the values of `Q`, `P` and `R`.
    fn cond(self, q: &Value, p: &Value, r: &Value) -> Value {
        match (self.0, q, p, r) {
            (1, Value::Bool(q), _, Value::Bool(r)) => Value::Bool(*q && *r),
            (2, _, p, _) => p.clone(),
            (3, Value::Tree(q), Value::Tree(p), Value::Tree(r)) => {
                Value::Tree(normalize(&q.graft(p, r), Logic::Mem))
            }
            (4, Value::Int(q), Value::Int(p), Value::Int(r)) => {
                if *q == BigInt::from(0) {
                    Value::Int(p.clone())
                } else if *q == BigInt::from(1) {
                    Value::Int(r.clone())
                } else {
                    Value::Int(q * r)
                }
            }
            (5, Value::Int(q), Value::Int(p), Value::Int(r)) => {
                Value::Int((BigInt::from(1) - q) * p + q * r)
            }
            _ => unreachable!("value outside the model's domain"),
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model {}", self.0)
    }
}

/// Value of a closed term. `¬`, `∧` and `∨` are read as their conditional
/// definitions first.
pub fn interpret(t: &Term, m: Interpretation) -> Result<Value, EvalError> {
    if !t.is_closed() {
        return Err(EvalError::OpenTerm(t.to_string()));
    }
    fold(&desugar(t), m, &BTreeMap::new())
}

fn fold(t: &Term, m: Interpretation, env: &BTreeMap<Var, Value>) -> Result<Value, EvalError> {
    match t {
        Term::Var(v) => env.get(v).cloned().ok_or_else(|| EvalError::OpenTerm(v.to_string())),
        Term::Cond {
            then,
            guard,
            otherwise,
        } => {
            let q = fold(guard, m, env)?;
            let p = fold(then, m, env)?;
            let r = fold(otherwise, m, env)?;
            Ok(m.cond(&q, &p, &r))
        }
        Term::Not(_) | Term::And(..) | Term::Or(..) => fold(&desugar(t), m, env),
        _ => m.constant(t),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub binding: BTreeMap<Var, Term>,
    pub lhs: Term,
    pub rhs: Term,
    pub lhs_value: Value,
    pub rhs_value: Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AxiomStatus {
    Satisfied { instances: u64 },
    Violated { instances: u64, violations: u64, witness: Violation },
}

impl AxiomStatus {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, AxiomStatus::Satisfied { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    #[serde(flatten)]
    pub status: AxiomStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub model: Interpretation,
    pub domain: &'static str,
    pub set: String,
    pub inst_size: usize,
    pub axioms: Vec<AxiomResult>,
}

impl IndependenceReport {
    pub fn violated(&self) -> Vec<&str> {
        self.axioms
            .iter()
            .filter(|a| !a.status.is_satisfied())
            .map(|a| a.axiom.as_str())
            .collect()
    }

    /// True when exactly the designated axiom fails.
    pub fn separates(&self) -> bool {
        self.violated() == [self.model.refutes()]
    }
}

/// Check every axiom of `set` in model `m` on all closed instances whose
/// variables range over conditional terms with atoms `a`, `b` up to
/// `inst_size` nodes.
pub fn independence_report(m: Interpretation, set: &AxiomSet, inst_size: usize) -> Result<IndependenceReport, EvalError> {
    let atoms = [Atom::new("a"), Atom::new("b")];
    let pool = enumerate_terms(&atoms, inst_size, Signature::Conditional);
    let values = pool.iter().map(|t| interpret(t, m)).collect::<Result<Vec<_>, _>>()?;
    let axioms = set
        .instances(&atoms)
        .iter()
        .map(|e| {
            Ok(AxiomResult {
                axiom: e.name.clone(),
                status: check_axiom(e, m, &pool, &values)?,
            })
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(IndependenceReport {
        model: m,
        domain: m.domain(),
        set: set.name.clone(),
        inst_size,
        axioms,
    })
}

fn check_axiom(e: &Equation, m: Interpretation, pool: &[Term], values: &[Value]) -> Result<AxiomStatus, EvalError> {
    let lhs = desugar(&e.lhs);
    let rhs = desugar(&e.rhs);
    let slots: Vec<Var> = e.vars().into_iter().collect();
    let k = slots.len();
    let mut idx = vec![0usize; k];
    let (mut instances, mut violations, mut witness) = (0u64, 0u64, None);
    if k > 0 && pool.is_empty() {
        return Ok(AxiomStatus::Satisfied { instances });
    }
    loop {
        let env: BTreeMap<Var, Value> = slots.iter().zip(&idx).map(|(v, &i)| (v.clone(), values[i].clone())).collect();
        instances += 1;
        let l = fold(&lhs, m, &env)?;
        let r = fold(&rhs, m, &env)?;
        if l != r {
            violations += 1;
            if witness.is_none() {
                let binding: BTreeMap<Var, Term> = slots.iter().zip(&idx).map(|(v, &i)| (v.clone(), pool[i].clone())).collect();
                witness = Some(Violation {
                    lhs: e.lhs.instantiate(&binding),
                    rhs: e.rhs.instantiate(&binding),
                    binding,
                    lhs_value: l,
                    rhs_value: r,
                });
            }
        }
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(match witness {
                    None => AxiomStatus::Satisfied { instances },
                    Some(witness) => AxiomStatus::Violated {
                        instances,
                        violations,
                        witness,
                    },
                });
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < pool.len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Search limits for deriving CPstat* instances from the mirrored set.
pub const SYMMETRIC_DEPTH: usize = 10;
pub const SYMMETRIC_TERMS: usize = 200_000;

#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    pub goal: String,
    pub lhs: Term,
    pub rhs: Term,
    pub proof: Option<ProofTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricReport {
    pub soundness: SoundnessReport,
    pub derivations: Vec<Derivation>,
}

impl SymmetricReport {
    pub fn passed(&self) -> bool {
        self.soundness.passed() && self.derivations.iter().all(|d| d.proof.is_some())
    }
}

/// Representative closed instance of an equation: variables are replaced
/// by distinct atoms `a`, `b`, `c`, ... in order of first occurrence.
pub fn representative_instance(e: &Equation) -> (Term, Term) {
    let mut order = Vec::new();
    for t in [&e.lhs, &e.rhs] {
        collect_vars(t, &mut order);
    }
    let binding: BTreeMap<Var, Term> = order
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Term::Atom(Atom::new(((b'a' + i as u8) as char).to_string()))))
        .collect();
    (e.lhs.instantiate(&binding), e.rhs.instantiate(&binding))
}

fn collect_vars(t: &Term, out: &mut Vec<Var>) {
    match t {
        Term::Var(v) if !out.contains(v) => out.push(v.clone()),
        Term::Cond {
            then,
            guard,
            otherwise,
        } => {
            collect_vars(guard, out);
            collect_vars(then, out);
            collect_vars(otherwise, out);
        }
        _ => t.children().into_iter().for_each(|c| collect_vars(c, out)),
    }
}

/// Soundness of the mirrored axiom set under static semantics, plus proofs
/// from it of a representative instance of every CPstat* axiom and of
/// `a∧b = b∧a`.
pub fn symmetric_variant_check(inst_size: usize) -> SymmetricReport {
    let sym = AxiomSet::builtin("cpstat-star-sym").expect("built-in set");
    let star = AxiomSet::builtin("cpstat-star").expect("built-in set");
    let soundness = soundness_check(&sym, Logic::St, &[Atom::new("a"), Atom::new("b")], inst_size);
    let mut goals: Vec<(String, Term, Term)> = star
        .equations
        .iter()
        .map(|e| {
            let (l, r) = representative_instance(e);
            (e.name.clone(), l, r)
        })
        .collect();
    let ab = desugar(&Term::and(Term::atom("a"), Term::atom("b")));
    let ba = desugar(&Term::and(Term::atom("b"), Term::atom("a")));
    goals.push(("commutativity".into(), ab, ba));
    let derivations = goals
        .into_iter()
        .map(|(goal, lhs, rhs)| {
            let proof = match rewrite_search(&lhs, &rhs, &sym, SYMMETRIC_DEPTH, SYMMETRIC_TERMS) {
                SearchOutcome::Found { trace, .. } => Some(trace),
                _ => None,
            };
            Derivation { goal, lhs, rhs, proof }
        })
        .collect();
    SymmetricReport { soundness, derivations }
}
