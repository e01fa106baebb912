//! Bounded validity checking of equations by closed instantiation.
//!
//! Instances are evaluated compositionally: every pool term is mapped to the
//! normal form of its evaluation tree once, and the sides of an equation are
//! then built from those normal forms with memoized graft-and-normalize
//! steps. This relies on normal forms being a congruence for grafting,
//! i.e. `norm(graft(A, B, C)) = norm(graft(norm A, norm B, norm C))`, which
//! the tests check against direct evaluation.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::term::{enumerate_terms, Atom, Equation, Signature, Term, Var};
use crate::tree::{normalize, se, EvalTree, Logic};

use super::AxiomSet;

/// Keep at most this many witnesses per equation in a report.
const MAX_WITNESSES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub equation: String,
    pub binding: BTreeMap<Var, Term>,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EquationVerdict {
    /// No counterexample among the instances tried. Bounded evidence only.
    ValidOnTested { instances: u64 },
    Counterexample(Failure),
}

impl EquationVerdict {
    pub fn is_valid_on_tested(&self) -> bool {
        matches!(self, EquationVerdict::ValidOnTested { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationReport {
    pub name: String,
    pub instances: u64,
    pub failures: u64,
    pub witnesses: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SoundnessReport {
    pub set: String,
    pub logic: Logic,
    pub atoms: Vec<Atom>,
    pub inst_size: usize,
    pub equations: Vec<EquationReport>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.equations.iter().all(|e| e.failures == 0)
    }

    pub fn failures(&self) -> u64 {
        self.equations.iter().map(|e| e.failures).sum()
    }

    pub fn instances(&self) -> u64 {
        self.equations.iter().map(|e| e.instances).sum()
    }

    pub fn failing(&self) -> impl Iterator<Item = &EquationReport> {
        self.equations.iter().filter(|e| e.failures > 0)
    }
}

/// Check every equation of `set` (schemes expanded over `atoms`) on all
/// closed instances built from terms of `set.signature` up to `inst_size`.
pub fn soundness_check(set: &AxiomSet, logic: Logic, atoms: &[Atom], inst_size: usize) -> SoundnessReport {
    let pool = enumerate_terms(atoms, inst_size, set.signature);
    let equations = set.instances(atoms);
    let reports = equations
        .par_iter()
        .map(|e| {
            let mut sweep = Sweep::new(e, logic, &pool);
            let mut report = EquationReport {
                name: e.name.clone(),
                instances: 0,
                failures: 0,
                witnesses: Vec::new(),
            };
            sweep.run(|f| {
                report.failures += 1;
                if report.witnesses.len() < MAX_WITNESSES {
                    report.witnesses.push(f);
                }
                true
            });
            report.instances = sweep.instances;
            report
        })
        .collect();
    let mut atoms = atoms.to_vec();
    atoms.sort();
    atoms.dedup();
    SoundnessReport {
        set: set.name.clone(),
        logic,
        atoms,
        inst_size,
        equations: reports,
    }
}

/// Look for a closed instance of `e` whose sides differ under `logic`.
/// Variables range over terms up to `inst_size` of the conditional
/// signature if `e` mentions the conditional, of the SCL signature
/// otherwise.
pub fn check_equation(e: &Equation, logic: Logic, atoms: &[Atom], inst_size: usize) -> EquationVerdict {
    let sig = if e.lhs.has_cond() || e.rhs.has_cond() {
        Signature::Conditional
    } else {
        Signature::Scl
    };
    check_equation_in(e, logic, atoms, inst_size, sig)
}

pub fn check_equation_in(
    e: &Equation,
    logic: Logic,
    atoms: &[Atom],
    inst_size: usize,
    sig: Signature,
) -> EquationVerdict {
    let pool = enumerate_terms(atoms, inst_size, sig);
    let mut sweep = Sweep::new(e, logic, &pool);
    let mut found = None;
    sweep.run(|f| {
        found = Some(f);
        false
    });
    match found {
        Some(f) => EquationVerdict::Counterexample(f),
        None => EquationVerdict::ValidOnTested {
            instances: sweep.instances,
        },
    }
}

/// An equation side with variables replaced by slot numbers.
enum Expr {
    Const(u32),
    Slot(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Cond(Box<Expr>, Box<Expr>, Box<Expr>),
}

/// Interned normal forms with memoized operations.
struct Algebra {
    logic: Logic,
    trees: Vec<EvalTree>,
    index: HashMap<EvalTree, u32>,
    memo: HashMap<(u32, u32, u32), u32>,
    t: u32,
    f: u32,
}

impl Algebra {
    fn new(logic: Logic) -> Algebra {
        let mut a = Algebra {
            logic,
            trees: Vec::new(),
            index: HashMap::new(),
            memo: HashMap::new(),
            t: 0,
            f: 0,
        };
        a.t = a.intern(EvalTree::Leaf(true));
        a.f = a.intern(EvalTree::Leaf(false));
        a
    }

    fn intern(&mut self, tree: EvalTree) -> u32 {
        let tree = normalize(&tree, self.logic);
        if let Some(&id) = self.index.get(&tree) {
            return id;
        }
        let id = self.trees.len() as u32;
        self.index.insert(tree.clone(), id);
        self.trees.push(tree);
        id
    }

    fn graft(&mut self, g: u32, t: u32, e: u32) -> u32 {
        if let Some(&id) = self.memo.get(&(g, t, e)) {
            return id;
        }
        let tree = self.trees[g as usize].graft(&self.trees[t as usize], &self.trees[e as usize]);
        let id = self.intern(tree);
        self.memo.insert((g, t, e), id);
        id
    }

    fn compile(&mut self, t: &Term, slots: &[Var]) -> Expr {
        let mut c = |x: &Term| Box::new(self.compile(x, slots));
        match t {
            Term::Var(v) => Expr::Slot(slots.iter().position(|s| s == v).expect("slot for every variable")),
            Term::True | Term::False | Term::Atom(_) => {
                Expr::Const(self.intern(se(t).expect("closed")))
            }
            Term::Not(x) => Expr::Not(c(x)),
            Term::And(x, y) => Expr::And(c(x), c(y)),
            Term::Or(x, y) => Expr::Or(c(x), c(y)),
            Term::Cond {
                then,
                guard,
                otherwise,
            } => Expr::Cond(c(guard), c(then), c(otherwise)),
        }
    }

    fn eval(&mut self, e: &Expr, env: &[u32]) -> u32 {
        match e {
            Expr::Const(id) => *id,
            Expr::Slot(i) => env[*i],
            Expr::Not(x) => {
                let x = self.eval(x, env);
                let (t, f) = (self.t, self.f);
                self.graft(x, f, t)
            }
            Expr::And(x, y) => {
                let (x, y) = (self.eval(x, env), self.eval(y, env));
                let f = self.f;
                self.graft(x, y, f)
            }
            Expr::Or(x, y) => {
                let (x, y) = (self.eval(x, env), self.eval(y, env));
                let t = self.t;
                self.graft(x, t, y)
            }
            Expr::Cond(g, t, e) => {
                let (g, t, e) = (self.eval(g, env), self.eval(t, env), self.eval(e, env));
                self.graft(g, t, e)
            }
        }
    }
}

/// All instances of one equation over a pool of closed terms.
struct Sweep<'a> {
    equation: &'a Equation,
    pool: &'a [Term],
    slots: Vec<Var>,
    algebra: Algebra,
    pool_ids: Vec<u32>,
    lhs: Expr,
    rhs: Expr,
    instances: u64,
}

impl<'a> Sweep<'a> {
    fn new(equation: &'a Equation, logic: Logic, pool: &'a [Term]) -> Sweep<'a> {
        let slots: Vec<Var> = equation.vars().into_iter().collect();
        let mut algebra = Algebra::new(logic);
        let pool_ids = pool
            .iter()
            .map(|t| algebra.intern(se(t).expect("pool terms are closed")))
            .collect();
        let lhs = algebra.compile(&equation.lhs, &slots);
        let rhs = algebra.compile(&equation.rhs, &slots);
        Sweep {
            equation,
            pool,
            slots,
            algebra,
            pool_ids,
            lhs,
            rhs,
            instances: 0,
        }
    }

    /// Visit every instance in odometer order (first variable slowest);
    /// `on_failure` returns false to stop.
    fn run(&mut self, mut on_failure: impl FnMut(Failure) -> bool) {
        let k = self.slots.len();
        if k > 0 && self.pool.is_empty() {
            return;
        }
        let mut idx = vec![0usize; k];
        let mut env = vec![0u32; k];
        loop {
            for (slot, &i) in env.iter_mut().zip(&idx) {
                *slot = self.pool_ids[i];
            }
            self.instances += 1;
            let l = self.algebra.eval(&self.lhs, &env);
            let r = self.algebra.eval(&self.rhs, &env);
            if l != r {
                let binding: BTreeMap<Var, Term> = self
                    .slots
                    .iter()
                    .zip(&idx)
                    .map(|(v, &i)| (v.clone(), self.pool[i].clone()))
                    .collect();
                let failure = Failure {
                    equation: self.equation.name.clone(),
                    lhs: self.equation.lhs.instantiate(&binding),
                    rhs: self.equation.rhs.instantiate(&binding),
                    binding,
                };
                if !on_failure(failure) {
                    return;
                }
            }
            let mut j = k;
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < self.pool.len() {
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}
