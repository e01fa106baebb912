//! Short-circuit logics: sequential propositional terms, their evaluation
//! trees, valuation congruences, reactive valuations with side effects,
//! axiom sets with soundness checks and bounded proof search, and the
//! independence models of static conditional logic.

pub mod axioms;
pub mod error;
pub mod independence;
pub mod term;
pub mod tree;
pub mod valuation;

pub use error::{EvalError, ModelError, TermError};
pub use term::{parse, render, Atom, Equation, Signature, Term, Var};
pub use tree::{equal, normalize, se, EvalTree, Logic};
