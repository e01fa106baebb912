//! Proof traces: chains of single rewrite steps, and an independent checker.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{Equation, Term};

use super::rewrite::{match_pattern, Binding};
use super::AxiomSet;

/// Which way an equation is used: `lr` rewrites an instance of its left
/// side into its right side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "lr")]
    Forward,
    #[serde(rename = "rl")]
    Backward,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn orient(self, e: &Equation) -> (&Term, &Term) {
        match self {
            Direction::Forward => (&e.lhs, &e.rhs),
            Direction::Backward => (&e.rhs, &e.lhs),
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "lr",
            Direction::Backward => "rl",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    /// Path of child indices to the rewritten subterm.
    pub position: Vec<usize>,
    pub equation: String,
    pub direction: Direction,
    /// The whole term after the step.
    pub result: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub lhs: Term,
    pub rhs: Term,
    pub steps: Vec<ProofStep>,
}

impl ProofTrace {
    pub fn empty(t: Term) -> ProofTrace {
        ProofTrace {
            lhs: t.clone(),
            rhs: t,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The term before step `i`.
    fn before(&self, i: usize) -> &Term {
        if i == 0 {
            &self.lhs
        } else {
            &self.steps[i - 1].result
        }
    }

    /// The same chain read from `rhs` back to `lhs`.
    pub fn reversed(&self) -> ProofTrace {
        let steps = (0..self.steps.len())
            .rev()
            .map(|i| ProofStep {
                position: self.steps[i].position.clone(),
                equation: self.steps[i].equation.clone(),
                direction: self.steps[i].direction.flip(),
                result: self.before(i).clone(),
            })
            .collect();
        ProofTrace {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            steps,
        }
    }

    /// Append a chain starting where this one ends.
    pub fn then(mut self, next: ProofTrace) -> ProofTrace {
        debug_assert_eq!(self.rhs, next.lhs);
        self.steps.extend(next.steps);
        self.rhs = next.rhs;
        self
    }

    /// Substitute for the variables of every term in the chain.
    pub fn instantiate(&self, binding: &Binding) -> ProofTrace {
        ProofTrace {
            lhs: self.lhs.instantiate(binding),
            rhs: self.rhs.instantiate(binding),
            steps: self
                .steps
                .iter()
                .map(|s| ProofStep {
                    result: s.result.instantiate(binding),
                    ..s.clone()
                })
                .collect(),
        }
    }

    /// Run the chain on the subterm of `context` at `prefix`.
    pub fn embed(&self, context: &Term, prefix: &[usize]) -> ProofTrace {
        let wrap = |t: &Term| context.replace_at(prefix, t.clone()).expect("prefix is a position");
        ProofTrace {
            lhs: wrap(&self.lhs),
            rhs: wrap(&self.rhs),
            steps: self
                .steps
                .iter()
                .map(|s| ProofStep {
                    position: prefix.iter().chain(&s.position).copied().collect(),
                    equation: s.equation.clone(),
                    direction: s.direction,
                    result: wrap(&s.result),
                })
                .collect(),
        }
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "  {}", self.lhs)?;
        for s in &self.steps {
            let pos: Vec<String> = s.position.iter().map(|i| i.to_string()).collect();
            writeln!(f, "= {}    [{} {} @{}]", s.result, s.equation, s.direction, pos.join("."))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("step {step}: unknown equation `{name}`")]
    UnknownEquation { step: usize, name: String },
    #[error("step {step}: no subterm at the given position")]
    BadPosition { step: usize },
    #[error("step {step}: {name} ({direction}) does not match the subterm")]
    NoMatch {
        step: usize,
        name: String,
        direction: Direction,
    },
    #[error("step {step}: result is not the rewritten term")]
    WrongResult { step: usize },
    #[error("trace ends at {found}, expected {expected}")]
    EndMismatch { found: String, expected: String },
}

/// Replay a trace against a set, reporting the first illegal step.
pub fn check_trace(tr: &ProofTrace, set: &AxiomSet) -> Result<(), TraceError> {
    check_with(tr, |name| set.lookup(name))
}

/// Replay a trace, resolving equation names in `equations` only.
pub fn check_trace_against(tr: &ProofTrace, equations: &[Equation]) -> Result<(), TraceError> {
    check_with(tr, |name| equations.iter().find(|e| e.name == name).cloned())
}

pub fn verify_trace(tr: &ProofTrace, set: &AxiomSet) -> bool {
    check_trace(tr, set).is_ok()
}

fn check_with(tr: &ProofTrace, lookup: impl Fn(&str) -> Option<Equation>) -> Result<(), TraceError> {
    let mut current = &tr.lhs;
    for (i, s) in tr.steps.iter().enumerate() {
        let step = i + 1;
        let e = lookup(&s.equation).ok_or_else(|| TraceError::UnknownEquation {
            step,
            name: s.equation.clone(),
        })?;
        let before = current.at(&s.position).ok_or(TraceError::BadPosition { step })?;
        let after = s.result.at(&s.position).ok_or(TraceError::BadPosition { step })?;
        let (from, to) = s.direction.orient(&e);
        let mut binding = Binding::new();
        if !match_pattern(from, before, &mut binding) {
            return Err(TraceError::NoMatch {
                step,
                name: e.name,
                direction: s.direction,
            });
        }
        // variables only on the target side may be bound to anything
        if !match_pattern(to, after, &mut binding)
            || current.replace_at(&s.position, after.clone()).as_ref() != Some(&s.result)
        {
            return Err(TraceError::WrongResult { step });
        }
        current = &s.result;
    }
    if current != &tr.rhs {
        return Err(TraceError::EndMismatch {
            found: current.to_string(),
            expected: tr.rhs.to_string(),
        });
    }
    Ok(())
}
