//! Reactive valuations: stateful atom oracles whose replies may depend on
//! what has been evaluated before.
//!
//! A valuation starts in its initial state; every atom query produces a
//! Boolean reply and may move the valuation to a new state. Evaluating a
//! term against a valuation follows the short-circuit rules and records
//! the queries and replies in a trace.

mod automaton;
mod enumerate;
mod models;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::EvalError;
use crate::term::{Atom, Term};
use crate::tree::EvalTree;

pub use automaton::Automaton;
pub use enumerate::{enumerate_valuations, valuation_count};
pub use models::{CounterModel, FreeValuation, Memorizing, RegisterModel, StaticValuation};

/// Snapshot of a valuation's state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum State {
    /// Automaton state, or trie node of a free valuation.
    Index(usize),
    /// Partial assignment of a memorizing valuation, one base-3 digit per
    /// atom (0 unknown, 1 true, 2 false).
    Memory(u32),
    Registers(Vec<bool>),
    Counter(i64),
    /// Static valuations never change state.
    Fixed,
}

#[derive(Clone, Debug)]
pub enum ReactiveValuation {
    Automaton(Automaton),
    Free(FreeValuation),
    Memorizing(Memorizing),
    Static(StaticValuation),
    Registers(RegisterModel),
    Counter(CounterModel),
}

impl ReactiveValuation {
    pub fn initial_state(&self) -> State {
        match self {
            ReactiveValuation::Automaton(m) => State::Index(m.init()),
            ReactiveValuation::Free(_) => State::Index(0),
            ReactiveValuation::Memorizing(_) => State::Memory(0),
            ReactiveValuation::Static(_) => State::Fixed,
            ReactiveValuation::Registers(m) => State::Registers(m.initial().to_vec()),
            ReactiveValuation::Counter(m) => State::Counter(m.initial()),
        }
    }

    /// Reply to one atom query, advancing `state`.
    pub fn reply(&self, state: &mut State, atom: &Atom) -> Result<bool, EvalError> {
        match (self, state) {
            (ReactiveValuation::Automaton(m), State::Index(s)) => m.step(s, atom),
            (ReactiveValuation::Free(m), State::Index(s)) => m.step(s, atom),
            (ReactiveValuation::Memorizing(m), State::Memory(s)) => m.step(s, atom),
            (ReactiveValuation::Static(m), State::Fixed) => m.value(atom),
            (ReactiveValuation::Registers(m), State::Registers(r)) => m.step(r, atom),
            (ReactiveValuation::Counter(_), State::Counter(x)) => CounterModel::step(x, atom),
            (_, s) => panic!("state {s:?} does not belong to this valuation"),
        }
    }

    /// A readable form of a state of this valuation.
    pub fn describe_state(&self, state: &State) -> serde_json::Value {
        use serde_json::json;
        match (self, state) {
            (ReactiveValuation::Automaton(m), State::Index(s)) => json!(m.state_name(*s)),
            (ReactiveValuation::Memorizing(m), State::Memory(code)) => {
                let map: BTreeMap<String, bool> = m
                    .decode(*code)
                    .into_iter()
                    .map(|(a, v)| (a.name().to_string(), v))
                    .collect();
                json!(map)
            }
            (_, State::Index(s)) => json!(s),
            (_, State::Memory(code)) => json!(code),
            (_, State::Registers(r)) => {
                json!(r.iter().map(|&b| if b { "T" } else { "F" }).collect::<Vec<_>>())
            }
            (_, State::Counter(x)) => json!(x),
            (_, State::Fixed) => serde_json::Value::Null,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalRecord {
    pub result: bool,
    pub trace: Vec<(Atom, bool)>,
    pub final_state: State,
}

#[derive(Serialize)]
struct TraceEntry<'a> {
    atom: &'a Atom,
    reply: bool,
}

impl EvalRecord {
    /// JSON form: `{"result", "trace": [{"atom", "reply"}], "final_state"}`.
    pub fn to_json(&self, v: &ReactiveValuation) -> serde_json::Value {
        let trace: Vec<TraceEntry> = self
            .trace
            .iter()
            .map(|(atom, reply)| TraceEntry { atom, reply: *reply })
            .collect();
        serde_json::json!({
            "result": self.result,
            "trace": trace,
            "final_state": v.describe_state(&self.final_state),
        })
    }
}

/// Short-circuit evaluation of a closed term from `v`'s initial state.
pub fn evaluate(t: &Term, v: &ReactiveValuation) -> Result<EvalRecord, EvalError> {
    if !t.is_closed() {
        return Err(EvalError::OpenTerm(t.to_string()));
    }
    let mut state = v.initial_state();
    let mut trace = Vec::new();
    let result = eval_in(t, v, &mut state, &mut trace)?;
    Ok(EvalRecord {
        result,
        trace,
        final_state: state,
    })
}

fn eval_in(
    t: &Term,
    v: &ReactiveValuation,
    state: &mut State,
    trace: &mut Vec<(Atom, bool)>,
) -> Result<bool, EvalError> {
    Ok(match t {
        Term::True => true,
        Term::False => false,
        Term::Atom(a) => {
            let r = v.reply(state, a)?;
            trace.push((a.clone(), r));
            r
        }
        Term::Var(x) => return Err(EvalError::OpenTerm(x.to_string())),
        Term::Not(x) => !eval_in(x, v, state, trace)?,
        Term::And(x, y) => eval_in(x, v, state, trace)? && eval_in(y, v, state, trace)?,
        Term::Or(x, y) => eval_in(x, v, state, trace)? || eval_in(y, v, state, trace)?,
        Term::Cond {
            then,
            guard,
            otherwise,
        } => {
            if eval_in(guard, v, state, trace)? {
                eval_in(then, v, state, trace)?
            } else {
                eval_in(otherwise, v, state, trace)?
            }
        }
    })
}

/// Walk an evaluation tree with the valuation's replies.
pub fn run_tree(tr: &EvalTree, v: &ReactiveValuation) -> Result<EvalRecord, EvalError> {
    let mut state = v.initial_state();
    let mut trace = Vec::new();
    let mut cur = tr;
    let result = loop {
        match cur {
            EvalTree::Leaf(b) => break *b,
            EvalTree::Node { atom, t, f } => {
                let r = v.reply(&mut state, atom)?;
                trace.push((atom.clone(), r));
                cur = if r { t } else { f };
            }
        }
    };
    Ok(EvalRecord {
        result,
        trace,
        final_state: state,
    })
}

/// Both terms give the same result when evaluated from `v`'s initial state.
pub fn agree(t1: &Term, t2: &Term, v: &ReactiveValuation) -> Result<bool, EvalError> {
    Ok(evaluate(t1, v)?.result == evaluate(t2, v)?.result)
}

/// Both terms give the same result and leave `v` in the same state, so no
/// later evaluation can tell them apart.
pub fn agree_observably(t1: &Term, t2: &Term, v: &ReactiveValuation) -> Result<bool, EvalError> {
    let (r1, r2) = (evaluate(t1, v)?, evaluate(t2, v)?);
    Ok(r1.result == r2.result && r1.final_state == r2.final_state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn counter() -> ReactiveValuation {
        ReactiveValuation::Counter(CounterModel::new(0).unwrap())
    }

    #[test]
    fn perl_run() {
        let t = parse("('x=x+1' && !'x=x+1') || 'x==2'").unwrap();
        let rec = evaluate(&t, &counter()).unwrap();
        assert!(rec.result);
        let inc = Atom::new("x=x+1");
        assert_eq!(
            rec.trace,
            vec![(inc.clone(), true), (inc, true), (Atom::new("x==2"), true)]
        );
        let t = parse("(!'x=x+1' && 'x=x+1') || 'x==2'").unwrap();
        assert!(!evaluate(&t, &counter()).unwrap().result);
    }

    #[test]
    fn side_effect_of_conjunction_with_false() {
        let rec = evaluate(&parse("'x=x+1' && F").unwrap(), &counter()).unwrap();
        assert!(!rec.result);
        assert_eq!(rec.trace, vec![(Atom::new("x=x+1"), true)]);
        assert_eq!(rec.final_state, State::Counter(1));
    }

    #[test]
    fn open_terms_are_rejected() {
        assert!(matches!(
            evaluate(&parse("a && X").unwrap(), &counter()),
            Err(EvalError::OpenTerm(_))
        ));
    }

    #[test]
    fn register_witness() {
        let v = ReactiveValuation::Registers(RegisterModel::new(vec![false]).unwrap());
        let t = parse("'eq:1:F' && 'set:1:T'").unwrap();
        assert!(evaluate(&t, &v).unwrap().result);
        assert!(!evaluate(&Term::and(t.clone(), t), &v).unwrap().result);
    }
}
