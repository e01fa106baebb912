//! Valuation kinds other than explicit automata: reply tries, memorizing
//! and static valuations, and the built-in register and counter models.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{EvalError, ModelError};
use crate::term::Atom;

use super::{Automaton, ReactiveValuation};

fn index_of(atoms: &[Atom], a: &Atom) -> Result<usize, EvalError> {
    atoms
        .iter()
        .position(|b| b == a)
        .ok_or_else(|| EvalError::UnknownAtom(a.to_string()))
}

/// A free valuation given by its replies on every query history shorter
/// than `depth`. The state is the trie node of the history so far; once a
/// history reaches `depth` the state stays in a sink that replies false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeValuation {
    atoms: Vec<Atom>,
    depth: usize,
    /// Bit `node * k + i` is the reply to atom `i` at trie node `node`.
    replies: Vec<bool>,
}

impl FreeValuation {
    /// Number of trie nodes for histories shorter than `depth`.
    pub fn node_count(k: usize, depth: usize) -> usize {
        (0..depth).map(|d| k.pow(d as u32)).sum()
    }

    pub fn new(atoms: Vec<Atom>, depth: usize, replies: Vec<bool>) -> Result<Self, ModelError> {
        let want = Self::node_count(atoms.len(), depth) * atoms.len();
        if replies.len() != want {
            return Err(ModelError::InvalidSpec(format!(
                "free valuation needs {want} replies, got {}",
                replies.len()
            )));
        }
        Ok(FreeValuation {
            atoms,
            depth,
            replies,
        })
    }

    pub(crate) fn step(&self, node: &mut usize, a: &Atom) -> Result<bool, EvalError> {
        let k = self.atoms.len();
        let i = index_of(&self.atoms, a)?;
        let sink = Self::node_count(k, self.depth);
        if *node >= sink {
            return Ok(false);
        }
        let r = self.replies[*node * k + i];
        *node = (*node * k + 1 + i).min(sink);
        Ok(r)
    }
}

/// A memorizing valuation: the first reply to each atom is stored and
/// repeated on later queries without a state change. Replies to fresh atoms
/// may depend on everything stored so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Memorizing {
    atoms: Vec<Atom>,
    /// Indexed by `memory * k + i`; entries for stored atoms are unused.
    responses: Vec<bool>,
}

impl Memorizing {
    pub fn from_fn(atoms: Vec<Atom>, mut respond: impl FnMut(&BTreeMap<Atom, bool>, &Atom) -> bool) -> Self {
        let k = atoms.len();
        let mut responses = vec![false; 3usize.pow(k as u32) * k];
        let mut m = Memorizing {
            atoms,
            responses: Vec::new(),
        };
        for code in 0..3u32.pow(k as u32) {
            let memory = m.decode(code);
            for (i, a) in m.atoms.iter().enumerate() {
                if !memory.contains_key(a) {
                    responses[code as usize * k + i] = respond(&memory, a);
                }
            }
        }
        m.responses = responses;
        m
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Stored replies encoded by `code`.
    pub fn decode(&self, mut code: u32) -> BTreeMap<Atom, bool> {
        let mut out = BTreeMap::new();
        for a in &self.atoms {
            match code % 3 {
                1 => {
                    out.insert(a.clone(), true);
                }
                2 => {
                    out.insert(a.clone(), false);
                }
                _ => {}
            }
            code /= 3;
        }
        out
    }

    pub(crate) fn step(&self, code: &mut u32, a: &Atom) -> Result<bool, EvalError> {
        let i = index_of(&self.atoms, a)?;
        let digit = 3u32.pow(i as u32);
        match (*code / digit) % 3 {
            1 => Ok(true),
            2 => Ok(false),
            _ => {
                let r = self.responses[*code as usize * self.atoms.len() + i];
                *code += digit * if r { 1 } else { 2 };
                Ok(r)
            }
        }
    }

    /// The same valuation as an explicit automaton whose states are the
    /// stored assignments.
    pub fn to_automaton(&self) -> Automaton {
        let k = self.atoms.len();
        let n = 3usize.pow(k as u32);
        let mut output = Vec::with_capacity(n);
        let mut next = Vec::with_capacity(n);
        for code in 0..n as u32 {
            let mut out_row = Vec::with_capacity(k);
            let mut next_row = Vec::with_capacity(k);
            for a in &self.atoms {
                let mut c = code;
                out_row.push(self.step(&mut c, a).expect("own atom"));
                next_row.push(c as usize);
            }
            output.push(out_row);
            next.push(next_row);
        }
        Automaton::new(self.atoms.clone(), 0, output, next).expect("well-formed tables")
    }
}

/// A static valuation: every atom has a fixed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticValuation {
    assignment: BTreeMap<Atom, bool>,
}

impl StaticValuation {
    pub fn new(assignment: BTreeMap<Atom, bool>) -> Self {
        StaticValuation { assignment }
    }

    pub fn assignment(&self) -> &BTreeMap<Atom, bool> {
        &self.assignment
    }

    pub(crate) fn value(&self, a: &Atom) -> Result<bool, EvalError> {
        self.assignment
            .get(a)
            .copied()
            .ok_or_else(|| EvalError::UnknownAtom(a.to_string()))
    }

    /// The same valuation as a memorizing one that ignores its memory.
    pub fn to_memorizing(&self) -> Memorizing {
        Memorizing::from_fn(self.assignment.keys().cloned().collect(), |_, a| self.assignment[a])
    }
}

/// Boolean registers numbered from 1. `'set:i:j'` writes `j` to register
/// `i` and replies true; `'eq:i:j'` replies whether register `i` holds `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterModel {
    init: Vec<bool>,
}

impl RegisterModel {
    pub fn new(init: Vec<bool>) -> Result<Self, ModelError> {
        if init.is_empty() {
            return Err(ModelError::InvalidSpec("at least one register is required".into()));
        }
        Ok(RegisterModel { init })
    }

    pub fn initial(&self) -> &[bool] {
        &self.init
    }

    pub(crate) fn step(&self, regs: &mut [bool], a: &Atom) -> Result<bool, EvalError> {
        let malformed = || EvalError::MalformedAtom(a.to_string());
        let mut parts = a.name().split(':');
        let (op, i, j) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(op), Some(i), Some(j), None) => (op, i, j),
            _ => return Err(EvalError::UnknownAtom(a.to_string())),
        };
        let index: usize = i.parse().map_err(|_| malformed())?;
        let value = match j {
            "T" => true,
            "F" => false,
            _ => return Err(malformed()),
        };
        if index == 0 || index > regs.len() {
            return Err(EvalError::RegisterOutOfRange {
                index,
                count: regs.len(),
            });
        }
        match op {
            "set" => {
                regs[index - 1] = value;
                Ok(true)
            }
            "eq" => Ok(regs[index - 1] == value),
            _ => Err(EvalError::UnknownAtom(a.to_string())),
        }
    }
}

/// A single integer variable. `'x=x+1'` increments and replies true (the
/// value after incrementing from a non-negative start is never 0);
/// `'x==k'` replies whether the variable equals `k`. The variable name is
/// free but must be the same on both sides of the atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterModel {
    init: i64,
}

impl CounterModel {
    pub fn new(init: i64) -> Result<Self, ModelError> {
        if init < 0 {
            return Err(ModelError::InvalidSpec(format!("counter start {init} is negative")));
        }
        Ok(CounterModel { init })
    }

    pub fn initial(&self) -> i64 {
        self.init
    }

    pub(crate) fn step(x: &mut i64, a: &Atom) -> Result<bool, EvalError> {
        let text: String = a.name().chars().filter(|c| !c.is_whitespace()).collect();
        let is_var = |s: &str| {
            s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        };
        if let Some((lhs, k)) = text.split_once("==") {
            if !is_var(lhs) {
                return Err(EvalError::MalformedAtom(a.to_string()));
            }
            let k: i64 = k.parse().map_err(|_| EvalError::MalformedAtom(a.to_string()))?;
            return Ok(*x == k);
        }
        if let Some((lhs, rhs)) = text.split_once('=') {
            if is_var(lhs) && rhs.strip_suffix("+1") == Some(lhs) {
                *x += 1;
                return Ok(true);
            }
        }
        Err(EvalError::MalformedAtom(a.to_string()))
    }
}

impl ReactiveValuation {
    /// Build a valuation from a spec string: `registers:n[:j...]` with
    /// initial values `T`/`F` (default `F`), `counter[:init]` (default 0),
    /// or `automaton:<file.json>`.
    pub fn from_spec(spec: &str) -> Result<Self, ModelError> {
        let invalid = || ModelError::InvalidSpec(spec.to_string());
        let (kind, rest) = match spec.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (spec, None),
        };
        match kind {
            "registers" => {
                let mut parts = rest.ok_or_else(invalid)?.split(':');
                let n: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(invalid)?;
                let mut init = vec![false; n];
                for (i, p) in parts.enumerate() {
                    let slot = init.get_mut(i).ok_or_else(invalid)?;
                    *slot = match p {
                        "T" => true,
                        "F" => false,
                        _ => return Err(invalid()),
                    };
                }
                Ok(ReactiveValuation::Registers(RegisterModel::new(init)?))
            }
            "counter" => {
                let init = match rest {
                    None => 0,
                    Some(s) => s.parse().map_err(|_| invalid())?,
                };
                Ok(ReactiveValuation::Counter(CounterModel::new(init)?))
            }
            "automaton" => {
                let path = rest.filter(|p| !p.is_empty()).ok_or_else(invalid)?;
                let text = std::fs::read_to_string(Path::new(path))?;
                Ok(ReactiveValuation::Automaton(Automaton::from_json(&text)?))
            }
            _ => Err(invalid()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;
    use crate::valuation::{evaluate, State};

    fn eval(spec: &str, src: &str) -> crate::valuation::EvalRecord {
        let v = ReactiveValuation::from_spec(spec).unwrap();
        evaluate(&parse(src).unwrap(), &v).unwrap()
    }

    #[test]
    fn counter_examples() {
        assert!(eval("counter:0", "('n=n+1' && 'n=n+1') && 'n==2'").result);
        assert!(!eval("counter:0", "'n=n+1' && 'n==2'").result);
        let r = eval("counter", "'x==0'");
        assert!(r.result);
        assert_eq!(r.final_state, State::Counter(0));
        assert!(eval("counter:3", "'x == 3'").result);
    }

    #[test]
    fn counter_rejects_malformed_atoms() {
        let v = ReactiveValuation::from_spec("counter").unwrap();
        for bad in ["'x=y+1'", "'x==k'", "'x=x+2'", "a"] {
            assert!(
                matches!(evaluate(&parse(bad).unwrap(), &v), Err(EvalError::MalformedAtom(_))),
                "{bad}"
            );
        }
        assert!(ReactiveValuation::from_spec("counter:-1").is_err());
    }

    #[test]
    fn registers() {
        let r = eval("registers:2:F:T", "'eq:2:T' && 'set:1:T' && 'eq:1:T'");
        assert!(r.result);
        assert_eq!(r.final_state, State::Registers(vec![true, true]));
        let r = eval("registers:1", "'set:1:T' && 'set:1:T'");
        let s = eval("registers:1", "'set:1:T'");
        assert_eq!((r.result, &r.final_state), (s.result, &s.final_state));
        let v = ReactiveValuation::from_spec("registers:1").unwrap();
        assert_eq!(
            evaluate(&parse("'eq:2:T'").unwrap(), &v),
            Err(EvalError::RegisterOutOfRange { index: 2, count: 1 })
        );
        assert!(matches!(
            evaluate(&parse("'eq:1:X'").unwrap(), &v),
            Err(EvalError::MalformedAtom(_))
        ));
        assert!(matches!(
            evaluate(&parse("'put:1:T'").unwrap(), &v),
            Err(EvalError::UnknownAtom(_))
        ));
    }

    #[test]
    fn bad_specs() {
        for spec in ["registers", "registers:0", "registers:1:T:T", "registers:x", "counter:a", "automaton:", "dice"] {
            assert!(ReactiveValuation::from_spec(spec).is_err(), "{spec}");
        }
        assert!(matches!(
            ReactiveValuation::from_spec("automaton:/nonexistent/file.json"),
            Err(ModelError::Io(_))
        ));
    }

    #[test]
    fn memorizing_repeats_first_reply() {
        let atoms = vec![Atom::new("a"), Atom::new("b")];
        // a replies true when b is still unknown, b always false
        let m = Memorizing::from_fn(atoms, |mem, x| x.name() == "a" && !mem.contains_key(&Atom::new("b")));
        let v = ReactiveValuation::Memorizing(m.clone());
        let ab = evaluate(&parse("a && b").unwrap(), &v).unwrap();
        let ba = evaluate(&parse("b || a").unwrap(), &v).unwrap();
        assert!(!ab.result);
        assert!(!ba.result);
        let aa = evaluate(&parse("a && a").unwrap(), &v).unwrap();
        assert!(aa.result);
        assert_eq!(m.decode(match aa.final_state {
            State::Memory(c) => c,
            _ => unreachable!(),
        }), [(Atom::new("a"), true)].into_iter().collect());
        assert!(m.to_automaton().is_cr());
    }

    #[test]
    fn free_trie_distinguishes_repetition() {
        let atoms = vec![Atom::new("a")];
        // depth 2: replies at histories "" and "a"
        let v = ReactiveValuation::Free(FreeValuation::new(atoms, 2, vec![true, false]).unwrap());
        assert!(evaluate(&parse("a").unwrap(), &v).unwrap().result);
        assert!(!evaluate(&parse("a && a").unwrap(), &v).unwrap().result);
    }
}
