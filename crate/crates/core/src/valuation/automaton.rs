//! Finite automata with per-(state, atom) replies and transitions.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{EvalError, ModelError};
use crate::term::Atom;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    atoms: Vec<Atom>,
    init: usize,
    /// `output[s][i]`: reply to atom `i` in state `s`.
    output: Vec<Vec<bool>>,
    /// `next[s][i]`: state after atom `i` is queried in state `s`.
    next: Vec<Vec<usize>>,
}

/// On-disk form: states by name, tables keyed by state then atom.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutomatonFile {
    states: Vec<String>,
    init: String,
    output: BTreeMap<String, BTreeMap<String, bool>>,
    next: BTreeMap<String, BTreeMap<String, String>>,
}

impl Automaton {
    /// Build an automaton with states named `s0, s1, ...`.
    pub fn new(
        atoms: Vec<Atom>,
        init: usize,
        output: Vec<Vec<bool>>,
        next: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let states = (0..output.len()).map(|i| format!("s{i}")).collect();
        Self::with_names(states, atoms, init, output, next)
    }

    fn with_names(
        states: Vec<String>,
        atoms: Vec<Atom>,
        init: usize,
        output: Vec<Vec<bool>>,
        next: Vec<Vec<usize>>,
    ) -> Result<Self, ModelError> {
        let n = states.len();
        let bad = |msg: String| Err(ModelError::InvalidAutomaton(msg));
        if n == 0 {
            return bad("no states".into());
        }
        if init >= n {
            return bad(format!("initial state {init} out of range"));
        }
        if output.len() != n || next.len() != n {
            return bad("tables must have one row per state".into());
        }
        for (s, (out, nx)) in output.iter().zip(&next).enumerate() {
            if out.len() != atoms.len() || nx.len() != atoms.len() {
                return bad(format!("state {} must define every atom", states[s]));
            }
            if let Some(t) = nx.iter().find(|&&t| t >= n) {
                return bad(format!("transition to unknown state {t}"));
            }
        }
        Ok(Automaton {
            states,
            atoms,
            init,
            output,
            next,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let file: AutomatonFile = serde_json::from_str(text)?;
        let index: BTreeMap<&str, usize> = file
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != file.states.len() {
            return Err(ModelError::InvalidAutomaton("duplicate state name".into()));
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::InvalidAutomaton(format!("unknown state `{name}`")))
        };
        let atoms: Vec<Atom> = file
            .output
            .values()
            .flat_map(|m| m.keys())
            .chain(file.next.values().flat_map(|m| m.keys()))
            .map(Atom::new)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut output = Vec::new();
        let mut next = Vec::new();
        for s in &file.states {
            let missing = || ModelError::InvalidAutomaton(format!("state `{s}` must define every atom"));
            let out = file.output.get(s).ok_or_else(missing)?;
            let nx = file.next.get(s).ok_or_else(missing)?;
            let mut out_row = Vec::new();
            let mut next_row = Vec::new();
            for a in &atoms {
                out_row.push(*out.get(a.name()).ok_or_else(missing)?);
                next_row.push(lookup(nx.get(a.name()).ok_or_else(missing)?)?);
            }
            output.push(out_row);
            next.push(next_row);
        }
        for name in file.output.keys().chain(file.next.keys()) {
            lookup(name)?;
        }
        let init = lookup(&file.init)?;
        Self::with_names(file.states, atoms, init, output, next)
    }

    pub fn to_json(&self) -> String {
        let row = |s: usize| -> (BTreeMap<String, bool>, BTreeMap<String, String>) {
            let mut out = BTreeMap::new();
            let mut nx = BTreeMap::new();
            for (i, a) in self.atoms.iter().enumerate() {
                out.insert(a.name().to_string(), self.output[s][i]);
                nx.insert(a.name().to_string(), self.states[self.next[s][i]].clone());
            }
            (out, nx)
        };
        let mut output = BTreeMap::new();
        let mut next = BTreeMap::new();
        for (s, name) in self.states.iter().enumerate() {
            let (o, n) = row(s);
            output.insert(name.clone(), o);
            next.insert(name.clone(), n);
        }
        let file = AutomatonFile {
            states: self.states.clone(),
            init: self.states[self.init].clone(),
            output,
            next,
        };
        serde_json::to_string_pretty(&file).expect("automaton serializes")
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, s: usize) -> &str {
        &self.states[s]
    }

    fn atom_index(&self, a: &Atom) -> Result<usize, EvalError> {
        self.atoms
            .iter()
            .position(|b| b == a)
            .ok_or_else(|| EvalError::UnknownAtom(a.to_string()))
    }

    pub(crate) fn step(&self, s: &mut usize, a: &Atom) -> Result<bool, EvalError> {
        let i = self.atom_index(a)?;
        let r = self.output[*s][i];
        *s = self.next[*s][i];
        Ok(r)
    }

    pub(crate) fn step_index(&self, s: usize, i: usize) -> (bool, usize) {
        (self.output[s][i], self.next[s][i])
    }

    /// Repetition-proof: querying an atom again right away gives the same
    /// reply, i.e. `output(next(s, a), a) = output(s, a)`.
    pub fn is_rp(&self) -> bool {
        (0..self.states.len()).all(|s| {
            (0..self.atoms.len()).all(|i| self.output[self.next[s][i]][i] == self.output[s][i])
        })
    }

    /// Contractive: repetition-proof, and a repeated query does not move
    /// the state any further, i.e. `next(next(s, a), a) = next(s, a)`.
    pub fn is_cr(&self) -> bool {
        self.is_rp()
            && (0..self.states.len()).all(|s| {
                (0..self.atoms.len()).all(|i| self.next[self.next[s][i]][i] == self.next[s][i])
            })
    }
}
