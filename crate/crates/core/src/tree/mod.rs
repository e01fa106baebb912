//! Evaluation trees and the valuation congruences they decide.
//!
//! The evaluation tree of a closed term records every possible short-circuit
//! evaluation: inner nodes are atom queries, the left (`t`) branch is taken
//! on reply true, and leaves are the final result. Two closed terms are
//! equal under free valuation congruence exactly when their trees coincide;
//! the stronger congruences are decided by normalizing trees first.

mod normalize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::TermError;
use crate::term::{Atom, Term, Var};

pub use normalize::normalize;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EvalTree {
    Leaf(bool),
    Node {
        atom: Atom,
        t: Box<EvalTree>,
        f: Box<EvalTree>,
    },
}

impl EvalTree {
    pub fn node(atom: Atom, t: EvalTree, f: EvalTree) -> EvalTree {
        EvalTree::Node {
            atom,
            t: Box::new(t),
            f: Box::new(f),
        }
    }

    /// The tree of a single atom query.
    pub fn atom(atom: Atom) -> EvalTree {
        EvalTree::node(atom, EvalTree::Leaf(true), EvalTree::Leaf(false))
    }

    /// Replace every true leaf by `on_true` and every false leaf by `on_false`.
    pub fn graft(&self, on_true: &EvalTree, on_false: &EvalTree) -> EvalTree {
        match self {
            EvalTree::Leaf(true) => on_true.clone(),
            EvalTree::Leaf(false) => on_false.clone(),
            EvalTree::Node { atom, t, f } => EvalTree::node(
                atom.clone(),
                t.graft(on_true, on_false),
                f.graft(on_true, on_false),
            ),
        }
    }

    /// Number of nodes, leaves included.
    pub fn size(&self) -> usize {
        match self {
            EvalTree::Leaf(_) => 1,
            EvalTree::Node { t, f, .. } => 1 + t.size() + f.size(),
        }
    }

    /// Length of the longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        match self {
            EvalTree::Leaf(_) => 0,
            EvalTree::Node { t, f, .. } => 1 + t.depth().max(f.depth()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<Atom>) {
        if let EvalTree::Node { atom, t, f } = self {
            out.insert(atom.clone());
            t.collect_atoms(out);
            f.collect_atoms(out);
        }
    }

    /// Follow the tree using `reply` for each atom query.
    pub fn run(&self, mut reply: impl FnMut(&Atom) -> bool) -> bool {
        let mut cur = self;
        loop {
            match cur {
                EvalTree::Leaf(b) => return *b,
                EvalTree::Node { atom, t, f } => cur = if reply(atom) { t } else { f },
            }
        }
    }
}

/// Trees print as the conditional term they are the evaluation tree of:
/// `Node(a, X, Y)` prints as `ite(a, X, Y)`.
impl fmt::Display for EvalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalTree::Leaf(true) => f.write_str("T"),
            EvalTree::Leaf(false) => f.write_str("F"),
            EvalTree::Node { atom, t, f: e } => write!(f, "ite({}, {}, {})", atom, t, e),
        }
    }
}

impl fmt::Debug for EvalTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalTree::Leaf(b) => write!(f, "Leaf({})", if *b { "T" } else { "F" }),
            EvalTree::Node { atom, t, f: e } => write!(f, "Node({}, {:?}, {:?})", atom, t, e),
        }
    }
}

impl Serialize for EvalTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            EvalTree::Leaf(b) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("leaf", b)?;
                m.end()
            }
            EvalTree::Node { atom, t, f } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("atom", atom)?;
                m.serialize_entry("t", t)?;
                m.serialize_entry("f", f)?;
                m.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged, deny_unknown_fields)]
enum TreeRepr {
    Leaf { leaf: bool },
    Node { atom: Atom, t: Box<EvalTree>, f: Box<EvalTree> },
}

impl<'de> Deserialize<'de> for EvalTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match TreeRepr::deserialize(d)? {
            TreeRepr::Leaf { leaf } => EvalTree::Leaf(leaf),
            TreeRepr::Node { atom, t, f } => EvalTree::Node { atom, t, f },
        })
    }
}

/// The five valuation congruences, ordered by identification strength.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Logic {
    /// Free: equality of evaluation trees.
    Fr,
    /// Repetition-proof: an atom evaluated twice in a row replies the same.
    Rp,
    /// Contractive: repeated consecutive evaluations of an atom contract to one.
    Cr,
    /// Memorizing: an atom's first reply is remembered for the whole evaluation.
    Mem,
    /// Static: atoms have fixed values; only the Boolean function counts.
    St,
}

impl Logic {
    pub const ALL: [Logic; 5] = [Logic::Fr, Logic::Rp, Logic::Cr, Logic::Mem, Logic::St];

    pub fn name(self) -> &'static str {
        match self {
            Logic::Fr => "fr",
            Logic::Rp => "rp",
            Logic::Cr => "cr",
            Logic::Mem => "mem",
            Logic::St => "st",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Logic::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| format!("unknown logic `{s}` (expected fr, rp, cr, mem or st)"))
    }
}

/// The evaluation tree of a closed term.
pub fn se(t: &Term) -> Result<EvalTree, TermError> {
    if !t.is_closed() {
        return Err(TermError::OpenTerm(t.to_string()));
    }
    Ok(se_with(t, &BTreeMap::new()))
}

/// The evaluation tree of `t` with variables read from `env`. Variables
/// missing from `env` evaluate to `F`; callers check closedness first.
pub fn se_with(t: &Term, env: &BTreeMap<Var, EvalTree>) -> EvalTree {
    const TRUE: EvalTree = EvalTree::Leaf(true);
    const FALSE: EvalTree = EvalTree::Leaf(false);
    match t {
        Term::True => TRUE,
        Term::False => FALSE,
        Term::Atom(a) => EvalTree::atom(a.clone()),
        Term::Var(v) => env.get(v).cloned().unwrap_or(FALSE),
        Term::Not(x) => se_with(x, env).graft(&FALSE, &TRUE),
        Term::And(x, y) => se_with(x, env).graft(&se_with(y, env), &FALSE),
        Term::Or(x, y) => se_with(x, env).graft(&TRUE, &se_with(y, env)),
        Term::Cond {
            then,
            guard,
            otherwise,
        } => se_with(guard, env).graft(&se_with(then, env), &se_with(otherwise, env)),
    }
}

/// Decide `t1 = t2` under the given congruence.
pub fn equal(t1: &Term, t2: &Term, logic: Logic) -> Result<bool, TermError> {
    Ok(normalize(&se(t1)?, logic) == normalize(&se(t2)?, logic))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub size: usize,
    pub depth: usize,
    pub atoms: BTreeSet<Atom>,
}

pub fn tree_stats(tr: &EvalTree) -> TreeStats {
    TreeStats {
        size: tr.size(),
        depth: tr.depth(),
        atoms: tr.atoms(),
    }
}
