//! Per-congruence normal forms of evaluation trees.

use crate::term::Atom;

use super::{EvalTree, Logic};

/// Normal form of `tr` under `logic`. Two closed terms are equal under
/// `logic` iff the normal forms of their evaluation trees are identical.
pub fn normalize(tr: &EvalTree, logic: Logic) -> EvalTree {
    match logic {
        Logic::Fr => tr.clone(),
        Logic::Rp => rp(tr),
        Logic::Cr => cr(tr),
        Logic::Mem => mem(tr, &mut Vec::new()),
        Logic::St => st(tr),
    }
}

/// Repetition-proof: directly after a reply to `a`, the next query of `a`
/// gives the same reply. Below the true branch of an `a` node, a chain of
/// `a` nodes can only go true, so each of them gets its true subtree on both
/// sides; dually below the false branch.
fn rp(tr: &EvalTree) -> EvalTree {
    match tr {
        EvalTree::Leaf(_) => tr.clone(),
        EvalTree::Node { atom, t, f } => EvalTree::node(
            atom.clone(),
            rp(&repeat_reply(t, atom, true)),
            rp(&repeat_reply(f, atom, false)),
        ),
    }
}

fn repeat_reply(tr: &EvalTree, a: &Atom, reply: bool) -> EvalTree {
    match tr {
        EvalTree::Node { atom, t, f } if atom == a => {
            let kept = repeat_reply(if reply { t } else { f }, a, reply);
            EvalTree::node(atom.clone(), kept.clone(), kept)
        }
        _ => tr.clone(),
    }
}

/// Contractive: a query of `a` directly after a query of `a` is absorbed.
fn cr(tr: &EvalTree) -> EvalTree {
    match tr {
        EvalTree::Leaf(_) => tr.clone(),
        EvalTree::Node { atom, t, f } => EvalTree::node(
            atom.clone(),
            cr(contract(t, atom, true)),
            cr(contract(f, atom, false)),
        ),
    }
}

fn contract<'a>(tr: &'a EvalTree, a: &Atom, reply: bool) -> &'a EvalTree {
    match tr {
        EvalTree::Node { atom, t, f } if atom == a => contract(if reply { t } else { f }, a, reply),
        _ => tr,
    }
}

/// Memorizing: along each path, the first reply to an atom is final.
fn mem(tr: &EvalTree, seen: &mut Vec<(Atom, bool)>) -> EvalTree {
    match tr {
        EvalTree::Leaf(_) => tr.clone(),
        EvalTree::Node { atom, t, f } => {
            if let Some(&(_, v)) = seen.iter().find(|(b, _)| b == atom) {
                return mem(if v { t } else { f }, seen);
            }
            seen.push((atom.clone(), true));
            let nt = mem(t, seen);
            seen.last_mut().expect("pushed above").1 = false;
            let nf = mem(f, seen);
            seen.pop();
            EvalTree::node(atom.clone(), nt, nf)
        }
    }
}

/// Static: the reduced ordered decision tree of the Boolean function the
/// tree computes, with atoms tested in lexicographic order.
fn st(tr: &EvalTree) -> EvalTree {
    let order: Vec<Atom> = tr.atoms().into_iter().collect();
    st_from(tr, &order)
}

fn st_from(tr: &EvalTree, order: &[Atom]) -> EvalTree {
    match (tr, order.split_first()) {
        (EvalTree::Leaf(_), _) => tr.clone(),
        (_, None) => unreachable!("every atom of the tree has been fixed"),
        (_, Some((a, rest))) => {
            let t = st_from(&cofactor(tr, a, true), rest);
            let f = st_from(&cofactor(tr, a, false), rest);
            if t == f {
                t
            } else {
                EvalTree::node(a.clone(), t, f)
            }
        }
    }
}

/// The tree with atom `a` fixed to `value`.
fn cofactor(tr: &EvalTree, a: &Atom, value: bool) -> EvalTree {
    match tr {
        EvalTree::Leaf(_) => tr.clone(),
        EvalTree::Node { atom, t, f } if atom == a => cofactor(if value { t } else { f }, a, value),
        EvalTree::Node { atom, t, f } => {
            EvalTree::node(atom.clone(), cofactor(t, a, value), cofactor(f, a, value))
        }
    }
}
