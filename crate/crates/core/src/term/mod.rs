//! Sequential propositional terms.
//!
//! A [`Term`] is built from the constants `T` and `F`, atoms, equation
//! variables, negation, left-sequential conjunction and disjunction, and the
//! ternary conditional. Operand order of `&&` and `||` is significant: the left
//! operand is always evaluated first, and the right operand only when the left
//! one does not determine the result.
//!
//! The concrete syntax is ASCII: `!`, `&&`, `||`, and `ite(c, t, e)` for the
//! conditional "if `c` then `t` else `e`".

mod enumerate;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::TermError;

pub use enumerate::{enumerate_terms, count_terms, Signature};
pub use parse::{parse, parse_equation, parse_equation_file, ParseError};

/// An atom (propositional variable). Atoms are ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: impl AsRef<str>) -> Self {
        Atom(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// True if the name can be written without quotes.
    pub fn is_bare(&self) -> bool {
        parse::is_bare_atom_name(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Atom({})", self)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bare() {
            f.write_str(&self.0)
        } else {
            write!(f, "'{}'", self.0)
        }
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

impl serde::Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> serde::Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        if name.is_empty() {
            return Err(serde::de::Error::custom("empty atom name"));
        }
        Ok(Atom::new(name))
    }
}

/// An equation variable. Written with an uppercase initial (`X`, `Y`, ...).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var({})", self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl serde::Serialize for Var {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    True,
    False,
    Atom(Atom),
    Var(Var),
    Not(Box<Term>),
    /// Left-sequential conjunction.
    And(Box<Term>, Box<Term>),
    /// Left-sequential disjunction.
    Or(Box<Term>, Box<Term>),
    /// `then ◁ guard ▷ otherwise`: the guard is evaluated first.
    Cond {
        then: Box<Term>,
        guard: Box<Term>,
        otherwise: Box<Term>,
    },
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(l: Term, r: Term) -> Term {
        Term::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Term, r: Term) -> Term {
        Term::Or(Box::new(l), Box::new(r))
    }

    /// The conditional "if `guard` then `then` else `otherwise`".
    pub fn ite(guard: Term, then: Term, otherwise: Term) -> Term {
        Term::Cond {
            then: Box::new(then),
            guard: Box::new(guard),
            otherwise: Box::new(otherwise),
        }
    }

    /// Number of AST nodes; constants, atoms and variables count 1.
    pub fn size(&self) -> usize {
        match self {
            Term::True | Term::False | Term::Atom(_) | Term::Var(_) => 1,
            Term::Not(t) => 1 + t.size(),
            Term::And(l, r) | Term::Or(l, r) => 1 + l.size() + r.size(),
            Term::Cond {
                then,
                guard,
                otherwise,
            } => 1 + then.size() + guard.size() + otherwise.size(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::True | Term::False | Term::Atom(_) => true,
            _ => self.children().into_iter().all(Term::is_closed),
        }
    }

    pub fn has_cond(&self) -> bool {
        match self {
            Term::Cond { .. } => true,
            _ => self.children().into_iter().any(Term::has_cond),
        }
    }

    /// Immediate subterms in position order. For a conditional the order is
    /// the written order of `ite(c, t, e)`: guard, then, else.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::True | Term::False | Term::Atom(_) | Term::Var(_) => Vec::new(),
            Term::Not(t) => vec![t],
            Term::And(l, r) | Term::Or(l, r) => vec![l, r],
            Term::Cond {
                then,
                guard,
                otherwise,
            } => vec![guard, then, otherwise],
        }
    }

    pub fn child(&self, index: usize) -> Option<&Term> {
        match (self, index) {
            (Term::Not(t), 0) => Some(t),
            (Term::And(l, _) | Term::Or(l, _), 0) => Some(l),
            (Term::And(_, r) | Term::Or(_, r), 1) => Some(r),
            (Term::Cond { guard, .. }, 0) => Some(guard),
            (Term::Cond { then, .. }, 1) => Some(then),
            (Term::Cond { otherwise, .. }, 2) => Some(otherwise),
            _ => None,
        }
    }

    fn child_mut(&mut self, index: usize) -> Option<&mut Term> {
        match (self, index) {
            (Term::Not(t), 0) => Some(t),
            (Term::And(l, _) | Term::Or(l, _), 0) => Some(l),
            (Term::And(_, r) | Term::Or(_, r), 1) => Some(r),
            (Term::Cond { guard, .. }, 0) => Some(guard),
            (Term::Cond { then, .. }, 1) => Some(then),
            (Term::Cond { otherwise, .. }, 2) => Some(otherwise),
            _ => None,
        }
    }

    /// The subterm at a path of child indices.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        path.iter().try_fold(self, |t, &i| t.child(i))
    }

    /// Replace the subterm at `path`, returning the new term.
    pub fn replace_at(&self, path: &[usize], replacement: Term) -> Option<Term> {
        let mut out = self.clone();
        let mut cursor = &mut out;
        for &i in path {
            cursor = cursor.child_mut(i)?;
        }
        *cursor = replacement;
        Some(out)
    }

    /// All subterm positions, pre-order.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        collect_positions(self, &mut path, &mut out);
        out
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Atom(a) = t {
                out.insert(a.clone());
            }
        });
        out
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Var(v) = t {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Number of atom occurrences.
    pub fn atom_occurrences(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, Term::Atom(_)) {
                n += 1;
            }
        });
        n
    }

    fn visit(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Replace variables by terms. Variables without a binding are kept.
    pub fn instantiate(&self, binding: &BTreeMap<Var, Term>) -> Term {
        match self {
            Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::True | Term::False | Term::Atom(_) => self.clone(),
            Term::Not(t) => Term::not(t.instantiate(binding)),
            Term::And(l, r) => Term::and(l.instantiate(binding), r.instantiate(binding)),
            Term::Or(l, r) => Term::or(l.instantiate(binding), r.instantiate(binding)),
            Term::Cond {
                then,
                guard,
                otherwise,
            } => Term::ite(
                guard.instantiate(binding),
                then.instantiate(binding),
                otherwise.instantiate(binding),
            ),
        }
    }

    /// Rename one atom throughout the term.
    pub fn rename_atom(&self, from: &Atom, to: &Atom) -> Term {
        match self {
            Term::Atom(a) if a == from => Term::Atom(to.clone()),
            Term::True | Term::False | Term::Atom(_) | Term::Var(_) => self.clone(),
            Term::Not(t) => Term::not(t.rename_atom(from, to)),
            Term::And(l, r) => Term::and(l.rename_atom(from, to), r.rename_atom(from, to)),
            Term::Or(l, r) => Term::or(l.rename_atom(from, to), r.rename_atom(from, to)),
            Term::Cond {
                then,
                guard,
                otherwise,
            } => Term::ite(
                guard.rename_atom(from, to),
                then.rename_atom(from, to),
                otherwise.rename_atom(from, to),
            ),
        }
    }
}

fn collect_positions(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect_positions(c, path, out);
        path.pop();
    }
}

/// Rewrite `¬`, `∧` and `∨` into conditionals:
/// `¬x = F◁x▷T`, `x∧y = y◁x▷F`, `x∨y = T◁x▷y`.
pub fn desugar(t: &Term) -> Term {
    match t {
        Term::True | Term::False | Term::Atom(_) | Term::Var(_) => t.clone(),
        Term::Not(x) => Term::ite(desugar(x), Term::False, Term::True),
        Term::And(x, y) => Term::ite(desugar(x), desugar(y), Term::False),
        Term::Or(x, y) => Term::ite(desugar(x), Term::True, desugar(y)),
        Term::Cond {
            then,
            guard,
            otherwise,
        } => Term::ite(desugar(guard), desugar(then), desugar(otherwise)),
    }
}

/// Eliminate conditionals using `x◁y▷z = (y∧x)∨(¬y∧z)`.
///
/// The guard is duplicated, so the result is equal to the input only under
/// memorizing and static semantics, not under free semantics.
pub fn express_conditional(t: &Term) -> Term {
    match t {
        Term::True | Term::False | Term::Atom(_) | Term::Var(_) => t.clone(),
        Term::Not(x) => Term::not(express_conditional(x)),
        Term::And(x, y) => Term::and(express_conditional(x), express_conditional(y)),
        Term::Or(x, y) => Term::or(express_conditional(x), express_conditional(y)),
        Term::Cond {
            then,
            guard,
            otherwise,
        } => {
            let g = express_conditional(guard);
            Term::or(
                Term::and(g.clone(), express_conditional(then)),
                Term::and(Term::not(g), express_conditional(otherwise)),
            )
        }
    }
}

/// Swap `T`/`F` and `&&`/`||`. Defined on conditional-free terms only.
pub fn dual(t: &Term) -> Result<Term, TermError> {
    Ok(match t {
        Term::True => Term::False,
        Term::False => Term::True,
        Term::Atom(_) | Term::Var(_) => t.clone(),
        Term::Not(x) => Term::not(dual(x)?),
        Term::And(x, y) => Term::or(dual(x)?, dual(y)?),
        Term::Or(x, y) => Term::and(dual(x)?, dual(y)?),
        Term::Cond { .. } => return Err(TermError::DualOfConditional(t.to_string())),
    })
}

/// A named equation, optionally an instance of an atom-indexed scheme.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
    /// Set when the equation is a scheme over atoms; the atom is the index.
    pub scheme_atom: Option<Atom>,
}

impl Equation {
    pub fn new(name: impl Into<String>, lhs: Term, rhs: Term) -> Self {
        Equation {
            name: name.into(),
            lhs,
            rhs,
            scheme_atom: None,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.lhs.vars();
        v.extend(self.rhs.vars());
        v
    }

    /// The equation with both sides dualized; the name gets a prime.
    pub fn dual(&self) -> Result<Equation, TermError> {
        Ok(Equation {
            name: format!("{}'", self.name),
            lhs: dual(&self.lhs)?,
            rhs: dual(&self.rhs)?,
            scheme_atom: self.scheme_atom.clone(),
        })
    }

    /// Instantiate a scheme template at another atom. The template's index
    /// atom is renamed, and the name's `[a]` suffix follows.
    pub fn at_atom(&self, atom: &Atom) -> Equation {
        match &self.scheme_atom {
            None => self.clone(),
            Some(index) => {
                let base = self
                    .name
                    .strip_suffix(&format!("[{}]", index))
                    .unwrap_or(&self.name);
                Equation {
                    name: format!("{}[{}]", base, atom),
                    lhs: self.lhs.rename_atom(index, atom),
                    rhs: self.rhs.rename_atom(index, atom),
                    scheme_atom: Some(atom.clone()),
                }
            }
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} = {}", self.name, self.lhs, self.rhs)
    }
}

/// Build the closed instance `(lhs σ, rhs σ)` of an equation.
pub fn substitute(e: &Equation, binding: &BTreeMap<Var, Term>) -> Result<(Term, Term), TermError> {
    for v in e.vars() {
        match binding.get(&v) {
            None => return Err(TermError::UnboundVariable(v.to_string())),
            Some(t) if !t.is_closed() => {
                return Err(TermError::OpenBinding(v.to_string(), t.to_string()))
            }
            Some(_) => {}
        }
    }
    Ok((e.lhs.instantiate(binding), e.rhs.instantiate(binding)))
}

/// Rendering. `&&` and `||` associate to the left; `!` binds tightest.
pub fn render(t: &Term) -> String {
    t.to_string()
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Level {
    Or,
    And,
    Unary,
}

fn write_at(t: &Term, level: Level, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match t {
        Term::Or(..) => Level::Or,
        Term::And(..) => Level::And,
        _ => Level::Unary,
    };
    if own < level {
        f.write_str("(")?;
        write_at(t, own, f)?;
        return f.write_str(")");
    }
    match t {
        Term::True => f.write_str("T"),
        Term::False => f.write_str("F"),
        Term::Atom(a) => write!(f, "{}", a),
        Term::Var(v) => write!(f, "{}", v),
        Term::Not(x) => {
            f.write_str("!")?;
            write_at(x, Level::Unary, f)
        }
        Term::And(l, r) => {
            write_at(l, Level::And, f)?;
            f.write_str(" && ")?;
            write_at(r, Level::Unary, f)
        }
        Term::Or(l, r) => {
            write_at(l, Level::Or, f)?;
            f.write_str(" || ")?;
            write_at(r, Level::And, f)
        }
        Term::Cond {
            then,
            guard,
            otherwise,
        } => {
            f.write_str("ite(")?;
            write_at(guard, Level::Or, f)?;
            f.write_str(", ")?;
            write_at(then, Level::Or, f)?;
            f.write_str(", ")?;
            write_at(otherwise, Level::Or, f)?;
            f.write_str(")")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, Level::Or, f)
    }
}

/// Terms serialize as their rendered text.
impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::True => f.write_str("T"),
            Term::False => f.write_str("F"),
            Term::Atom(a) => write!(f, "{:?}", a),
            Term::Var(v) => write!(f, "{:?}", v),
            Term::Not(x) => write!(f, "Not({:?})", x),
            Term::And(l, r) => write!(f, "And({:?}, {:?})", l, r),
            Term::Or(l, r) => write!(f, "Or({:?}, {:?})", l, r),
            Term::Cond {
                then,
                guard,
                otherwise,
            } => write!(f, "Cond({:?}, {:?}, {:?})", then, guard, otherwise),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Term {
        Term::atom("a")
    }
    fn b() -> Term {
        Term::atom("b")
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&Term::and(a(), b())), "a && b");
        assert_eq!(render(&Term::ite(a(), Term::False, Term::True)), "ite(a, F, T)");
        assert_eq!(render(&Term::not(Term::not(a()))), "!!a");
    }

    #[test]
    fn render_parenthesizes_right_nested_operators() {
        let t = Term::and(a(), Term::and(b(), a()));
        assert_eq!(render(&t), "a && (b && a)");
        let t = Term::or(Term::and(a(), b()), a());
        assert_eq!(render(&t), "a && b || a");
        let t = Term::and(Term::or(a(), b()), a());
        assert_eq!(render(&t), "(a || b) && a");
        let t = Term::not(Term::or(a(), b()));
        assert_eq!(render(&t), "!(a || b)");
    }

    #[test]
    fn quoted_atoms_render_with_quotes() {
        assert_eq!(render(&Term::atom("x=x+1")), "'x=x+1'");
        assert_eq!(render(&Term::atom("set:1:T")), "'set:1:T'");
        assert_eq!(render(&Term::atom("ite")), "'ite'");
    }

    #[test]
    fn desugar_connectives() {
        assert_eq!(desugar(&Term::not(a())), Term::ite(a(), Term::False, Term::True));
        assert_eq!(desugar(&Term::and(a(), b())), Term::ite(a(), b(), Term::False));
        assert_eq!(desugar(&Term::or(a(), b())), Term::ite(a(), Term::True, b()));
        let open = Term::and(Term::var("X"), a());
        assert_eq!(desugar(&open), Term::ite(Term::var("X"), a(), Term::False));
    }

    #[test]
    fn express_conditional_examples() {
        let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
        let got = express_conditional(&Term::ite(y.clone(), x.clone(), z.clone()));
        let want = Term::or(Term::and(y.clone(), x), Term::and(Term::not(y), z));
        assert_eq!(got, want);
        assert_eq!(express_conditional(&Term::True), Term::True);
        assert!(!got.has_cond());
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual(&Term::True).unwrap(), Term::False);
        let t = Term::and(a(), Term::or(b(), Term::True));
        assert_eq!(dual(&t).unwrap(), Term::or(a(), Term::and(b(), Term::False)));
        assert!(matches!(
            dual(&Term::ite(a(), a(), b())),
            Err(TermError::DualOfConditional(_))
        ));
        let scl4 = Equation::new("SCL4", Term::and(Term::True, Term::var("X")), Term::var("X"));
        let d = scl4.dual().unwrap();
        assert_eq!(d.to_string(), "SCL4' : F || X = X");
    }

    #[test]
    fn substitute_examples() {
        let x = Term::var("X");
        let scl3 = Equation::new("SCL3", Term::not(Term::not(x.clone())), x.clone());
        let mut binding = BTreeMap::new();
        binding.insert(Var::new("X"), a());
        let (l, r) = substitute(&scl3, &binding).unwrap();
        assert_eq!((render(&l), render(&r)), ("!!a".into(), "a".into()));

        let cp1 = Equation::new("CP1", Term::ite(Term::True, x.clone(), Term::var("Y")), x.clone());
        binding.insert(Var::new("Y"), b());
        let (l, r) = substitute(&cp1, &binding).unwrap();
        assert_eq!(render(&l), "ite(T, a, b)");
        assert_eq!(r, a());

        let mscl1 = Equation::new(
            "MSCL1",
            Term::and(x.clone(), Term::or(x.clone(), Term::var("Y"))),
            x.clone(),
        );
        let (l, r) = substitute(&mscl1, &binding).unwrap();
        assert_eq!(render(&l), "a && (a || b)");
        assert_eq!(r, a());
    }

    #[test]
    fn substitute_rejects_unbound_and_open_bindings() {
        let e = Equation::new("E", Term::var("X"), Term::var("Y"));
        let mut binding = BTreeMap::new();
        binding.insert(Var::new("X"), a());
        assert_eq!(
            substitute(&e, &binding),
            Err(TermError::UnboundVariable("Y".into()))
        );
        binding.insert(Var::new("Y"), Term::var("Z"));
        assert!(matches!(substitute(&e, &binding), Err(TermError::OpenBinding(..))));
    }

    #[test]
    fn positions_and_replacement() {
        let t = Term::ite(a(), Term::not(b()), Term::True);
        assert_eq!(t.positions().len(), 5);
        assert_eq!(t.at(&[1, 0]), Some(&b()));
        let r = t.replace_at(&[1], a()).unwrap();
        assert_eq!(render(&r), "ite(a, a, T)");
        assert_eq!(t.at(&[3]), None);
    }

    #[test]
    fn size_and_closedness() {
        let t = Term::and(Term::or(Term::var("X"), Term::var("Y")), Term::var("Z"));
        assert_eq!(t.size(), 5);
        assert!(!t.is_closed());
        assert!(Term::and(a(), Term::False).is_closed());
    }

    #[test]
    fn scheme_renaming() {
        let t = Equation {
            name: "CSCL1[a]".into(),
            lhs: Term::and(a(), Term::or(a(), Term::var("X"))),
            rhs: a(),
            scheme_atom: Some(Atom::new("a")),
        };
        let e = t.at_atom(&Atom::new("b"));
        assert_eq!(e.to_string(), "CSCL1[b] : b && (b || X) = b");
        assert_eq!(e.scheme_atom, Some(Atom::new("b")));
    }
}
