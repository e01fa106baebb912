//! Axiom sets, soundness checking and bounded equational proof search.

mod check;
mod lemmas;
mod proof;
mod rewrite;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use crate::term::{parse_equation_file, Atom, Equation, Signature};
use crate::tree::Logic;

pub use check::{
    check_equation, check_equation_in, soundness_check, EquationReport, EquationVerdict, Failure, SoundnessReport,
};
pub use lemmas::{Lemma, LemmaBook};
pub use proof::{check_trace, verify_trace, Direction, ProofStep, ProofTrace, TraceError};
pub use rewrite::match_pattern;
pub use search::{rewrite_search, Prover, SearchOptions, SearchOutcome};

/// A named list of equations. Equations with a `scheme_atom` are templates
/// standing for one equation per atom of the alphabet in use.
#[derive(Clone, Debug)]
pub struct AxiomSet {
    pub name: String,
    pub equations: Vec<Equation>,
    /// The congruence the set is sound for.
    pub logic_home: Logic,
    /// Term signature used to instantiate variables in soundness sweeps.
    pub signature: Signature,
}

const CP: &str = include_str!("tables/cp.eq");
const CPMEM: &str = include_str!("tables/cpmem.eq");
const CPSTAT: &str = include_str!("tables/cpstat.eq");
const CPSTAT_STAR: &str = include_str!("tables/cpstat_star.eq");
const CPSTAT_STAR_SYM: &str = include_str!("tables/cpstat_star_sym.eq");
const CPRP: &str = include_str!("tables/cprp.eq");
const CPCR: &str = include_str!("tables/cpcr.eq");
const EQFSCL: &str = include_str!("tables/eqfscl.eq");
const EQMSCL: &str = include_str!("tables/eqmscl.eq");
const SSCL: &str = include_str!("tables/sscl.eq");
const CSCL: &str = include_str!("tables/cscl.eq");
const RPSCL: &str = include_str!("tables/rpscl.eq");

/// Built-in set names with their tables and home logic.
const BUILTINS: &[(&str, &[&str], Logic, Signature)] = &[
    ("cp", &[CP], Logic::Fr, Signature::Conditional),
    ("cprp", &[CP, CPRP], Logic::Rp, Signature::Conditional),
    ("cpcr", &[CP, CPCR], Logic::Cr, Signature::Conditional),
    ("cpmem", &[CP, CPMEM], Logic::Mem, Signature::Conditional),
    ("cpstat", &[CP, CPSTAT], Logic::St, Signature::Conditional),
    ("cpstat-star", &[CPSTAT_STAR], Logic::St, Signature::Conditional),
    ("cpstat-star-sym", &[CPSTAT_STAR_SYM], Logic::St, Signature::Conditional),
    ("eqfscl", &[EQFSCL], Logic::Fr, Signature::Scl),
    ("eqmscl", &[EQMSCL], Logic::Mem, Signature::Scl),
    ("eqsscl", &[EQMSCL, SSCL], Logic::St, Signature::Scl),
    ("cscl", &[EQFSCL, CSCL], Logic::Cr, Signature::Scl),
    ("rpscl", &[EQFSCL, RPSCL], Logic::Rp, Signature::Scl),
];

impl AxiomSet {
    pub fn builtin_names() -> Vec<&'static str> {
        BUILTINS.iter().map(|b| b.0).collect()
    }

    pub fn builtin(name: &str) -> Option<AxiomSet> {
        let (_, tables, logic, signature) = BUILTINS.iter().find(|b| b.0 == name)?;
        let equations = tables
            .iter()
            .flat_map(|t| parse_equation_file(t).expect("built-in tables parse"))
            .collect();
        Some(AxiomSet {
            name: name.to_string(),
            equations,
            logic_home: *logic,
            signature: *signature,
        })
    }

    /// Parse a set from equation-file text.
    pub fn from_text(
        name: &str,
        text: &str,
        logic_home: Logic,
        signature: Signature,
    ) -> Result<AxiomSet, crate::term::ParseError> {
        Ok(AxiomSet {
            name: name.to_string(),
            equations: parse_equation_file(text)?,
            logic_home,
            signature,
        })
    }

    /// Every equation, with scheme templates expanded over `alphabet`.
    pub fn instances(&self, alphabet: &[Atom]) -> Vec<Equation> {
        let alphabet: BTreeSet<&Atom> = alphabet.iter().collect();
        let mut out = Vec::new();
        for e in &self.equations {
            if e.scheme_atom.is_some() {
                out.extend(alphabet.iter().map(|a| e.at_atom(a)));
            } else {
                out.push(e.clone());
            }
        }
        out
    }

    /// Look an equation up by name. Scheme instances are named like the
    /// template with the index atom replaced, e.g. `CPcr1[b]`.
    pub fn lookup(&self, name: &str) -> Option<Equation> {
        if let Some(e) = self.equations.iter().find(|e| e.name == name && e.scheme_atom.is_none()) {
            return Some(e.clone());
        }
        let (base, idx) = name.strip_suffix(']')?.rsplit_once('[')?;
        if idx.is_empty() {
            return None;
        }
        let atom = Atom::new(idx);
        self.equations
            .iter()
            .filter(|e| e.scheme_atom.is_some())
            .find(|e| e.name.rsplit_once('[').map(|(b, _)| b) == Some(base))
            .map(|e| e.at_atom(&atom))
    }

    /// The set in equation-file format.
    pub fn dump(&self) -> String {
        let mut out = format!("# {} (sound for {})\n", self.name, self.logic_home);
        for e in &self.equations {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for AxiomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sizes() {
        let count = |n: &str| AxiomSet::builtin(n).unwrap().equations.len();
        assert_eq!(count("cp"), 4);
        assert_eq!(count("cpmem"), 5);
        assert_eq!(count("cpstat"), 6);
        assert_eq!(count("cpstat-star"), 5);
        assert_eq!(count("cprp"), 6);
        assert_eq!(count("eqfscl"), 10);
        assert_eq!(count("eqmscl"), 12);
        assert_eq!(count("eqsscl"), 13);
        assert_eq!(count("cscl"), 14);
        assert_eq!(count("rpscl"), 22);
        assert!(AxiomSet::builtin("nope").is_none());
    }

    #[test]
    fn schemes_expand_over_alphabet() {
        let set = AxiomSet::builtin("cpcr").unwrap();
        let ab = [Atom::new("a"), Atom::new("b")];
        let names: Vec<String> = set.instances(&ab).into_iter().map(|e| e.name).collect();
        assert_eq!(
            names,
            ["CP1", "CP2", "CP3", "CP4", "CPcr1[a]", "CPcr1[b]", "CPcr2[a]", "CPcr2[b]"]
        );
        let e = set.lookup("CPcr2[b]").unwrap();
        assert_eq!(e.to_string(), "CPcr2[b] : ite(b, X, ite(b, Y, Z)) = ite(b, X, Z)");
        assert!(set.lookup("CPcr3[b]").is_none());
        assert!(set.lookup("CP4").is_some());
    }

    #[test]
    fn dump_round_trips() {
        for name in AxiomSet::builtin_names() {
            let set = AxiomSet::builtin(name).unwrap();
            let again = AxiomSet::from_text(name, &set.dump(), set.logic_home, set.signature).unwrap();
            assert_eq!(again.equations, set.equations, "{name}");
        }
    }
}
