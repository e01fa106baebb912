use proptest::prelude::*;
use scl_core::term::{count_terms, desugar, dual, enumerate_terms, express_conditional, parse_equation, Signature};
use scl_core::{equal, parse, render, se, Atom, Logic, Term};

fn ab() -> Vec<Atom> {
    vec![Atom::new("a"), Atom::new("b")]
}

fn leaf() -> impl Strategy<Value = Term> {
    prop_oneof![
        Just(Term::True),
        Just(Term::False),
        prop::sample::select(vec!["a", "b", "x1", "set:1:T", "n=n+1", "x==2", "eq:2:F"]).prop_map(Term::atom),
        prop::sample::select(vec!["X", "Y", "Z", "U2"]).prop_map(Term::var),
    ]
}

fn term(with_cond: bool) -> impl Strategy<Value = Term> {
    leaf().prop_recursive(6, 48, 3, move |inner| {
        let base = prop_oneof![
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::or(l, r)),
        ];
        if with_cond {
            prop_oneof![
                3 => base,
                1 => (inner.clone(), inner.clone(), inner).prop_map(|(c, t, e)| Term::ite(c, t, e)),
            ]
            .boxed()
        } else {
            base.boxed()
        }
    })
}

proptest! {
    #[test]
    fn render_round_trips(t in term(true)) {
        prop_assert_eq!(parse(&render(&t)).unwrap(), t);
    }

    #[test]
    fn dual_is_an_involution(t in term(false)) {
        let d = dual(&t).unwrap();
        prop_assert_eq!(dual(&d).unwrap(), t);
    }

    #[test]
    fn size_counts_nodes(t in term(true)) {
        prop_assert_eq!(t.size(), t.positions().len());
    }

    #[test]
    fn whitespace_and_redundant_parens_are_ignored(t in term(true)) {
        let spaced = render(&t).replace(' ', "  ");
        prop_assert_eq!(parse(&format!("( {spaced} )")).unwrap(), t);
    }
}

#[test]
fn enumeration_matches_counts() {
    for sig in [Signature::Scl, Signature::Conditional, Signature::Full] {
        for n in 0..=5 {
            let terms = enumerate_terms(&ab(), n, sig);
            assert_eq!(terms.len() as u128, count_terms(&ab(), n, sig), "{sig} {n}");
            let distinct: std::collections::HashSet<&Term> = terms.iter().collect();
            assert_eq!(distinct.len(), terms.len());
            assert!(terms.iter().all(|t| t.size() <= n && t.is_closed()));
        }
    }
    // 4 leaves, 4 negations, then 4 double negations plus 2 * 16 binary terms
    assert_eq!(count_terms(&ab(), 3, Signature::Scl), 4 + 4 + 36);
}

#[test]
fn desugar_preserves_evaluation_trees() {
    let terms = enumerate_terms(&ab(), 7, Signature::Full);
    for t in &terms {
        let d = desugar(t);
        assert!(d.children().len() <= 3);
        assert_eq!(se(t).unwrap(), se(&d).unwrap(), "{t}");
    }
}

#[test]
fn express_conditional_is_a_mem_identity_but_not_fr() {
    let terms = enumerate_terms(&ab(), 6, Signature::Full);
    let mut fr_witness = None;
    for t in &terms {
        let e = express_conditional(t);
        assert!(!e.has_cond());
        assert!(equal(t, &e, Logic::Mem).unwrap(), "{t}");
        if fr_witness.is_none() && !equal(t, &e, Logic::Fr).unwrap() {
            fr_witness = Some(t.clone());
        }
    }
    // the first witness duplicates the guard `a`
    assert_eq!(fr_witness, Some(parse("ite(a, T, T)").unwrap()));
}

#[test]
fn quoted_atoms_from_side_effect_programs() {
    let t = parse("('x=x+1' && !'x=x+1') || 'x==2'").unwrap();
    assert_eq!(t.atoms().len(), 2);
    assert_eq!(render(&t), "'x=x+1' && !'x=x+1' || 'x==2'");
    assert_eq!(parse("'a'").unwrap(), parse("a").unwrap());
}

#[test]
fn equations_parse_with_schemes_and_primes() {
    let e = parse_equation("CSCL1[a] : a && a = a").unwrap();
    assert_eq!(e.scheme_atom, Some(Atom::new("a")));
    let e = parse_equation("Eq8' : (X || Y) && Z = (X || (Y && Z)) && (!X || Z)").unwrap();
    assert_eq!(e.name, "Eq8'");
    assert_eq!(e.dual().unwrap().name, "Eq8''");
}

#[test]
fn parse_errors_are_reported() {
    for bad in ["", "a &&", "ite(a, b)", "(a", "a b", "!", "T F", "ite(a,b,c,d)", "'unterminated"] {
        assert!(parse(bad).is_err(), "{bad:?}");
    }
}
