//! Acceptance suite: one pass/fail line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use scl_core::axioms::{
    check_equation, rewrite_search, soundness_check, verify_trace, AxiomSet, EquationVerdict, SearchOutcome,
};
use scl_core::independence::{independence_report, interpret, Interpretation, Value};
use scl_core::term::{enumerate_terms, parse_equation, substitute, Signature};
use scl_core::valuation::{
    agree_observably, enumerate_valuations, evaluate, CounterModel, EvalRecord, ReactiveValuation,
    RegisterModel,
};
use scl_core::{equal, normalize, parse, se, Atom, EvalTree, Logic, Term};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn ab() -> Vec<Atom> {
    vec![Atom::new("a"), Atom::new("b")]
}

fn t(src: &str) -> Term {
    parse(src).unwrap()
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn perl_run() -> Outcome {
    let counter = ReactiveValuation::Counter(CounterModel::new(0).unwrap());
    let first = t("(('x=x+1') && !('x=x+1')) || 'x==2'");
    let second = t("(!('x=x+1') && ('x=x+1')) || 'x==2'");
    let start = Instant::now();
    let r1 = evaluate(&first, &counter).unwrap().result;
    let r2 = evaluate(&second, &counter).unwrap().result;
    let took = start.elapsed();
    outcome(
        r1 && !r2 && took < Duration::from_millis(1),
        format!("first {r1}, second {r2}, {}", ms(took)),
    )
}

fn register_witness() -> Outcome {
    let regs = ReactiveValuation::Registers(RegisterModel::new(vec![false]).unwrap());
    let once = t("'eq:1:F' && 'set:1:T'");
    let twice = Term::and(once.clone(), once.clone());
    let start = Instant::now();
    let r1 = evaluate(&once, &regs).unwrap().result;
    let r2 = evaluate(&twice, &regs).unwrap().result;
    let took = start.elapsed();
    outcome(
        r1 && !r2 && took < Duration::from_millis(1),
        format!("t = {r1}, t && t = {r2}, {}", ms(took)),
    )
}

fn soundness_sweeps() -> Outcome {
    let sweeps = [
        ("cp", Logic::Fr),
        ("cprp", Logic::Rp),
        ("cpcr", Logic::Cr),
        ("cpmem", Logic::Mem),
        ("cpstat", Logic::St),
        ("cpstat-star", Logic::St),
        ("eqfscl", Logic::Fr),
        ("eqmscl", Logic::Mem),
        ("eqsscl", Logic::St),
    ];
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut instances = 0;
    for (name, logic) in sweeps {
        let report = soundness_check(&AxiomSet::builtin(name).unwrap(), logic, &ab(), 3);
        instances += report.instances();
        for e in report.failing() {
            failures.push(format!("{name}/{logic}: {}", e.name));
        }
    }
    let took = start.elapsed();
    outcome(
        failures.is_empty() && took < Duration::from_secs(300),
        format!("{instances} instances, failures {failures:?}, {:.1} s", took.as_secs_f64()),
    )
}

fn separation_witnesses() -> Outcome {
    type Case<'a> = (&'a str, &'a str, &'a [(Logic, bool)]);
    let cases: &[Case] = &[
        (
            "a && a",
            "a",
            &[
                (Logic::Fr, false),
                (Logic::Rp, false),
                (Logic::Cr, true),
                (Logic::Mem, true),
                (Logic::St, true),
            ],
        ),
        ("a && b", "b && a", &[(Logic::Mem, false), (Logic::St, true)]),
        ("a && F", "F", &[(Logic::Mem, false), (Logic::St, true)]),
        ("!!a", "a", &[(Logic::Fr, true)]),
    ];
    let mut wrong = Vec::new();
    let mut checked = 0;
    for (l, r, expect) in cases {
        for &(logic, want) in *expect {
            checked += 1;
            if equal(&t(l), &t(r), logic).unwrap() != want {
                wrong.push(format!("{l} = {r} under {logic}"));
            }
        }
    }
    outcome(wrong.is_empty(), format!("{checked} verdicts, wrong {wrong:?}"))
}

/// Class index of every term under `logic`.
fn classes(terms: &[Term], logic: Logic) -> Vec<usize> {
    let mut ids: HashMap<EvalTree, usize> = HashMap::new();
    terms
        .iter()
        .map(|t| {
            let n = ids.len();
            *ids.entry(normalize(&se(t).unwrap(), logic)).or_insert(n)
        })
        .collect()
}

fn refinement_chain() -> Outcome {
    let start = Instant::now();
    let terms = enumerate_terms(&ab(), 5, Signature::Scl);
    let per_logic: Vec<Vec<usize>> = Logic::ALL.iter().map(|&l| classes(&terms, l)).collect();
    let mut violations = 0u64;
    for (i, weak) in per_logic.iter().enumerate() {
        for strong in &per_logic[i + 1..] {
            // equal under the weaker logic must imply equal under the stronger
            let mut image: HashMap<usize, usize> = HashMap::new();
            for (w, s) in weak.iter().zip(strong) {
                if *image.entry(*w).or_insert(*s) != *s {
                    violations += 1;
                }
            }
        }
    }
    let sizes: Vec<usize> = per_logic.iter().map(|c| c.iter().max().unwrap() + 1).collect();
    let took = start.elapsed();
    outcome(
        violations == 0 && took < Duration::from_secs(600),
        format!(
            "{} terms, classes fr..st {sizes:?}, {violations} violations, {:.1} s",
            terms.len(),
            took.as_secs_f64()
        ),
    )
}

/// For every term, its observable behaviour on each valuation.
fn fingerprints(terms: &[Term], vals: &[ReactiveValuation]) -> Vec<Vec<EvalRecord>> {
    terms
        .par_iter()
        .map(|t| vals.iter().map(|v| evaluate(t, v).unwrap()).collect())
        .collect()
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let terms = enumerate_terms(&ab(), 4, Signature::Scl);
    let mut report = Vec::new();
    let mut discrepancies = 0u64;
    for logic in [Logic::Fr, Logic::Mem, Logic::St] {
        let vals = enumerate_valuations(&ab(), logic, 3, 3).unwrap();
        let prints = fingerprints(&terms, &vals);
        let cls = classes(&terms, logic);
        let mut bad = 0u64;
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                let same = prints[i]
                    .iter()
                    .zip(&prints[j])
                    .all(|(x, y)| x.result == y.result && x.final_state == y.final_state);
                if same != (cls[i] == cls[j]) {
                    bad += 1;
                }
            }
        }
        report.push(format!("{logic}: {} valuations, {bad} off", vals.len()));
        discrepancies += bad;
    }
    for logic in [Logic::Rp, Logic::Cr] {
        let vals = enumerate_valuations(&ab(), logic, 3, 3).unwrap();
        let cls = classes(&terms, logic);
        let pairs: Vec<(usize, usize)> = (0..terms.len())
            .flat_map(|i| (i + 1..terms.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| cls[i] == cls[j])
            .collect();
        let bad = pairs
            .par_iter()
            .filter(|&&(i, j)| {
                !vals
                    .iter()
                    .all(|v| agree_observably(&terms[i], &terms[j], v).unwrap())
            })
            .count() as u64;
        report.push(format!("{logic}: {} automata, {bad} off", vals.len()));
        discrepancies += bad;
    }
    outcome(
        discrepancies == 0,
        format!("{} terms; {}; {:.1} s", terms.len(), report.join("; "), start.elapsed().as_secs_f64()),
    )
}

fn independence_models() -> Outcome {
    let set = AxiomSet::builtin("cpstat-star").unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    for m in Interpretation::ALL {
        let report = independence_report(m, &set, 3).unwrap();
        ok &= report.separates();
        notes.push(format!("{}: {:?}", m.index(), report.violated()));
    }
    let m4 = Interpretation::model(4).unwrap();
    let m5 = Interpretation::model(5).unwrap();
    let int = |n: i64| Value::Int(n.into());
    let m4_lhs = interpret(&t("ite(ite(a, F, T), F, T)"), m4).unwrap();
    let m4_rhs = interpret(&t("ite(a, ite(F, F, T), ite(T, F, T))"), m4).unwrap();
    let m5_lhs = interpret(&t("ite(a, T, F)"), m5).unwrap();
    let m5_rhs = interpret(&t("ite(a, ite(a, T, F), F)"), m5).unwrap();
    ok &= m4_lhs == int(1) && m4_rhs == int(2) && m5_lhs == int(2) && m5_rhs == int(0);
    outcome(
        ok,
        format!(
            "violated {}; model 4: {m4_lhs} vs {m4_rhs}; model 5: {m5_lhs} vs {m5_rhs}",
            notes.join(", ")
        ),
    )
}

fn derived_laws() -> Outcome {
    let laws = [
        ("E1 : X && F = !X && F", Logic::Fr),
        ("E2 : (X || T) && Y = (X && F) || Y", Logic::Fr),
        ("E3 : X || !X = X || T", Logic::Mem),
        ("E4 : X && Y = X && (!X || Y)", Logic::Mem),
        ("E5 : X && (Y && X) = X && Y", Logic::Mem),
        ("E6 : X && !X = F", Logic::St),
        ("E7 : X && (Y && !X) = F", Logic::St),
        ("E8 : X && Y = Y && X", Logic::St),
        ("E9 : a && a = a", Logic::Cr),
        ("E10 : a || !a = a || T", Logic::Cr),
    ];
    let start = Instant::now();
    let verdicts: Vec<(String, EquationVerdict)> = laws
        .par_iter()
        .map(|(src, logic)| {
            let e = parse_equation(src).unwrap();
            (format!("{} [{logic}]", e.lhs.to_string() + " = " + &e.rhs.to_string()), check_equation(&e, *logic, &ab(), 4))
        })
        .collect();
    let failed: Vec<&String> = verdicts.iter().filter(|(_, v)| !v.is_valid_on_tested()).map(|(n, _)| n).collect();
    let instances: u64 = verdicts
        .iter()
        .map(|(_, v)| match v {
            EquationVerdict::ValidOnTested { instances } => *instances,
            EquationVerdict::Counterexample(_) => 0,
        })
        .sum();
    outcome(
        failed.is_empty(),
        format!(
            "{} laws, {instances} instances, counterexamples for {failed:?}, {:.1} s",
            laws.len(),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn prover_reproduction() -> Outcome {
    let set = AxiomSet::builtin("eqmscl").unwrap();
    let eqfscl = AxiomSet::builtin("eqfscl").unwrap();
    let binding: BTreeMap<_, _> = [("X", "a"), ("Y", "b"), ("Z", "c")]
        .into_iter()
        .map(|(v, a)| (scl_core::Var::new(v), Term::atom(a)))
        .collect();
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["SCL8", "SCL9", "SCL10"] {
        let e = eqfscl.equations.iter().find(|e| e.name == name).unwrap();
        let (lhs, rhs) = substitute(e, &binding).unwrap();
        let start = Instant::now();
        let found = rewrite_search(&lhs, &rhs, &set, 12, 200_000);
        let took = start.elapsed();
        match found {
            SearchOutcome::Found { trace, outline } => {
                let verified = verify_trace(&trace, &set);
                ok &= verified && took < Duration::from_secs(60);
                notes.push(format!(
                    "{name}: {} macro / {} axiom steps, verified {verified}, {}",
                    outline.len(),
                    trace.len(),
                    ms(took)
                ));
            }
            other => {
                ok = false;
                notes.push(format!("{name}: {other:?}"));
            }
        }
    }
    outcome(ok, notes.join("; "))
}

/// Classical value of a closed term under a total assignment.
fn truth(t: &Term, env: &BTreeMap<Atom, bool>) -> bool {
    match t {
        Term::True => true,
        Term::False => false,
        Term::Atom(a) => env[a],
        Term::Not(x) => !truth(x, env),
        Term::And(x, y) => truth(x, env) && truth(y, env),
        Term::Or(x, y) => truth(x, env) || truth(y, env),
        Term::Cond {
            then,
            guard,
            otherwise,
        } => {
            if truth(guard, env) {
                truth(then, env)
            } else {
                truth(otherwise, env)
            }
        }
        Term::Var(_) => unreachable!("closed terms only"),
    }
}

fn static_truth_tables() -> Outcome {
    let start = Instant::now();
    let terms = enumerate_terms(&ab(), 5, Signature::Scl);
    let envs: Vec<BTreeMap<Atom, bool>> = (0..4)
        .map(|m| [(Atom::new("a"), m & 1 == 1), (Atom::new("b"), m & 2 == 2)].into_iter().collect())
        .collect();
    let tables: Vec<u8> = terms
        .iter()
        .map(|t| envs.iter().enumerate().fold(0, |acc, (i, e)| acc | (truth(t, e) as u8) << i))
        .collect();
    let cls = classes(&terms, Logic::St);
    let mut discrepancies = 0u64;
    for i in 0..terms.len() {
        for j in i..terms.len() {
            if (tables[i] == tables[j]) != (cls[i] == cls[j]) {
                discrepancies += 1;
            }
        }
    }
    outcome(
        discrepancies == 0,
        format!(
            "{} terms, {} pairs, {discrepancies} discrepancies, {:.1} s",
            terms.len(),
            terms.len() * (terms.len() + 1) / 2,
            start.elapsed().as_secs_f64()
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("counter model program run", perl_run),
        ("register witness", register_witness),
        ("soundness sweeps", soundness_sweeps),
        ("separation witnesses", separation_witnesses),
        ("refinement chain", refinement_chain),
        ("valuation oracle agreement", oracle_agreement),
        ("independence models", independence_models),
        ("derived laws", derived_laws),
        ("prover reproduction", prover_reproduction),
        ("static equals truth tables", static_truth_tables),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {}  {}",
            i + 1,
            name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
