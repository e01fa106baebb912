//! The `scl` command line.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict or a
//! counterexample, 2 for usage and input errors.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use scl_core::axioms::{
    rewrite_search, soundness_check, AxiomSet, Prover, SearchOptions, SearchOutcome, SoundnessReport,
};
use scl_core::independence::{independence_report, Interpretation};
use scl_core::term::{enumerate_terms, Signature};
use scl_core::tree::{normalize, se, tree_stats, Logic};
use scl_core::valuation::{evaluate, ReactiveValuation};
use scl_core::{parse, Atom, Term};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "scl", version, about = "Short-circuit logic workbench")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and print it back in canonical form.
    Parse { term: String },
    /// Print the evaluation tree of a closed term, normalized for a logic.
    Tree {
        #[arg(long, default_value = "fr")]
        logic: Logic,
        term: String,
    },
    /// Decide whether two closed terms are equal in a logic.
    Equiv {
        #[arg(long, default_value = "fr")]
        logic: Logic,
        lhs: String,
        rhs: String,
    },
    /// Evaluate a closed term against a reactive valuation.
    Eval {
        /// `registers:n[:T|F...]`, `counter[:init]` or `automaton:<file.json>`.
        #[arg(long)]
        model: String,
        term: String,
        /// Print the atom queries and replies.
        #[arg(long)]
        trace: bool,
    },
    /// Inspect built-in axiom sets.
    #[command(subcommand)]
    Axioms(AxiomsCommand),
    /// Search for an equational proof of `lhs = rhs`.
    Prove(ProveArgs),
    /// Report which CPstat* axioms an independence model satisfies.
    Independence {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        model: u8,
        #[arg(long, default_value = "cpstat-star")]
        set: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// List all closed terms up to a size.
    Enumerate {
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        atoms: Vec<String>,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value = "scl")]
        signature: Signature,
    },
}

#[derive(Subcommand, Debug)]
enum AxiomsCommand {
    /// Check every equation of a set on all closed instances up to a size.
    Check {
        #[arg(long)]
        set: String,
        /// Defaults to the logic the set is meant for.
        #[arg(long)]
        logic: Option<Logic>,
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        atoms: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Print the equations of a set.
    Dump {
        #[arg(long)]
        set: String,
    },
    /// List the built-in set names.
    List,
}

#[derive(Args, Debug)]
struct ProveArgs {
    #[arg(long)]
    set: String,
    lhs: String,
    rhs: String,
    #[arg(long, default_value_t = 12)]
    depth: usize,
    #[arg(long, default_value_t = 200_000)]
    max_terms: usize,
    /// Extra nodes allowed beyond the larger side.
    #[arg(long, default_value_t = 10)]
    slack: usize,
    /// Also try rules whose source is a bare variable.
    #[arg(long)]
    expansions: bool,
    /// Show lemma applications as single steps instead of expanding them.
    #[arg(long)]
    outline: bool,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(i32, String), Failure>;

/// Run the command line given by `args` (without the program name).
pub fn run<I, S>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("scl")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let json = cli.json;
    match dispatch(cli) {
        Ok(out) => out,
        Err(Failure(msg)) if json => (EXIT_USAGE, pretty(&json!({ "error": msg }))),
        Err(Failure(msg)) => (EXIT_USAGE, format!("error: {msg}\n")),
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Parse { term } => cmd_parse(&term, json),
        Command::Tree { logic, term } => cmd_tree(&term, logic, json),
        Command::Equiv { logic, lhs, rhs } => cmd_equiv(&lhs, &rhs, logic, json),
        Command::Eval { model, term, trace } => cmd_eval(&model, &term, trace, json),
        Command::Axioms(AxiomsCommand::Check {
            set,
            logic,
            atoms,
            max_size,
        }) => cmd_check(&set, logic, &atoms, max_size, json),
        Command::Axioms(AxiomsCommand::Dump { set }) => cmd_dump(&set, json),
        Command::Axioms(AxiomsCommand::List) => cmd_list(json),
        Command::Prove(args) => cmd_prove(&args, json),
        Command::Independence { model, set, max_size } => cmd_independence(model, &set, max_size, json),
        Command::Enumerate {
            atoms,
            max_size,
            signature,
        } => cmd_enumerate(&atoms, max_size, signature, json),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn closed(src: &str) -> Result<Term, Failure> {
    let t = parse(src)?;
    if !t.is_closed() {
        return Err(Failure(format!("term is not closed: {t}")));
    }
    Ok(t)
}

fn builtin(name: &str) -> Result<AxiomSet, Failure> {
    AxiomSet::builtin(name).ok_or_else(|| {
        Failure(format!(
            "unknown axiom set `{name}` (known: {})",
            AxiomSet::builtin_names().join(", ")
        ))
    })
}

fn atoms(names: &[String]) -> Result<Vec<Atom>, Failure> {
    names
        .iter()
        .map(|n| match parse(n)? {
            Term::Atom(a) => Ok(a),
            other => Err(Failure(format!("not an atom: {other}"))),
        })
        .collect()
}

fn cmd_parse(src: &str, json: bool) -> Outcome {
    let t = parse(src)?;
    let out = if json {
        pretty(&json!({
            "term": t,
            "size": t.size(),
            "closed": t.is_closed(),
            "atoms": t.atoms(),
            "vars": t.vars(),
        }))
    } else {
        format!("{t}\n")
    };
    Ok((EXIT_OK, out))
}

fn cmd_tree(src: &str, logic: Logic, json: bool) -> Outcome {
    let t = closed(src)?;
    let tree = normalize(&se(&t)?, logic);
    let stats = tree_stats(&tree);
    let out = if json {
        pretty(&json!({
            "term": t,
            "logic": logic,
            "tree": tree,
            "rendered": tree.to_string(),
            "size": stats.size,
            "depth": stats.depth,
            "atoms": stats.atoms,
        }))
    } else {
        format!("{tree}\n")
    };
    Ok((EXIT_OK, out))
}

fn cmd_equiv(l: &str, r: &str, logic: Logic, json: bool) -> Outcome {
    let (lhs, rhs) = (closed(l)?, closed(r)?);
    let lt = normalize(&se(&lhs)?, logic);
    let rt = normalize(&se(&rhs)?, logic);
    let equal = lt == rt;
    let verdict = if equal { "equal" } else { "not-equal" };
    let out = if json {
        pretty(&json!({
            "logic": logic,
            "lhs": lhs,
            "rhs": rhs,
            "verdict": verdict,
            "lhs_tree": lt.to_string(),
            "rhs_tree": rt.to_string(),
        }))
    } else {
        format!("{verdict}\n")
    };
    Ok((if equal { EXIT_OK } else { EXIT_FALSE }, out))
}

fn cmd_eval(model: &str, src: &str, show_trace: bool, json: bool) -> Outcome {
    let v = ReactiveValuation::from_spec(model)?;
    let t = closed(src)?;
    let record = evaluate(&t, &v)?;
    let code = if record.result { EXIT_OK } else { EXIT_FALSE };
    if json {
        let mut body = record.to_json(&v);
        body["term"] = json!(t);
        body["model"] = json!(model);
        return Ok((code, pretty(&body)));
    }
    let mut out = String::new();
    if show_trace {
        for (atom, reply) in &record.trace {
            writeln!(out, "{atom} -> {}", if *reply { "T" } else { "F" }).unwrap();
        }
    }
    writeln!(out, "{}", record.result).unwrap();
    Ok((code, out))
}

fn cmd_check(name: &str, logic: Option<Logic>, atom_names: &[String], max_size: usize, json: bool) -> Outcome {
    let set = builtin(name)?;
    let logic = logic.unwrap_or(set.logic_home);
    let report = soundness_check(&set, logic, &atoms(atom_names)?, max_size);
    let code = if report.passed() { EXIT_OK } else { EXIT_FALSE };
    let out = if json {
        pretty(&serde_json::to_value(&report)?)
    } else {
        render_soundness(&report)
    };
    Ok((code, out))
}

fn render_soundness(report: &SoundnessReport) -> String {
    let mut out = String::new();
    for e in &report.equations {
        if e.failures == 0 {
            writeln!(out, "{:<12} ok      {} instances", e.name, e.instances).unwrap();
        } else {
            writeln!(out, "{:<12} FAILED  {} of {} instances", e.name, e.failures, e.instances).unwrap();
            if let Some(w) = e.witnesses.first() {
                writeln!(out, "  {} != {}", w.lhs, w.rhs).unwrap();
            }
        }
    }
    writeln!(
        out,
        "{} under {}: {} ({} instances, {} failures)",
        report.set,
        report.logic,
        if report.passed() { "sound" } else { "unsound" },
        report.instances(),
        report.failures()
    )
    .unwrap();
    out
}

fn cmd_dump(name: &str, json: bool) -> Outcome {
    let set = builtin(name)?;
    let out = if json {
        let equations: Vec<Value> = set
            .equations
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "lhs": e.lhs,
                    "rhs": e.rhs,
                    "scheme_atom": e.scheme_atom,
                })
            })
            .collect();
        pretty(&json!({
            "set": set.name,
            "logic": set.logic_home,
            "signature": set.signature,
            "equations": equations,
        }))
    } else {
        set.dump()
    };
    Ok((EXIT_OK, out))
}

fn cmd_list(json: bool) -> Outcome {
    let names = AxiomSet::builtin_names();
    let out = if json {
        pretty(&json!(names))
    } else {
        names.iter().map(|n| format!("{n}\n")).collect()
    };
    Ok((EXIT_OK, out))
}

fn cmd_prove(args: &ProveArgs, json: bool) -> Outcome {
    let set = builtin(&args.set)?;
    let (lhs, rhs) = (parse(&args.lhs)?, parse(&args.rhs)?);
    let outcome = if args.expansions || args.slack != SearchOptions::default().size_slack {
        let opts = SearchOptions {
            max_depth: args.depth,
            max_terms: args.max_terms,
            size_slack: args.slack,
            expansions: args.expansions,
            ..SearchOptions::default()
        };
        Prover::new(&set, &opts).search(&lhs, &rhs, &opts)
    } else {
        rewrite_search(&lhs, &rhs, &set, args.depth, args.max_terms)
    };
    let (code, verdict, detail) = match &outcome {
        SearchOutcome::Found { trace, outline } => {
            let shown = if args.outline { outline } else { trace };
            (EXIT_OK, "proved", Some(shown))
        }
        SearchOutcome::Refuted => (EXIT_FALSE, "refuted", None),
        SearchOutcome::NotFound { .. } => (EXIT_FALSE, "not-found", None),
        SearchOutcome::BoundExhausted { .. } => (EXIT_FALSE, "inconclusive", None),
    };
    if json {
        let mut body = json!({
            "set": set.name,
            "lhs": lhs,
            "rhs": rhs,
            "verdict": verdict,
        });
        match &outcome {
            SearchOutcome::Found { .. } => body["proof"] = serde_json::to_value(detail.unwrap())?,
            SearchOutcome::NotFound { explored } => body["explored"] = json!(explored),
            SearchOutcome::BoundExhausted { explored, depth } => {
                body["explored"] = json!(explored);
                body["depth"] = json!(depth);
            }
            SearchOutcome::Refuted => body["logic"] = json!(set.logic_home),
        }
        return Ok((code, pretty(&body)));
    }
    let mut out = String::new();
    match &outcome {
        SearchOutcome::Found { .. } => {
            write!(out, "{}", detail.unwrap()).unwrap();
            writeln!(out, "proved in {} steps", detail.unwrap().len()).unwrap();
        }
        SearchOutcome::Refuted => {
            writeln!(out, "refuted: the sides differ under {}", set.logic_home).unwrap();
        }
        SearchOutcome::NotFound { explored } => {
            writeln!(out, "not found: search space exhausted after {explored} terms").unwrap();
        }
        SearchOutcome::BoundExhausted { explored, depth } => {
            writeln!(out, "inconclusive: bounds reached at depth {depth} after {explored} terms").unwrap();
        }
    }
    Ok((code, out))
}

fn cmd_independence(model: u8, set_name: &str, max_size: usize, json: bool) -> Outcome {
    let m = Interpretation::model(model).ok_or_else(|| Failure(format!("no model {model}")))?;
    let set = builtin(set_name)?;
    let report = independence_report(m, &set, max_size)?;
    let code = if report.separates() { EXIT_OK } else { EXIT_FALSE };
    if json {
        return Ok((code, pretty(&serde_json::to_value(&report)?)));
    }
    let mut out = String::new();
    writeln!(out, "model {} ({}) on {}", m.index(), m.domain(), report.set).unwrap();
    for a in &report.axioms {
        match &a.status {
            scl_core::independence::AxiomStatus::Satisfied { instances } => {
                writeln!(out, "{:<8} satisfied  {instances} instances", a.axiom).unwrap();
            }
            scl_core::independence::AxiomStatus::Violated { witness, .. } => {
                writeln!(
                    out,
                    "{:<8} violated   {} = {} but {} != {}",
                    a.axiom, witness.lhs, witness.rhs, witness.lhs_value, witness.rhs_value
                )
                .unwrap();
            }
        }
    }
    Ok((code, out))
}

fn cmd_enumerate(atom_names: &[String], max_size: usize, sig: Signature, json: bool) -> Outcome {
    if max_size > 7 {
        return Err(Failure(format!("--max-size {max_size} is too large (at most 7)")));
    }
    let terms = enumerate_terms(&atoms(atom_names)?, max_size, sig);
    let out = if json {
        pretty(&json!({
            "signature": sig,
            "max_size": max_size,
            "count": terms.len(),
            "terms": terms,
        }))
    } else {
        terms.iter().map(|t| format!("{t}\n")).collect()
    };
    Ok((EXIT_OK, out))
}
