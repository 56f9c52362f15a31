use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use afford_kb::odl::{parse_document, parse_scenario, ParseError, Scenario};
use afford_kb::reasoner::{self, Reasoner, THING};
use afford_kb::selection::{ProviderSelector, SelectionError};
use afford_kb::sim::{self, tagged_kb, Mission, PathPlanner, WorldState};
use afford_kb::{KnowledgeBase, TermKind};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

#[derive(Parser)]
#[command(name = "afford-kb", version, about = "Affordance knowledge base: check, classify, query and simulate")]
struct Cli {
    /// Reasoning strategy.
    #[arg(long, global = true, default_value = "el-saturation")]
    reasoner: String,
    /// Path planning strategy.
    #[arg(long, global = true, default_value = "bfs")]
    planner: String,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an ontology and print a summary.
    Check { ontology: PathBuf },
    /// Print entailed subsumptions and class memberships.
    Classify { ontology: PathBuf },
    /// Rank the scenario's objects that provide a function.
    Query(QueryArgs),
    /// Run the fetch mission of a scenario.
    Simulate { ontology: PathBuf, scenario: PathBuf },
}

#[derive(Args)]
struct QueryArgs {
    ontology: PathBuf,
    scenario: PathBuf,
    /// `provide <FunctionClass>`, as an alternative to `--function`.
    words: Vec<String>,
    #[arg(long)]
    function: Option<String>,
}

/// Failure with an exit code: 1 for domain failures, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let mut stdout = io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report_error(&f.message);
            ExitCode::from(f.code)
        }
    }
}

fn report_error(message: &str) {
    let color = match std::env::var("AFFORD_KB_COLOR").as_deref() {
        Ok("never") => false,
        _ => io::stderr().is_terminal(),
    };
    if color {
        eprintln!("\x1b[1;31merror\x1b[0m: {message}");
    } else {
        eprintln!("error: {message}");
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: ParseError) -> Failure {
    Failure::usage(format!("{}:{e}", path.display()))
}

fn load_kb(path: &Path) -> Result<KnowledgeBase, Failure> {
    parse_document(&read(path)?).map_err(|e| located(path, e))
}

fn load_scenario(path: &Path) -> Result<Scenario, Failure> {
    let scenario = parse_scenario(&read(path)?).map_err(|e| located(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(scenario.resolve_forecast_path(base))
}

fn plural(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}

fn to_json(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli, out: &mut String) -> Result<(), Failure> {
    let reasoners = reasoner::registry();
    let reasoner = reasoners.get(&cli.reasoner).ok_or_else(|| {
        Failure::usage(format!(
            "unknown reasoner {} (available: {})",
            cli.reasoner,
            reasoners.names().collect::<Vec<_>>().join(", ")
        ))
    })?;
    let planners = sim::planners();
    let planner = planners.get(&cli.planner).ok_or_else(|| {
        Failure::usage(format!(
            "unknown planner {} (available: {})",
            cli.planner,
            planners.names().collect::<Vec<_>>().join(", ")
        ))
    })?;
    match &cli.command {
        Command::Check { ontology } => check(&load_kb(ontology)?, cli.json, out),
        Command::Classify { ontology } => classify(&load_kb(ontology)?, &*reasoner, cli.json, out),
        Command::Query(args) => {
            let function = query_function(args)?;
            let kb = load_kb(&args.ontology)?;
            let scenario = load_scenario(&args.scenario)?;
            query(&kb, &scenario, &function, &*reasoner, cli.json, out)
        }
        Command::Simulate { ontology, scenario } => {
            let kb = load_kb(ontology)?;
            let scenario = load_scenario(scenario)?;
            simulate(&kb, &scenario, &*reasoner, &*planner, cli.json, out)
        }
    }
}

fn query_function(args: &QueryArgs) -> Result<String, Failure> {
    let positional = match args.words.as_slice() {
        [] => None,
        [verb, f] if verb == "provide" => Some(f.clone()),
        _ => return Err(Failure::usage("expected `provide <FunctionClass>` after the scenario")),
    };
    match (positional, &args.function) {
        (Some(f), None) => Ok(f),
        (None, Some(f)) => Ok(f.clone()),
        (Some(a), Some(b)) if a == *b => Ok(a),
        (Some(_), Some(_)) => Err(Failure::usage("conflicting function classes given")),
        (None, None) => Err(Failure::usage("query needs a function class: `provide <F>` or `--function <F>`")),
    }
}

fn check(kb: &KnowledgeBase, json: bool, out: &mut String) -> Result<(), Failure> {
    let classes = kb.count(TermKind::Class);
    let roles = kb.count(TermKind::Role);
    let axioms = kb.tbox().len();
    if json {
        out.push_str(&to_json(json!({
            "classes": classes,
            "roles": roles,
            "individuals": kb.individuals().filter(|i| !i.is_generated()).count(),
            "axioms": axioms,
            "assertions": kb.abox().len(),
        })));
    } else {
        out.push_str(&format!(
            "ok: {}, {}, {}\n",
            plural(classes, "class", "classes"),
            plural(roles, "role", "roles"),
            plural(axioms, "axiom", "axioms")
        ));
    }
    Ok(())
}

fn classify(kb: &KnowledgeBase, reasoner: &dyn Reasoner, json: bool, out: &mut String) -> Result<(), Failure> {
    let failed = |e: reasoner::ReasonerError| Failure::domain(e.to_string());
    let taxonomy = reasoner.classify(kb).map_err(failed)?;
    let inferred = reasoner.materialize(kb).map_err(failed)?;
    let subsumptions: Vec<_> =
        taxonomy.pairs.iter().filter(|(a, b)| a != b && b.as_str() != THING && a.as_str() != THING).collect();
    let memberships: Vec<_> =
        inferred.class_memberships.iter().filter(|(i, c)| !i.is_generated() && c.as_str() != THING).collect();
    if json {
        out.push_str(&to_json(json!({ "subsumptions": subsumptions, "memberships": memberships })));
    } else {
        for (a, b) in subsumptions {
            out.push_str(&format!("{a} <: {b}\n"));
        }
        for (i, c) in memberships {
            out.push_str(&format!("{i} : {c}\n"));
        }
    }
    Ok(())
}

fn query(
    kb: &KnowledgeBase,
    scenario: &Scenario,
    function: &str,
    reasoner: &dyn Reasoner,
    json: bool,
    out: &mut String,
) -> Result<(), Failure> {
    let world = WorldState::from_scenario(scenario);
    let kb = tagged_kb(kb, &world).map_err(|e| Failure::usage(e.to_string()))?;
    match ProviderSelector::new(reasoner).select(&kb, &world, function) {
        Ok(result) if json => out.push_str(&to_json(json!(result))),
        Ok(result) => out.push_str(&result.to_string()),
        Err(e @ SelectionError::NoProvider { unavailable_affording, .. }) => {
            return Err(Failure::domain(format!("{e} ({unavailable_affording} unavailable)")))
        }
        Err(SelectionError::Reasoner(reasoner::ReasonerError::Kb(e))) => return Err(Failure::usage(e.to_string())),
        Err(e) => return Err(Failure::domain(e.to_string())),
    }
    Ok(())
}

fn simulate(
    kb: &KnowledgeBase,
    scenario: &Scenario,
    reasoner: &dyn Reasoner,
    planner: &dyn PathPlanner,
    json: bool,
    out: &mut String,
) -> Result<(), Failure> {
    let run = Mission::new(reasoner, planner).run(kb, scenario).map_err(|e| Failure::usage(e.to_string()))?;
    let report = run.report;
    if json {
        out.push_str(&to_json(json!(report)));
    } else {
        out.push_str(&report.to_string());
    }
    if report.is_completed() {
        Ok(())
    } else {
        Err(Failure::domain("mission failed"))
    }
}
