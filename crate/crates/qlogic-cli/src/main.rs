//! `qlogic`: evaluate predicates over traces, check theories, search for
//! countermodels, compute GSLT, run the bundled demos and query
//! semitopologies.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand};
use qlogic::checker::{check_theory, entails, gslt, valuation_space, CheckReport, SearchBudget, Theory, Verdict};
use qlogic::engine::{denote, direct_eval, ContextTable, Model, TimeStructure, Valuation, ValueDomain};
use qlogic::paxos::{
    build_scenario, build_simple, build_simple_scenario, build_thy_pax, build_thy_spax, demo, run_demo, ScenarioKind,
    ScenarioParams, SimpleVariant, DEMO_NAMES,
};
use qlogic::semitopology::{PointSet, Semitopology, SemitopologySpec};
use qlogic::syntax::{Parser as PredParser, Pred, Signature};
use serde_json::{json, Value};

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "qlogic", version, about = "Three-valued modal logic over semitopologies")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the denotation of a predicate over a trace, or its value at one context.
    Eval(EvalArgs),
    /// Check every axiom of a theory against a trace.
    Check(CheckArgs),
    /// Search for a valuation where a theory holds but a goal does not.
    Search(SearchArgs),
    /// Least stage from which every forward axiom holds forever.
    Gslt(CheckArgs),
    /// Run a bundled theory and scenario end to end.
    Demo(DemoArgs),
    /// Dense, noi and n-twined queries on a semitopology.
    Twined(TwinedArgs),
}

#[derive(Args)]
struct TraceSource {
    /// Trace JSON file.
    #[arg(long, conflicts_with = "scenario")]
    trace: Option<PathBuf>,
    /// Bundled scenario: happy, crash, conflicting_decide, pre_sync or a simple-* variant.
    #[arg(long)]
    scenario: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// Predicate text.
    #[arg(long)]
    formula: String,
    #[command(flatten)]
    source: TraceSource,
    /// One context as `stage,point,open`; the open indexes the nonempty opens.
    #[arg(long)]
    at: Option<String>,
    /// Evaluate sugar through its closed-form clauses instead of desugaring.
    #[arg(long)]
    direct: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// Bundled theory (pax, spax, simple-*) or theory file.
    #[arg(long)]
    theory: String,
    #[command(flatten)]
    source: TraceSource,
}

#[derive(Args)]
struct SearchArgs {
    /// Bundled theory (pax, spax, simple-*) or theory file.
    #[arg(long)]
    theory: String,
    /// Goal predicate text.
    #[arg(long)]
    goal: String,
    /// Semitopology JSON file.
    #[arg(long)]
    model: PathBuf,
    /// Comma-separated value names.
    #[arg(long, value_delimiter = ',', default_value = "v1,v2")]
    values: Vec<String>,
    /// Number of stages in the lasso prefix.
    #[arg(long, default_value_t = 2)]
    prefix: usize,
    /// First stage of the loop; defaults to the last stage.
    #[arg(long = "loop")]
    loop_start: Option<usize>,
    /// Enumerate every valuation, failing if there are more than --max.
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Sample this many random valuations.
    #[arg(long)]
    samples: Option<u64>,
    /// Largest exhaustive search attempted.
    #[arg(long, default_value_t = 1_000_000)]
    max: u64,
    /// Sampling seed; QLOGIC_SEED sets it when the flag is absent.
    #[arg(long, env = "QLOGIC_SEED", default_value_t = 0)]
    seed: u64,
    /// Write a countermodel trace here.
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    /// Demo name; omit with --list.
    name: Option<String>,
    #[arg(long)]
    list: bool,
    /// Write the demo's trace to this file.
    #[arg(long)]
    write_trace: Option<PathBuf>,
}

#[derive(Args)]
struct TwinedArgs {
    /// Semitopology JSON file.
    #[arg(long)]
    model: PathBuf,
    /// Ask whether every n nonempty opens intersect.
    #[arg(long)]
    n: Vec<usize>,
    /// Comma-separated point set for dense and noi.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    set: Option<Vec<usize>>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", error_chain(&e));
            ExitCode::from(EXIT_USAGE)
        }
    }
}

/// The error and its causes, skipping causes already spelled out by the
/// message before them.
fn error_chain(e: &anyhow::Error) -> String {
    let mut out = e.to_string();
    let mut last = out.clone();
    for cause in e.chain().skip(1) {
        let msg = cause.to_string();
        if !last.contains(&msg) {
            out.push_str(": ");
            out.push_str(&msg);
        }
        last = msg;
    }
    out
}

fn run(cli: &Cli) -> Result<u8> {
    let (out, code) = match &cli.command {
        Command::Eval(a) => eval(a, cli.json)?,
        Command::Check(a) => check(a, cli.json)?,
        Command::Search(a) => search(a, cli.json)?,
        Command::Gslt(a) => stabilisation(a, cli.json)?,
        Command::Demo(a) => run_named_demo(a, cli.json)?,
        Command::Twined(a) => twined(a, cli.json)?,
    };
    print!("{out}");
    Ok(code)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn pretty(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("JSON value serialises"))
}

fn load_theory(name: &str) -> Result<Theory> {
    if let Some(v) = demo_simple(name) {
        return Ok(build_simple(v));
    }
    Ok(match name {
        "pax" => build_thy_pax(),
        "spax" => build_thy_spax(),
        path => Theory::parse_text(&read(Path::new(path))?).with_context(|| format!("parsing theory {path}"))?,
    })
}

/// The short simple-theory names used by the demos.
fn demo_simple(name: &str) -> Option<SimpleVariant> {
    match name {
        "simple-reliable" => Some(SimpleVariant::ReliableNoCrash),
        "simple-crash" => Some(SimpleVariant::ReliableCrash),
        "simple-lossy" => Some(SimpleVariant::LossyNoCrash),
        "simple-lossy-crash" => Some(SimpleVariant::LossyCrash),
        _ => None,
    }
}

fn load_trace(src: &TraceSource, signature: Option<&Signature>) -> Result<Valuation> {
    match (&src.trace, &src.scenario) {
        (Some(path), _) => {
            Valuation::from_json(&read(path)?, signature).with_context(|| format!("reading trace {}", path.display()))
        }
        (None, Some(name)) => {
            if let Some(v) = demo_simple(name) {
                return Ok(build_simple_scenario(v).valuation);
            }
            let kind = ScenarioKind::ALL
                .into_iter()
                .find(|k| k.name() == name)
                .ok_or_else(|| anyhow!("unknown scenario {name:?}"))?;
            Ok(build_scenario(kind, &ScenarioParams::default())?.valuation)
        }
        (None, None) => bail!("give --trace FILE or --scenario NAME"),
    }
}

fn parse_pred(text: &str, signature: &Signature, values: &[String]) -> Result<Pred> {
    PredParser::new(signature).with_values(values).parse(text).with_context(|| format!("parsing {text:?}"))
}

fn parse_at(text: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [s, p, o] = parts.as_slice() else { bail!("--at wants stage,point,open, got {text:?}") };
    let num = |x: &str| x.parse::<usize>().with_context(|| format!("bad coordinate {x:?} in --at"));
    Ok((num(s)?, num(p)?, num(o)?))
}

fn opens_json(st: &Semitopology) -> Value {
    json!(st.nonempty_opens().iter().map(|o| o.to_vec()).collect::<Vec<_>>())
}

/// One string of truth-value letters per point, for each quotient stage.
fn table_rows(t: &ContextTable) -> Vec<Vec<String>> {
    let sp = t.space();
    (0..sp.stages)
        .map(|s| (0..sp.points).map(|p| (0..sp.opens).map(|o| t.get(s, p, o).letter()).collect()).collect())
        .collect()
}

fn eval(a: &EvalArgs, as_json: bool) -> Result<(String, u8)> {
    let val = load_trace(&a.source, None)?;
    let pred = parse_pred(&a.formula, val.signature(), val.values().names())?;
    let table = if a.direct { direct_eval(&pred, &val)? } else { denote(&pred, &val)? };
    let st = val.semitopology();
    if let Some(at) = &a.at {
        let (s, p, o) = parse_at(at)?;
        if p >= st.point_count() || o >= st.nonempty_opens().len() {
            bail!("context {at} is outside the model ({} points, {} nonempty opens)", st.point_count(), st.nonempty_opens().len());
        }
        let tv = table.get_unrolled(s, p, o);
        let out = if as_json {
            pretty(&json!({"formula": a.formula, "stage": s, "point": p, "open": o, "value": tv}))
        } else {
            format!("{}\n", tv.letter())
        };
        return Ok((out, EXIT_OK));
    }
    let sp = table.space();
    let rows = table_rows(&table);
    let out = if as_json {
        pretty(&json!({
            "formula": a.formula,
            "stages": sp.stages,
            "loop_start": sp.loop_start(),
            "opens": opens_json(st),
            "table": rows,
        }))
    } else {
        let mut s = String::from("opens:");
        for (i, o) in st.nonempty_opens().iter().enumerate() {
            s.push_str(&format!(" {i}={o}"));
        }
        s.push('\n');
        for (n, row) in rows.iter().enumerate() {
            let mark = if n == sp.loop_start() { '*' } else { ' ' };
            s.push_str(&format!("{mark}{n:>3}  {}\n", row.join(" ")));
        }
        s
    };
    Ok((out, EXIT_OK))
}

fn report_text(r: &CheckReport) -> String {
    let mut s = format!("theory {}: {}\n", r.theory, if r.valid { "valid" } else { "VIOLATED" });
    for a in &r.axioms {
        s.push_str(&format!("  {:<20} {}\n", a.name, if a.valid { "valid" } else { "violated" }));
        for v in &a.violations {
            s.push_str(&format!("      at stage {} point {} open {}: {}\n", v.stage, v.point, v.open, v.value.letter()));
        }
        if a.total_violations > a.violations.len() {
            s.push_str(&format!("      ... {} contexts in all\n", a.total_violations));
        }
    }
    s
}

fn check(a: &CheckArgs, as_json: bool) -> Result<(String, u8)> {
    let theory = load_theory(&a.theory)?;
    let val = load_trace(&a.source, Some(&theory.signature))?;
    let report = check_theory(&theory, &val)?;
    let out = if as_json { pretty(&serde_json::to_value(&report)?) } else { report_text(&report) };
    Ok((out, if report.valid { EXIT_OK } else { EXIT_VIOLATION }))
}

fn stabilisation(a: &CheckArgs, as_json: bool) -> Result<(String, u8)> {
    let theory = load_theory(&a.theory)?;
    let val = load_trace(&a.source, Some(&theory.signature))?;
    let stage = gslt(&theory, &val)?;
    let out = if as_json {
        pretty(&json!({"theory": theory.name, "gslt": stage}))
    } else {
        format!("{}\n", stage.map_or("none".to_string(), |n| n.to_string()))
    };
    Ok((out, if stage.is_some() { EXIT_OK } else { EXIT_VIOLATION }))
}

fn load_semitopology(path: &Path) -> Result<Semitopology> {
    let spec: SemitopologySpec =
        serde_json::from_str(&read(path)?).with_context(|| format!("reading semitopology {}", path.display()))?;
    Ok(spec.build()?)
}

fn search(a: &SearchArgs, as_json: bool) -> Result<(String, u8)> {
    let theory = load_theory(&a.theory)?;
    let values = ValueDomain::new(&a.values)?;
    let goal = parse_pred(&a.goal, &theory.signature, values.names())?;
    let model = Model::new(load_semitopology(&a.model)?, values);
    if a.prefix == 0 {
        bail!("--prefix must be at least 1");
    }
    let time = TimeStructure::new(a.prefix, a.loop_start.unwrap_or(a.prefix - 1))?;
    let (cells, space) = valuation_space(&theory, &model, time);
    let budget = match (a.samples, a.exhaustive) {
        (Some(n), _) => SearchBudget::sampled(n, a.seed),
        (None, true) => SearchBudget::exhaustive(a.max),
        (None, false) if space.is_some_and(|s| s <= a.max) => SearchBudget::exhaustive(a.max),
        (None, false) => SearchBudget::sampled(10_000, a.seed),
    };
    let verdict = entails(&theory, &goal, &model, time, budget)?;
    let (summary, trace, code) = match &verdict {
        Verdict::Countermodel { valuation, examined } => {
            let trace = valuation.to_json();
            if let Some(path) = &a.dump {
                fs::write(path, &trace).with_context(|| format!("writing {}", path.display()))?;
            }
            (json!({"verdict": "countermodel", "examined": examined}), Some(trace), EXIT_VIOLATION)
        }
        Verdict::NoCountermodelFound { examined, mode } => {
            (json!({"verdict": "no_countermodel_found", "examined": examined, "mode": mode}), None, EXIT_OK)
        }
    };
    let out = if as_json {
        let mut v = summary;
        v["cells"] = json!(cells);
        v["seed"] = json!(budget.seed);
        if let Some(t) = &trace {
            v["countermodel"] = serde_json::from_str(t)?;
        }
        pretty(&v)
    } else {
        let mut s = format!("{} after {} valuations ({} cells)\n", summary["verdict"].as_str().unwrap_or(""), summary["examined"], cells);
        if let Some(t) = trace {
            s.push_str(&t);
            s.push('\n');
        }
        s
    };
    Ok((out, code))
}

fn run_named_demo(a: &DemoArgs, as_json: bool) -> Result<(String, u8)> {
    if a.list || a.name.is_none() {
        let out = if as_json { pretty(&json!(DEMO_NAMES)) } else { DEMO_NAMES.join("\n") + "\n" };
        return Ok((out, if a.list { EXIT_OK } else { EXIT_USAGE }));
    }
    let name = a.name.as_deref().unwrap_or_default();
    let d = demo(name).ok_or_else(|| anyhow!("unknown demo {name:?}; try --list"))?;
    if let Some(path) = &a.write_trace {
        fs::write(path, d.scenario.valuation.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    let outcome = run_demo(&d)?;
    let out = if as_json {
        pretty(&serde_json::to_value(&outcome)?)
    } else {
        let mut s = format!("demo {} on {}\n", outcome.name, outcome.scenario);
        s.push_str(&report_text(&outcome.report));
        for (goal, ok) in &outcome.goals {
            s.push_str(&format!("  goal {goal:<15} {}\n", if *ok { "valid" } else { "violated" }));
        }
        s.push_str(&format!("  gslt {}\n", outcome.gslt.map_or("none".to_string(), |n| n.to_string())));
        s.push_str(&format!("  matches expectations: {}\n", outcome.matches_expected));
        s
    };
    Ok((out, if outcome.matches_expected { EXIT_OK } else { EXIT_VIOLATION }))
}

fn twined(a: &TwinedArgs, as_json: bool) -> Result<(String, u8)> {
    let st = load_semitopology(&a.model)?;
    let mut answers: Vec<(String, bool)> = a.n.iter().map(|n| (format!("{n}-twined"), st.is_n_twined(*n))).collect();
    if let Some(points) = &a.set {
        if let Some(bad) = points.iter().find(|p| **p >= st.point_count()) {
            bail!("point {bad} is outside 0..{}", st.point_count());
        }
        let set = PointSet::from_points(points.iter().copied());
        answers.push(("dense".into(), st.dense(set)));
        answers.push(("noi".into(), st.noi(set)));
    }
    if answers.is_empty() {
        answers = (2..=3).map(|n| (format!("{n}-twined"), st.is_n_twined(n))).collect();
    }
    let out = if as_json {
        let mut v = json!({"points": st.point_count(), "opens": opens_json(&st)});
        for (k, b) in &answers {
            v[k] = json!(b);
        }
        pretty(&v)
    } else if answers.len() == 1 {
        format!("{}\n", answers[0].1)
    } else {
        answers.iter().map(|(k, b)| format!("{k}: {b}\n")).collect()
    };
    Ok((out, EXIT_OK))
}
