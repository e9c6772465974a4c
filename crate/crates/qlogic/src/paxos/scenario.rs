//! Hand-scheduled traces for the bundled theories, and the named demos.
//!
//! Every Paxos scenario uses point 0 as the permanent leader and the first
//! non-`udfn` value as the proposal.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::theories::{build_simple, build_thy_pax, build_thy_spax, correctness_goals, SimpleVariant, PAX_SIGNATURE};
use crate::checker::{check_theory, gslt, CheckError, CheckReport, Theory};
use crate::engine::{denote, holds_in, At, Model, ModelError, TimeStructure, Valuation, ValueDomain};
use crate::semitopology::Semitopology;
use crate::syntax::{Pred, Signature, UNDEFINED_VALUE};
use crate::truth::TruthValue::{self, True as T};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("infeasible scenario parameters: {0}")]
    InfeasibleParams(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Happy,
    Crash,
    ConflictingDecide,
    PreSync,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] =
        [ScenarioKind::Happy, ScenarioKind::Crash, ScenarioKind::ConflictingDecide, ScenarioKind::PreSync];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Happy => "happy",
            ScenarioKind::Crash => "crash",
            ScenarioKind::ConflictingDecide => "conflicting_decide",
            ScenarioKind::PreSync => "pre_sync",
        }
    }
}

/// Model sizing and schedule knobs for [`build_scenario`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub semitopology: Semitopology,
    /// Must contain `udfn` and at least one other value.
    pub values: Vec<String>,
    /// Stutter lasso length.
    pub prefix: usize,
    /// Stage at which the pre-sync scenario starts all forward behaviour.
    pub sync_stage: usize,
    /// Participant crashed in the crash scenario; `None` picks the last point.
    pub crash_point: Option<usize>,
    pub crash_from: usize,
}

impl Default for ScenarioParams {
    fn default() -> ScenarioParams {
        ScenarioParams {
            semitopology: Semitopology::all_but(3, 1).expect("static semitopology"),
            values: vec!["v1".into(), "v2".into(), UNDEFINED_VALUE.into()],
            prefix: 8,
            sync_stage: 3,
            crash_point: None,
            crash_from: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub axioms_valid: bool,
    pub goals: BTreeMap<String, bool>,
    /// Expected stabilisation stage; `None` when it never stabilises.
    pub gslt: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub valuation: Valuation,
    pub expected: Expected,
}

/// Symbols a crashed Paxos participant stops answering correctly for.
pub const PAX_CRASH_SYMBOLS: [&str; 5] = ["propose", "send", "write", "accept", "decide"];

/// Stage from which the happy schedule has every forward rule satisfied.
pub const HAPPY_SYNC_STAGE: usize = 4;

fn expected(axioms_valid: bool, goals: [bool; 3], gslt: Option<usize>) -> Expected {
    let goals = ["Validity", "Agreement", "Termination"].iter().zip(goals).map(|(n, b)| (n.to_string(), b)).collect();
    Expected { axioms_valid, goals, gslt }
}

pub fn build_scenario(kind: ScenarioKind, params: &ScenarioParams) -> Result<Scenario, ScenarioError> {
    let infeasible = |m: String| Err(ScenarioError::InfeasibleParams(m));
    let st = &params.semitopology;
    let n = st.point_count();
    if n == 0 || !st.is_n_twined(2) {
        return infeasible("the semitopology must be nonempty and 2-twined".into());
    }
    if !params.values.iter().any(|v| v == UNDEFINED_VALUE) {
        return infeasible(format!("the value domain must contain {UNDEFINED_VALUE}"));
    }
    let proper: Vec<&str> = params.values.iter().map(String::as_str).filter(|v| *v != UNDEFINED_VALUE).collect();
    let Some(&v1) = proper.first() else { return infeasible("need a value other than udfn".into()) };
    let min_prefix = match kind {
        ScenarioKind::PreSync => params.sync_stage + 2,
        ScenarioKind::ConflictingDecide => HAPPY_SYNC_STAGE + 2,
        _ => HAPPY_SYNC_STAGE + 1,
    };
    if params.prefix < min_prefix {
        return infeasible(format!("{} needs a lasso of at least {min_prefix} stages", kind.name()));
    }
    let model = Model::new(st.clone(), ValueDomain::new(&params.values)?);
    let time = TimeStructure::stutter(params.prefix)?;
    let sig = Signature::new(PAX_SIGNATURE).expect("static signature");
    let mut val = Valuation::new(model, time, sig);
    for s in 0..params.prefix {
        val.set("leader", s, 0, &[], T)?;
    }
    val.set_from("propose", 0, 0, &[v1], T)?;
    let sync = if kind == ScenarioKind::PreSync { params.sync_stage } else { HAPPY_SYNC_STAGE };
    // Happy: send udfn from 1, write from 2, accept from 3, decide and send v1 from 4.
    // Pre-sync: everything happens at the sync stage, send v1 one stage later.
    let (send_udfn, write_from, accept_from) = match kind {
        ScenarioKind::PreSync => (sync..sync + 1, sync, sync),
        _ => (1..sync, 2, 3),
    };
    let send_v1_from = if kind == ScenarioKind::PreSync { sync + 1 } else { sync };
    val.set_from("write", write_from, 0, &[v1], T)?;
    for p in 0..n {
        for s in send_udfn.clone() {
            val.set("send", s, p, &[UNDEFINED_VALUE], T)?;
        }
        val.set_from("send", send_v1_from, p, &[v1], T)?;
        val.set_from("accept", accept_from, p, &[v1], T)?;
        val.set_from("decide", sync, p, &[v1], T)?;
    }
    let (label, exp) = match kind {
        ScenarioKind::Happy => ("happy".to_string(), expected(true, [true; 3], Some(HAPPY_SYNC_STAGE))),
        ScenarioKind::PreSync => (format!("pre_sync(k={sync})"), expected(true, [true; 3], Some(sync))),
        ScenarioKind::Crash => {
            let point = params.crash_point.unwrap_or(n - 1);
            if point == 0 || point >= n {
                return infeasible(format!("crash point {point} must be a non-leader point"));
            }
            if params.crash_from >= params.prefix {
                return infeasible("crash stage lies past the lasso".into());
            }
            if !st.nonempty_opens().iter().any(|o| !o.contains(point)) {
                return infeasible("no open avoids the crashed point".into());
            }
            let symbols: Vec<String> = PAX_CRASH_SYMBOLS.iter().map(|s| s.to_string()).collect();
            val.crash(point, params.crash_from, Some(&symbols))?;
            // A crashed non-leader answers `B` to decide(v) for values the
            // leader never decided, which the curried strong implications of
            // PaxDecideNotL? and Agreement both reject.
            let label = format!("crash(point={point}, from={})", params.crash_from);
            (label, expected(false, [true, false, true], Some(HAPPY_SYNC_STAGE)))
        }
        ScenarioKind::ConflictingDecide => {
            let Some(&v2) = proper.get(1) else { return infeasible("need two values other than udfn".into()) };
            if n < 2 {
                return infeasible("need a second participant".into());
            }
            val.set_from("decide", HAPPY_SYNC_STAGE + 1, 1, &[v2], T)?;
            ("conflicting_decide".to_string(), expected(false, [false, false, true], Some(HAPPY_SYNC_STAGE)))
        }
    };
    Ok(Scenario { label, valuation: val, expected: exp })
}

/// Traces for the simple protocol on all_but(3,1), one value, a 5-stage
/// stutter lasso; the crashed participant is point 2 from stage 1.
pub fn build_simple_scenario(variant: SimpleVariant) -> Scenario {
    let st = Semitopology::all_but(3, 1).expect("static semitopology");
    let model = Model::new(st, ValueDomain::new(["v1"]).expect("static domain"));
    let sig = Signature::new([("propose", 0), ("accept", 0), ("decide", 0)]).expect("static signature");
    let mut val = Valuation::new(model, TimeStructure::stutter(5).expect("static time"), sig);
    let (p, a, d) = if variant.lossy() { (1, 2, 3) } else { (1, 1, 1) };
    let set = |val: &mut Valuation, sym: &str, from: usize, point: usize| val.set_from(sym, from, point, &[], T).expect("static cell");
    set(&mut val, "propose", p, 0);
    for point in 0..3 {
        set(&mut val, "accept", a, point);
    }
    set(&mut val, "decide", d, 0);
    if variant.crash() {
        val.crash(2, 1, None).expect("static crash");
    }
    let gslt = if variant.lossy() { Some(d) } else { Some(0) };
    Scenario {
        label: format!("simple-{}", variant.name()),
        valuation: val,
        expected: Expected { axioms_valid: true, goals: BTreeMap::new(), gslt },
    }
}

/// Whether each named goal is valid at every context.
pub fn goal_results(goals: &[(String, Pred)], val: &Valuation) -> Result<BTreeMap<String, bool>, CheckError> {
    goals
        .iter()
        .map(|(name, g)| {
            let table = denote(g, val).map_err(CheckError::Goal)?;
            Ok((name.clone(), holds_in(&table, At::Everywhere).expect("whole-table query")))
        })
        .collect()
}

pub const DEMO_NAMES: [&str; 9] = [
    "simple-reliable",
    "simple-crash",
    "simple-lossy",
    "simple-lossy-crash",
    "pax-happy",
    "pax-crash",
    "pax-conflict",
    "pax-gslt",
    "spax-happy",
];

/// A theory, a trace, the goals to check on it and what should come out.
#[derive(Clone, Debug)]
pub struct Demo {
    pub name: String,
    pub theory: Theory,
    pub scenario: Scenario,
    pub goals: Vec<(String, Pred)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoOutcome {
    pub name: String,
    pub scenario: String,
    pub report: CheckReport,
    pub goals: BTreeMap<String, bool>,
    pub gslt: Option<usize>,
    pub expected: Expected,
    pub matches_expected: bool,
}

pub fn demo(name: &str) -> Option<Demo> {
    let simple = |v: SimpleVariant| (build_simple(v), build_simple_scenario(v), Vec::new());
    let pax = |k: ScenarioKind| {
        let sc = build_scenario(k, &ScenarioParams::default()).expect("default parameters are feasible");
        (build_thy_pax(), sc, correctness_goals())
    };
    let (theory, scenario, goals) = match name {
        "simple-reliable" => simple(SimpleVariant::ReliableNoCrash),
        "simple-crash" => simple(SimpleVariant::ReliableCrash),
        "simple-lossy" => simple(SimpleVariant::LossyNoCrash),
        "simple-lossy-crash" => simple(SimpleVariant::LossyCrash),
        "pax-happy" => pax(ScenarioKind::Happy),
        "pax-crash" => pax(ScenarioKind::Crash),
        "pax-conflict" => pax(ScenarioKind::ConflictingDecide),
        "pax-gslt" => pax(ScenarioKind::PreSync),
        "spax-happy" => {
            let (_, sc, goals) = pax(ScenarioKind::Happy);
            (build_thy_spax(), sc, goals)
        }
        _ => return None,
    };
    Some(Demo { name: name.to_string(), theory, scenario, goals })
}

pub fn run_demo(d: &Demo) -> Result<DemoOutcome, CheckError> {
    let val = &d.scenario.valuation;
    let report = check_theory(&d.theory, val)?;
    let goals = goal_results(&d.goals, val)?;
    let stage = gslt(&d.theory, val)?;
    let exp = &d.scenario.expected;
    let matches_expected = report.valid == exp.axioms_valid && goals == exp.goals && stage == exp.gslt;
    Ok(DemoOutcome {
        name: d.name.clone(),
        scenario: d.scenario.label.clone(),
        report,
        goals,
        gslt: stage,
        expected: exp.clone(),
        matches_expected,
    })
}

/// Value of `symbol(args)` at the unrolled stage `n`, for quick inspection.
pub fn value_at(val: &Valuation, symbol: &str, n: usize, point: usize, args: &[&str]) -> Result<TruthValue, ModelError> {
    val.get_named(symbol, val.time().stage_of(n), point, args)
}
