//! Browser bindings: run a bundled demo, evaluate a predicate over a trace,
//! and check a theory against a trace. Every entry point takes and returns
//! JSON strings so the page needs no generated glue beyond the bindings.

use qlogic::checker::{check_theory, Theory};
use qlogic::engine::{denote, Valuation};
use qlogic::paxos::{build_simple, build_thy_pax, build_thy_spax, demo, run_demo, SimpleVariant, DEMO_NAMES};
use qlogic::syntax::Parser;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn to_text(v: Value) -> String {
    serde_json::to_string(&v).expect("JSON value serialises")
}

/// Names of the bundled demos, as a JSON array.
#[wasm_bindgen(js_name = demoNames)]
pub fn demo_names() -> String {
    to_text(json!(DEMO_NAMES))
}

/// Runs a bundled demo. The result holds the check report, goal verdicts,
/// GSLT and the demo's trace.
pub fn demo_json(name: &str) -> Result<String, String> {
    let d = demo(name).ok_or_else(|| format!("unknown demo {name:?}"))?;
    let outcome = run_demo(&d).map_err(|e| e.to_string())?;
    let trace: Value = serde_json::from_str(&d.scenario.valuation.to_json()).map_err(|e| e.to_string())?;
    let mut v = serde_json::to_value(&outcome).map_err(|e| e.to_string())?;
    v["trace"] = trace;
    v["theory_text"] = json!(d.theory.to_text().map_err(|e| e.to_string())?);
    Ok(to_text(v))
}

/// Denotation of `formula` over a trace: one string of T/B/F letters per
/// point and stage, one letter per nonempty open.
pub fn evaluate_json(trace: &str, formula: &str) -> Result<String, String> {
    let val = Valuation::from_json(trace, None).map_err(|e| e.to_string())?;
    let pred = Parser::new(val.signature()).with_values(val.values().names()).parse(formula).map_err(|e| e.to_string())?;
    let table = denote(&pred, &val).map_err(|e| e.to_string())?;
    let sp = table.space();
    let rows: Vec<Vec<String>> = (0..sp.stages)
        .map(|s| (0..sp.points).map(|p| (0..sp.opens).map(|o| table.get(s, p, o).letter()).collect()).collect())
        .collect();
    let opens: Vec<Vec<usize>> = val.semitopology().nonempty_opens().iter().map(|o| o.to_vec()).collect();
    Ok(to_text(json!({"loop_start": sp.loop_start(), "opens": opens, "table": rows})))
}

/// Checks a bundled theory (`pax`, `spax`, `simple-*`) or theory text
/// against a trace.
pub fn check_json(theory: &str, trace: &str) -> Result<String, String> {
    let th = match theory.trim() {
        "pax" => build_thy_pax(),
        "spax" => build_thy_spax(),
        "simple-reliable" => build_simple(SimpleVariant::ReliableNoCrash),
        "simple-crash" => build_simple(SimpleVariant::ReliableCrash),
        "simple-lossy" => build_simple(SimpleVariant::LossyNoCrash),
        "simple-lossy-crash" => build_simple(SimpleVariant::LossyCrash),
        text => Theory::parse_text(text).map_err(|e| e.to_string())?,
    };
    let val = Valuation::from_json(trace, Some(&th.signature)).map_err(|e| e.to_string())?;
    let report = check_theory(&th, &val).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = runDemo)]
pub fn run_demo_js(name: &str) -> Result<String, JsError> {
    demo_json(name).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn evaluate(trace: &str, formula: &str) -> Result<String, JsError> {
    evaluate_json(trace, formula).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check(theory: &str, trace: &str) -> Result<String, JsError> {
    check_json(theory, trace).map_err(|e| JsError::new(&e))
}
