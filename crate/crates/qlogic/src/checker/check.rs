//! Validity of theories under valuations, countermodel search and GSLT.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::theory::Theory;
use crate::engine::{denote, holds_in, At, ContextTable, EvalError, Model, TimeStructure, Valuation};
use crate::syntax::Pred;
use crate::truth::{Class, TruthValue};

/// Violations listed per axiom before the rest are only counted.
pub const VIOLATION_CAP: usize = 50;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("axiom {axiom}: {source}")]
    Axiom { axiom: String, source: EvalError },
    #[error("goal: {0}")]
    Goal(EvalError),
    #[error("exhaustive search over 3^{cells} valuations exceeds the budget of {max}")]
    BudgetExceeded { cells: usize, max: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub stage: usize,
    pub point: usize,
    pub open: usize,
    pub value: TruthValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub name: String,
    pub valid: bool,
    /// At most [`VIOLATION_CAP`] failing contexts, in context order.
    pub violations: Vec<Violation>,
    pub total_violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub theory: String,
    pub valid: bool,
    pub axioms: Vec<AxiomVerdict>,
}

impl CheckReport {
    pub fn violated(&self) -> impl Iterator<Item = &AxiomVerdict> {
        self.axioms.iter().filter(|a| !a.valid)
    }

    pub fn verdict(&self, name: &str) -> Option<&AxiomVerdict> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

/// Failing contexts of a table, capped, with the total count.
pub fn violations(table: &ContextTable) -> (Vec<Violation>, usize) {
    let sp = table.space();
    let mut shown = Vec::new();
    let mut total = 0;
    for stage in 0..sp.stages {
        for point in 0..sp.points {
            for open in 0..sp.opens {
                let value = table.get(stage, point, open);
                if !Class::Valid.contains(value) {
                    total += 1;
                    if shown.len() < VIOLATION_CAP {
                        shown.push(Violation { stage, point, open, value });
                    }
                }
            }
        }
    }
    (shown, total)
}

pub fn check_theory(theory: &Theory, val: &Valuation) -> Result<CheckReport, CheckError> {
    let mut axioms = Vec::with_capacity(theory.axioms.len());
    for a in &theory.axioms {
        let table = denote(&a.pred, val).map_err(|source| CheckError::Axiom { axiom: a.name.clone(), source })?;
        let (shown, total) = violations(&table);
        axioms.push(AxiomVerdict { name: a.name.clone(), valid: total == 0, violations: shown, total_violations: total });
    }
    Ok(CheckReport { theory: theory.name.clone(), valid: axioms.iter().all(|a| a.valid), axioms })
}

/// Whether every axiom is valid at every context.
pub fn theory_holds(theory: &Theory, val: &Valuation) -> Result<bool, CheckError> {
    for a in &theory.axioms {
        let table = denote(&a.pred, val).map_err(|source| CheckError::Axiom { axiom: a.name.clone(), source })?;
        if !holds_in(&table, At::Everywhere).expect("whole-table query") {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least stage from which the body of every forward axiom is valid at all
/// later stages, points and opens; `None` if some body fails inside the loop.
pub fn gslt(theory: &Theory, val: &Valuation) -> Result<Option<usize>, CheckError> {
    let mut stage = 0;
    for a in theory.forward_axioms() {
        let table =
            denote(a.synchronous_body(), val).map_err(|source| CheckError::Axiom { axiom: a.name.clone(), source })?;
        match stable_from(&table) {
            Some(n) => stage = stage.max(n),
            None => return Ok(None),
        }
    }
    Ok(Some(stage))
}

fn stable_from(table: &ContextTable) -> Option<usize> {
    let sp = table.space();
    let valid_at = |s: usize| (0..sp.points).all(|p| (0..sp.opens).all(|o| Class::Valid.contains(table.get(s, p, o))));
    let mut from = sp.stages;
    while from > 0 && valid_at(from - 1) {
        from -= 1;
    }
    // Every stage from the loop start on recurs forever.
    if from > sp.loop_start() {
        None
    } else {
        Some(from)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub mode: SearchMode,
    pub max_valuations: u64,
    pub seed: u64,
}

impl SearchBudget {
    pub fn exhaustive(max_valuations: u64) -> SearchBudget {
        SearchBudget { mode: SearchMode::Exhaustive, max_valuations, seed: 0 }
    }

    pub fn sampled(samples: u64, seed: u64) -> SearchBudget {
        SearchBudget { mode: SearchMode::Sampled, max_valuations: samples, seed }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// A valuation validating every axiom but not the goal, found after
    /// examining `examined` valuations.
    Countermodel { valuation: Box<Valuation>, examined: u64 },
    NoCountermodelFound { examined: u64, mode: SearchMode },
}

impl Verdict {
    pub fn is_countermodel(&self) -> bool {
        matches!(self, Verdict::Countermodel { .. })
    }
}

/// Number of valuations in the search space, or `None` past `u64`.
pub fn valuation_space(theory: &Theory, model: &Model, time: TimeStructure) -> (usize, Option<u64>) {
    let cells = Valuation::new(model.clone(), time, theory.signature.clone()).flat_len();
    (cells, 3u64.checked_pow(cells as u32))
}

/// Searches the valuations over `model` and `time` for one where the theory
/// holds everywhere and `goal` does not.
pub fn entails(theory: &Theory, goal: &Pred, model: &Model, time: TimeStructure, budget: SearchBudget) -> Result<Verdict, CheckError> {
    let mut val = Valuation::new(model.clone(), time, theory.signature.clone());
    let cells = val.flat_len();
    let is_counter = |v: &Valuation| -> Result<bool, CheckError> {
        if !theory_holds(theory, v)? {
            return Ok(false);
        }
        let table = denote(goal, v).map_err(CheckError::Goal)?;
        Ok(!holds_in(&table, At::Everywhere).expect("whole-table query"))
    };
    match budget.mode {
        SearchMode::Exhaustive => {
            let total = match 3u64.checked_pow(cells as u32) {
                Some(t) if t <= budget.max_valuations => t,
                _ => return Err(CheckError::BudgetExceeded { cells, max: budget.max_valuations }),
            };
            let order = [TruthValue::False, TruthValue::Both, TruthValue::True];
            let mut digits = vec![0u8; cells];
            for examined in 1..=total {
                if is_counter(&val)? {
                    return Ok(Verdict::Countermodel { valuation: Box::new(val), examined });
                }
                // Odometer step over base-3 digits.
                for (i, d) in digits.iter_mut().enumerate() {
                    *d = (*d + 1) % 3;
                    val.set_flat(i, order[*d as usize]);
                    if *d != 0 {
                        break;
                    }
                }
            }
            Ok(Verdict::NoCountermodelFound { examined: total, mode: SearchMode::Exhaustive })
        }
        SearchMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            for examined in 1..=budget.max_valuations {
                for i in 0..cells {
                    val.set_flat(i, TruthValue::ALL[rng.gen_range(0..3)]);
                }
                if is_counter(&val)? {
                    return Ok(Verdict::Countermodel { valuation: Box::new(val), examined });
                }
            }
            Ok(Verdict::NoCountermodelFound { examined: budget.max_valuations, mode: SearchMode::Sampled })
        }
    }
}
