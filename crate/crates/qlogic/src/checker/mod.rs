//! Theories, their validity under a valuation, countermodel search and GSLT.

mod check;
mod theory;

pub use check::{
    check_theory, entails, gslt, theory_holds, valuation_space, violations, AxiomVerdict, CheckError, CheckReport,
    SearchBudget, SearchMode, Verdict, Violation, VIOLATION_CAP,
};
pub use theory::{Axiom, Theory, TheoryError};
