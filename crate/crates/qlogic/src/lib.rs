//! A three-valued modal logic with least fixed points, evaluated over finite
//! semitopologies and lasso-shaped timelines, plus executable theories of
//! simple consensus protocols and Paxos.

pub mod checker;
pub mod engine;
pub mod paxos;
pub mod semitopology;
pub mod syntax;
pub mod truth;

pub use semitopology::{PointSet, Semitopology, SemitopologyError, SemitopologySpec};
pub use syntax::{parse, Pred, Signature};
pub use truth::TruthValue;
