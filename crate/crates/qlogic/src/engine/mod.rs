//! Models, valuations and the evaluation of predicates to context tables.

mod eval;
mod model;
mod table;

pub use eval::{denote, direct_eval, holds, holds_in, is_pointwise, quotient, table_is_pointwise, At, Context, EvalError, Quotient};
pub use model::{CrashEntry, Model, ModelError, TimeStructure, Trace, TraceEntry, ValueDomain, Valuation};
pub use table::{ContextTable, Space};
