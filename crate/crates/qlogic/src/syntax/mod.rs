//! Predicates: abstract syntax, parsing, printing and structural transforms.

mod ast;
mod parse;
mod print;
mod transform;

pub use ast::{Conn, CorrectItem, Designation, Modality, Pred, Quantifier, Signature, SignatureError, Term};
pub use parse::{is_identifier, is_reserved, parse, ParseError, Parser, FIX_VAR, UNDEFINED_VALUE};
pub use print::{pretty_print, PrintError};
pub use transform::{
    all_fixpoints_positive, check_positive, desugar, desugar_keeping_mru, fix_var_under_sugar, forever_as_least_fixpoint, free_info,
    fresh_variable, is_closed, past_depth, substitute, substitute_kappa, substitute_term, variable_names,
};
