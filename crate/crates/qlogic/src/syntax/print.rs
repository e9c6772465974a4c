//! Canonical text rendering. `parse(pretty_print(p)) == p` for every
//! predicate without context-table literals.

use std::fmt;

use thiserror::Error;

use super::ast::{Conn, CorrectItem, Pred};
use super::parse::FIX_VAR;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrintError {
    #[error("context-table literals have no surface syntax")]
    UnprintableKappa,
}

pub fn pretty_print(p: &Pred) -> Result<String, PrintError> {
    let mut out = String::new();
    write_pred(&mut out, p, 0, true)?;
    Ok(out)
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match pretty_print(self) {
            Ok(s) => f.write_str(&s),
            Err(_) => f.write_str("<predicate with context table>"),
        }
    }
}

const EQUIV: u8 = 0;
const IMPL: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const PREFIX: u8 = 4;
const ATOM: u8 = 5;

fn level(p: &Pred) -> u8 {
    match p {
        Pred::Bin(Conn::Equiv, ..) => EQUIV,
        Pred::Bin(Conn::Weak | Conn::Strong, ..) => IMPL,
        Pred::Bin(Conn::Or, ..) => OR,
        Pred::Bin(Conn::And, ..) => AND,
        Pred::Not(_) | Pred::Is(..) | Pred::Modal(..) | Pred::Quant(..) | Pred::Fix(_) => PREFIX,
        _ => ATOM,
    }
}

// Binders swallow everything to their right, so they may only appear
// unparenthesised when nothing follows them.
fn open_ended(p: &Pred) -> bool {
    match p {
        Pred::Quant(..) | Pred::Fix(_) => true,
        Pred::Not(b) | Pred::Is(_, b) | Pred::Modal(_, b) => open_ended(b),
        Pred::Bin(_, _, r) => open_ended(r),
        _ => false,
    }
}

fn write_pred(out: &mut String, p: &Pred, min: u8, tail: bool) -> Result<(), PrintError> {
    let needs_parens = level(p) < min || (!tail && open_ended(p));
    if needs_parens {
        out.push('(');
        write_inner(out, p, true)?;
        out.push(')');
        Ok(())
    } else {
        write_inner(out, p, tail)
    }
}

fn write_inner(out: &mut String, p: &Pred, tail: bool) -> Result<(), PrintError> {
    match p {
        Pred::Lit(tv) => out.push(tv.letter()),
        Pred::Eq(a, b) => {
            out.push_str(a.name());
            out.push_str(" = ");
            out.push_str(b.name());
        }
        Pred::Atom(name, args) => {
            out.push_str(name);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(a.name());
                }
                out.push(')');
            }
        }
        Pred::Not(b) => {
            out.push_str("! ");
            write_pred(out, b, PREFIX, tail)?;
        }
        Pred::Is(d, b) => {
            out.push_str(d.keyword());
            out.push(' ');
            write_pred(out, b, PREFIX, tail)?;
        }
        Pred::Modal(m, b) => {
            out.push_str(m.keyword());
            out.push(' ');
            write_pred(out, b, PREFIX, tail)?;
        }
        Pred::Bin(c, l, r) => {
            let (lmin, rmin) = match c {
                Conn::Equiv => (IMPL, IMPL),
                Conn::Weak | Conn::Strong => (OR, IMPL),
                Conn::Or => (OR, AND),
                Conn::And => (AND, PREFIX),
            };
            write_pred(out, l, lmin, false)?;
            out.push(' ');
            out.push_str(c.symbol());
            out.push(' ');
            write_pred(out, r, rmin, tail)?;
        }
        Pred::Quant(q, v, b) => {
            out.push_str(q.keyword());
            out.push(' ');
            out.push_str(v);
            out.push_str(". ");
            write_pred(out, b, EQUIV, tail)?;
        }
        Pred::Mru(v, b, t) => {
            out.push_str("mru ");
            out.push_str(v);
            out.push_str(". ");
            write_pred(out, b, EQUIV, true)?;
            out.push_str(" @ ");
            out.push_str(t.name());
        }
        Pred::Correct(items) => {
            out.push_str("correct[");
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                match item {
                    CorrectItem::Symbol { name, .. } => out.push_str(name),
                    CorrectItem::Pred(p) => write_pred(out, p, EQUIV, true)?,
                }
            }
            out.push(']');
        }
        Pred::Fix(b) => {
            out.push_str("mu ");
            out.push_str(FIX_VAR);
            out.push_str(". ");
            write_pred(out, b, EQUIV, tail)?;
        }
        Pred::FixVar => out.push_str(FIX_VAR),
        Pred::Kappa(_) => return Err(PrintError::UnprintableKappa),
    }
    Ok(())
}
