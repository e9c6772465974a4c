//! Theories: a signature plus named axioms, and their text format.
//!
//! ```text
//! theory Simple
//! signature propose:0, accept:0, decide:0
//! # comment
//! SimpAccept? := accept ==> someoneall propose
//! @forward
//! SimpAccept! := finally(someoneall propose
//!     ==> accept)
//! ```
//!
//! An axiom block runs from `Name := ...` up to the next block, directive or
//! end of file. `@forward` marks the next block as a forward rule.

use thiserror::Error;

use crate::syntax::{
    all_fixpoints_positive, fix_var_under_sugar, free_info, pretty_print, Modality, ParseError, Parser, Pred, PrintError, Signature,
    SignatureError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TheoryError {
    #[error("axiom {name}: {source}")]
    Parse { name: String, source: ParseError },
    #[error("axiom {name} is not closed")]
    NotClosed { name: String },
    #[error("axiom {name} has a fixed point that is not positive")]
    NotPositive { name: String },
    #[error("axiom {name} uses the fixed-point variable inside a temporal operator that rebinds it")]
    CapturedFixVar { name: String },
    #[error("axiom name {0:?} used twice")]
    DuplicateAxiom(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("axiom {name}: {source}")]
    Print { name: String, source: PrintError },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axiom {
    pub name: String,
    pub pred: Pred,
    /// Forward rule: progress axiom, usually wrapped in `finally`.
    pub forward: bool,
}

impl Axiom {
    /// The body a forward rule must satisfy from its stabilisation stage on:
    /// the argument of an outermost `finally`, or the axiom itself.
    pub fn synchronous_body(&self) -> &Pred {
        match &self.pred {
            Pred::Modal(Modality::Finally, body) => body,
            p => p,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Axiom>,
}

impl Theory {
    pub fn new(name: &str, signature: Signature) -> Theory {
        Theory { name: name.to_string(), signature, axioms: Vec::new() }
    }

    /// Adds an axiom after checking it is closed and positive.
    pub fn push(&mut self, name: &str, pred: Pred, forward: bool) -> Result<(), TheoryError> {
        if self.axioms.iter().any(|a| a.name == name) {
            return Err(TheoryError::DuplicateAxiom(name.to_string()));
        }
        let (free, fix_closed) = free_info(&pred);
        if !free.is_empty() || !fix_closed {
            return Err(TheoryError::NotClosed { name: name.to_string() });
        }
        if fix_var_under_sugar(&pred) {
            return Err(TheoryError::CapturedFixVar { name: name.to_string() });
        }
        if !all_fixpoints_positive(&pred) {
            return Err(TheoryError::NotPositive { name: name.to_string() });
        }
        self.axioms.push(Axiom { name: name.to_string(), pred, forward });
        Ok(())
    }

    /// Parses `text` against the theory's signature and adds it.
    pub fn push_text(&mut self, name: &str, text: &str, forward: bool) -> Result<(), TheoryError> {
        let pred = Parser::new(&self.signature)
            .parse(text)
            .map_err(|source| TheoryError::Parse { name: name.to_string(), source })?;
        self.push(name, pred, forward)
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn forward_axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter().filter(|a| a.forward)
    }

    /// The theory restricted to the named axioms, in the original order.
    pub fn subset(&self, names: &[&str]) -> Theory {
        Theory {
            name: self.name.clone(),
            signature: self.signature.clone(),
            axioms: self.axioms.iter().filter(|a| names.contains(&a.name.as_str())).cloned().collect(),
        }
    }

    pub fn parse_text(text: &str) -> Result<Theory, TheoryError> {
        let mut name: Option<String> = None;
        let mut signature: Option<Signature> = None;
        let mut blocks: Vec<(usize, String, String, bool)> = Vec::new();
        let mut forward_next = false;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("theory ") {
                name = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("signature") {
                signature = Some(parse_signature(rest, line_no)?);
            } else if line == "@forward" {
                forward_next = true;
            } else if let Some((head, body)) = line.split_once(":=") {
                let head = head.trim();
                if head.is_empty() || head.contains(char::is_whitespace) {
                    return Err(TheoryError::Format { line: line_no, msg: format!("bad axiom name {head:?}") });
                }
                blocks.push((line_no, head.to_string(), body.trim().to_string(), forward_next));
                forward_next = false;
            } else if let Some(last) = blocks.last_mut() {
                last.2.push(' ');
                last.2.push_str(line);
            } else {
                return Err(TheoryError::Format { line: line_no, msg: format!("unexpected line {line:?}") });
            }
        }
        let name = name.ok_or(TheoryError::Format { line: 1, msg: "missing `theory NAME` line".into() })?;
        let signature = signature.ok_or(TheoryError::Format { line: 1, msg: "missing `signature` line".into() })?;
        let mut theory = Theory::new(&name, signature);
        for (_, axiom, body, forward) in blocks {
            theory.push_text(&axiom, &body, forward)?;
        }
        Ok(theory)
    }

    pub fn to_text(&self) -> Result<String, TheoryError> {
        let mut out = format!("theory {}\nsignature {}\n", self.name, self.signature.render());
        for a in &self.axioms {
            if a.forward {
                out.push_str("@forward\n");
            }
            let body = pretty_print(&a.pred).map_err(|source| TheoryError::Print { name: a.name.clone(), source })?;
            out.push_str(&format!("{} := {}\n", a.name, body));
        }
        Ok(out)
    }
}

fn parse_signature(rest: &str, line: usize) -> Result<Signature, TheoryError> {
    let mut sig = Signature::default();
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (n, a) = item
            .split_once(':')
            .ok_or_else(|| TheoryError::Format { line, msg: format!("expected name:arity, got {item:?}") })?;
        let arity = a
            .trim()
            .parse::<usize>()
            .map_err(|_| TheoryError::Format { line, msg: format!("bad arity in {item:?}") })?;
        sig.add(n.trim(), arity)?;
    }
    Ok(sig)
}
