//! Lexer and recursive-descent parser for the ASCII predicate grammar.
//!
//! Precedence from loosest to tightest: `==`, then `~>` and `==>` (right
//! associative), then `|`, then `&`, then prefix operators. Binders
//! (`exists a.`, `mu X.`, ...) extend as far right as possible.

use thiserror::Error;

use super::ast::{Conn, CorrectItem, Designation, Modality, Pred, Quantifier, Signature, Term};
use crate::truth::TruthValue;

pub const FIX_VAR: &str = "X";
pub const UNDEFINED_VALUE: &str = "udfn";

const KEYWORDS: &[&str] = &[
    "someone",
    "everyone",
    "quorum",
    "coquorum",
    "someoneall",
    "everyoneall",
    "quorumbox",
    "coquorumdiamond",
    "yesterday",
    "tomorrow",
    "forever",
    "sometime",
    "infinitely",
    "finally",
    "recent",
    "urecent",
    "pointwise",
    "isT",
    "isF",
    "isB",
    "isTB",
    "isTF",
    "isFB",
    "exists",
    "forall",
    "exists1",
    "exists01",
    "mu",
    "mru",
    "correct",
    "T",
    "B",
    "F",
    FIX_VAR,
];

pub fn is_reserved(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown predicate symbol {name:?} at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("predicate symbol {name:?} expects {expected} argument(s), found {found} at byte {pos}")]
    ArityMismatch { name: String, expected: usize, found: usize, pos: usize },
    #[error("fixed-point variable X at byte {pos} is not under a mu binder")]
    StrayFixVar { pos: usize },
    #[error("identifier {name:?} at byte {pos} is neither a bound variable nor a value of the model")]
    UnresolvedValue { name: String, pos: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Dot,
    Comma,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bang,
    Amp,
    Pipe,
    Weak,
    Strong,
    Equiv,
    Eq,
    At,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::End => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '@' => Tok::At,
            '~' if src[i..].starts_with("~>") => {
                i += 1;
                Tok::Weak
            }
            '=' if src[i..].starts_with("==>") => {
                i += 2;
                Tok::Strong
            }
            '=' if src[i..].starts_with("==") => {
                i += 1;
                Tok::Equiv
            }
            '=' => Tok::Eq,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < bytes.len() {
                    let d = bytes[j] as char;
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        j += 1;
                    } else {
                        break;
                    }
                }
                let word = src[i..j].to_string();
                i = j - 1;
                Tok::Ident(word)
            }
            other => {
                return Err(ParseError::Syntax { pos: start, msg: format!("unexpected character {other:?}") });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

/// Parses predicate text against a signature.
///
/// Identifiers in term positions resolve to bound variables first. Unbound
/// identifiers become values when a value domain is supplied (and are
/// rejected if absent from it); without a domain they are left as free
/// variables, except for the reserved `udfn`.
pub struct Parser<'a> {
    sig: &'a Signature,
    values: Option<&'a [String]>,
}

impl<'a> Parser<'a> {
    pub fn new(sig: &'a Signature) -> Self {
        Parser { sig, values: None }
    }

    pub fn with_values(mut self, values: &'a [String]) -> Self {
        self.values = Some(values);
        self
    }

    pub fn parse(&self, text: &str) -> Result<Pred, ParseError> {
        let toks = lex(text)?;
        let mut st = State { toks, pos: 0, sig: self.sig, values: self.values, bound: Vec::new(), fix_depth: 0 };
        let p = st.parse_equiv()?;
        match st.peek() {
            Tok::End => Ok(p),
            t => Err(st.err(format!("unexpected {}", describe(t)))),
        }
    }
}

/// Parses with the signature only; see [`Parser`] for identifier resolution.
pub fn parse(text: &str, sig: &Signature) -> Result<Pred, ParseError> {
    Parser::new(sig).parse(text)
}

struct State<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
    values: Option<&'a [String]>,
    bound: Vec<String>,
    fix_depth: usize,
}

enum Prefix {
    Not,
    Is(Designation),
    Modal(Modality),
}

fn prefix_keyword(word: &str) -> Option<Prefix> {
    if let Some(d) = Designation::ALL.iter().find(|d| d.keyword() == word) {
        return Some(Prefix::Is(*d));
    }
    Modality::ALL.iter().find(|m| m.keyword() == word).map(|m| Prefix::Modal(*m))
}

fn quantifier_keyword(word: &str) -> Option<Quantifier> {
    Quantifier::ALL.iter().copied().find(|q| q.keyword() == word)
}

fn apply_prefix(p: Prefix, body: Pred) -> Pred {
    match p {
        Prefix::Not => Pred::not(body),
        Prefix::Is(d) => Pred::is(d, body),
        Prefix::Modal(m) => Pred::modal(m, body),
    }
}

impl<'a> State<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: String) -> ParseError {
        ParseError::Syntax { pos: self.here(), msg }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {}, found {}", describe(&want), describe(self.peek()))))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.err(format!("expected identifier, found {}", describe(&t)))),
        }
    }

    fn binder_var(&mut self) -> Result<String, ParseError> {
        let pos = self.here();
        let v = self.ident()?;
        if is_reserved(&v) {
            return Err(ParseError::Syntax { pos, msg: format!("{v:?} is a keyword and cannot be bound") });
        }
        Ok(v)
    }

    fn parse_equiv(&mut self) -> Result<Pred, ParseError> {
        let mut left = self.parse_impl()?;
        while *self.peek() == Tok::Equiv {
            self.bump();
            let right = self.parse_impl()?;
            left = Pred::bin(Conn::Equiv, left, right);
        }
        Ok(left)
    }

    fn parse_impl(&mut self) -> Result<Pred, ParseError> {
        let left = self.parse_or()?;
        let conn = match self.peek() {
            Tok::Weak => Conn::Weak,
            Tok::Strong => Conn::Strong,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.parse_impl()?;
        Ok(Pred::bin(conn, left, right))
    }

    fn parse_or(&mut self) -> Result<Pred, ParseError> {
        let mut left = self.parse_and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let right = self.parse_and()?;
            left = Pred::or(left, right);
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<Pred, ParseError> {
        let mut left = self.parse_unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let right = self.parse_unary()?;
            left = Pred::and(left, right);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> Result<Pred, ParseError> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Pred::not(self.parse_unary()?))
            }
            Tok::Ident(word) => {
                if let Some(p) = prefix_keyword(&word) {
                    self.bump();
                    let body = self.parse_unary()?;
                    return Ok(apply_prefix(p, body));
                }
                if let Some(q) = quantifier_keyword(&word) {
                    self.bump();
                    return self.parse_quantifier(q);
                }
                match word.as_str() {
                    "mu" => {
                        self.bump();
                        let pos = self.here();
                        let v = self.ident()?;
                        if v != FIX_VAR {
                            return Err(ParseError::Syntax { pos, msg: format!("mu binds only {FIX_VAR}, found {v:?}") });
                        }
                        self.expect(Tok::Dot)?;
                        self.fix_depth += 1;
                        let body = self.parse_equiv();
                        self.fix_depth -= 1;
                        Ok(Pred::fix(body?))
                    }
                    "mru" => {
                        self.bump();
                        let v = self.binder_var()?;
                        self.expect(Tok::Dot)?;
                        self.bound.push(v.clone());
                        let body = self.parse_equiv();
                        self.bound.pop();
                        let body = body?;
                        self.expect(Tok::At)?;
                        let t = self.term()?;
                        Ok(Pred::Mru(v, Box::new(body), t))
                    }
                    _ => self.parse_atom(),
                }
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_quantifier(&mut self, q: Quantifier) -> Result<Pred, ParseError> {
        let explicit = matches!(self.peek(), Tok::Ident(w) if !is_reserved(w)) && *self.peek_at(1) == Tok::Dot;
        if explicit {
            let v = self.binder_var()?;
            self.expect(Tok::Dot)?;
            self.bound.push(v.clone());
            let body = self.parse_equiv();
            self.bound.pop();
            return Ok(Pred::quant(q, &v, body?));
        }
        // Elided form `exists someone accept`: a chain of prefix operators
        // ending in a unary symbol, applied to a fresh bound variable.
        let mut prefixes = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Bang => {
                    self.bump();
                    prefixes.push(Prefix::Not);
                }
                Tok::Ident(w) => {
                    if let Some(p) = prefix_keyword(&w) {
                        self.bump();
                        prefixes.push(p);
                        continue;
                    }
                    let pos = self.here();
                    self.bump();
                    let arity = self.sig.arity(&w).ok_or(ParseError::UnknownSymbol { name: w.clone(), pos })?;
                    if arity != 1 {
                        return Err(ParseError::ArityMismatch { name: w, expected: arity, found: 1, pos });
                    }
                    if *self.peek() == Tok::LParen {
                        return Err(self.err("elided quantifier body must be a bare symbol".to_string()));
                    }
                    let var = fresh_name(&self.bound);
                    let mut body = Pred::atom(&w, vec![Term::Var(var.clone())]);
                    while let Some(p) = prefixes.pop() {
                        body = apply_prefix(p, body);
                    }
                    return Ok(Pred::quant(q, &var, body));
                }
                t => return Err(self.err(format!("expected a bound variable or a predicate symbol, found {}", describe(&t)))),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let pos = self.here();
        let name = self.ident()?;
        if is_reserved(&name) {
            return Err(ParseError::Syntax { pos, msg: format!("keyword {name:?} used as a term") });
        }
        if self.bound.contains(&name) {
            return Ok(Term::Var(name));
        }
        match self.values {
            Some(vals) => {
                if vals.contains(&name) {
                    Ok(Term::Val(name))
                } else {
                    Err(ParseError::UnresolvedValue { name, pos })
                }
            }
            None if name == UNDEFINED_VALUE => Ok(Term::Val(name)),
            None => Ok(Term::Var(name)),
        }
    }

    fn parse_atom(&mut self) -> Result<Pred, ParseError> {
        let pos = self.here();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let p = self.parse_equiv()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(w) => {
                if *self.peek_at(1) == Tok::Eq {
                    let a = self.term()?;
                    self.bump();
                    let b = self.term()?;
                    return Ok(Pred::Eq(a, b));
                }
                match w.as_str() {
                    "T" => {
                        self.bump();
                        Ok(Pred::Lit(TruthValue::True))
                    }
                    "B" => {
                        self.bump();
                        Ok(Pred::Lit(TruthValue::Both))
                    }
                    "F" => {
                        self.bump();
                        Ok(Pred::Lit(TruthValue::False))
                    }
                    FIX_VAR => {
                        self.bump();
                        if self.fix_depth == 0 {
                            return Err(ParseError::StrayFixVar { pos });
                        }
                        Ok(Pred::FixVar)
                    }
                    "correct" => {
                        self.bump();
                        self.parse_correct()
                    }
                    _ if is_reserved(&w) => Err(self.err(format!("unexpected keyword {w:?}"))),
                    _ => {
                        self.bump();
                        let arity = self.sig.arity(&w).ok_or(ParseError::UnknownSymbol { name: w.clone(), pos })?;
                        let mut args = Vec::new();
                        if *self.peek() == Tok::LParen {
                            self.bump();
                            if *self.peek() != Tok::RParen {
                                loop {
                                    args.push(self.term()?);
                                    if *self.peek() == Tok::Comma {
                                        self.bump();
                                    } else {
                                        break;
                                    }
                                }
                            }
                            self.expect(Tok::RParen)?;
                        }
                        if args.len() != arity {
                            return Err(ParseError::ArityMismatch { name: w, expected: arity, found: args.len(), pos });
                        }
                        Ok(Pred::Atom(w, args))
                    }
                }
            }
            t => Err(self.err(format!("expected a predicate, found {}", describe(&t)))),
        }
    }

    fn parse_correct(&mut self) -> Result<Pred, ParseError> {
        self.expect(Tok::LBrack)?;
        let mut items = Vec::new();
        if *self.peek() != Tok::RBrack {
            loop {
                let bare_symbol = match (self.peek(), self.peek_at(1)) {
                    (Tok::Ident(w), Tok::Comma | Tok::RBrack) => self.sig.arity(w).filter(|a| *a > 0).map(|a| (w.clone(), a)),
                    _ => None,
                };
                match bare_symbol {
                    Some((name, arity)) => {
                        self.bump();
                        items.push(CorrectItem::Symbol { name, arity });
                    }
                    None => items.push(CorrectItem::Pred(self.parse_equiv()?)),
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrack)?;
        Ok(Pred::Correct(items))
    }
}

fn fresh_name(bound: &[String]) -> String {
    for c in 'a'..='z' {
        let s = c.to_string();
        if !bound.contains(&s) && !is_reserved(&s) {
            return s;
        }
    }
    let mut i = 0;
    loop {
        let s = format!("a{i}");
        if !bound.contains(&s) {
            return s;
        }
        i += 1;
    }
}
