use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::engine::ContextTable;
use crate::truth::{TruthValue, Unary};

/// A term: a variable symbol or a value identifier of the model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Val(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn val(name: &str) -> Term {
        Term::Val(name.to_string())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Val(n) => n,
        }
    }
}

/// Prefix modalities that pick out truth values: `isT`, `isF`, ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Designation {
    T,
    F,
    B,
    TB,
    TF,
    FB,
}

impl Designation {
    pub const ALL: [Designation; 6] = [
        Designation::T,
        Designation::F,
        Designation::B,
        Designation::TB,
        Designation::TF,
        Designation::FB,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Designation::T => "isT",
            Designation::F => "isF",
            Designation::B => "isB",
            Designation::TB => "isTB",
            Designation::TF => "isTF",
            Designation::FB => "isFB",
        }
    }

    pub fn unary(self) -> Unary {
        match self {
            Designation::T => Unary::ModT,
            Designation::F => Unary::ModF,
            Designation::B => Unary::ModB,
            Designation::TB => Unary::ModTB,
            Designation::TF => Unary::ModTF,
            Designation::FB => Unary::ModFB,
        }
    }
}

/// Binary connectives available in the surface syntax. Only `Or` is core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conn {
    Or,
    And,
    /// `~>`
    Weak,
    /// `==>`
    Strong,
    /// `==`
    Equiv,
}

impl Conn {
    pub const ALL: [Conn; 5] = [Conn::Or, Conn::And, Conn::Weak, Conn::Strong, Conn::Equiv];

    pub fn symbol(self) -> &'static str {
        match self {
            Conn::Or => "|",
            Conn::And => "&",
            Conn::Weak => "~>",
            Conn::Strong => "==>",
            Conn::Equiv => "==",
        }
    }
}

/// One-argument modalities. The first four are core.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Modality {
    Someone,
    Quorum,
    Yesterday,
    Tomorrow,
    Everyone,
    Coquorum,
    QuorumBox,
    CoquorumDiamond,
    SomeoneAll,
    EveryoneAll,
    Forever,
    Sometime,
    Infinitely,
    Finally,
    Recent,
    URecent,
    Pointwise,
}

impl Modality {
    pub const ALL: [Modality; 17] = [
        Modality::Someone,
        Modality::Quorum,
        Modality::Yesterday,
        Modality::Tomorrow,
        Modality::Everyone,
        Modality::Coquorum,
        Modality::QuorumBox,
        Modality::CoquorumDiamond,
        Modality::SomeoneAll,
        Modality::EveryoneAll,
        Modality::Forever,
        Modality::Sometime,
        Modality::Infinitely,
        Modality::Finally,
        Modality::Recent,
        Modality::URecent,
        Modality::Pointwise,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Modality::Someone => "someone",
            Modality::Quorum => "quorum",
            Modality::Yesterday => "yesterday",
            Modality::Tomorrow => "tomorrow",
            Modality::Everyone => "everyone",
            Modality::Coquorum => "coquorum",
            Modality::QuorumBox => "quorumbox",
            Modality::CoquorumDiamond => "coquorumdiamond",
            Modality::SomeoneAll => "someoneall",
            Modality::EveryoneAll => "everyoneall",
            Modality::Forever => "forever",
            Modality::Sometime => "sometime",
            Modality::Infinitely => "infinitely",
            Modality::Finally => "finally",
            Modality::Recent => "recent",
            Modality::URecent => "urecent",
            Modality::Pointwise => "pointwise",
        }
    }

    pub fn is_core(self) -> bool {
        matches!(self, Modality::Someone | Modality::Quorum | Modality::Yesterday | Modality::Tomorrow)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
    /// `exists1`: exactly one.
    Unique,
    /// `exists01`: at most one.
    Affine,
}

impl Quantifier {
    pub const ALL: [Quantifier; 4] = [Quantifier::Exists, Quantifier::Forall, Quantifier::Unique, Quantifier::Affine];

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
            Quantifier::Unique => "exists1",
            Quantifier::Affine => "exists01",
        }
    }
}

/// An entry of `correct[...]`: either a bare predicate symbol (quantified over
/// all argument tuples) or an arbitrary predicate.
#[derive(Clone, Debug, PartialEq)]
pub enum CorrectItem {
    Symbol { name: String, arity: usize },
    Pred(Pred),
}

/// Predicates: the core grammar plus sugar.
#[derive(Clone, Debug, PartialEq)]
pub enum Pred {
    /// Only `B` is core; `T` and `F` are sugar.
    Lit(TruthValue),
    Eq(Term, Term),
    Atom(String, Vec<Term>),
    Not(Box<Pred>),
    /// Only `isT` is core.
    Is(Designation, Box<Pred>),
    Bin(Conn, Box<Pred>, Box<Pred>),
    Modal(Modality, Box<Pred>),
    Quant(Quantifier, String, Box<Pred>),
    /// `mru a. body @ t`: `t` is a value that most recently made `body` true.
    Mru(String, Box<Pred>, Term),
    Correct(Vec<CorrectItem>),
    /// Least fixed point binding the single fixed-point variable.
    Fix(Box<Pred>),
    FixVar,
    /// A precomputed context table standing in for the fixed-point variable.
    Kappa(Arc<ContextTable>),
}

impl Pred {
    pub fn atom(name: &str, args: Vec<Term>) -> Pred {
        Pred::Atom(name.to_string(), args)
    }

    pub fn constant(name: &str) -> Pred {
        Pred::Atom(name.to_string(), Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Pred) -> Pred {
        Pred::Not(Box::new(p))
    }

    pub fn is(d: Designation, p: Pred) -> Pred {
        Pred::Is(d, Box::new(p))
    }

    pub fn bin(c: Conn, a: Pred, b: Pred) -> Pred {
        Pred::Bin(c, Box::new(a), Box::new(b))
    }

    pub fn or(a: Pred, b: Pred) -> Pred {
        Pred::bin(Conn::Or, a, b)
    }

    pub fn and(a: Pred, b: Pred) -> Pred {
        Pred::bin(Conn::And, a, b)
    }

    pub fn modal(m: Modality, p: Pred) -> Pred {
        Pred::Modal(m, Box::new(p))
    }

    pub fn quant(q: Quantifier, var: &str, p: Pred) -> Pred {
        Pred::Quant(q, var.to_string(), Box::new(p))
    }

    pub fn fix(body: Pred) -> Pred {
        Pred::Fix(Box::new(body))
    }

    /// Whether the node belongs to the core grammar (children not inspected).
    pub fn is_core_node(&self) -> bool {
        match self {
            Pred::Lit(tv) => *tv == TruthValue::Both,
            Pred::Eq(..) | Pred::Atom(..) | Pred::Not(_) | Pred::Fix(_) | Pred::FixVar | Pred::Kappa(_) => true,
            Pred::Is(d, _) => *d == Designation::T,
            Pred::Bin(c, ..) => *c == Conn::Or,
            Pred::Modal(m, _) => m.is_core(),
            Pred::Quant(q, ..) => *q == Quantifier::Exists,
            Pred::Mru(..) | Pred::Correct(_) => false,
        }
    }

    /// Whether every node is core.
    pub fn is_core(&self) -> bool {
        self.is_core_node() && self.children().iter().all(|c| c.is_core())
    }

    pub fn children(&self) -> Vec<&Pred> {
        match self {
            Pred::Lit(_) | Pred::Eq(..) | Pred::Atom(..) | Pred::FixVar | Pred::Kappa(_) => vec![],
            Pred::Not(p) | Pred::Is(_, p) | Pred::Modal(_, p) | Pred::Quant(_, _, p) | Pred::Mru(_, p, _) | Pred::Fix(p) => {
                vec![p]
            }
            Pred::Bin(_, a, b) => vec![a, b],
            Pred::Correct(items) => items
                .iter()
                .filter_map(|i| match i {
                    CorrectItem::Pred(p) => Some(p),
                    CorrectItem::Symbol { .. } => None,
                })
                .collect(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("predicate symbol {0:?} declared twice")]
    Duplicate(String),
    #[error("predicate symbol {0:?} conflicts with a keyword")]
    Reserved(String),
    #[error("predicate symbol {0:?} is not a valid identifier")]
    BadName(String),
    #[error("predicate symbol {name:?} has arity {left} in one signature and {right} in the other")]
    Conflict { name: String, left: usize, right: usize },
}

/// Predicate symbols with their arities. Equality ignores declaration order,
/// which only affects rendering.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    symbols: BTreeMap<String, usize>,
    order: Vec<String>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Signature) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new<S: AsRef<str>, I: IntoIterator<Item = (S, usize)>>(symbols: I) -> Result<Signature, SignatureError> {
        let mut sig = Signature::default();
        for (name, arity) in symbols {
            sig.add(name.as_ref(), arity)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if !super::parse::is_identifier(name) {
            return Err(SignatureError::BadName(name.to_string()));
        }
        if super::parse::is_reserved(name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        if self.symbols.insert(name.to_string(), arity).is_some() {
            return Err(SignatureError::Duplicate(name.to_string()));
        }
        self.order.push(name.to_string());
        Ok(())
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// Symbols in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.order.iter().map(move |n| (n.as_str(), self.symbols[n]))
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Union of two signatures; shared symbols must agree on arity.
    pub fn merged(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut out = self.clone();
        for (name, arity) in other.iter() {
            match out.arity(name) {
                Some(a) if a == arity => {}
                Some(a) => return Err(SignatureError::Conflict { name: name.to_string(), left: a, right: arity }),
                None => out.add(name, arity)?,
            }
        }
        Ok(out)
    }

    /// Compact text form, e.g. `leader:0, accept:1`.
    pub fn render(&self) -> String {
        self.iter().map(|(n, a)| format!("{n}:{a}")).collect::<Vec<_>>().join(", ")
    }
}
