//! The three-element truth-value lattice `F < B < T` and the operations on it.
//!
//! Every connective is stored as an explicit lookup table. The tables are laid
//! out with rows and columns in the order `T, B, F` so they can be compared
//! against a printed truth table line by line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A truth value. The derived ordering is the lattice order `False < Both < True`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TruthValue {
    #[serde(rename = "F")]
    False,
    /// The middle value: valid but not correct. Models "crashed" / "no answer".
    #[serde(rename = "B")]
    Both,
    #[serde(rename = "T")]
    True,
}

use TruthValue::{Both as B, False as F, True as T};

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [T, B, F];

    pub fn letter(self) -> char {
        match self {
            T => 'T',
            B => 'B',
            F => 'F',
        }
    }

    pub fn from_letter(c: char) -> Option<TruthValue> {
        match c {
            'T' => Some(T),
            'B' => Some(B),
            'F' => Some(F),
            _ => None,
        }
    }

    pub fn from_bool(b: bool) -> TruthValue {
        if b {
            T
        } else {
            F
        }
    }

    pub fn is_valid(self) -> bool {
        classify(Class::Valid, self)
    }

    pub fn is_true(self) -> bool {
        self == T
    }

    pub fn join(self, other: TruthValue) -> TruthValue {
        self.max(other)
    }

    pub fn meet(self, other: TruthValue) -> TruthValue {
        self.min(other)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> TruthValue {
        transform(Unary::Neg, self)
    }

    pub fn is_t(self) -> TruthValue {
        transform(Unary::ModT, self)
    }

    // row/column index in the T, B, F table layout
    fn slot(self) -> usize {
        match self {
            T => 0,
            B => 1,
            F => 2,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for TruthValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => TruthValue::from_letter(c).ok_or_else(|| format!("not a truth value: {s:?}")),
            _ => Err(format!("not a truth value: {s:?}")),
        }
    }
}

/// Binary connectives on THREE.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Binary {
    And,
    Or,
    /// Weak implication `~>`: valid iff a true antecedent has a valid consequent.
    Notor,
    /// Strong implication `==>`: valid iff a true antecedent has a true consequent.
    Impc,
    Imp,
    Leq,
    LatticeIff,
    IffCc,
    /// Truth-value identity, returns only `T` or `F`.
    Equiv,
}

impl Binary {
    pub const ALL: [Binary; 9] = [
        Binary::And,
        Binary::Or,
        Binary::Notor,
        Binary::Impc,
        Binary::Imp,
        Binary::Leq,
        Binary::LatticeIff,
        Binary::IffCc,
        Binary::Equiv,
    ];

    /// The full table, rows indexed by the left argument and columns by the
    /// right one, both in the order `T, B, F`.
    pub fn table(self) -> &'static [[TruthValue; 3]; 3] {
        match self {
            Binary::And => &AND,
            Binary::Or => &OR,
            Binary::Notor => &NOTOR,
            Binary::Impc => &IMPC,
            Binary::Imp => &IMP,
            Binary::Leq => &LEQ,
            Binary::LatticeIff => &LATTICE_IFF,
            Binary::IffCc => &IFF_CC,
            Binary::Equiv => &EQUIV,
        }
    }
}

const AND: [[TruthValue; 3]; 3] = [[T, B, F], [B, B, F], [F, F, F]];
const OR: [[TruthValue; 3]; 3] = [[T, T, T], [T, B, B], [T, B, F]];
const NOTOR: [[TruthValue; 3]; 3] = [[T, B, F], [T, B, B], [T, T, T]];
const IMPC: [[TruthValue; 3]; 3] = [[T, F, F], [T, B, B], [T, T, T]];
const IMP: [[TruthValue; 3]; 3] = [[T, B, F], [T, B, F], [T, T, T]];
const LEQ: [[TruthValue; 3]; 3] = [[T, F, F], [T, B, F], [T, T, T]];
const LATTICE_IFF: [[TruthValue; 3]; 3] = [[T, B, F], [B, B, B], [F, B, T]];
const IFF_CC: [[TruthValue; 3]; 3] = [[T, F, F], [F, B, B], [F, B, T]];
const EQUIV: [[TruthValue; 3]; 3] = [[T, F, F], [F, T, F], [F, F, T]];

/// Unary connectives: negation and the six value-identifying modalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Unary {
    Neg,
    ModT,
    ModF,
    ModB,
    ModTB,
    ModTF,
    ModFB,
}

impl Unary {
    pub const ALL: [Unary; 7] = [
        Unary::Neg,
        Unary::ModT,
        Unary::ModF,
        Unary::ModB,
        Unary::ModTB,
        Unary::ModTF,
        Unary::ModFB,
    ];

    /// Results on `T, B, F` in that order.
    pub fn table(self) -> &'static [TruthValue; 3] {
        match self {
            Unary::Neg => &[F, B, T],
            Unary::ModT => &[T, F, F],
            Unary::ModF => &[F, F, T],
            Unary::ModB => &[F, T, F],
            Unary::ModTB => &[T, T, F],
            Unary::ModTF => &[T, F, T],
            Unary::ModFB => &[F, T, T],
        }
    }
}

pub fn combine(conn: Binary, a: TruthValue, b: TruthValue) -> TruthValue {
    conn.table()[a.slot()][b.slot()]
}

pub fn transform(conn: Unary, a: TruthValue) -> TruthValue {
    conn.table()[a.slot()]
}

/// The four designated subsets of THREE.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    /// `{T, B}`
    Valid,
    /// `{T, F}`
    Correct,
    /// `{T}`
    True,
    /// `{F}`
    False,
}

impl Class {
    pub fn contains(self, a: TruthValue) -> bool {
        classify(self, a)
    }
}

pub fn classify(which: Class, a: TruthValue) -> bool {
    match which {
        Class::Valid => matches!(a, T | B),
        Class::Correct => matches!(a, T | F),
        Class::True => a == T,
        Class::False => a == F,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fold {
    Sup,
    Inf,
}

/// Join or meet of a finite collection. The empty join is `F`, the empty meet is `T`.
pub fn fold<I: IntoIterator<Item = TruthValue>>(kind: Fold, values: I) -> TruthValue {
    match kind {
        Fold::Sup => values.into_iter().fold(F, TruthValue::join),
        Fold::Inf => values.into_iter().fold(T, TruthValue::meet),
    }
}
