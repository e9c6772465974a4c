//! Models, lasso timelines and valuations, with the JSON trace format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semitopology::{Semitopology, SemitopologyError, SemitopologySpec};
use crate::syntax::{is_identifier, is_reserved, Signature, SignatureError, UNDEFINED_VALUE};
use crate::truth::TruthValue;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("the value domain is empty")]
    EmptyValues,
    #[error("value {0:?} listed twice")]
    DuplicateValue(String),
    #[error("value {0:?} is not a valid identifier or is a keyword")]
    BadValueName(String),
    #[error("invalid time structure: prefix {prefix}, loop {loop_start} (need 0 <= loop < prefix)")]
    BadTime { prefix: usize, loop_start: usize },
    #[error(transparent)]
    Semitopology(#[from] SemitopologyError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("unknown predicate symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol {symbol:?} takes {expected} arguments, got {got}")]
    ArityMismatch { symbol: String, expected: usize, got: usize },
    #[error("stage {stage} is outside the prefix of length {prefix}")]
    StageOutOfRange { stage: usize, prefix: usize },
    #[error("point {point} is outside the {points}-point model")]
    PointOutOfRange { point: usize, points: usize },
    #[error("value {0:?} is not in the value domain")]
    UnknownValue(String),
    #[error("cannot infer the arity of {0:?}; list it in the trace signature")]
    MissingArity(String),
    #[error("malformed trace: {0}")]
    Json(String),
}

/// The finite set of values that predicate arguments range over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDomain {
    names: Vec<String>,
}

impl ValueDomain {
    pub fn new<S: AsRef<str>>(names: impl IntoIterator<Item = S>) -> Result<ValueDomain, ModelError> {
        let mut out: Vec<String> = Vec::new();
        for n in names {
            let n = n.as_ref();
            if !is_identifier(n) || is_reserved(n) {
                return Err(ModelError::BadValueName(n.to_string()));
            }
            if out.iter().any(|m| m == n) {
                return Err(ModelError::DuplicateValue(n.to_string()));
            }
            out.push(n.to_string());
        }
        if out.is_empty() {
            return Err(ModelError::EmptyValues);
        }
        Ok(ValueDomain { names: out })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn has_undefined(&self) -> bool {
        self.index_of(UNDEFINED_VALUE).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub semitopology: Semitopology,
    pub values: ValueDomain,
}

impl Model {
    pub fn new(semitopology: Semitopology, values: ValueDomain) -> Model {
        Model { semitopology, values }
    }
}

/// A lasso: stages `0..prefix`, after which the timeline returns to
/// `loop_start` forever.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeStructure {
    pub prefix: usize,
    #[serde(rename = "loop")]
    pub loop_start: usize,
}

impl TimeStructure {
    pub fn new(prefix: usize, loop_start: usize) -> Result<TimeStructure, ModelError> {
        if loop_start >= prefix {
            return Err(ModelError::BadTime { prefix, loop_start });
        }
        Ok(TimeStructure { prefix, loop_start })
    }

    /// The last stage repeats forever.
    pub fn stutter(prefix: usize) -> Result<TimeStructure, ModelError> {
        TimeStructure::new(prefix, prefix.saturating_sub(1))
    }

    pub fn period(&self) -> usize {
        self.prefix - self.loop_start
    }

    /// Valuation stage governing the unrolled stage `n`.
    pub fn stage_of(&self, n: usize) -> usize {
        if n < self.prefix {
            n
        } else {
            self.loop_start + (n - self.loop_start) % self.period()
        }
    }
}

/// Truth values of every predicate symbol at every valuation stage, point
/// and argument tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct Valuation {
    model: Model,
    time: TimeStructure,
    signature: Signature,
    symbols: BTreeMap<String, SymbolCells>,
}

#[derive(Clone, Debug, PartialEq)]
struct SymbolCells {
    arity: usize,
    tuples: usize,
    default: TruthValue,
    cells: Vec<TruthValue>,
}

impl Valuation {
    /// Every symbol starts out `F` everywhere.
    pub fn new(model: Model, time: TimeStructure, signature: Signature) -> Valuation {
        let points = model.semitopology.point_count();
        let values = model.values.len();
        let symbols = signature
            .iter()
            .map(|(name, arity)| {
                let tuples = values.pow(arity as u32);
                let cells = vec![TruthValue::False; time.prefix * points * tuples];
                (name.to_string(), SymbolCells { arity, tuples, default: TruthValue::False, cells })
            })
            .collect();
        Valuation { model, time, signature, symbols }
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn semitopology(&self) -> &Semitopology {
        &self.model.semitopology
    }

    pub fn values(&self) -> &ValueDomain {
        &self.model.values
    }

    pub fn time(&self) -> TimeStructure {
        self.time
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    fn cells(&self, symbol: &str) -> Result<&SymbolCells, ModelError> {
        self.symbols.get(symbol).ok_or_else(|| ModelError::UnknownSymbol(symbol.to_string()))
    }

    fn cells_mut(&mut self, symbol: &str) -> Result<&mut SymbolCells, ModelError> {
        self.symbols.get_mut(symbol).ok_or_else(|| ModelError::UnknownSymbol(symbol.to_string()))
    }

    fn tuple_index(&self, symbol: &str, args: &[usize]) -> Result<usize, ModelError> {
        let c = self.cells(symbol)?;
        if args.len() != c.arity {
            return Err(ModelError::ArityMismatch { symbol: symbol.to_string(), expected: c.arity, got: args.len() });
        }
        let n = self.model.values.len();
        Ok(args.iter().fold(0, |acc, &a| acc * n + a))
    }

    fn resolve_args(&self, args: &[&str]) -> Result<Vec<usize>, ModelError> {
        args.iter()
            .map(|a| self.model.values.index_of(a).ok_or_else(|| ModelError::UnknownValue(a.to_string())))
            .collect()
    }

    fn check_coords(&self, stage: usize, point: usize) -> Result<(), ModelError> {
        if stage >= self.time.prefix {
            return Err(ModelError::StageOutOfRange { stage, prefix: self.time.prefix });
        }
        let points = self.model.semitopology.point_count();
        if point >= points {
            return Err(ModelError::PointOutOfRange { point, points });
        }
        Ok(())
    }

    /// Lookup by value indices at a valuation stage (`stage < prefix`).
    pub fn get(&self, symbol: &str, stage: usize, point: usize, args: &[usize]) -> Result<TruthValue, ModelError> {
        self.check_coords(stage, point)?;
        let t = self.tuple_index(symbol, args)?;
        let c = self.cells(symbol)?;
        let points = self.model.semitopology.point_count();
        Ok(c.cells[(stage * points + point) * c.tuples + t])
    }

    pub fn get_named(&self, symbol: &str, stage: usize, point: usize, args: &[&str]) -> Result<TruthValue, ModelError> {
        let args = self.resolve_args(args)?;
        self.get(symbol, stage, point, &args)
    }

    pub fn set(&mut self, symbol: &str, stage: usize, point: usize, args: &[&str], tv: TruthValue) -> Result<(), ModelError> {
        let args = self.resolve_args(args)?;
        self.set_indexed(symbol, stage, point, &args, tv)
    }

    pub fn set_indexed(&mut self, symbol: &str, stage: usize, point: usize, args: &[usize], tv: TruthValue) -> Result<(), ModelError> {
        self.check_coords(stage, point)?;
        let t = self.tuple_index(symbol, args)?;
        let points = self.model.semitopology.point_count();
        let c = self.cells_mut(symbol)?;
        let i = (stage * points + point) * c.tuples + t;
        c.cells[i] = tv;
        Ok(())
    }

    /// Sets the value at `point` for every stage from `from` to the end of the prefix.
    pub fn set_from(&mut self, symbol: &str, from: usize, point: usize, args: &[&str], tv: TruthValue) -> Result<(), ModelError> {
        for stage in from..self.time.prefix {
            self.set(symbol, stage, point, args, tv)?;
        }
        Ok(())
    }

    /// Overwrites every cell of `symbol` and records `tv` as its default.
    pub fn set_default(&mut self, symbol: &str, tv: TruthValue) -> Result<(), ModelError> {
        let c = self.cells_mut(symbol)?;
        c.default = tv;
        c.cells.iter_mut().for_each(|x| *x = tv);
        Ok(())
    }

    pub fn default_of(&self, symbol: &str) -> Result<TruthValue, ModelError> {
        Ok(self.cells(symbol)?.default)
    }

    /// A crashed participant: every argument tuple of the listed symbols
    /// (all symbols when `None`) is `B` at `point` from stage `from` on.
    pub fn crash(&mut self, point: usize, from: usize, symbols: Option<&[String]>) -> Result<(), ModelError> {
        let names: Vec<String> = match symbols {
            Some(s) => s.to_vec(),
            None => self.signature.iter().map(|(n, _)| n.to_string()).collect(),
        };
        let points = self.model.semitopology.point_count();
        if point >= points {
            return Err(ModelError::PointOutOfRange { point, points });
        }
        let prefix = self.time.prefix;
        for name in names {
            let c = self.cells_mut(&name)?;
            for stage in from.min(prefix)..prefix {
                let base = (stage * points + point) * c.tuples;
                c.cells[base..base + c.tuples].iter_mut().for_each(|x| *x = TruthValue::Both);
            }
        }
        Ok(())
    }

    /// Total number of cells across all symbols; see [`Valuation::set_flat`].
    pub fn flat_len(&self) -> usize {
        self.symbols.values().map(|c| c.cells.len()).sum()
    }

    /// Addresses cells by one global index, symbols in name order.
    pub fn set_flat(&mut self, mut i: usize, tv: TruthValue) {
        for c in self.symbols.values_mut() {
            if i < c.cells.len() {
                c.cells[i] = tv;
                return;
            }
            i -= c.cells.len();
        }
        panic!("flat cell index out of range");
    }

    pub fn get_flat(&self, mut i: usize) -> TruthValue {
        for c in self.symbols.values() {
            if i < c.cells.len() {
                return c.cells[i];
            }
            i -= c.cells.len();
        }
        panic!("flat cell index out of range");
    }

    /// Reads a trace. Symbol arities come from `signature`, then the trace's
    /// own `signature` field, then the argument counts seen in entries.
    pub fn from_trace(trace: &Trace, signature: Option<&Signature>) -> Result<Valuation, ModelError> {
        let semitopology = trace.model.build()?;
        let values = ValueDomain::new(&trace.values)?;
        let time = TimeStructure::new(trace.time.prefix, trace.time.loop_start)?;
        let mut sig = signature.cloned().unwrap_or_default();
        if let Some(own) = &trace.signature {
            let own = Signature::new(own.iter().map(|(k, v)| (k.as_str(), *v)))?;
            sig = sig.merged(&own)?;
        }
        for e in &trace.entries {
            match sig.arity(&e.pred) {
                Some(a) if a != e.args.len() => {
                    return Err(ModelError::ArityMismatch { symbol: e.pred.clone(), expected: a, got: e.args.len() })
                }
                Some(_) => {}
                None => sig.add(&e.pred, e.args.len())?,
            }
        }
        for name in trace.defaults.keys() {
            if !sig.contains(name) {
                return Err(ModelError::MissingArity(name.clone()));
            }
        }
        let mut v = Valuation::new(Model::new(semitopology, values), time, sig);
        for (name, tv) in &trace.defaults {
            v.set_default(name, *tv)?;
        }
        for e in &trace.entries {
            let args: Vec<&str> = e.args.iter().map(String::as_str).collect();
            v.set(&e.pred, e.stage, e.point, &args, e.tv)?;
        }
        for c in &trace.crashed {
            v.crash(c.point, c.from, c.preds.as_deref())?;
        }
        Ok(v)
    }

    pub fn from_json(text: &str, signature: Option<&Signature>) -> Result<Valuation, ModelError> {
        let trace: Trace = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        Valuation::from_trace(&trace, signature)
    }

    /// Trace listing every cell that differs from its symbol's default.
    pub fn to_trace(&self) -> Trace {
        let points = self.model.semitopology.point_count();
        let nvals = self.model.values.len();
        let mut entries = Vec::new();
        for (name, _) in self.signature.iter() {
            let c = &self.symbols[name];
            for stage in 0..self.time.prefix {
                for point in 0..points {
                    for t in 0..c.tuples {
                        let tv = c.cells[(stage * points + point) * c.tuples + t];
                        if tv == c.default {
                            continue;
                        }
                        let mut args = vec![String::new(); c.arity];
                        let mut rest = t;
                        for slot in args.iter_mut().rev() {
                            *slot = self.model.values.names()[rest % nvals].clone();
                            rest /= nvals;
                        }
                        entries.push(TraceEntry { pred: name.to_string(), stage, point, args, tv });
                    }
                }
            }
        }
        Trace {
            model: self.model.semitopology.to_spec(),
            values: self.model.values.names().to_vec(),
            time: self.time,
            defaults: self.symbols.iter().map(|(n, c)| (n.clone(), c.default)).collect(),
            entries,
            crashed: Vec::new(),
            signature: Some(self.signature.iter().map(|(n, a)| (n.to_string(), a)).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_trace()).expect("trace serialises")
    }
}

/// JSON form of a valuation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub model: SemitopologySpec,
    pub values: Vec<String>,
    pub time: TimeStructure,
    #[serde(default)]
    pub defaults: BTreeMap<String, TruthValue>,
    #[serde(default)]
    pub entries: Vec<TraceEntry>,
    #[serde(default)]
    pub crashed: Vec<CrashEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<BTreeMap<String, usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub pred: String,
    pub stage: usize,
    pub point: usize,
    #[serde(default)]
    pub args: Vec<String>,
    pub tv: TruthValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrashEntry {
    pub point: usize,
    pub from: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preds: Option<Vec<String>>,
}
