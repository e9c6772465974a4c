//! Table-at-a-time evaluation of predicates over a valuation.

use thiserror::Error;

use super::model::Valuation;
use super::table::{ContextTable, Space};
use crate::semitopology::PointSet;
use crate::syntax::{
    all_fixpoints_positive, desugar_keeping_mru, fix_var_under_sugar, free_info, past_depth, Conn, CorrectItem, Modality, Pred, Quantifier,
    Term,
};
use crate::truth::{combine, transform, Binary, Class, TruthValue, Unary};

use TruthValue::{False as F, True as T};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("predicate is not closed (free variables: {free:?}, unbound fixed-point variable: {unbound_fix})")]
    NotClosed { free: Vec<String>, unbound_fix: bool },
    #[error("a fixed-point body uses its variable under an odd number of negations")]
    NotPositive,
    #[error("the fixed-point variable occurs inside a temporal operator that rebinds it")]
    CapturedFixVar,
    #[error("table failed to stabilise at stage {stage}, point {point}, open {open}")]
    StabilizationFailure { stage: usize, point: usize, open: usize },
    #[error("fixed-point iteration did not converge within {0} rounds")]
    NoConvergence(usize),
    #[error("unknown predicate symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol {symbol:?} takes {expected} arguments, got {got}")]
    ArityMismatch { symbol: String, expected: usize, got: usize },
    #[error("value {0:?} is not in the value domain")]
    UnknownValue(String),
    #[error("table literal has {got} points x {got_opens} opens, expected {points} x {opens}")]
    TableShape { points: usize, opens: usize, got: usize, got_opens: usize },
    #[error("stage/point/open ({stage}, {point}, {open}) is outside the context space")]
    ContextOutOfRange { stage: usize, point: usize, open: usize },
}

/// The finite stand-in for the natural-number timeline used while
/// evaluating a predicate with past-operator depth `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    pub stages: usize,
    pub tomorrow: Vec<usize>,
    pub yesterday: Vec<Option<usize>>,
}

pub fn quotient(time: super::model::TimeStructure, depth: usize) -> Quotient {
    let p = time.period();
    let stages = time.loop_start + (depth + 2).max(2) * p;
    let space = Space::new(stages, 1, 1, p);
    Quotient {
        stages,
        tomorrow: (0..stages).map(|s| space.tomorrow(s)).collect(),
        yesterday: (0..stages).map(|s| s.checked_sub(1)).collect(),
    }
}

/// A context: quotient stage, point and index into the nonempty opens.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Context {
    pub stage: usize,
    pub point: usize,
    pub open: usize,
}

/// Where a validity judgement is made; omitted coordinates are universally
/// quantified. Stages are unrolled stage numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum At {
    Context(Context),
    StagePoint { stage: usize, point: usize },
    Stage(usize),
    Everywhere,
}

type Lattice = fn(TruthValue, TruthValue) -> TruthValue;

fn precheck(p: &Pred) -> Result<(), EvalError> {
    let (free, fix_closed) = free_info(p);
    if !free.is_empty() || !fix_closed {
        return Err(EvalError::NotClosed { free: free.into_iter().collect(), unbound_fix: !fix_closed });
    }
    if fix_var_under_sugar(p) {
        return Err(EvalError::CapturedFixVar);
    }
    if !all_fixpoints_positive(p) {
        return Err(EvalError::NotPositive);
    }
    Ok(())
}

/// The denotation: the predicate is reduced to the core grammar (keeping
/// `mru`, which is evaluated by a scan of the past) and evaluated clause by clause.
pub fn denote(p: &Pred, val: &Valuation) -> Result<ContextTable, EvalError> {
    precheck(p)?;
    let core = desugar_keeping_mru(p);
    Evaluator::new(val, &core).run(&core)
}

/// Evaluates sugar operators by their closed-form definitions instead of
/// desugaring them.
pub fn direct_eval(p: &Pred, val: &Valuation) -> Result<ContextTable, EvalError> {
    precheck(p)?;
    // Size the horizon by the desugared form so both routes share a space.
    let core = desugar_keeping_mru(p);
    let mut ev = Evaluator::new(val, &core);
    ev.widen_for(p);
    ev.run(p)
}

/// Validity (`T` or `B`) at every context selected by `at`.
pub fn holds(p: &Pred, val: &Valuation, at: At) -> Result<bool, EvalError> {
    let table = denote(p, val)?;
    holds_in(&table, at)
}

/// [`holds`] on an already computed table.
pub fn holds_in(table: &ContextTable, at: At) -> Result<bool, EvalError> {
    let sp = table.space();
    let valid = |s: usize, pt: usize, o: usize| Class::Valid.contains(table.get_unrolled(s, pt, o));
    let check_point = |point: usize, open: usize, stage: usize| {
        if point >= sp.points || open >= sp.opens {
            Err(EvalError::ContextOutOfRange { stage, point, open })
        } else {
            Ok(())
        }
    };
    match at {
        At::Context(c) => {
            check_point(c.point, c.open, c.stage)?;
            Ok(valid(c.stage, c.point, c.open))
        }
        At::StagePoint { stage, point } => {
            check_point(point, 0, stage)?;
            Ok((0..sp.opens).all(|o| valid(stage, point, o)))
        }
        At::Stage(stage) => Ok((0..sp.points).all(|pt| (0..sp.opens).all(|o| valid(stage, pt, o)))),
        At::Everywhere => Ok(table.cells().iter().all(|&v| Class::Valid.contains(v))),
    }
}

/// Whether, at `stage`, the value at each point is the same for every open.
pub fn is_pointwise(p: &Pred, val: &Valuation, stage: usize) -> Result<bool, EvalError> {
    let table = denote(p, val)?;
    Ok(table_is_pointwise(&table, stage))
}

pub fn table_is_pointwise(table: &ContextTable, stage: usize) -> bool {
    let sp = table.space();
    (0..sp.points).all(|pt| (1..sp.opens).all(|o| table.get_unrolled(stage, pt, o) == table.get_unrolled(stage, pt, 0)))
}

struct Evaluator<'a> {
    val: &'a Valuation,
    space: Space,
    opens: Vec<PointSet>,
    env: Vec<(String, usize)>,
}

fn kappa_stages(p: &Pred, acc: &mut usize) {
    if let Pred::Kappa(t) = p {
        *acc = (*acc).max(t.space().stages);
    }
    for c in p.children() {
        kappa_stages(c, acc);
    }
}

impl<'a> Evaluator<'a> {
    fn new(val: &'a Valuation, core: &Pred) -> Evaluator<'a> {
        let time = val.time();
        let q = quotient(time, past_depth(core));
        let mut stages = q.stages;
        let mut from_kappa = 0;
        kappa_stages(core, &mut from_kappa);
        while stages < from_kappa {
            stages += time.period();
        }
        let st = val.semitopology();
        let opens = st.nonempty_opens().to_vec();
        Evaluator { val, space: Space::new(stages, st.point_count(), opens.len(), time.period()), opens, env: Vec::new() }
    }

    fn widen_for(&mut self, p: &Pred) {
        let q = quotient(self.val.time(), past_depth(p));
        while self.space.stages < q.stages {
            self.space.stages += self.space.period;
        }
    }

    fn run(&mut self, p: &Pred) -> Result<ContextTable, EvalError> {
        let out = self.eval(p, None)?;
        self.check_stable(&out)?;
        Ok(out)
    }

    fn check_stable(&self, t: &ContextTable) -> Result<(), EvalError> {
        let sp = self.space;
        let start = sp.stages - 2 * sp.period;
        for s in start..start + sp.period {
            for point in 0..sp.points {
                for open in 0..sp.opens {
                    if t.get(s, point, open) != t.get(s + sp.period, point, open) {
                        return Err(EvalError::StabilizationFailure { stage: s, point, open });
                    }
                }
            }
        }
        Ok(())
    }

    fn constant(&self, v: TruthValue) -> ContextTable {
        ContextTable::constant(self.space, v)
    }

    fn term(&self, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(n, _)| n == v)
                .map(|(_, i)| *i)
                .ok_or_else(|| EvalError::NotClosed { free: vec![v.clone()], unbound_fix: false }),
            Term::Val(v) => self.val.values().index_of(v).ok_or_else(|| EvalError::UnknownValue(v.clone())),
        }
    }

    fn with_var<R>(&mut self, var: &str, value: usize, f: impl FnOnce(&mut Self) -> R) -> R {
        self.env.push((var.to_string(), value));
        let r = f(self);
        self.env.pop();
        r
    }

    /// Fold of `body` over every value of `var`.
    fn over_values(&mut self, var: &str, body: &Pred, fix: Option<&ContextTable>, fold: fn(TruthValue, TruthValue) -> TruthValue, unit: TruthValue) -> Result<ContextTable, EvalError> {
        let mut acc = self.constant(unit);
        for v in 0..self.val.values().len() {
            let t = self.with_var(var, v, |ev| ev.eval(body, fix))?;
            acc = acc.zip(&t, fold);
        }
        Ok(acc)
    }

    fn eval(&mut self, p: &Pred, fix: Option<&ContextTable>) -> Result<ContextTable, EvalError> {
        let sp = self.space;
        Ok(match p {
            Pred::Lit(v) => self.constant(*v),
            Pred::Eq(a, b) => self.constant(TruthValue::from_bool(self.term(a)? == self.term(b)?)),
            Pred::Atom(name, args) => {
                let arity = self.val.signature().arity(name).ok_or_else(|| EvalError::UnknownSymbol(name.clone()))?;
                if arity != args.len() {
                    return Err(EvalError::ArityMismatch { symbol: name.clone(), expected: arity, got: args.len() });
                }
                let idx = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                let time = self.val.time();
                let mut column = Vec::with_capacity(sp.stages * sp.points);
                for s in 0..sp.stages {
                    for pt in 0..sp.points {
                        let v = self.val.get(name, time.stage_of(s), pt, &idx).expect("coordinates checked");
                        column.push(v);
                    }
                }
                ContextTable::from_fn(sp, |s, pt, _| column[s * sp.points + pt])
            }
            Pred::Not(b) => self.eval(b, fix)?.map(TruthValue::neg),
            Pred::Is(d, b) => {
                let u = d.unary();
                self.eval(b, fix)?.map(|v| transform(u, v))
            }
            Pred::Bin(c, l, r) => {
                let conn = match c {
                    Conn::Or => Binary::Or,
                    Conn::And => Binary::And,
                    Conn::Weak => Binary::Notor,
                    Conn::Strong => Binary::Impc,
                    Conn::Equiv => Binary::Equiv,
                };
                let l = self.eval(l, fix)?;
                let r = self.eval(r, fix)?;
                l.zip(&r, |a, b| combine(conn, a, b))
            }
            Pred::Modal(m, b) => {
                let inner = self.eval(b, fix)?;
                self.modal(*m, &inner)
            }
            Pred::Quant(q, v, b) => match q {
                Quantifier::Exists => self.over_values(v, b, fix, TruthValue::join, F)?,
                Quantifier::Forall => self.over_values(v, b, fix, TruthValue::meet, T)?,
                Quantifier::Affine => self.affine(v, b, fix)?,
                Quantifier::Unique => {
                    let ex = self.over_values(v, b, fix, TruthValue::join, F)?;
                    let af = self.affine(v, b, fix)?;
                    ex.zip(&af, TruthValue::meet)
                }
            },
            Pred::Mru(v, b, t) => {
                let target = self.term(t)?;
                let witness = self.over_values(v, b, fix, TruthValue::join, F)?;
                let at_target = self.with_var(v, target, |ev| ev.eval(b, fix))?;
                ContextTable::from_fn(sp, |s, pt, o| {
                    (0..s)
                        .rev()
                        .find(|&n| witness.get(n, pt, o) == T)
                        .map(|n| at_target.get(n, pt, o).is_t())
                        .unwrap_or(F)
                })
            }
            Pred::Correct(items) => {
                let mut acc = self.constant(T);
                for item in items {
                    let t = match item {
                        CorrectItem::Pred(q) => self.eval(q, fix)?.map(|v| transform(Unary::ModTF, v)),
                        CorrectItem::Symbol { name, arity } => self.symbol_correct(name, *arity)?,
                    };
                    acc = acc.zip(&t, TruthValue::meet);
                }
                acc
            }
            Pred::Fix(body) => {
                let limit = 2 * sp.len() + 2;
                let mut kappa = self.constant(F);
                let mut rounds = 0;
                loop {
                    let next = self.eval(body, Some(&kappa))?;
                    if next == kappa {
                        break kappa;
                    }
                    kappa = next;
                    rounds += 1;
                    if rounds > limit {
                        return Err(EvalError::NoConvergence(limit));
                    }
                }
            }
            Pred::FixVar => match fix {
                Some(k) => k.clone(),
                None => return Err(EvalError::NotClosed { free: Vec::new(), unbound_fix: true }),
            },
            Pred::Kappa(k) => {
                let ks = k.space();
                if ks.points != sp.points || ks.opens != sp.opens {
                    return Err(EvalError::TableShape { points: sp.points, opens: sp.opens, got: ks.points, got_opens: ks.opens });
                }
                ContextTable::from_fn(sp, |s, pt, o| k.get_unrolled(s, pt, o))
            }
        })
    }

    // forall a, a'. (body & body[a ↦ a']) ~> a = a'
    fn affine(&mut self, var: &str, body: &Pred, fix: Option<&ContextTable>) -> Result<ContextTable, EvalError> {
        let n = self.val.values().len();
        let mut per_value = Vec::with_capacity(n);
        for v in 0..n {
            per_value.push(self.with_var(var, v, |ev| ev.eval(body, fix))?);
        }
        let mut acc = self.constant(T);
        for (i, a) in per_value.iter().enumerate() {
            for (j, b) in per_value.iter().enumerate() {
                let same = TruthValue::from_bool(i == j);
                let t = a.zip(b, |x, y| combine(Binary::Notor, x.meet(y), same));
                acc = acc.zip(&t, TruthValue::meet);
            }
        }
        Ok(acc)
    }

    fn symbol_correct(&mut self, name: &str, arity: usize) -> Result<ContextTable, EvalError> {
        let n = self.val.values().len();
        let mut acc = self.constant(T);
        for t in 0..n.pow(arity as u32) {
            let mut rest = t;
            let mut args = vec![Term::Val(String::new()); arity];
            for slot in args.iter_mut().rev() {
                *slot = Term::Val(self.val.values().names()[rest % n].clone());
                rest /= n;
            }
            let atom = self.eval(&Pred::Atom(name.to_string(), args), None)?;
            acc = acc.zip(&atom.map(|v| transform(Unary::ModTF, v)), TruthValue::meet);
        }
        Ok(acc)
    }

    fn someone(&self, c: &ContextTable, fold: fn(TruthValue, TruthValue) -> TruthValue, unit: TruthValue) -> ContextTable {
        ContextTable::from_fn(self.space, |s, _, o| self.opens[o].iter().fold(unit, |acc, q| fold(acc, c.get(s, q, o))))
    }

    fn quorum(&self, c: &ContextTable, fold: fn(TruthValue, TruthValue) -> TruthValue, unit: TruthValue) -> ContextTable {
        ContextTable::from_fn(self.space, |s, pt, _| (0..self.space.opens).fold(unit, |acc, o| fold(acc, c.get(s, pt, o))))
    }

    fn future(&self, c: &ContextTable, fold: fn(TruthValue, TruthValue) -> TruthValue, unit: TruthValue) -> ContextTable {
        let sp = self.space;
        ContextTable::from_fn(sp, |s, pt, o| sp.future(s).fold(unit, |acc, n| fold(acc, c.get(n, pt, o))))
    }

    fn past(&self, c: &ContextTable, inclusive: bool) -> ContextTable {
        ContextTable::from_fn(self.space, |s, pt, o| {
            let end = if inclusive { s + 1 } else { s };
            (0..end).fold(F, |acc, n| acc.join(c.get(n, pt, o)))
        })
    }

    fn modal(&self, m: Modality, c: &ContextTable) -> ContextTable {
        let sp = self.space;
        let (join, meet): (Lattice, Lattice) = (TruthValue::join, TruthValue::meet);
        match m {
            Modality::Someone => self.someone(c, join, F),
            Modality::Everyone => self.someone(c, meet, T),
            Modality::Quorum => self.quorum(c, join, F),
            Modality::Coquorum => self.quorum(c, meet, T),
            Modality::QuorumBox => self.quorum(&self.someone(c, meet, T), join, F),
            Modality::CoquorumDiamond => self.quorum(&self.someone(c, join, F), meet, T),
            Modality::SomeoneAll => self.quorum(&self.someone(c, join, F), join, F),
            Modality::EveryoneAll => self.quorum(&self.someone(c, meet, T), meet, T),
            Modality::Yesterday => ContextTable::from_fn(sp, |s, pt, o| if s == 0 { F } else { c.get(s - 1, pt, o) }),
            Modality::Tomorrow => ContextTable::from_fn(sp, |s, pt, o| c.get(sp.tomorrow(s), pt, o)),
            Modality::Forever => self.future(c, meet, T),
            Modality::Sometime => self.future(c, join, F),
            Modality::Infinitely => self.future(&self.future(c, join, F), meet, T),
            Modality::Finally => self.future(&self.future(c, meet, T), join, F),
            Modality::Recent => self.past(c, false),
            Modality::URecent => self.past(c, true),
            Modality::Pointwise => {
                let q = self.quorum(c, join, F);
                let cq = self.quorum(c, meet, T);
                let eq = q.zip(&cq, |a, b| combine(Binary::Equiv, a, b));
                self.quorum(&self.someone(&eq, meet, T), meet, T)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Model, TimeStructure, ValueDomain};
    use crate::semitopology::Semitopology;
    use crate::syntax::{parse, Parser, Signature};
    use crate::truth::TruthValue::Both as B;

    fn valuation(n: usize, f: usize, prefix: usize) -> Valuation {
        let model = Model::new(Semitopology::all_but(n, f).unwrap(), ValueDomain::new(["v1", "v2"]).unwrap());
        let sig = Signature::new([("P", 0), ("R", 1)]).unwrap();
        Valuation::new(model, TimeStructure::stutter(prefix).unwrap(), sig)
    }

    fn pred(v: &Valuation, text: &str) -> Pred {
        Parser::new(v.signature()).with_values(v.values().names()).parse(text).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(TimeStructure::new(5, 4).unwrap(), 0);
        assert_eq!(q.stages, 6);
        assert_eq!(q.tomorrow[5], 5);
        let q = quotient(TimeStructure::new(4, 2).unwrap(), 1);
        assert_eq!(q.stages, 8);
        assert_eq!(q.tomorrow[7], 6);
        assert_eq!(q.yesterday[0], None);
    }

    #[test]
    fn literal_and_equality_clauses() {
        let v = valuation(2, 1, 3);
        assert!(denote(&Pred::Lit(B), &v).unwrap().cells().iter().all(|&x| x == B));
        assert!(denote(&pred(&v, "v1 = v1"), &v).unwrap().cells().iter().all(|&x| x == T));
        assert!(denote(&pred(&v, "v1 = v2"), &v).unwrap().cells().iter().all(|&x| x == F));
        let y = denote(&pred(&v, "yesterday T"), &v).unwrap();
        assert!((0..2).all(|pt| (0..y.space().opens).all(|o| y.get(0, pt, o) == F)));
    }

    #[test]
    fn sometime_on_stutter_lasso() {
        let mut v = valuation(2, 1, 5);
        for pt in 0..2 {
            v.set("P", 3, pt, &[], T).unwrap();
        }
        let t = denote(&pred(&v, "sometime P"), &v).unwrap();
        assert_eq!(t.get(0, 0, 0), T);
        assert_eq!(t.get(3, 0, 0), F);
    }

    #[test]
    fn mru_scans_the_past() {
        let mut v = valuation(2, 1, 5);
        v.set("R", 1, 0, &["v1"], T).unwrap();
        v.set("R", 2, 0, &["v2"], T).unwrap();
        let at_v1 = direct_eval(&pred(&v, "mru a. R(a) @ v1"), &v).unwrap();
        let at_v2 = direct_eval(&pred(&v, "mru a. R(a) @ v2"), &v).unwrap();
        assert_eq!(at_v1.get(3, 0, 0), F);
        assert_eq!(at_v2.get(3, 0, 0), T);
        assert_eq!(at_v1.get(0, 0, 0), F);
        let desugared = denote(&crate::syntax::desugar(&pred(&v, "mru a. R(a) @ v2")), &v).unwrap();
        assert!(desugared.equivalent(&at_v2));
    }

    #[test]
    fn closedness_and_positivity_are_checked() {
        let v = valuation(2, 1, 3);
        let sig = v.signature().clone();
        let free = parse("R(a)", &sig).unwrap();
        assert!(matches!(denote(&free, &v), Err(EvalError::NotClosed { .. })));
        let neg = Pred::fix(Pred::not(Pred::FixVar));
        assert_eq!(denote(&neg, &v), Err(EvalError::NotPositive));
    }

    #[test]
    fn someone_is_not_pointwise() {
        let mut v = valuation(2, 1, 2);
        v.set("P", 0, 0, &[], T).unwrap();
        assert!(is_pointwise(&pred(&v, "P"), &v, 0).unwrap());
        assert!(!is_pointwise(&pred(&v, "someone P"), &v, 0).unwrap());
        assert!(is_pointwise(&pred(&v, "quorum someone P"), &v, 0).unwrap());
    }

    #[test]
    fn validity_judgements() {
        let v = valuation(2, 1, 3);
        assert!(holds(&Pred::Lit(B), &v, At::Everywhere).unwrap());
        assert!(!holds(&Pred::Lit(F), &v, At::Context(Context { stage: 1, point: 0, open: 0 })).unwrap());
        assert!(holds(&Pred::Lit(T), &v, At::Stage(40)).unwrap());
    }
}
