//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use qlogic::engine::{Model, TimeStructure, Valuation, ValueDomain};
use qlogic::semitopology::{PointSet, Semitopology};
use qlogic::syntax::{check_positive, free_info, Conn, CorrectItem, Designation, Modality, Pred, Quantifier, Signature, Term};
use qlogic::truth::TruthValue;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CONNS: [Conn; 5] = [Conn::Or, Conn::And, Conn::Weak, Conn::Strong, Conn::Equiv];
pub const DESIGNATIONS: [Designation; 6] =
    [Designation::T, Designation::F, Designation::B, Designation::TB, Designation::TF, Designation::FB];
pub const QUANTIFIERS: [Quantifier; 4] = [Quantifier::Exists, Quantifier::Forall, Quantifier::Unique, Quantifier::Affine];
pub const MODALITIES: [Modality; 17] = [
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

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `P, Q : 0` and `R : 1`.
pub fn sig() -> Signature {
    Signature::new([("P", 0), ("Q", 0), ("R", 1)]).unwrap()
}

pub fn values() -> Vec<String> {
    vec!["v1".into(), "v2".into()]
}

pub fn random_tv(rng: &mut ChaCha8Rng) -> TruthValue {
    TruthValue::ALL[rng.gen_range(0..3)]
}

/// A random semitopology on 1..=max_points points, generated by random sets.
pub fn random_semitopology(rng: &mut ChaCha8Rng, max_points: usize) -> Semitopology {
    let n = rng.gen_range(1..=max_points);
    let k = rng.gen_range(1..=4);
    let sets: Vec<PointSet> = (0..k).map(|_| PointSet(rng.gen_range(1..(1u64 << n)))).collect();
    Semitopology::generated_by(n, sets).unwrap()
}

pub fn random_valuation(rng: &mut ChaCha8Rng, st: &Semitopology, time: TimeStructure, sig: &Signature) -> Valuation {
    let model = Model::new(st.clone(), ValueDomain::new(values()).unwrap());
    let mut val = Valuation::new(model, time, sig.clone());
    for i in 0..val.flat_len() {
        val.set_flat(i, random_tv(rng));
    }
    val
}

/// A random lasso with prefix 1..=max_prefix.
pub fn random_time(rng: &mut ChaCha8Rng, max_prefix: usize) -> TimeStructure {
    let prefix = rng.gen_range(1..=max_prefix);
    TimeStructure::new(prefix, rng.gen_range(0..prefix)).unwrap()
}

/// Random closed predicates over [`sig`] and [`values`].
pub struct PredGen<'a> {
    pub rng: &'a mut ChaCha8Rng,
    /// Allow `mu` binders (with positive bodies).
    pub fixpoints: bool,
    /// Allow past operators (`yesterday`, `recent`, `urecent`, `mru`).
    pub past: bool,
}

impl PredGen<'_> {
    pub fn pred(&mut self, depth: usize) -> Pred {
        self.go(depth, &[], false)
    }

    /// A predicate whose free variables are among `bound`.
    pub fn open(&mut self, depth: usize, bound: &[&str]) -> Pred {
        let bound: Vec<String> = bound.iter().map(|s| s.to_string()).collect();
        self.go(depth, &bound, false)
    }

    /// A body positive in the fixed-point variable, for use under `mu`.
    pub fn fix_body(&mut self, depth: usize) -> Pred {
        positive_or_guarded(self.go(depth, &[], true))
    }

    fn term(&mut self, bound: &[String]) -> Term {
        if !bound.is_empty() && self.rng.gen_bool(0.6) {
            Term::var(&bound[self.rng.gen_range(0..bound.len())])
        } else {
            Term::val(if self.rng.gen_bool(0.5) { "v1" } else { "v2" })
        }
    }

    fn leaf(&mut self, bound: &[String], in_fix: bool) -> Pred {
        match self.rng.gen_range(0..8) {
            0 => Pred::Lit(random_tv(self.rng)),
            1 => Pred::constant("P"),
            2 => Pred::constant("Q"),
            3 => Pred::Eq(self.term(bound), self.term(bound)),
            4 if in_fix => Pred::FixVar,
            _ => Pred::atom("R", vec![self.term(bound)]),
        }
    }

    fn go(&mut self, depth: usize, bound: &[String], in_fix: bool) -> Pred {
        if depth == 0 || self.rng.gen_bool(0.15) {
            return self.leaf(bound, in_fix);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 => Pred::not(self.go(d, bound, in_fix)),
            1 => Pred::is(DESIGNATIONS[self.rng.gen_range(0..6)], self.go(d, bound, in_fix)),
            2 | 3 => {
                let c = CONNS[self.rng.gen_range(0..5)];
                Pred::bin(c, self.go(d, bound, in_fix), self.go(d, bound, in_fix))
            }
            4 | 5 => {
                let m = loop {
                    let m = MODALITIES[self.rng.gen_range(0..17)];
                    if self.past || !matches!(m, Modality::Yesterday | Modality::Recent | Modality::URecent) {
                        break m;
                    }
                };
                // Operators whose expansion binds the fixed-point variable must not see it.
                let rebinds = matches!(
                    m,
                    Modality::Sometime | Modality::Forever | Modality::Infinitely | Modality::Finally | Modality::Recent | Modality::URecent
                );
                Pred::modal(m, self.go(d, bound, in_fix && !rebinds))
            }
            6 | 7 => {
                let q = QUANTIFIERS[self.rng.gen_range(0..4)];
                let v = if bound.len().is_multiple_of(2) { "a" } else { "b" };
                let mut inner = bound.to_vec();
                inner.push(v.to_string());
                Pred::quant(q, v, self.go(d, &inner, in_fix))
            }
            8 if self.past => {
                let v = if bound.len().is_multiple_of(2) { "a" } else { "b" };
                let t = self.term(bound);
                let mut inner = bound.to_vec();
                inner.push(v.to_string());
                Pred::Mru(v.to_string(), Box::new(self.go(d, &inner, false)), t)
            }
            8 => Pred::Correct(vec![CorrectItem::Symbol { name: "R".into(), arity: 1 }, CorrectItem::Pred(self.go(d, bound, in_fix))]),
            _ if self.fixpoints => {
                let body = self.go(d, bound, true);
                Pred::fix(positive_or_guarded(body))
            }
            _ => Pred::or(self.go(d, bound, in_fix), self.go(d, bound, in_fix)),
        }
    }
}

/// Keeps a positive body; otherwise drops its fixed-point occurrences and
/// adds a guarded one.
pub fn positive_or_guarded(body: Pred) -> Pred {
    if check_positive(&body) {
        body
    } else {
        let stripped = replace_fix_var(&body, &Pred::Lit(TruthValue::Both));
        Pred::or(stripped, Pred::modal(Modality::Tomorrow, Pred::FixVar))
    }
}

/// Replaces the free occurrences of the fixed-point variable.
pub fn replace_fix_var(p: &Pred, with: &Pred) -> Pred {
    match p {
        Pred::FixVar => with.clone(),
        Pred::Fix(_) => p.clone(),
        Pred::Not(b) => Pred::not(replace_fix_var(b, with)),
        Pred::Is(d, b) => Pred::is(*d, replace_fix_var(b, with)),
        Pred::Bin(c, a, b) => Pred::bin(*c, replace_fix_var(a, with), replace_fix_var(b, with)),
        Pred::Modal(m, b) => Pred::modal(*m, replace_fix_var(b, with)),
        Pred::Quant(q, v, b) => Pred::quant(*q, v, replace_fix_var(b, with)),
        Pred::Mru(v, b, t) => Pred::Mru(v.clone(), Box::new(replace_fix_var(b, with)), t.clone()),
        Pred::Correct(items) => Pred::Correct(
            items
                .iter()
                .map(|i| match i {
                    CorrectItem::Pred(q) => CorrectItem::Pred(replace_fix_var(q, with)),
                    s => s.clone(),
                })
                .collect(),
        ),
        _ => p.clone(),
    }
}

pub fn random_closed(seed: u64, depth: usize) -> Pred {
    let mut r = rng(seed);
    PredGen { rng: &mut r, fixpoints: true, past: true }.pred(depth)
}

/// Proptest strategy for arbitrary printable ASTs, closed under `mu`.
pub fn arb_pred() -> impl Strategy<Value = Pred> {
    let term = prop_oneof![
        Just(Term::var("a")),
        Just(Term::var("b")),
        Just(Term::val("udfn")),
    ];
    let leaf = prop_oneof![
        prop::sample::select(TruthValue::ALL.to_vec()).prop_map(Pred::Lit),
        Just(Pred::constant("P")),
        Just(Pred::FixVar),
        term.clone().prop_map(|t| Pred::atom("R", vec![t])),
        (term.clone(), term.clone()).prop_map(|(a, b)| Pred::Eq(a, b)),
    ];
    let tree = leaf.prop_recursive(5, 48, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Pred::not),
            (prop::sample::select(DESIGNATIONS.to_vec()), inner.clone()).prop_map(|(d, p)| Pred::is(d, p)),
            (prop::sample::select(CONNS.to_vec()), inner.clone(), inner.clone()).prop_map(|(c, a, b)| Pred::bin(c, a, b)),
            (prop::sample::select(MODALITIES.to_vec()), inner.clone()).prop_map(|(m, p)| Pred::modal(m, p)),
            (prop::sample::select(QUANTIFIERS.to_vec()), prop::sample::select(vec!["a", "b"]), inner.clone())
                .prop_map(|(q, v, p)| Pred::quant(q, v, p)),
            (prop::sample::select(vec!["a", "b"]), inner.clone(), term.clone())
                .prop_map(|(v, p, t)| Pred::Mru(v.to_string(), Box::new(p), t)),
            inner.clone().prop_map(Pred::fix),
            prop::collection::vec(inner.clone(), 0..3).prop_map(|ps| {
                let mut items = vec![CorrectItem::Symbol { name: "R".into(), arity: 1 }];
                items.extend(ps.into_iter().map(CorrectItem::Pred));
                Pred::Correct(items)
            }),
        ]
    });
    tree.prop_map(|p| if free_info(&p).1 { p } else { Pred::fix(p) })
}

/// Seeded closed predicates, as a proptest strategy.
pub fn arb_closed(depth: usize) -> impl Strategy<Value = Pred> {
    any::<u64>().prop_map(move |s| random_closed(s, depth))
}
