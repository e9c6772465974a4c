mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use qlogic::checker::{check_theory, entails, gslt, SearchBudget, Theory};
use qlogic::engine::{denote, holds_in, At, ContextTable, Model, Space, TimeStructure, Valuation, ValueDomain};
use qlogic::semitopology::{PointSet, Semitopology};
use qlogic::syntax::{
    all_fixpoints_positive, desugar, parse, pretty_print, substitute_kappa, Designation, Modality, Pred,
    Quantifier, Term,
};
use qlogic::truth::{Class, TruthValue};
use rand::Rng;

fn small_world(seed: u64) -> (rand_chacha::ChaCha8Rng, Semitopology, TimeStructure) {
    let mut r = rng(seed);
    let st = random_semitopology(&mut r, 3);
    let time = random_time(&mut r, 3);
    (r, st, time)
}

/// A random table holding one copy of the valuation's loop, so it is
/// ultimately periodic with the same period.
fn random_kappa(r: &mut rand_chacha::ChaCha8Rng, val: &Valuation) -> ContextTable {
    let time = val.time();
    let sp = Space::new(time.prefix, val.semitopology().point_count(), val.semitopology().nonempty_opens().len(), time.period());
    ContextTable::from_fn(sp, |_, _, _| random_tv(r))
}

fn kappa(t: ContextTable) -> Arc<ContextTable> {
    Arc::new(t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(p in arb_pred()) {
        let text = pretty_print(&p).unwrap();
        prop_assert_eq!(parse(&text, &sig()).unwrap(), p, "text: {}", text);
    }

    #[test]
    fn desugar_is_idempotent_and_core(p in arb_pred()) {
        let d = desugar(&p);
        prop_assert!(d.is_core());
        prop_assert_eq!(desugar(&d), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sugar_introduces_only_positive_fixpoints(seed in any::<u64>(), m in prop::sample::select(MODALITIES.to_vec())) {
        let mut r = rng(seed);
        let body = PredGen { rng: &mut r, fixpoints: true, past: true }.pred(3);
        prop_assert!(all_fixpoints_positive(&desugar(&Pred::modal(m, body.clone()))));
        let mru = Pred::Mru("a".into(), Box::new(body), Term::val("v1"));
        prop_assert!(all_fixpoints_positive(&desugar(&mru)));
    }

    #[test]
    fn positive_bodies_are_monotone(seed in any::<u64>()) {
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let body = PredGen { rng: &mut r, fixpoints: false, past: true }.fix_body(3);
        let low = random_kappa(&mut r, &val);
        let high = ContextTable::from_fn(low.space(), |s, p, o| {
            let v = low.get(s, p, o);
            if r.gen_bool(0.5) { v.join(random_tv(&mut r)) } else { v }
        });
        prop_assert!(low.le(&high));
        let a = denote(&substitute_kappa(&body, &kappa(low)), &val).unwrap();
        let b = denote(&substitute_kappa(&body, &kappa(high)), &val).unwrap();
        prop_assert!(a.le(&b), "body {}", body);
    }

    #[test]
    fn least_fixpoint_is_a_fixpoint(seed in any::<u64>()) {
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let body = PredGen { rng: &mut r, fixpoints: true, past: true }.fix_body(3);
        let fix = denote(&Pred::fix(body.clone()), &val).unwrap();
        let unrolled = denote(&substitute_kappa(&body, &kappa(fix.clone())), &val).unwrap();
        prop_assert!(fix.equivalent(&unrolled), "body {}", body);
    }

    #[test]
    fn designations_commute_with_modalities(seed in any::<u64>(), which in 0usize..16, tb in any::<bool>()) {
        const LISTED: [Modality; 12] = [
            Modality::Someone, Modality::Everyone, Modality::Quorum, Modality::Coquorum, Modality::Recent,
            Modality::URecent, Modality::Yesterday, Modality::Tomorrow, Modality::Forever, Modality::Sometime,
            Modality::Infinitely, Modality::Finally,
        ];
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let d = if tb { Designation::TB } else { Designation::T };
        let (lhs, rhs) = if which < LISTED.len() {
            let phi = PredGen { rng: &mut r, fixpoints: false, past: true }.pred(3);
            let m = LISTED[which];
            (Pred::modal(m, Pred::is(d, phi.clone())), Pred::is(d, Pred::modal(m, phi)))
        } else {
            let q = if which % 2 == 0 { Quantifier::Exists } else { Quantifier::Forall };
            let phi = PredGen { rng: &mut r, fixpoints: false, past: true }.open(3, &["a"]);
            (Pred::quant(q, "a", Pred::is(d, phi.clone())), Pred::is(d, Pred::quant(q, "a", phi)))
        };
        let a = denote(&lhs, &val).unwrap();
        let b = denote(&rhs, &val).unwrap();
        prop_assert!(a.equivalent(&b), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn designations_commute_with_connectives(seed in any::<u64>(), and in any::<bool>(), tb in any::<bool>()) {
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let mut g = PredGen { rng: &mut r, fixpoints: false, past: true };
        let (x, y) = (g.pred(3), g.pred(3));
        let d = if tb { Designation::TB } else { Designation::T };
        let join = |a, b| if and { Pred::and(a, b) } else { Pred::or(a, b) };
        let lhs = Pred::is(d, join(x.clone(), y.clone()));
        let rhs = join(Pred::is(d, x), Pred::is(d, y));
        prop_assert!(denote(&lhs, &val).unwrap().equivalent(&denote(&rhs, &val).unwrap()));
    }

    #[test]
    fn last_write_exists_iff_recently_true(seed in any::<u64>()) {
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let phi = PredGen { rng: &mut r, fixpoints: false, past: true }.open(2, &["a"]);
        let lhs = Pred::quant(Quantifier::Exists, "v", Pred::Mru("a".into(), Box::new(phi.clone()), Term::var("v")));
        let rhs = Pred::is(Designation::T, Pred::modal(Modality::Recent, Pred::quant(Quantifier::Exists, "a", phi)));
        prop_assert!(denote(&lhs, &val).unwrap().equivalent(&denote(&rhs, &val).unwrap()));
    }

    #[test]
    fn dense_and_noi_are_up_closed_and_dual(seed in any::<u64>()) {
        let mut r = rng(seed);
        let st = random_semitopology(&mut r, 6);
        let n = st.point_count();
        let p = PointSet(r.gen_range(0..(1u64 << n)));
        let bigger = p.union(PointSet(r.gen_range(0..(1u64 << n))));
        prop_assert!(!st.dense(p) || st.dense(bigger));
        prop_assert!(!st.noi(p) || st.noi(bigger));
        prop_assert_eq!(st.dense(p), !st.noi(p.complement(n)));
        prop_assert_eq!(st.noi(p), !st.dense(p.complement(n)));
    }

    #[test]
    fn twined_partitions_contain_a_dense_block(seed in any::<u64>()) {
        let mut r = rng(seed);
        let st = random_semitopology(&mut r, 5);
        let n = st.point_count();
        for parts in [2usize, 3] {
            if !st.is_n_twined(parts) {
                continue;
            }
            // Every assignment of points to `parts` blocks.
            for code in 0..parts.pow(n as u32) {
                let mut blocks = vec![PointSet::EMPTY; parts];
                let mut c = code;
                for pt in 0..n {
                    blocks[c % parts] = blocks[c % parts].union(PointSet::singleton(pt));
                    c /= parts;
                }
                prop_assert!(blocks.iter().any(|b| st.dense(*b)), "{:?} partition {:?}", st.nonempty_opens(), blocks);
            }
        }
    }

    #[test]
    fn validity_is_monotone_under_axiom_inclusion(seed in any::<u64>()) {
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let mut big = Theory::new("big", sig());
        let mut g = PredGen { rng: &mut r, fixpoints: true, past: true };
        for i in 0..4 {
            big.push(&format!("A{i}"), g.pred(2), i % 2 == 0).unwrap();
        }
        let keep: Vec<String> = (0..4).filter(|_| g.rng.gen_bool(0.5)).map(|i| format!("A{i}")).collect();
        let names: Vec<&str> = keep.iter().map(String::as_str).collect();
        let small = big.subset(&names);
        if check_theory(&big, &val).unwrap().valid {
            prop_assert!(check_theory(&small, &val).unwrap().valid);
        }
    }

    #[test]
    fn gslt_bounds_forward_bodies(seed in any::<u64>()) {
        let (mut r, st, time) = small_world(seed);
        let val = random_valuation(&mut r, &st, time, &sig());
        let mut th = Theory::new("fwd", sig());
        let mut g = PredGen { rng: &mut r, fixpoints: false, past: true };
        for i in 0..3 {
            th.push(&format!("F{i}"), Pred::modal(Modality::Finally, g.pred(2)), true).unwrap();
        }
        if let Some(n) = gslt(&th, &val).unwrap() {
            for a in th.forward_axioms() {
                let t = denote(a.synchronous_body(), &val).unwrap();
                for s in n..t.space().stages + 3 {
                    prop_assert!(holds_in(&t, At::Stage(s)).unwrap());
                }
            }
        }
    }

    #[test]
    fn sampled_search_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let goal = PredGen { rng: &mut r, fixpoints: false, past: false }.pred(2);
        let th = Theory::new("empty", sig());
        let model = Model::new(Semitopology::all_but(2, 1).unwrap(), ValueDomain::new(values()).unwrap());
        let time = TimeStructure::stutter(2).unwrap();
        let a = entails(&th, &goal, &model, time, SearchBudget::sampled(20, seed)).unwrap();
        let b = entails(&th, &goal, &model, time, SearchBudget::sampled(20, seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}

fn unary_valuation(column: &[TruthValue]) -> Valuation {
    let model = Model::new(Semitopology::all_but(1, 0).unwrap(), ValueDomain::new(["v1", "v2", "v3"]).unwrap());
    let mut val = Valuation::new(model, TimeStructure::stutter(1).unwrap(), sig());
    for (i, tv) in column.iter().enumerate() {
        val.set_indexed("R", 0, 0, &[i], *tv).unwrap();
    }
    val
}

fn value_of(text: &str, val: &Valuation) -> TruthValue {
    denote(&parse(text, &sig()).unwrap(), val).unwrap().get(0, 0, 0)
}

#[test]
fn unique_and_affine_existence_on_characteristic_columns() {
    use TruthValue::{Both as B, False as F, True as T};
    let crashed = unary_valuation(&[B, B, B]);
    for q in ["exists1", "exists01"] {
        let v = value_of(&format!("{q} a. R(a)"), &crashed);
        assert_eq!(v, B, "{q} on a crashed column");
        assert!(Class::Valid.contains(v));
        assert_eq!(value_of(&format!("{q} a. R(a)"), &unary_valuation(&[T, T, F])), F, "{q} with two witnesses");
        assert_eq!(value_of(&format!("{q} a. R(a)"), &unary_valuation(&[F, T, F])), T, "{q} with one witness");
    }
    assert_eq!(value_of("exists1 a. R(a)", &unary_valuation(&[F, F, F])), F);
    assert_eq!(value_of("exists01 a. R(a)", &unary_valuation(&[F, F, F])), T);
}
