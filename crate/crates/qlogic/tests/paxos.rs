mod common;

use common::*;
use qlogic::checker::{check_theory, gslt, Theory};
use qlogic::engine::{denote, Model, TimeStructure, Valuation, ValueDomain};
use qlogic::paxos::*;
use qlogic::semitopology::Semitopology;
use qlogic::syntax::{parse, Signature};
use qlogic::truth::TruthValue::{self, Both as B, False as F, True as T};

fn pax_sig() -> Signature {
    Signature::new(PAX_SIGNATURE).unwrap()
}

fn all_scenarios() -> Vec<Scenario> {
    ScenarioKind::ALL.iter().map(|k| build_scenario(*k, &ScenarioParams::default()).unwrap()).collect()
}

#[test]
fn scenario_expectations_match_the_checker() {
    let th = build_thy_pax();
    for sc in all_scenarios() {
        let report = check_theory(&th, &sc.valuation).unwrap();
        assert_eq!(report.valid, sc.expected.axioms_valid, "{}: {:?}", sc.label, report.violated().collect::<Vec<_>>());
        assert_eq!(goal_results(&correctness_goals(), &sc.valuation).unwrap(), sc.expected.goals, "{}", sc.label);
        assert_eq!(gslt(&th, &sc.valuation).unwrap(), sc.expected.gslt, "{}", sc.label);
    }
    for v in SimpleVariant::ALL {
        let sc = build_simple_scenario(v);
        assert!(check_theory(&build_simple(v), &sc.valuation).unwrap().valid, "{}", sc.label);
        assert_eq!(gslt(&build_simple(v), &sc.valuation).unwrap(), sc.expected.gslt, "{}", sc.label);
    }
}

#[test]
fn every_demo_meets_its_expectations() {
    for name in DEMO_NAMES {
        let outcome = run_demo(&demo(name).unwrap()).unwrap();
        assert!(outcome.matches_expected, "{name}: {outcome:?}");
    }
}

#[test]
fn pax_models_are_spax_models() {
    let pax = build_thy_pax();
    let spax = build_thy_spax();
    for sc in all_scenarios() {
        if !check_theory(&pax, &sc.valuation).unwrap().valid {
            continue;
        }
        assert!(check_theory(&spax, &sc.valuation).unwrap().valid, "{}", sc.label);
        let goals = goal_results(&correctness_goals(), &sc.valuation).unwrap();
        assert!(goals.values().all(|g| *g), "{}", sc.label);
    }
}

#[test]
fn write_and_accept_agree_after_stabilisation() {
    let sc = build_scenario(ScenarioKind::Happy, &ScenarioParams::default()).unwrap();
    let val = &sc.valuation;
    let from = gslt(&build_thy_pax(), val).unwrap().unwrap();
    for v in val.values().names() {
        let forms = [
            format!("isT someoneall write({v})"),
            format!("everyoneall accept({v})"),
            format!("isT quorumbox accept({v})"),
            format!("isT someoneall accept({v})"),
        ];
        let tables: Vec<_> = forms
            .iter()
            .map(|f| denote(&qlogic::syntax::Parser::new(&pax_sig()).with_values(val.values().names()).parse(f).unwrap(), val).unwrap())
            .collect();
        let sp = tables[0].space();
        for n in from..sp.stages + 4 {
            for p in 0..sp.points {
                for o in 0..sp.opens {
                    let first = tables[0].get_unrolled(n, p, o);
                    assert!(tables.iter().all(|t| t.get_unrolled(n, p, o) == first), "{v} at ({n},{p},{o})");
                }
            }
        }
    }
}

#[test]
fn recipe_rules_match_on_every_scenario() {
    for sc in all_scenarios() {
        for check in recipe_report(&sc.valuation).unwrap() {
            assert!(check.equal, "{}: {} vs {}", sc.label, check.recipe, check.forward);
            assert_ne!(check.simplification_equal, Some(false), "{}: {}", sc.label, check.backward);
        }
    }
}

#[test]
fn recipe_with_strong_implication_differs_for_propose() {
    // Deriving PaxPropose! with `==>` in place of `~>` disagrees once the
    // leader's proposal answers B.
    let sc = build_scenario(ScenarioKind::Happy, &ScenarioParams::default()).unwrap();
    let mut val = sc.valuation.clone();
    let strong = parse("(exists v. leader & !(v = udfn)) ==> exists v. propose(v)", &pax_sig()).unwrap();
    let weak = parse("leader ~> exists propose", &pax_sig()).unwrap();
    val.set("propose", 0, 0, &["v1"], B).unwrap();
    assert!(!denote(&strong, &val).unwrap().equivalent(&denote(&weak, &val).unwrap()));
    assert!(recipe_report(&val).unwrap()[0].equal);
}

#[test]
fn write_simplification_needs_a_current_proposal() {
    // A past accept and no current proposal: the Write antecedent holds but
    // its simplified form does not.
    let st = Semitopology::all_but(3, 1).unwrap();
    let model = Model::new(st, ValueDomain::new(["v1", "udfn"]).unwrap());
    let mut val = Valuation::new(model, TimeStructure::stutter(3).unwrap(), pax_sig());
    for s in 0..3 {
        val.set("leader", s, 0, &[], T).unwrap();
        for p in 0..3 {
            val.set("send", s, p, &["v1"], T).unwrap();
        }
    }
    for p in 0..3 {
        val.set("accept", 0, p, &["v1"], T).unwrap();
    }
    let th = build_thy_pax();
    let back = &th.axiom("PaxWrite?").unwrap().pred;
    let Some(qlogic::syntax::Pred::Bin(_, lhs, _)) = recipe_forward(back) else { panic!("recipe shape") };
    let simple = parse(RECIPE_SIMPLIFICATIONS[1].1, &pax_sig()).unwrap();
    let (a, b) = (denote(&lhs, &val).unwrap(), denote(&simple, &val).unwrap());
    assert_eq!(a.get(1, 0, 0), T);
    assert_eq!(b.get(1, 0, 0), F);
}

#[test]
fn crashing_decide_breaks_the_curried_rules() {
    let params = ScenarioParams::default();
    let full = build_scenario(ScenarioKind::Crash, &params).unwrap();
    let report = check_theory(&build_thy_pax(), &full.valuation).unwrap();
    let violated: Vec<&str> = report.violated().map(|a| a.name.as_str()).collect();
    assert_eq!(violated, ["PaxDecideNotL?"]);
    // The simpler theory accepts the trace, yet Agreement still fails: a
    // crashed participant's B on decide(v2) makes the inner implication B and
    // the outer one F.
    assert!(check_theory(&build_thy_spax(), &full.valuation).unwrap().valid);
    assert!(!goal_results(&correctness_goals(), &full.valuation).unwrap()["Agreement"]);

    // Leaving decide uncrashed restores every axiom and goal.
    let mut partial = build_scenario(ScenarioKind::Happy, &params).unwrap().valuation;
    let symbols: Vec<String> = ["propose", "send", "write", "accept"].iter().map(|s| s.to_string()).collect();
    partial.crash(2, params.crash_from, Some(&symbols)).unwrap();
    assert!(check_theory(&build_thy_pax(), &partial).unwrap().valid);
    assert!(goal_results(&correctness_goals(), &partial).unwrap().values().all(|g| *g));
}

#[test]
fn uncrashed_phrasings_agree() {
    let sig = Signature::new([("propose", 0), ("accept", 0), ("decide", 0)]).unwrap();
    for seed in 0..200 {
        let mut r = rng(seed);
        let st = random_semitopology(&mut r, 4);
        let time = random_time(&mut r, 3);
        let val = random_valuation(&mut r, &st, time, &sig);
        let a = parse(&uncrashed(SimpleVariant::ReliableCrash, "accept"), &sig).unwrap();
        let b = parse(&uncrashed(SimpleVariant::LossyCrash, "accept"), &sig).unwrap();
        assert!(denote(&a, &val).unwrap().equivalent(&denote(&b, &val).unwrap()), "seed {seed}");
    }
}

#[test]
fn theories_and_traces_round_trip() {
    let mut theories: Vec<Theory> = vec![build_thy_pax(), build_thy_spax()];
    theories.extend(SimpleVariant::ALL.iter().map(|v| build_simple(*v)));
    for th in theories {
        assert_eq!(Theory::parse_text(&th.to_text().unwrap()).unwrap(), th, "{}", th.name);
    }
    for sc in all_scenarios() {
        let back = Valuation::from_json(&sc.valuation.to_json(), None).unwrap();
        assert_eq!(back, sc.valuation, "{}", sc.label);
    }
}

#[test]
fn scenarios_scale_to_larger_models() {
    let params = ScenarioParams {
        semitopology: Semitopology::all_but(4, 1).unwrap(),
        values: vec!["a".into(), "b".into(), "c".into(), "udfn".into()],
        prefix: 9,
        sync_stage: 5,
        ..Default::default()
    };
    for kind in [ScenarioKind::Happy, ScenarioKind::PreSync] {
        let sc = build_scenario(kind, &params).unwrap();
        assert!(check_theory(&build_thy_pax(), &sc.valuation).unwrap().valid, "{}", sc.label);
        assert_eq!(gslt(&build_thy_pax(), &sc.valuation).unwrap(), sc.expected.gslt);
    }
}

#[test]
fn crashed_participant_answers_both() {
    let sc = build_scenario(ScenarioKind::Crash, &ScenarioParams::default()).unwrap();
    assert_eq!(value_at(&sc.valuation, "accept", 50, 2, &["v2"]).unwrap(), TruthValue::Both);
    assert_eq!(value_at(&sc.valuation, "leader", 50, 2, &[]).unwrap(), F);
}
