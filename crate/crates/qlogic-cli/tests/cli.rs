use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn qlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlogic")).args(args).env_remove("QLOGIC_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_happy_trace_is_valid() {
    let o = qlogic(&["check", "--theory", "pax", "--trace", &fixture("happy.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("theory Pax: valid"));
}

#[test]
fn check_conflicting_trace_reports_a_violation() {
    let o = qlogic(&["check", "--theory", "pax", "--trace", &fixture("conflict.json"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["valid"], false);
    let bad: Vec<&str> =
        v["axioms"].as_array().unwrap().iter().filter(|a| a["valid"] == false).map(|a| a["name"].as_str().unwrap()).collect();
    assert_eq!(bad, ["PaxDecideNotL?"]);
}

#[test]
fn eval_at_one_context() {
    let o = qlogic(&["eval", "--formula", "isTB B", "--trace", &fixture("happy.json"), "--at", "0,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "T\n");
}

#[test]
fn eval_routes_agree_on_sugar() {
    let f = "finally forever someoneall exists v. decide(v)";
    let a = qlogic(&["eval", "--formula", f, "--scenario", "happy", "--json"]);
    let b = qlogic(&["eval", "--formula", f, "--scenario", "happy", "--json", "--direct"]);
    assert_eq!(a.status.code(), Some(0));
    let ta: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let tb: serde_json::Value = serde_json::from_slice(&b.stdout).unwrap();
    assert_eq!(ta["opens"].as_array().unwrap().len(), 4);
    assert!(ta["table"][0][0].as_str().unwrap().chars().all(|c| c == 'T'));
    assert_eq!(ta["table"], tb["table"]);
}

#[test]
fn twined_answers() {
    let o = qlogic(&["twined", "--model", &fixture("allbut_3_1.json"), "--n", "2"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "true\n".to_string()));
    let o = qlogic(&["twined", "--model", &fixture("allbut_3_1.json"), "--n", "3"]);
    assert_eq!(stdout(&o), "false\n");
    let o = qlogic(&["twined", "--model", &fixture("allbut_3_1.json"), "--set", "0,1"]);
    assert_eq!(stdout(&o), "dense: true\nnoi: true\n");
}

#[test]
fn gslt_of_the_bundled_scenarios() {
    let o = qlogic(&["gslt", "--theory", "pax", "--scenario", "pre_sync"]);
    assert_eq!((o.status.code(), stdout(&o)), (Some(0), "3\n".to_string()));
    let o = qlogic(&["gslt", "--theory", "pax", "--trace", &fixture("happy.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["gslt"], 4);
}

#[test]
fn search_proves_on_a_twined_model_and_refutes_on_a_loose_one() {
    let goal = "forall a. coquorumdiamond R(a)";
    let thy = fixture("premise.thy");
    let o = qlogic(&["search", "--theory", &thy, "--goal", goal, "--model", &fixture("nested_2.json"), "--exhaustive", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["verdict"].as_str(), v["examined"].as_u64()), (Some("no_countermodel_found"), Some(6561)));

    let o = qlogic(&["search", "--theory", &thy, "--goal", goal, "--model", &fixture("allbut_2_1.json"), "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "countermodel");
    assert_eq!(v["countermodel"]["values"], serde_json::json!(["v1", "v2"]));
}

#[test]
fn sampled_search_is_byte_deterministic_and_seeded_from_the_environment() {
    let args = ["search", "--theory", "pax", "--goal", "sometime exists v. decide(v)", "--model", &fixture("allbut_2_1.json")];
    let mut args: Vec<&str> = args.to_vec();
    args.extend(["--values", "v1,udfn", "--samples", "5", "--json"]);
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qlogic")).args(&args).env("QLOGIC_SEED", seed).output().unwrap()
    };
    let (a, b) = (run("11"), run("11"));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert!(v["examined"].as_u64().unwrap() <= 5);
}

#[test]
fn every_demo_exits_cleanly() {
    let list = qlogic(&["demo", "--list"]);
    let names: Vec<String> = stdout(&list).lines().map(str::to_string).collect();
    assert_eq!(names.len(), 9);
    for name in names {
        let o = qlogic(&["demo", &name, "--json"]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["matches_expected"], true, "{name}");
    }
}

#[test]
fn demo_trace_matches_the_fixture() {
    let dir = std::env::temp_dir().join(format!("qlogic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("happy.json");
    let o = qlogic(&["demo", "pax-happy", "--write-trace", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(out).unwrap(), std::fs::read_to_string(fixture("happy.json")).unwrap());
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(qlogic(&["eval", "--formula", "(", "--scenario", "happy"]).status.code(), Some(2));
    assert_eq!(qlogic(&["check", "--theory", "nope.thy", "--scenario", "happy"]).status.code(), Some(2));
    assert_eq!(qlogic(&["eval", "--formula", "B", "--scenario", "happy", "--at", "0,9,0"]).status.code(), Some(2));
    assert_eq!(qlogic(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qlogic(&["eval", "--formula", "B"]).status.code(), Some(2));
    let o = qlogic(&["demo", "no-such-demo"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown demo"));
}
