use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_enriqueslab"))
}

fn input(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("inputs").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let Output { status, stdout, stderr } = bin().args(args).output().unwrap();
    let v = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    (status.code().unwrap(), v, String::from_utf8_lossy(&stderr).into_owned())
}

#[test]
fn trivial_group_is_realizable() {
    let (code, v, _) = run(&["realize-enriques", "--group", &input("trivial.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["realizable"], true);
    assert_eq!(v["lifted_order"], 2);
}

#[test]
fn root_reflection_is_not_realizable() {
    let (code, v, _) = run(&["realize-enriques", "--group", &input("e8root-reflection.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["realizable"], false);
    let w = v["k3_report"]["minus_two_witnesses"].as_array().unwrap();
    assert_eq!(w.len(), 4);
    let sp = &v["splittings"][0];
    assert!(w.contains(&sp["s1"]) && w.contains(&sp["s2"]));
}

#[test]
fn all_examples_pass() {
    let (code, v, _) = run(&["examples", "--all"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert!(v["count"].as_u64().unwrap() >= 30);
}

#[test]
fn single_example_and_unknown_name() {
    let (code, v, _) = run(&["examples", "--name", "enriques-invariant"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 1);
    let (code, _, err) = run(&["examples", "--name", "no-such-fixture"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown fixture"));
}

#[test]
fn lattice_invariants_and_roots() {
    let (code, v, _) = run(&["lattice", "E8(-1)", "--short-vectors", "-2"]);
    assert_eq!(code, 0);
    assert_eq!(v["short_vectors"]["count"], 240);
    let (code, v, _) = run(&["lattice", r#"{"gram": [[-2, 1], [1, -2]]}"#]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"]["det"], 3);
}

#[test]
fn budget_exhaustion_exits_3() {
    let (code, _, err) = run(&["--budget", "5", "lattice", "E8(-1)", "--short-vectors", "-2"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn input_errors_exit_2() {
    let (code, _, _) = run(&["lattice", "NoSuchLattice"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["twist", "--vector", "[1,0,0,0,0,0,0,0,0,0]"]);
    assert_eq!(code, 2);
    assert!(err.contains("norm 0"));
    let (code, _, _) = run(&["realize-k3", "--group", "/no/such/file.json"]);
    assert_eq!(code, 2);
}

#[test]
fn twist_on_enriques_lattice_lifts() {
    let (code, v, _) = run(&["twist", "--vector", "[0,0,1,0,0,0,0,0,0,0]"]);
    assert_eq!(code, 0);
    assert_eq!(v["lift"].as_array().unwrap().len(), 22);
    assert_eq!(v["splitting"]["s1"][6], 1);
    assert_eq!(v["splitting"]["s2"][14], 1);
}

#[test]
fn lift_of_identity() {
    let id: Vec<Vec<i64>> = (0..10).map(|i| (0..10).map(|j| (i == j) as i64).collect()).collect();
    let arg = serde_json::to_string(&id).unwrap();
    let (code, v, _) = run(&["lift", "--isometry", &arg]);
    assert_eq!(code, 0);
    assert_eq!(v["commutes_with_iota"], true);
    assert_eq!(v["lift"][0][0], 1);
}

#[test]
fn invariant_of_model_and_group() {
    let (code, v, _) = run(&["invariant", "--model", "enriques"]);
    assert_eq!(code, 0);
    assert_eq!(v["invariant_form"]["rank"], 10);
    assert_eq!(v["transfer_composite_is_d"], true);
    let (code, v, _) = run(&["invariant", "--group", &input("e8root-reflection.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["invariants"]["rank"], 9);
}

#[test]
fn realize_k3_trivial_group() {
    let (code, v, _) = run(&["realize-k3", "--group", r#"{"lattice": "K3", "generators": []}"#, "--mode", "complex"]);
    assert_eq!(code, 0);
    assert_eq!(v["realizable"], true);
    assert_eq!(v["mode"], "complex");
}

#[test]
fn deterministic_across_thread_counts() {
    let a = bin().args(["--threads", "1", "examples", "--all"]).output().unwrap().stdout;
    let b = bin().args(["--threads", "4", "examples", "--all"]).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("enriqueslab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("config.toml");
    std::fs::write(&cfg, "budget = 5\nformat = \"table\"\n").unwrap();
    let c = cfg.to_string_lossy().into_owned();
    let (code, _, _) = run(&["--config", &c, "lattice", "E8(-1)", "--short-vectors", "-2"]);
    assert_eq!(code, 3);
    let out = bin()
        .args(["--config", &c, "--budget", "100000000", "lattice", "E8(-1)", "--short-vectors", "-2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("short_vectors.count") && text.contains("240"));
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let (code, _, _) = run(&["--config", &c, "lattice", "U"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn json_output_round_trips() {
    let out = bin().args(["realize-enriques", "--group", &input("trivial.json")]).output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let again: Value = serde_json::from_str(&serde_json::to_string_pretty(&v).unwrap()).unwrap();
    assert_eq!(v, again);
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", String::from_utf8(out.stdout).unwrap());
}
