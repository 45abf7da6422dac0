use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::OnceLock;

use serde_json::{json, Value};

fn orbitkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/output.schema.json");
        let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        jsonschema::validator_for(&schema).expect("schema compiles")
    })
}

fn assert_valid(doc: &Value) {
    let errors: Vec<String> = validator().iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
}

#[test]
fn tensor_example() {
    let out = orbitkit(&["tensor", "--rep", "regular:cyclic:2", "--x", "1,2", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_valid(&doc);
    assert_eq!(
        doc["tensor"]["entries"],
        json!([[[0, 0], "5"], [[0, 1], "4"], [[1, 1], "5"]])
    );
}

#[test]
fn recover_example_is_ok_and_deterministic() {
    let args = ["recover", "--rep", "regular:cyclic:3", "--seed", "7"];
    let a = orbitkit(&args);
    let b = orbitkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json_of(&a);
    assert_valid(&doc);
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["orbit"].as_array().unwrap().len(), 3);
    let x = &doc["x"];
    assert!(doc["orbit"].as_array().unwrap().contains(x));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["table1"];
    let free = orbitkit(&args);
    let capped = Command::new(env!("CARGO_BIN_EXE_orbitkit"))
        .args(args)
        .env("ORBITKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(free.stdout, capped.stdout);
    assert_eq!(free.status.code(), Some(0));
    let doc = json_of(&free);
    assert_valid(&doc);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 8);
    assert_eq!(doc["all_match"], true);
}

#[test]
fn every_command_matches_schema() {
    let cases: &[&[&str]] = &[
        &["recover", "--rep", "fourier:4", "--seed", "3"],
        &["recover", "--rep", "regular:dihedral:3", "--scalar", "f64"],
        &["tensor", "--rep", "fourier:3", "--x", "1,-2,3", "--degree", "2", "--kind", "moment"],
        &["tensor", "--rep", "snmatrix:3:2", "--x", "1/2,2,-3,4,5,6", "--degree", "3"],
        &["tensor", "--rep", "regular:cyclic:3", "--x", "1,2,4", "--degree", "3", "--kind", "moment"],
        &["invariants", "--n", "5", "--d", "3", "--max-degree", "3"],
        &["conjecture", "--n-max", "5"],
        &["check-dihedral-cmf", "--n", "5", "--seed", "2"],
        &["bench", "--suite", "tensors", "--reps", "1"],
    ];
    for args in cases {
        let out = orbitkit(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_valid(&json_of(&out));
    }
}

#[test]
fn invariants_counts() {
    let doc = json_of(&orbitkit(&["invariants", "--n", "5", "--d", "3", "--max-degree", "3"]));
    assert_eq!(doc["count"], 19);
    assert_eq!(doc["expected_count"], "19");
    assert_eq!(doc["count_by_degree"], json!([3, 6, 10]));
    assert_eq!(doc["invariants"][0]["name"], "p[1]");
}

#[test]
fn failure_statuses_exit_one() {
    let out = orbitkit(&["recover", "--rep", "dihedral-standard:4"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_valid(&doc);
    assert_eq!(doc["status"], "linearly_dependent_orbit");
    assert_eq!(doc["orbit"], Value::Null);

    let out = orbitkit(&["check-dihedral-cmf", "--n", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["holds"], false);
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (&["recover", "--rep", "regular:cube:3"], "--rep"),
        (&["recover", "--rep", "regular:symmetric:9"], "--rep"),
        (&["recover", "--rep", "fourier:3", "--scalar", "exact"], "--rep"),
        (&["recover", "--rep", "regular:cyclic:3", "--range", "0"], "--range"),
        (&["tensor", "--rep", "regular:cyclic:2", "--x", "1,2,3", "--degree", "2"], "--x"),
        (&["tensor", "--rep", "regular:cyclic:2", "--x", "1,a", "--degree", "2"], "--x"),
        (&["check-dihedral-cmf", "--n", "2"], "--n"),
        (&["tensor", "--rep", "regular:cyclic:2", "--x", "1,2", "--degree", "2", "--kind", "moment", "--scalar", "exact"], "--scalar"),
        (&["bench", "--suite", "everything"], "--suite"),
        (&["table1", "--seed", "abc"], "--seed"),
        (&["frobnicate"], "frobnicate"),
    ];
    for (args, flag) in cases {
        let out = orbitkit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(flag), "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn text_output() {
    let out = orbitkit(&["tensor", "--rep", "regular:cyclic:2", "--x", "1,2", "--degree", "2", "--out", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "kind = invariant"));
    assert!(text.lines().any(|l| l == "tensor.entries = [[[0,0],\"5\"],[[0,1],\"4\"],[[1,1],\"5\"]]"));
}
