use std::io::Write;
use std::process::Command;

use serde_json::Value;
use tempfile::NamedTempFile;

fn theta_file(n: usize, upper: &[(usize, usize, &str)]) -> NamedTempFile {
    let entries: Vec<Value> = upper
        .iter()
        .map(|&(i, j, v)| {
            let value = v.parse::<f64>().map_or_else(|_| Value::from(v), Value::from);
            serde_json::json!({ "i": i, "j": j, "value": value })
        })
        .collect();
    let mut f = NamedTempFile::new().unwrap();
    write!(f, "{}", serde_json::json!({ "n": n, "upper": entries })).unwrap();
    f
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_cartheta")).args(args).env_remove("CAR_THETA_TOL").output().unwrap();
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

#[test]
fn fiber_descriptors() {
    let t = theta_file(2, &[(0, 1, "1/3")]);
    let (code, doc) = run(&["fiber", "--theta", path(&t), "--x", "0,0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["caseTag"], 4);
    assert_eq!(doc["algebra"], "Cl_4");

    let (code, doc) = run(&["fiber", "--theta", path(&t), "--x", "1/4,1/2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["caseTag"], 1);
    assert_eq!(doc["k0Rank"], 2);

    let (code, doc) = run(&["fiber", "--theta", path(&t), "--x", "0.6,0"]);
    assert_eq!(code, 3);
    assert_eq!(doc["exitCode"], 3);

    let (code, doc) = run(&["fiber", "--theta", path(&t), "--grid", "1/4"]);
    assert_eq!(code, 0);
    assert_eq!(doc.as_array().unwrap().len(), 9);
}

#[test]
fn verify_exit_codes() {
    let t = theta_file(2, &[(0, 1, "1/2")]);
    let (code, doc) = run(&["verify", "--theta", path(&t), "--x", "1/2,1/2", "--q", "2"]);
    assert_eq!(code, 0, "{doc}");
    let (code, _) = run(&["verify", "--theta", path(&t), "--x", "1/2,1/2", "--q", "3"]);
    assert_eq!(code, 4);

    let f = theta_file(2, &[(0, 1, "0.3")]);
    let (code, _) = run(&["verify", "--theta", path(&f), "--x", "1/2,1/2", "--q", "10"]);
    assert_eq!(code, 0);
    let (code, _) = run(&["verify", "--theta", path(&f), "--x", "1/2,1/2", "--q", "10", "--tol", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn two_generator_classification() {
    assert_eq!(run(&["classify2", "1/3", "2/3"]).0, 0);
    assert_eq!(run(&["classify2", "--theta1", "1/3", "--theta2", "-5/3"]).0, 0);
    let (code, doc) = run(&["classify2", "1/3", "1/4"]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "NOT_ISOMORPHIC");
    assert_eq!(run(&["classify2", "1/3", "one"]).0, 2);
}

#[test]
fn general_classification() {
    let a = theta_file(3, &[(0, 1, "1/5"), (0, 2, "2/7"), (1, 2, "1/3")]);
    let b = theta_file(3, &[(0, 1, "-1/3"), (0, 2, "2/7"), (1, 2, "1/5")]);
    let (code, doc) = run(&["classify", "--theta1", path(&a), "--theta2", path(&b)]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["status"], "ISOMORPHIC");

    let c = theta_file(3, &[(0, 1, "0.1"), (0, 2, "0.2"), (1, 2, "0.3")]);
    let d = theta_file(3, &[(0, 1, "0.9"), (0, 2, "0.2"), (1, 2, "0.3")]);
    let (code, doc) = run(&["classify", "--theta1", path(&c), "--theta2", path(&d)]);
    assert_eq!(code, 5, "{doc}");
    assert_eq!(doc["status"], "UNDECIDED");
}

#[test]
fn malformed_input_is_a_parse_error() {
    let mut f = NamedTempFile::new().unwrap();
    write!(f, "{{\"n\": 2, \"upper\": [{{\"i\": 1, \"j\": 0, \"value\": \"1/2\"}}]}}").unwrap();
    let (code, doc) = run(&["fiber", "--theta", path(&f), "--x", "0,0"]);
    assert_eq!(code, 2);
    assert!(doc["error"].is_string());
}

#[test]
fn trace_range_and_deform_check() {
    let (code, doc) = run(&["trace-range", "--theta", "1/5"]);
    assert_eq!(code, 0);
    assert_eq!(doc["values"].as_array().unwrap().len(), 6);
    let t = theta_file(2, &[(0, 1, "1/3")]);
    assert_eq!(run(&["deform-check", "--theta", path(&t)]).0, 0);
}

#[test]
fn selftest_is_deterministic() {
    let (code, a) = run(&["selftest", "--seed", "7", "--iters", "3"]);
    assert_eq!(code, 0, "{a}");
    assert_eq!(a, run(&["selftest", "--seed", "7", "--iters", "3"]).1);
    let (code, empty) = run(&["selftest", "--iters", "0"]);
    assert_eq!(code, 0);
    assert_eq!(empty["pass"], true);
}
