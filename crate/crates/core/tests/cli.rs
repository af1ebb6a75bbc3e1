use std::process::{Command, Output};

use serde_json::Value;

fn dye(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dye"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn eval_and_check() {
    let out = dye(&["eval", "s1*s2' + s2*s1'", "--pretty"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["element"], "s1*s2' + s2*s1'");
    let out = dye(&["check", "s1*s2' + s2*s1'"]);
    assert_eq!(json(&out)["classification"]["involution"], true);
}

#[test]
fn usage_errors_exit_two() {
    let out = dye(&["eval", "s3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
    assert_eq!(dye(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        dye(&["suite", "--only", "no-such-check"]).status.code(),
        Some(2)
    );
    assert_eq!(dye(&["eval", "s1 +", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn numeric_commands() {
    let out = dye(&[
        "decompose2",
        "--matrix",
        r#"{"dim":2,"entries":[0.8,0.4,0.4,0.2]}"#,
    ]);
    let v = json(&out);
    assert_eq!(v["i"], 1);
    assert!((v["a"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let third = 1.0 / 3.0;
    let flat = format!(
        r#"{{"dim":3,"entries":[{}]}}"#,
        vec![third.to_string(); 9].join(",")
    );
    let out = dye(&["obstruct3", "--matrix", &flat]);
    assert_eq!(json(&out)["representable"], false);
}

#[test]
fn symbolic_commands() {
    let out = dye(&["--n", "3", "k0", "s1*s1' + s2*s2'"]);
    assert_eq!(json(&out)["residue"], 0);
    let out = dye(&["--n", "3", "conjugate", "1", "-1"]);
    assert_eq!(json(&out)["conjugate"], false);
    let out = dye(&["eta-inv", "s1*s2'", "--pretty"]);
    assert_eq!(json(&out)["matrix"]["rows"][0][1], "(1)");
    let out = dye(&["dye", "--i", "1", "--j", "2", "--dim", "3", "--omega", "-1"]);
    assert_eq!(json(&out)["classification"]["projection"], true);
}

#[test]
fn verification_commands() {
    let out = dye(&["verify-factorization", "--u", "-1", "--factor", "-1"]);
    assert!(out.status.success());
    let out = dye(&[
        "verify-factorization",
        "--u",
        "s1*s2' + s2*s1'",
        "--factor",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = dye(&["diag-identity", "--alpha", "-1", "--variant", "1,3"]);
    assert_eq!(json(&out)["pass"], true);
    let out = dye(&["assemble41", "--alpha", "-1", "--gamma", "1"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["factors"].as_array().unwrap().len(), 11);
}

#[test]
fn json_file_input() {
    let dir = std::env::temp_dir().join(format!("dye-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("factorization.json");
    std::fs::write(&path, r#"{"u": "1", "factors": ["-1", "-1"]}"#).unwrap();
    let out = dye(&[
        "verify-factorization",
        "--input",
        &format!("@{}", path.display()),
    ]);
    assert!(out.status.success());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn suite_filter_and_budget() {
    let out = dye(&["suite", "--only", "dye-2x2-roundtrip"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["checks"].as_array().unwrap().len(), 1);
    let out = dye(&[
        "suite",
        "--budget",
        "10",
        "--samples",
        "5",
        "--pool-size",
        "12",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["errors"].as_u64().unwrap() > 0);
}
