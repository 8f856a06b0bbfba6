use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn permres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permres"))
        .args(args)
        .env_remove("PERMRES_BUDGET_MS")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let out = permres(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn temp(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("permres-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

const DIAGONAL: &str = r#"{"kind":"diagonal","socle":{"kind":"alternating","n":5},"swap":true,"outer":"(1 2)"}"#;

#[test]
fn construct_roundtrips_through_generator_file() {
    let out = permres(&["construct", r#"{"kind":"subsets","m":5,"k":2}"#]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("degree 10"));
    let p = temp("subsets.txt", &text);
    let (v, code) = json(&["order", p.to_str().unwrap()]);
    assert_eq!((v["order"].as_str(), code), (Some("120"), 0));
    let (again, _) = json(&["construct", p.to_str().unwrap()]);
    let (first, _) = json(&["construct", r#"{"kind":"subsets","m":5,"k":2}"#]);
    assert_eq!(again["generators"], first["generators"]);
    std::fs::remove_file(p).unwrap();
}

#[test]
fn describe_diagonal() {
    let (v, code) = json(&["describe", DIAGONAL]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], "14400");
    assert_eq!(v["degree"], 60);
    assert_eq!(v["primitive"], true);
}

#[test]
fn searches_report_witnesses() {
    let (v, _) = json(&["base-size", DIAGONAL, "--threads", "2"]);
    assert_eq!(v["status"], "exact");
    assert_eq!(v["witness"]["size"], 4);
    let (v, _) = json(&["stab-scan", DIAGONAL, "--c", "2", "--predicate", "solvable"]);
    assert_eq!(v["verdict"], "all-pass");
    assert_eq!(v["worst"]["order"], "16");
    let (v, _) = json(&["dist-number", r#"{"kind":"dihedral","n":4}"#]);
    assert_eq!((v["r"].as_u64(), v["verified"].as_bool()), (Some(3), Some(true)));
    let (v, _) = json(&["reg-count", r#"{"kind":"symmetric","n":3}"#, "--t", "2"]);
    assert_eq!(v, serde_json::json!({"status": "exact", "count": "6"}));
}

#[test]
fn bounds_verbs() {
    let (v, _) = json(&["bounds", "--check", "lemma22", "--d", "6", r#"{"kind":"symmetric","n":5}"#]);
    assert_eq!(v["verdict"], "holds");
    let (v, _) = json(&["bounds", "--check", "lemma22", "--d", "5", r#"{"kind":"alternating","n":5}"#]);
    assert_eq!(v["verdict"], "precondition-failed");
    let (v, _) = json(&["bounds", "--check", "formula", "--formula", "diag", "--params", "2,60"]);
    assert_eq!(v["bound_value"]["value"], "4");
    let (v, _) = json(&["bounds", "--check", "m-epsilon", "--delta", "1"]);
    assert_eq!(v["m_epsilon"], 21);
    let (v, _) = json(&["bounds", "--check", "n-c-delta", "--c", "1", "--delta", "1"]);
    assert_eq!(v["n"], 39);
}

#[test]
fn verify_exit_codes() {
    let out = permres(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));

    let bad = temp(
        "bad.json",
        r#"{"checks": [{"id": "s5", "recipe": {"kind": "symmetric", "n": 5},
            "assertions": [{"operation": "order", "expected": 121, "provenance": "trivial"}]}]}"#,
    );
    let (v, code) = json(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["checks"][0]["assertions"][0]["measured"], 120);

    let empty = temp("empty.json", r#"{"checks": []}"#);
    let (v, code) = json(&["verify", empty.to_str().unwrap()]);
    assert_eq!((code, v["checks"].as_array().map(Vec::len)), (0, Some(0)));

    let broken = temp("broken.json", "{\"checks\": [\n  {\"id\": \"x\",,}\n]}");
    let out = permres(&["verify", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let skip = temp(
        "skip.json",
        r#"{"degree_cap": 5, "checks": [{"id": "s7", "recipe": {"kind": "symmetric", "n": 7},
            "assertions": [{"operation": "order", "expected": 5040, "provenance": "trivial"}]}]}"#,
    );
    assert_eq!(permres(&["verify", skip.to_str().unwrap()]).status.code(), Some(2));
    for p in [bad, empty, broken, skip] {
        std::fs::remove_file(p).unwrap();
    }
}

#[test]
fn input_errors_and_budgets() {
    assert_eq!(permres(&["order", "/nonexistent/recipe.json"]).status.code(), Some(3));
    assert_eq!(permres(&["order", r#"{"kind":"nope"}"#]).status.code(), Some(3));
    assert_eq!(permres(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(permres(&["--help"]).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_permres"))
        .args(["dist-number", r#"{"kind":"affine","q":2,"m":4,"family":"Sp"}"#])
        .env("PERMRES_BUDGET_MS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
