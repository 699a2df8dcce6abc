use std::process::{Command, Output};

use serde_json::Value;

fn symplecta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symplecta"))
        .args(args)
        .env_remove("SYMPLECTA_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_prints_a_passing_report() {
    let out = symplecta(&[
        "verify", "--check", "fact1", "--p", "3", "--n", "2", "--k", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["counts"]["involutions"], 90);
    assert_eq!(r["counts"]["base_subsets"], 45);
    assert_eq!(r["seed"], 42);
    assert!(r.get("counterexample").is_none());
}

#[test]
fn inapplicable_parameters_exit_zero() {
    let out = symplecta(&["verify", "--check", "fact1", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "inapplicable");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        symplecta(&["verify", "--check", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        symplecta(&["suite", "--names", "fact1", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        symplecta(&["verify", "--check", "fact1", "--p", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        symplecta(&["verify", "--check", "fact1", "--mode", "sampled"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(symplecta(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budget_one_refuses_the_whole_suite() {
    let dir = std::env::temp_dir().join(format!("symplecta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reports.json");
    let out = symplecta(&["suite", "--budget", "1", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, json(&out));
    let reports = written.as_array().unwrap();
    assert!(reports.len() >= 15);
    assert!(reports.iter().all(|r| r["status"] == "refused"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("refused: fact1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn environment_budget_applies_without_a_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_symplecta"))
        .args(["verify", "--check", "example1"])
        .env("SYMPLECTA_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["status"], "refused");
    assert_eq!(r["budget"], 5);
}

#[test]
fn enumerate_counts() {
    let count = |args: &[&str]| json(&symplecta(args))["count"].as_u64().unwrap();
    assert_eq!(
        count(&[
            "enumerate",
            "family",
            "--p",
            "3",
            "--n",
            "2",
            "--k",
            "1",
            "--count"
        ]),
        90
    );
    assert_eq!(
        count(&[
            "enumerate",
            "base-subsets",
            "--p",
            "2",
            "--n",
            "3",
            "--count"
        ]),
        1120
    );
    assert_eq!(
        count(&["enumerate", "subspaces", "--p", "2", "--m", "4", "--d", "2"]),
        35
    );
    let orders = json(&symplecta(&[
        "enumerate",
        "group-order",
        "--p",
        "2",
        "--n",
        "2",
    ]));
    assert_eq!(orders["sp"], "720");
}

#[test]
fn enumerated_members_are_integer_arrays() {
    let out = json(&symplecta(&[
        "enumerate",
        "family",
        "--p",
        "2",
        "--n",
        "2",
        "--k",
        "1",
    ]));
    let members = out["members"].as_array().unwrap();
    assert_eq!(members.len(), 20);
    let basis = members[0]["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 2);
    assert!(basis[0].as_array().unwrap().iter().all(|x| x.is_u64()));
}

#[test]
fn named_suite_runs_in_the_requested_order() {
    let out = symplecta(&["suite", "--names", "perp_iff_base", "lemma1"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    let names: Vec<&str> = reports
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["check"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["perp_iff_base", "lemma1"]);
}
