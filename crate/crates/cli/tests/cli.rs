use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gueloop")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn agtable_rows() {
    let o = run(&["--weight", "4", "agtable"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "(2) g=0 1"), "{out}");
    assert!(out.lines().any(|l| l == "(1,1) g=0 1/2"), "{out}");
    assert!(out.lines().any(|l| l == "(4) g=1 1"), "{out}");
}

#[test]
fn agtable_single_profile_csv() {
    let o = run(&["--format", "csv", "--profile", "4", "agtable"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("profile,genus,a"));
    assert!(out.lines().any(|l| l == "4,0,2"), "{out}");
}

#[test]
fn free_energy_json() {
    let o = run(&["--weight", "2", "--format", "json", "free-energy"]);
    assert!(o.status.success());
    let terms: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    // x^2 s_2 at genus 0
    let s2 = terms.iter().find(|t| t["s"] == serde_json::json!([0, 1]) && t["eps"] == -2).unwrap();
    assert_eq!(s2["val"], "1");
    assert_eq!(s2["x"], 2);
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["--weight", "4", "--lambda-order", "4", "verify", "--suite", "loop-g1"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    let bad = run(&["--weight", "4", "--lambda-order", "4", "verify", "--suite", "loop-g1", "--corrupt"]);
    assert_eq!(bad.status.code(), Some(1), "{}", stdout(&bad));
    let unknown = run(&["verify", "--suite", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--weight", "6", "--format", "json", "free-energy"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert_ne!(run(&["--weight", "15", "agtable"]).status.code(), Some(0));
    let o = run(&["--genus", "2", "--jet-order", "2", "loop-residual"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}
