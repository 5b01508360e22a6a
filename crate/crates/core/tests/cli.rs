use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pargreedy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bounds_prints_rho() {
    let o = run(&["bounds", "--n", "5", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "rho=1/3"), "{}", stdout(&o));
}

#[test]
fn construct_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let o = run(&[
        "construct",
        "graph",
        "--n",
        "5",
        "--q",
        "3",
        "--family",
        "optimal",
        "--out",
        path(&g),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["analyze", "graph", "--in", path(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("alpha=2 theta=2 omega=3 feasible_q=3 edges=4"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn certify_witnesses() {
    let o = run(&[
        "certify",
        "--suite",
        "witnesses",
        "--alpha-max",
        "3",
        "--lambdas",
        "0,1/2,1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l == "failures=0"));
}

#[test]
fn seeded_runs_are_byte_identical() {
    let args = [
        "certify", "--suite", "random", "--seed", "99", "--count", "40", "--n-max", "5",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let json = [
        "--json", "certify", "--suite", "random", "--seed", "99", "--count", "40", "--n-max", "5",
    ];
    assert_eq!(run(&json).stdout, run(&json).stdout);
}

#[test]
fn json_output_parses() {
    let o = run(&["--json", "bounds", "--n", "7", "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rho"], "1/3");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["bounds", "--n", "3", "--q", "4"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "--suite", "random"]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_three() {
    let o = run(&["--graph-cap", "4", "analyze", "graph", "--in", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    run(&[
        "construct",
        "graph",
        "--family",
        "edgeless",
        "--n",
        "6",
        "--out",
        path(&g),
    ]);
    let o = run(&["--graph-cap", "4", "analyze", "graph", "--in", path(&g)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn loader_reports_partition_and_order_errors() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("i.json");
    std::fs::write(
        &instance,
        r#"{"ground":["a","b"],"agents":[["a"],["a","b"]],
            "objective":{"kind":"tabular","values":["0","1","1","2"]},
            "graph":{"n":2,"edges":[[1,2]]}}"#,
    )
    .unwrap();
    let o = run(&["analyze", "instance", "--in", path(&instance)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("partition violated"), "{}", stderr(&o));

    let p = dir.path().join("p.json");
    std::fs::write(&p, r#"{"q":2,"P":[2,1]}"#).unwrap();
    let o = run(&["schedule", "--assignment", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("order preservation"), "{}", stderr(&o));
}

#[test]
fn bad_field_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("i.json");
    std::fs::write(
        &instance,
        r#"{"ground":["u1","v1"],"agents":[["u1","v1"]],
            "objective":{"kind":"curvature-witness","lambda":"x","u":["u1"],"v":["v1"]}}"#,
    )
    .unwrap();
    let o = run(&["analyze", "instance", "--in", path(&instance)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("objective.lambda"), "{}", stderr(&o));
}

#[test]
fn adversarial_witness_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    let o = run(&[
        "adversarial",
        "p-additive",
        "--family",
        "star",
        "--n",
        "5",
        "--p",
        "2",
        "--verify",
        "--out",
        path(&w),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("2/5"), "{}", stdout(&o));
    let o = run(&["run", "--instance", path(&w), "--policy", "worst"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["certify", "--suite", "files", "--in", path(&w)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn scan_writes_csv() {
    let o = run(&["scan", "--curve", "curvature-bounds", "--r", "2", "--lambda-steps", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,lambda,lower,upper"));
    assert_eq!(lines.count(), 5);
}
