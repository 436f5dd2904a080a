use std::path::PathBuf;
use std::process::{Command, Output};

use tropical_sched::document::{ResultDocument, Status};
use tropical_sched::scheduling::Time;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropical-sched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn t(x: f64) -> Time {
    Time::finite(x)
}

#[test]
fn worked_example_report() {
    let out = run(&["solve", "--input", &fixture("worked_example.toml"), "--representative", "earliest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("status: optimal"));
    assert!(text.contains("theta: 4\n"));
    assert!(text.contains("family upper u: 1 2 0"));
}

#[test]
fn structured_output_and_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let out = run(&[
        "solve",
        "--input",
        &fixture("worked_example.toml"),
        "--output",
        path.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let printed: ResultDocument = serde_json::from_str(&stdout(&out)).unwrap();
    let written: ResultDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(printed, written);

    assert_eq!(written.status, Status::Optimal);
    assert_eq!(written.theta, Some(t(4.0)));
    let x: Vec<Time> = written.activities.iter().map(|a| a.initiation).collect();
    let y: Vec<Time> = written.activities.iter().map(|a| a.completion).collect();
    let flow: Vec<Time> = written.activities.iter().map(|a| a.flow_time).collect();
    assert_eq!(x, [t(1.0), t(2.0), t(0.0)]);
    assert_eq!(y, [t(5.0), t(5.0), t(3.0)]);
    assert_eq!(flow, [t(4.0), t(3.0), t(3.0)]);
    let family = written.family.unwrap();
    assert_eq!(family.lower, [t(0.0); 3]);
    assert_eq!(family.upper, Some(vec![t(1.0), t(2.0), t(0.0)]));
}

#[test]
fn text_report_matches_result_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.json");
    let out = run(&[
        "solve",
        "--input",
        &fixture("worked_example.toml"),
        "--output",
        path.to_str().unwrap(),
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: ResultDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stdout(&out), doc.to_text());
}

#[test]
fn infeasible_fixture() {
    let out = run(&["solve", "--input", &fixture("infeasible.toml")]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("status: infeasible"));
    assert!(text.contains("delta: 1"));
}

#[test]
fn invalid_fixture() {
    let out = run(&["solve", "--input", &fixture("invalid.toml")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("duplicate label `a1`"));
}

#[test]
fn syntax_errors_carry_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.toml");
    std::fs::write(&path, "version = 1\n[[activity]\nlabel = \"a\"\n").unwrap();
    let out = run(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("line 2"), "{}", stdout(&out));
}

#[test]
fn missing_input_is_invalid() {
    let out = run(&["solve", "--input", "/nonexistent/project.toml"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn argument_errors_exit_three() {
    assert_eq!(run(&["solve"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(
        run(&["solve", "--input", "x", "--representative", "middle"]).status.code(),
        Some(3)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_prints_agreement() {
    let out = run(&["solve", "--input", &fixture("worked_example.toml"), "--verify", "--grid-step", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("oracle agrees: 4"));

    let out = run(&["solve", "--input", &fixture("infeasible.toml"), "--verify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("oracle agrees: infeasible"));
}

#[test]
fn coarse_grid_reports_mismatch() {
    // 0.75 misses the minimiser (1, 2, 0)
    let out = run(&["solve", "--input", &fixture("worked_example.toml"), "--verify", "--grid-step", "0.75"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("oracle disagrees"));
}

#[test]
fn oversized_grid_is_rejected() {
    let out = run(&["solve", "--input", &fixture("worked_example.toml"), "--verify", "--grid-step", "0.0001"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn latest_representative() {
    let out = run(&[
        "solve",
        "--input",
        &fixture("single_activity.toml"),
        "--representative",
        "latest",
        "--format",
        "structured",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: ResultDocument = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.activities[0].initiation, t(7.0));
    assert_eq!(doc.activities[0].completion, t(10.0));
    assert_eq!(doc.representative.as_deref(), Some("latest"));
}

#[test]
fn raw_mode_matches_project_mode() {
    let raw = run(&["solve", "--raw", "--input", &fixture("raw_worked_example.toml"), "--format", "structured", "--verify"]);
    let project = run(&["solve", "--input", &fixture("worked_example.toml"), "--format", "structured"]);
    assert_eq!(raw.status.code(), Some(0));
    let raw: ResultDocument = serde_json::from_str(&stdout(&raw)).unwrap();
    let project: ResultDocument = serde_json::from_str(&stdout(&project)).unwrap();
    assert_eq!(raw.theta, project.theta);
    assert_eq!(raw.family, project.family);
    assert!(raw.verification.unwrap().agrees);
}

#[test]
fn raw_mode_without_upper_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("open.toml");
    std::fs::write(&path, "version = 1\na = \"-inf 1; 2 -inf\"\ng = \"0 0\"\n").unwrap();
    let out = run(&["solve", "--raw", "--input", path.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: ResultDocument = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc.theta, Some(t(1.5)));
    assert_eq!(doc.family.unwrap().upper, None);
}
