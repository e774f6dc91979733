use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn pcount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcount")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn count_finite_interval() {
    let o = pcount(&["count", "-1 <= x & x <= 3", "--var", "x"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "5 stable");
}

#[test]
fn count_reports_unbounded_and_empty() {
    let o = pcount(&["count", "x >= 0", "--var", "x"]);
    assert!(stdout(&o).trim().ends_with("unstable"));
    let o = pcount(&["count", "false", "--var", "x"]);
    assert_eq!(stdout(&o).trim(), "0 stable");
}

#[test]
fn count_with_parameters() {
    let o = pcount(&["count", "0 <= x & x <= n", "--var", "x", "--assign", "n=9"]);
    assert_eq!(stdout(&o).trim(), "10 stable");
    let o = pcount(&["count", "x >= 0 & x <= 7", "--var", "x", "--domain", "N"]);
    assert_eq!(stdout(&o).trim(), "8 stable");
}

#[test]
fn eval_truth_values() {
    let o = pcount(&["eval", "y = 5", "--assign", "y=5"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = pcount(&["eval", "y = 5", "--assign", "y=4"]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = pcount(&["eval", "E z . 2*z = x", "--assign", "x=6"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn eval_unbound_variable_is_a_contract_error() {
    let o = pcount(&["eval", "x = 1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("`x`"));
}

#[test]
fn syntax_error_points_at_the_column() {
    let o = pcount(&["parse", "x = = 1"]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("line 1, column 5"), "{err}");
    assert!(err.contains('^'));
}

#[test]
fn parse_roundtrip_and_unicode() {
    let o = pcount(&["parse", "E z . (2*z = x | x < 3)", "--roundtrip"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let printed = stdout(&o);
    let again = pcount(&["parse", printed.trim()]);
    assert_eq!(stdout(&again), printed);
    let o = pcount(&["parse", "E z . (2*z = x | x < 3)", "--unicode"]);
    assert!(stdout(&o).contains('∃'));
}

#[test]
fn parse_presentation_file() {
    let o = pcount(&["parse", "--presentation", "-f", &fixture("worked_example.pres")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("dim 4"));
    assert!(out.contains("period -1 -2 0 -1"));
}

#[test]
fn eliminate_worked_example_report() {
    let o = pcount(&["eliminate", &fixture("worked_example.pres"), "--report"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("case 2"));
    assert!(out.contains("D = 2, m = 6"));
    assert!(out.contains("2*z1 = -x1 + x3 + x4"));
    assert_eq!(out.matches("integrality:").count(), 1);
}

#[test]
fn eliminate_singleton_is_case_one() {
    let o = pcount(&["eliminate", &fixture("singleton.pres"), "--report"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("x1 = 3 & y = 1 | !x1 = 3 & y = 0"));
    assert!(out.contains("case 1"));
}

#[test]
fn eliminate_output_is_deterministic() {
    let a = pcount(&["eliminate", &fixture("worked_example.pres")]);
    let b = pcount(&["eliminate", &fixture("worked_example.pres")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn eliminate_rejects_non_simple() {
    let o = pcount(&["eliminate", &fixture("non_simple.pres")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not simple"));
}

#[test]
fn eliminate_respects_node_budget() {
    let o = pcount(&["eliminate", &fixture("worked_example.pres"), "--node-budget", "100"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn check_worked_example_agrees() {
    let o = pcount(&["check", &fixture("worked_example.pres"), "--trials", "30", "--seed", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("30 trials: 30 agree, 0 unstable, 0 disagree"));
}

#[test]
fn check_diagonal_quotient_agrees() {
    let o = pcount(&["check", &fixture("diagonal.pres"), "--delta", "quotient", "--guards", "lattice", "--trials", "40"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("40 agree"));
}

#[test]
fn check_detects_corrupted_formula() {
    let o = pcount(&[
        "check",
        &fixture("diagonal.pres"),
        "--formula",
        &fixture("diagonal_corrupted.formula"),
        "--trials",
        "20",
    ]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("verification failed"));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn check_rejects_overlapping_components() {
    let o = pcount(&["check", &fixture("overlapping.pres"), "--verify-disjoint"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("overlap"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("pcount-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.txt");
    let o = pcount(&["count", "0 <= x & x <= 2", "--var", "x", "-o", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim(), "3 stable");
    std::fs::remove_dir_all(&dir).unwrap();
}
