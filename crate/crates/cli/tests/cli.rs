use std::path::PathBuf;
use std::process::{Command, Output};

use sosadmm::report::{read_bench_csv, RunReport, BENCH_COLUMNS};
use sosadmm::SolveStatus;

fn sosadmm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sosadmm")).args(args).output().unwrap()
}

fn problems(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_pop_ten() {
    let o = sosadmm(&["solve", "--family", "pop", "--n", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let report = RunReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(report.status, SolveStatus::Optimal);
    assert_eq!((report.dims.n_psd, report.dims.m), (66, 1001));
    let obj = report.objective.unwrap();
    assert!(((obj + 9.11) / 9.11).abs() <= 5e-3, "{obj}");
}

#[test]
fn check_orth_reports_diagonal() {
    let o = sosadmm(&["check-orth", "--family", "pop", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_diagonal"], serde_json::Value::Bool(true));
}

#[test]
fn flops_table() {
    let o = sosadmm(&["flops", "--m", "1000", "--t", "66", "--N", "66"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("lowrank") && l.ends_with("17969134")), "{text}");
    let o = sosadmm(&["flops", "--m", "1000", "--t", "66", "--N", "66", "--format", "csv"]);
    assert!(stdout(&o).contains("lowrank,17969134,false"));
}

#[test]
fn exit_codes() {
    let infeasible = sosadmm(&["solve", "--file", &problems("not_sos.sos")]);
    assert_eq!(infeasible.status.code(), Some(2));
    let r = RunReport::from_json(&stdout(&infeasible)).unwrap();
    assert_eq!(r.status, SolveStatus::PrimalInfeasible);

    let capped = sosadmm(&["solve", "--family", "pop", "--n", "6", "--max-iters", "5"]);
    assert_eq!(capped.status.code(), Some(1));
    assert_eq!(RunReport::from_json(&stdout(&capped)).unwrap().status, SolveStatus::MaxIters);

    let ok = sosadmm(&["solve", "--file", &problems("quartic_disc.sos")]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn bad_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.sos");
    std::fs::write(&path, "nvars 1 ; degree 2\nobjective: -u1\nconstraint sos: x1^2 + 2x1 - u1\n").unwrap();
    let o = sosadmm(&["solve", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.sos:3:25:"), "{err}");
}

#[test]
fn unknown_flag_prints_usage() {
    let o = sosadmm(&["solve", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(sosadmm(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_csv_round_trips() {
    let o = sosadmm(&["bench", "--family", "pop", "--n", "4,6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), BENCH_COLUMNS.join(","));
    let rows = read_bench_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [4, 6]);
    assert!(rows.iter().all(|r| r.status == SolveStatus::Optimal));
}

#[test]
fn assemble_output_is_reproducible() {
    for args in [
        ["assemble", "--family", "pop", "--n", "5", "--format", "json"],
        ["assemble", "--family", "lyapunov", "--n", "3", "--format", "sdpa"],
    ] {
        let a = sosadmm(&args);
        let b = sosadmm(&args);
        assert_eq!(a.status.code(), Some(0));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = sosadmm(&["solve", "--family", "lyapunov", "--n", "3", "--seed", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = RunReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.seed, Some(4));
}
