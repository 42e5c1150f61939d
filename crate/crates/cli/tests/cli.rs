//! Drives the binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use r2pencil::report::{read_csv, read_json};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_r2pencil"));
    c.env_remove("R2PENCIL_BACKEND");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn preset_s1_passes_with_desk_diagonal() {
    let out = run(&["verify", "--preset", "s1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.pass);
    let diag = |n: usize| {
        report
            .suite("biorth")
            .find(|e| e.backend == "exact" && e.n == Some(n) && e.m == Some(n))
            .map(|e| e.witnesses[0].value.clone())
            .unwrap()
    };
    assert_eq!((diag(0).re.as_str(), diag(0).im.as_str()), ("1/2", "0"));
    assert_eq!((diag(1).re.as_str(), diag(1).im.as_str()), ("0", "-1"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&["verify", "--seed", "13", "--n", "6", "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"mode": "explicit", "params": {"alpha": [[2, 0]], "beta": [[0, 0], [0, 0]],
            "e": [[1, 0], [1, 0]], "d": [[2, 0], [1, 0]], "c": [[1, 0], [2, 0]]}}"#,
    );
    let out = run(&["verify", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta[1] must be nonzero"));
    assert_eq!(run(&["verify", "--preset", "s9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "/nonexistent/config.json"]).status.code(), Some(2));
}

#[test]
fn degenerate_moments_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    // d_1 = 2 for the first fixture, so m1 = 2 m0 is degenerate
    let cfg = write(
        dir.path(),
        "deg.json",
        r#"{"mode": "preset", "preset": "s1", "moments": {"m0": [1, 0], "m1": [2, 0]}}"#,
    );
    let out = run(&["verify", &cfg, "--suite", "biorth"]);
    assert_eq!(out.status.code(), Some(1));
    let report = read_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let e = report.suite("moments").next().unwrap();
    assert!(!e.pass);
    assert!(e.error.as_deref().unwrap().contains("degenerate"));
}

#[test]
fn environment_selects_backend_and_flag_wins() {
    let out = bin()
        .args(["verify", "--preset", "s1", "--suite", "pencil"])
        .env("R2PENCIL_BACKEND", "exact")
        .output()
        .unwrap();
    let report = read_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.entries.iter().all(|e| e.backend == "exact"));

    let out = bin()
        .args(["verify", "--preset", "s1", "--suite", "pencil", "--backend", "float"])
        .env("R2PENCIL_BACKEND", "exact")
        .output()
        .unwrap();
    let report = read_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(report.entries.iter().all(|e| e.backend == "float"));

    let out = bin().args(["verify", "--preset", "s1"]).env("R2PENCIL_BACKEND", "quad").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_output_replays_as_explicit_config() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let out = run(&["gen", "--seed", "4", "--n", "5", "--out", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let from_seed = run(&["verify", "--seed", "4", "--n", "5", "--backend", "exact"]);
    let replayed = run(&["verify", inst.to_str().unwrap(), "--backend", "exact"]);
    let a = read_json(&String::from_utf8(from_seed.stdout).unwrap()).unwrap();
    let b = read_json(&String::from_utf8(replayed.stdout).unwrap()).unwrap();
    assert_eq!(a.instance.params, b.instance.params);
    let strip = |r: &r2pencil::VerificationReport| {
        r.entries
            .iter()
            .map(|e| (e.suite.clone(), e.n, e.m, e.label.clone(), e.residual, e.pass))
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn report_subcommand_converts_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    run(&["verify", "--preset", "s2", "--out", json.to_str().unwrap()]);
    let out = run(&["report", json.to_str().unwrap(), "--format", "csv", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let rows = read_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(rows.len(), report.entries.len());
    assert!(rows.iter().any(|r| r.suite == "christoffel_orth/odd"));
    assert!(rows.iter().all(|r| r.instance == "s2/exact" || r.instance == "s2/float"));
}
