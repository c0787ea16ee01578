//! End-to-end tests of the command-line interface: exit codes, file
//! emission, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn entrate(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrate"))
        .args(args)
        .env("ENTRATE_OUT_DIR", out_dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn verify_sim_smoke_run_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args_a = [
        "verify-sim",
        "--seed",
        "42",
        "--trials",
        "100",
        "--dims",
        "2,3",
        "--fn",
        "log",
        "--out",
    ];
    let out1 = entrate(
        &[&args_a[..], &[a.to_str().unwrap()]].concat(),
        dir.path(),
    );
    assert!(out1.status.success(), "{}", stdout(&out1));
    let out2 = entrate(
        &[&args_a[..], &[b.to_str().unwrap()]].concat(),
        dir.path(),
    );
    assert!(out2.status.success());
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "same invocation must emit identical bytes");

    let text = String::from_utf8(bytes_a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial,seed,dim,p,function,spec,rate,bound_name,bound_value,regime_valid,ratio"
    );
    // 100 trials x (3 branch rows + 3 classical rows + 1 conjecture row).
    assert_eq!(text.lines().count() - 1, 100 * 7);
    assert!(stdout(&out1).contains("verify-sim"));
}

#[test]
fn verify_sim_different_seed_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |seed: &str, path: &Path| {
        let out = entrate(
            &[
                "verify-sim",
                "--seed",
                seed,
                "--trials",
                "50",
                "--fn",
                "log",
                "--out",
                path.to_str().unwrap(),
            ],
            dir.path(),
        );
        assert!(out.status.success());
    };
    run("1", &a);
    run("2", &b);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn verify_sie_emits_json_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = entrate(
        &[
            "verify-sie",
            "--seed",
            "7",
            "--trials",
            "20",
            "--specs",
            "renyi:0.5,tsallis:2",
            "--json",
            json.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&json).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["config"]["master_seed"], 7);
    assert!(value["rows"].as_array().unwrap().len() > 0);
    assert!(dir.path().join("verify-sie.csv").exists());
}

#[test]
fn scan_config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("scan.json");
    std::fs::write(
        &cfg_path,
        r#"{"master_seed": 5, "trials": 30, "functions": ["log"], "dims": [2]}"#,
    )
    .unwrap();
    let out = entrate(
        &["verify-sim", "--config", cfg_path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(dir.path().join("verify-sim.csv").exists());

    // Flags override config fields.
    let out = entrate(
        &[
            "verify-sim",
            "--config",
            cfg_path.to_str().unwrap(),
            "--trials",
            "0",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn assumption_outside_regime_reports_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = entrate(
        &["assumption", "--fn", "power:2", "--p", "0.9"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(
        text.contains("outside proven regime (p_max~0.414)"),
        "missing regime note: {text}"
    );
    assert!(dir.path().join("assumption.json").exists());
}

#[test]
fn assumption_violation_inside_claimed_regime_exits_one() {
    // The closed-form certificate licenses negative powers at every weight,
    // but the grid finds real violations there.
    let dir = tempfile::tempdir().unwrap();
    let out = entrate(
        &["assumption", "--fn", "power:-1", "--p", "0.3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not grid-certified"));
}

#[test]
fn assumption_certified_case_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = entrate(&["assumption", "--fn", "log", "--p", "0.05"], dir.path());
    assert!(out.status.success());
    assert!(stdout(&out).contains("grid-certified"));
}

#[test]
fn bounds_table_emits_expected_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = entrate(
        &[
            "bounds-table",
            "--fn",
            "power:0.5",
            "--p-grid",
            "0.05:0.5:0.05",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("bounds-table.csv")).unwrap();
    assert_eq!(text.lines().next().unwrap(), "p,function,bound_name,value,regime_valid");
    // Ten weights; each power row set has branches, min, power form, gap.
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 10 * 5);
    assert!(rows.iter().all(|r| r.contains("power:0.5")));
}

#[test]
fn sweep_is_monotone_and_validates_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = entrate(
        &[
            "sweep", "--kind", "renyi", "--alpha", "0.5", "--db", "2:64",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 63);
    assert!(values.windows(2).all(|w| w[1] < w[0]), "not decreasing");

    let out = entrate(
        &["sweep", "--kind", "tsallis", "--q", "2", "--db", "2:64"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "not increasing");

    // Empty and malformed grids are input errors.
    let out = entrate(
        &["sweep", "--kind", "renyi", "--alpha", "0.5", "--db", "9:2"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = entrate(
        &["sweep", "--kind", "renyi", "--db", "2:8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = entrate(&["verify-sim", "--fn", "tanh"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = entrate(&["no-such-command"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
