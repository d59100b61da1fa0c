//! End-to-end checks of the `apmove` binary.

use std::path::Path;
use std::process::Command;

fn apmove() -> Command {
    Command::new(env!("CARGO_BIN_EXE_apmove"))
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn help_lists_the_subcommands() {
    let text = run_ok(apmove().arg("--help"));
    for verb in ["run", "sweep", "oracle", "show"] {
        assert!(text.contains(verb), "help misses {verb}: {text}");
    }
}

#[test]
fn sweep_writes_csvs_and_show_summarizes_them() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let text = run_ok(apmove().args([
        "sweep",
        "--pattern",
        "I",
        "--method",
        "proposed,no_move",
        "--d-a-range",
        "5:15:5",
        "--steps",
        "80",
        "--seed",
        "7",
        "--grid",
        "coarse",
        "--out",
        out.to_str().unwrap(),
    ]));
    assert!(text.contains("wrote 6 rows"), "{text}");

    let summary = out.join("summary.csv");
    assert!(summary.exists());
    let csv = std::fs::read_to_string(&summary).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "pattern,method,d_A_m,psi_A_deg,theta_bps,delta_theta,user_positions_json,seed"
    );
    assert_eq!(lines.count(), 6);
    assert!(out.join("sweep_I_proposed.csv").exists());
    assert!(out.join("sweep_I_no_move.csv").exists());
    assert!(out.join("provenance.json").exists());

    let shown = run_ok(apmove().args(["show", "--input", summary.to_str().unwrap()]));
    assert!(shown.contains("proposed"), "{shown}");
    assert!(shown.contains("method ranking"), "{shown}");
}

#[test]
fn run_executes_a_manifest_file() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.json");
    let out = dir.path().join("artifacts");
    std::fs::write(
        &manifest,
        format!(
            r#"{{
                "scenario": {{"pattern": {{"patterns": ["II"], "d_a_values": [10.0, 20.0]}}}},
                "grid": "coarse",
                "sap": {{"max_steps": 60, "seed": 11}},
                "methods": ["no_move", "greedy_new_users"],
                "out_dir": {:?}
            }}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let text = run_ok(apmove().args(["run", "--manifest", manifest.to_str().unwrap()]));
    assert!(text.contains("wrote 4 rows"), "{text}");
    assert!(out.join("summary.csv").exists());
}

#[test]
fn oracle_reports_the_gap_between_sap_and_exhaustive_search() {
    let text = run_ok(apmove().args([
        "oracle",
        "--pattern",
        "II",
        "--d-a",
        "15",
        "--seeds",
        "3",
        "--steps",
        "200",
    ]));
    assert!(text.contains("oracle:"), "{text}");
    assert!(text.contains("sap:"), "{text}");
    assert!(text.contains("gap:"), "{text}");
}

#[test]
fn oracle_json_output_parses() {
    let text = run_ok(apmove().args([
        "oracle", "--pattern", "I", "--d-a", "10", "--seeds", "2", "--steps", "100", "--json",
    ]));
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value["oracle"]["best_theta_bps"].as_f64().unwrap() > 0.0);
    assert!(value["sap"]["theta_bps"].as_f64().unwrap() > 0.0);
}

#[test]
fn bad_flags_fail_with_diagnostics() {
    let out = apmove()
        .args(["sweep", "--pattern", "VII"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let out = apmove()
        .args(["show", "--input", "/nonexistent/nope.csv"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nope.csv"), "{err}");
}

#[test]
fn env_var_sets_default_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-env");
    let output = apmove()
        .env("APMOVE_OUT_DIR", out.to_str().unwrap())
        .args([
            "sweep",
            "--pattern",
            "I",
            "--method",
            "no_move",
            "--d-a-range",
            "5:5",
            "--steps",
            "10",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    assert!(out.join("summary.csv").exists());
    assert!(Path::new(&out).join("sweep_I_no_move.csv").exists());
}
