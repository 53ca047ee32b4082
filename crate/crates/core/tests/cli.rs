//! The `rwa-ntn` binary: subcommands, artifacts and exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rwa-ntn"))
}

#[test]
fn catalog_prints_all_builtins() {
    let out = bin().arg("catalog").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["scenarios"].as_array().unwrap().len(), 6);
}

#[test]
fn run_writes_the_artifact_tree() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--scenario", "scenario-15b", "--step", "20", "--seed", "3", "--frames", "5", "--windows", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let base = dir.path().join("scenario-15b");
    for f in ["access.csv", "link.csv", "slots.csv", "blades.csv", "report.json"] {
        assert!(base.join(f).is_file(), "{f} missing");
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(base.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["seed"], 3);
    assert_eq!(report["scenario_id"], "scenario-15b");
}

#[test]
fn run_accepts_a_scenario_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/scenarios/scenario-6.json");
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--scenario", path, "--step", "30", "--frames", "2", "--windows", "1", "--mode", "expected", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(!dir.path().join("scenario-6/blades.csv").exists(), "no rotor, no blade file");
}

#[test]
fn unknown_scenario_exits_with_config_code() {
    let out = bin().args(["run", "--scenario", "scenario-99"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scenario-99"));
}

#[test]
fn invalid_file_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = bin().args(["run", "--scenario"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let mut file = rwa_ntn::scenario::builtin_file_for("scenario-7").unwrap();
    file.scenarios[0].duration_h = -1.0;
    std::fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let out = bin().args(["run", "--scenario"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duration"));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = bin()
        .args(["run", "--scenario", "scenario-15b", "--step", "60", "--frames", "1", "--windows", "1", "--out"])
        .arg(&blocker)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn sweep_prints_a_curve() {
    let out = bin()
        .args(["sweep", "--scenario", "scenario-7", "--cnr-min", "-5", "--cnr-max", "5", "--points", "3", "--frames", "10"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "cnr_db,ber,data_rate_mbps");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-5,"));
}

#[test]
fn sweep_rejects_empty_grid() {
    let out = bin()
        .args(["sweep", "--scenario", "scenario-7", "--cnr-min", "0", "--cnr-max", "1", "--points", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
