use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fluxsense::manifest::RunManifest;
use serde_json::Value;

fn fluxsense(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluxsense"))
        .args(args)
        .env_remove(fluxsense_cli::OUT_DIR_ENV)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn error_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn rates_writes_three_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluxsense(dir.path(), &["rates"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    let lines: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(
        lines[0],
        "phi,gamma1_cav_khz,gamma1_ind_khz,gamma1_cap_khz,gammaphi_flux_exp_khz,gammaphi_flux_gauss_khz,gammaphi_curr_khz"
    );
    assert_eq!(lines.len(), 4);
}

#[test]
fn env_var_sets_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_env");
    let out = Command::new(env!("CARGO_BIN_EXE_fluxsense"))
        .arg("inductance")
        .env(fluxsense_cli::OUT_DIR_ENV, &target)
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("inductance.json").is_file());
}

#[test]
fn manifest_round_trips_and_names_existing_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluxsense(
        dir.path(),
        &[
            "--out-dir",
            "o",
            "--manifest",
            "ridge",
            "--temps",
            "20,40,75",
            "--n-freq",
            "5",
            "--n-phi",
            "20",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(dir.path().join("o/manifest.json")).unwrap();
    let m = RunManifest::from_json(&text).unwrap();
    assert_eq!(RunManifest::from_json(&m.to_json().unwrap()).unwrap(), m);
    assert_eq!(m.subcommand, "ridge");
    assert_eq!(m.outputs.len(), 2);
    std::env::set_current_dir(dir.path()).unwrap();
    assert!(m.missing_outputs().is_empty());

    let curves = fs::read_to_string(dir.path().join("o/ridge_curves.csv")).unwrap();
    let temps: std::collections::BTreeSet<&str> = curves
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').next())
        .collect();
    assert_eq!(temps.len(), 3);
}

#[test]
fn unknown_config_key_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "# comment\nwidget = 3\n").unwrap();
    let out = fluxsense(dir.path(), &["--config", "bad.cfg", "rates"]);
    assert_eq!(out.status.code(), Some(2));
    let e = error_json(&out);
    assert_eq!(e["error"], "config");
    assert_eq!(e["key"], "widget");
    assert_eq!(e["line"], 2);
}

#[test]
fn invalid_value_names_key() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.cfg"), "temperature_mk = -1\n").unwrap();
    let out = fluxsense(dir.path(), &["--config", "bad.cfg", "optimal-point"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["key"], "temperature_mk");
}

#[test]
fn bad_arguments_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["frobnicate"][..], &["rates", "--phi", "0.7"]] {
        let out = fluxsense(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error_json(&out)["error"], "usage");
    }
}

#[test]
fn missing_config_file_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluxsense(dir.path(), &["--config", "nope.cfg", "rates"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_json(&out)["error"], "io");
}

#[test]
fn grid_leaving_flux_domain_exits_with_three() {
    // So close to the sweet spot the slope is tiny and the calibration grid
    // spans many flux quanta.
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.cfg"), "bias_phi = 1e-9\n").unwrap();
    let out = fluxsense(dir.path(), &["--config", "c.cfg", "calibration"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_json(&out)["error"], "numerical");
}

#[test]
fn calibration_file_is_named_by_qubit_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluxsense(dir.path(), &["calibration", "--n-qubits", "2"]);
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("calibration_n2.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 6144 / 2);
}

#[test]
fn help_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = fluxsense(dir.path(), &["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("pea"));
}
