//! End-to-end checks of the command-line surface: exit codes, output
//! files, overrides, and byte-for-byte reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qshape(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshape"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn sweep_preset_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = qshape(
        &["sweep", "--preset", "fig2_box_two_level", "--out-dir", "run"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let csv = fs::read_to_string(dir.path().join("run/sweep.csv")).unwrap();
    assert!(csv.starts_with(
        "param_nm,Eg_eV,gap_eV,zeta,F_tilde,U_tilde,S_tilde,C_tilde,P_norm,class\n"
    ));
    assert_eq!(csv.lines().count(), 52);
    let summary = fs::read_to_string(dir.path().join("run/summary.json")).unwrap();
    assert!(summary.contains("\"all_converged\": true"));
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qshape(&["sweep"], dir.path());
    assert_eq!(exit_code(&out), 2);
    let out = qshape(&["sweep", "--preset", "not_a_preset"], dir.path());
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unreadable_config_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qshape(&["sweep", "--config", "missing.json"], dir.path());
    assert_eq!(exit_code(&out), 4);
}

#[test]
fn invalid_config_content_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\"schema\": 7}").unwrap();
    let out = qshape(&["sweep", "--config", "bad.json"], dir.path());
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn map_rejects_n_level_mode() {
    let dir = tempfile::tempdir().unwrap();
    let out = qshape(&["map", "--preset", "fig4_case2_n_level"], dir.path());
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unconverged_sweep_fails_unless_allowed() {
    let dir = tempfile::tempdir().unwrap();
    // a grid cap far below what the tolerance needs leaves rows unconverged
    fs::write(
        dir.path().join("strangled.json"),
        r#"{
            "schema": 1,
            "potential": { "type": "infinite_well_gaussian_bump",
                           "L_nm": 100.0, "l_nm": 60.0, "h_eV": 0.057, "w_nm": 1.0 },
            "temperature_K": 10.0,
            "mode": "two_level",
            "solver": { "n_interior": 64, "max_n_interior": 128, "rel_tol": 1e-10 },
            "sweep": { "variable": "l", "start_nm": 55.0, "end_nm": 65.0, "steps": 3 }
        }"#,
    )
    .unwrap();
    let out = qshape(
        &["sweep", "--config", "strangled.json", "--out-dir", "a"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 3, "{out:?}");
    assert!(dir.path().join("a/sweep.csv").exists(), "outputs still written");
    let out = qshape(
        &[
            "sweep",
            "--config",
            "strangled.json",
            "--out-dir",
            "b",
            "--allow-unconverged",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let summary = fs::read_to_string(dir.path().join("b/summary.json")).unwrap();
    assert!(summary.contains("\"all_converged\": false"));
}

#[test]
fn temperature_and_steps_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let out = qshape(
        &[
            "sweep",
            "--preset",
            "fig2_box_two_level",
            "--T",
            "20",
            "--steps",
            "5",
            "--out-dir",
            "run",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("run/sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let summary = fs::read_to_string(dir.path().join("run/summary.json")).unwrap();
    assert!(summary.contains("\"temperature_K\": 20.0"));
}

#[test]
fn thermo_and_spectrum_write_their_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = qshape(
        &["thermo", "--preset", "fig2_box_two_level", "--out-dir", "t"],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("t/thermo.csv")).unwrap();
    assert!(csv.starts_with("T_K,zeta,F_tilde,U_tilde,S_tilde,C_tilde\n"));
    assert_eq!(csv.lines().count(), 2);

    let out = qshape(
        &[
            "spectrum",
            "--preset",
            "fig2_box_two_level",
            "--k",
            "4",
            "--out-dir",
            "s",
        ],
        dir.path(),
    );
    assert_eq!(exit_code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("s/spectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for out_dir in ["a", "b"] {
        let out = qshape(
            &[
                "sweep",
                "--preset",
                "fig4_case2_two_level",
                "--steps",
                "6",
                "--out-dir",
                out_dir,
            ],
            dir.path(),
        );
        assert_eq!(exit_code(&out), 0);
    }
    let a = fs::read(dir.path().join("a/sweep.csv")).unwrap();
    let b = fs::read(dir.path().join("b/sweep.csv")).unwrap();
    assert_eq!(a, b);
    let a = fs::read(dir.path().join("a/summary.json")).unwrap();
    let b = fs::read(dir.path().join("b/summary.json")).unwrap();
    assert_eq!(a, b);
}
