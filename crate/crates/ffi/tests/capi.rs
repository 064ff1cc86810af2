//! Exercises the C ABI exactly as a foreign caller would: through the
//! exported extern "C" functions, with raw pointers and status codes, and
//! once through an actual C compiler against the generated header.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::path::PathBuf;
use std::ptr;

use qshape_ffi::*;

fn solve_box(length_nm: f64, k: usize) -> (*mut QshapeSpectrum, Vec<f64>) {
    let mut potential: *mut QshapePotential = ptr::null_mut();
    let status = unsafe { qshape_potential_new_box(length_nm, 0.067, &mut potential) };
    assert_eq!(status, QshapeStatus::Ok);
    let mut spectrum: *mut QshapeSpectrum = ptr::null_mut();
    let status = unsafe { qshape_solve(potential, k, 0.0, &mut spectrum) };
    assert_eq!(status, QshapeStatus::Ok);
    unsafe { qshape_potential_free(potential) };
    let mut levels = vec![0.0f64; k];
    let mut written = 0usize;
    let status =
        unsafe { qshape_spectrum_levels(spectrum, levels.as_mut_ptr(), k, &mut written) };
    assert_eq!(status, QshapeStatus::Ok);
    assert_eq!(written, k);
    (spectrum, levels)
}

#[test]
fn box_levels_match_the_dispersion() {
    let (spectrum, levels) = solve_box(100.0, 5);
    assert!((levels[0] - 5.6124e-4).abs() < 1e-7, "E1 = {}", levels[0]);
    for (n, level) in levels.iter().enumerate() {
        let expected = levels[0] * ((n + 1) * (n + 1)) as f64;
        assert!((level - expected).abs() < 1e-12 * expected);
    }
    let mut len = 0usize;
    unsafe { assert_eq!(qshape_spectrum_len(spectrum, &mut len), QshapeStatus::Ok) };
    assert_eq!(len, 5);
    let mut converged = 0i32;
    unsafe {
        assert_eq!(
            qshape_spectrum_converged(spectrum, &mut converged),
            QshapeStatus::Ok
        )
    };
    assert_eq!(converged, 1);
    unsafe { qshape_spectrum_free(spectrum) };
}

#[test]
fn two_level_reference_values() {
    let mut thermo = QshapeThermo {
        zeta: 0.0,
        f_tilde: 0.0,
        u_tilde: 0.0,
        s_tilde: 0.0,
        c_tilde: 0.0,
        truncation_warning: 0,
    };
    let status = unsafe { qshape_two_level(0.5, 3.0, &mut thermo) };
    assert_eq!(status, QshapeStatus::Ok);
    assert!((thermo.zeta - 0.63673).abs() < 1e-5);
    assert!((thermo.c_tilde - 0.40659).abs() < 1e-5);
    assert!((thermo.f_tilde - (thermo.u_tilde - thermo.s_tilde)).abs() < 1e-12);
}

#[test]
fn n_level_and_spacing_through_handles() {
    let kt = 8.617333e-5 * 10.0;
    let levels = [0.5 * kt, 3.5 * kt];
    let mut spectrum: *mut QshapeSpectrum = ptr::null_mut();
    let status =
        unsafe { qshape_spectrum_from_levels(levels.as_ptr(), levels.len(), &mut spectrum) };
    assert_eq!(status, QshapeStatus::Ok);

    let mut thermo = QshapeThermo {
        zeta: 0.0,
        f_tilde: 0.0,
        u_tilde: 0.0,
        s_tilde: 0.0,
        c_tilde: 0.0,
        truncation_warning: 0,
    };
    unsafe { assert_eq!(qshape_n_level(spectrum, 10.0, &mut thermo), QshapeStatus::Ok) };
    assert!((thermo.zeta - 0.63673).abs() < 1e-5, "zeta = {}", thermo.zeta);

    let mut spacing = 0.0f64;
    unsafe {
        assert_eq!(
            qshape_mean_level_spacing(spectrum, 10.0, &mut spacing),
            QshapeStatus::Ok
        )
    };
    assert!((spacing - 3.0 * kt).abs() < 1e-18);

    let mut occupations = [0.0f64; 2];
    let mut written = 0usize;
    unsafe {
        assert_eq!(
            qshape_occupations(spectrum, 10.0, occupations.as_mut_ptr(), 2, &mut written),
            QshapeStatus::Ok
        )
    };
    assert_eq!(written, 2);
    assert!((occupations[0] + occupations[1] - 1.0).abs() < 1e-12);

    unsafe { qshape_spectrum_free(spectrum) };
}

#[test]
fn classify_codes_and_errors() {
    let mut class = QshapeClass::Boundary;
    unsafe {
        assert_eq!(
            qshape_classify(-1.5, -1.0, 0.5, 1e-12, &mut class),
            QshapeStatus::Ok
        )
    };
    assert_eq!(class, QshapeClass::Typical);
    unsafe {
        assert_eq!(
            qshape_classify(-0.2, -0.5, -0.3, 1e-12, &mut class),
            QshapeStatus::Ok
        )
    };
    assert_eq!(class, QshapeClass::EnergyDriven);
    // identity violated
    let status = unsafe { qshape_classify(-0.5, 1.0, 0.5, 1e-12, &mut class) };
    assert_eq!(status, QshapeStatus::Domain);
    let mut buffer = [0 as c_char; 256];
    let needed = unsafe { qshape_last_error(buffer.as_mut_ptr(), buffer.len()) };
    assert!(needed > 0);
    let message = unsafe { CStr::from_ptr(buffer.as_ptr()) }.to_str().unwrap();
    assert!(message.contains("dF = dU - dS"), "{message}");
}

#[test]
fn null_and_invalid_arguments_are_rejected() {
    let status = unsafe { qshape_potential_new_box(100.0, 0.067, ptr::null_mut()) };
    assert_eq!(status, QshapeStatus::InvalidArgument);
    let mut potential: *mut QshapePotential = ptr::null_mut();
    let status = unsafe { qshape_potential_new_box(-5.0, 0.067, &mut potential) };
    assert_eq!(status, QshapeStatus::Domain);
    let mut out = 0.0f64;
    let status = unsafe { qshape_potential_evaluate(ptr::null(), 1.0, &mut out) };
    assert_eq!(status, QshapeStatus::InvalidArgument);
    unsafe { qshape_potential_free(ptr::null_mut()) }; // must be a no-op
    unsafe { qshape_spectrum_free(ptr::null_mut()) };
}

#[test]
fn split_box_and_pressure_through_the_abi() {
    let mut potential: *mut QshapePotential = ptr::null_mut();
    let status = unsafe { qshape_potential_new_split_box(100.0, 50.0, 0.067, &mut potential) };
    assert_eq!(status, QshapeStatus::Ok);
    let mut spectrum: *mut QshapeSpectrum = ptr::null_mut();
    unsafe { assert_eq!(qshape_solve(potential, 2, 0.0, &mut spectrum), QshapeStatus::Ok) };
    let mut levels = [0.0f64; 2];
    let mut written = 0usize;
    unsafe {
        qshape_spectrum_levels(spectrum, levels.as_mut_ptr(), 2, &mut written);
    }
    assert!((levels[0] - levels[1]).abs() < 1e-12, "degenerate pair");
    // pointwise evaluation has no meaning for the split box
    let mut v = 0.0f64;
    let status = unsafe { qshape_potential_evaluate(potential, 25.0, &mut v) };
    assert_eq!(status, QshapeStatus::Unsupported);

    let mut pressure = 0.0f64;
    let status = unsafe {
        qshape_pressure(potential, 10.0, QshapeMode::TwoLevel, 0.0, &mut pressure)
    };
    assert_eq!(status, QshapeStatus::Ok);
    assert!(pressure > 0.0);
    unsafe {
        qshape_spectrum_free(spectrum);
        qshape_potential_free(potential);
    }
}

#[test]
fn generated_header_compiles_and_runs_from_c() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/qshape.h");
    assert!(header.exists(), "cbindgen header missing");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "qshape_solve",
        "qshape_two_level",
        "qshape_classify",
        "QSHAPE_STATUS_OK",
        "QSHAPE_CLASS_ENERGY_DRIVEN",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }

    // locate the staticlib next to this test binary
    let mut lib_dir = std::env::current_exe().unwrap();
    lib_dir.pop(); // test binary
    lib_dir.pop(); // deps/
    let staticlib = lib_dir.join("libqshape_ffi.a");
    assert!(staticlib.exists(), "staticlib missing at {staticlib:?}");

    let scratch = tempdir();
    let c_source = scratch.join("smoke.c");
    std::fs::write(
        &c_source,
        r#"
#include "qshape.h"
#include <math.h>
#include <stdio.h>

int main(void) {
    QshapePotential *box = NULL;
    if (qshape_potential_new_box(100.0, 0.067, &box) != QSHAPE_STATUS_OK) return 1;
    QshapeSpectrum *spectrum = NULL;
    if (qshape_solve(box, 3, 0.0, &spectrum) != QSHAPE_STATUS_OK) return 2;
    double levels[3];
    size_t written = 0;
    if (qshape_spectrum_levels(spectrum, levels, 3, &written) != QSHAPE_STATUS_OK) return 3;
    if (written != 3) return 4;
    if (fabs(levels[0] - 5.6124e-4) > 1e-7) return 5;
    QshapeThermo thermo;
    if (qshape_two_level(0.5, 3.0, &thermo) != QSHAPE_STATUS_OK) return 6;
    if (fabs(thermo.zeta - 0.63673) > 1e-5) return 7;
    QshapeClass class_code;
    if (qshape_classify(-0.2, -0.5, -0.3, 1e-12, &class_code) != QSHAPE_STATUS_OK) return 8;
    if (class_code != QSHAPE_CLASS_ENERGY_DRIVEN) return 9;
    qshape_spectrum_free(spectrum);
    qshape_potential_free(box);
    printf("ok %s\n", qshape_version());
    return 0;
}
"#,
    )
    .unwrap();
    let binary = scratch.join("smoke");
    let compile = std::process::Command::new("cc")
        .arg(&c_source)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = std::process::Command::new(&binary).output().unwrap();
    assert!(
        run.status.success(),
        "smoke test exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qshape-capi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
