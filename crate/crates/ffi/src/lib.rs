//! C ABI over the qshape core: opaque handles for potentials and spectra,
//! plain status codes, and by-value structs for thermodynamic results.
//!
//! Conventions:
//! - every function returns a [`QshapeStatus`]; results leave through out
//!   pointers, which are written only on `QSHAPE_STATUS_OK`;
//! - handles come from `qshape_*_new*` constructors and must be released
//!   with the matching `qshape_*_free` (freeing NULL is a no-op);
//! - a human-readable message for the most recent failure on the current
//!   thread is available via [`qshape_last_error`];
//! - all functions are panic-safe: a caught panic reports
//!   `QSHAPE_STATUS_INTERNAL` instead of unwinding across the boundary.

// pointer contracts are stated once above instead of a boilerplate
// `# Safety` section on all twenty functions
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use qshape::eigensolver::{solve, SolverSettings, Spectrum};
use qshape::potentials::{Geometry, PotentialSpec};
use qshape::spontaneity::{classify, SpontaneityClass, StateDelta};
use qshape::thermo::{
    mean_level_spacing, n_level, occupation_probabilities, pressure, two_level, ThermoMode,
    ThermoQuantities, TwoLevelInput,
};
use qshape::Error;

/// Status code of every C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QshapeStatus {
    Ok = 0,
    /// A NULL pointer or an out-of-range scalar argument.
    InvalidArgument = 1,
    /// Inputs violated a physical or numerical precondition.
    Domain = 2,
    /// The requested operation is undefined for this potential variant.
    Unsupported = 3,
    /// The eigenvalue iteration failed or did not converge.
    Solver = 4,
    /// A derivative stencil straddled a feature; refine the step.
    StepSize = 5,
    /// A panic was caught at the language boundary.
    Internal = 6,
}

/// Spontaneity classes, matching the core enumeration.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QshapeClass {
    Typical = 0,
    EnergyDriven = 1,
    EntropyDriven = 2,
    NonSpontaneous = 3,
    Boundary = 4,
}

/// Thermodynamic evaluation mode.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QshapeMode {
    TwoLevel = 0,
    NLevel = 1,
}

/// Dimensionless canonical state functions.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct QshapeThermo {
    pub zeta: f64,
    pub f_tilde: f64,
    pub u_tilde: f64,
    pub s_tilde: f64,
    pub c_tilde: f64,
    /// Nonzero when the supplied spectrum ended while its Boltzmann tail
    /// still carried weight.
    pub truncation_warning: i32,
}

/// Opaque confinement potential handle.
pub struct QshapePotential(PotentialSpec);

/// Opaque spectrum handle.
pub struct QshapeSpectrum(Spectrum);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn remember_error(message: &str) {
    let sanitized = CString::new(message.replace('\0', " "))
        .unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn status_of(error: &Error) -> QshapeStatus {
    match error {
        Error::Domain(_) | Error::Config(_) => QshapeStatus::Domain,
        Error::UnsupportedVariant(_) => QshapeStatus::Unsupported,
        Error::Solver(_) => QshapeStatus::Solver,
        Error::StepSize(_) => QshapeStatus::StepSize,
        Error::Io(_) => QshapeStatus::Internal,
    }
}

fn run<T>(body: impl FnOnce() -> Result<T, Error>, sink: impl FnOnce(T)) -> QshapeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            sink(value);
            QshapeStatus::Ok
        }
        Ok(Err(error)) => {
            remember_error(&error.to_string());
            status_of(&error)
        }
        Err(_) => {
            remember_error("panic caught at the C boundary");
            QshapeStatus::Internal
        }
    }
}

fn invalid(message: &str) -> QshapeStatus {
    remember_error(message);
    QshapeStatus::InvalidArgument
}

fn new_potential(out: *mut *mut QshapePotential, geometry: Geometry, mass_ratio: f64) -> QshapeStatus {
    if out.is_null() {
        return invalid("out pointer is NULL");
    }
    let spec = PotentialSpec::new(geometry, mass_ratio);
    match spec.ensure_valid() {
        Ok(()) => {
            unsafe { *out = Box::into_raw(Box::new(QshapePotential(spec))) };
            QshapeStatus::Ok
        }
        Err(error) => {
            remember_error(&error.to_string());
            status_of(&error)
        }
    }
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qshape_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the most recent error message of this thread into `buffer`
/// (truncated to `capacity` − 1 bytes, always NUL-terminated) and return
/// the full message length in bytes. A NULL or empty buffer only queries
/// the length.
#[no_mangle]
pub unsafe extern "C" fn qshape_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            unsafe {
                std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, n);
                *buffer.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Flat-bottomed box with hard walls at 0 and `length_nm`.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_new_box(
    length_nm: f64,
    mass_ratio: f64,
    out: *mut *mut QshapePotential,
) -> QshapeStatus {
    new_potential(out, Geometry::InfiniteWell { length_nm }, mass_ratio)
}

/// Harmonic well of oscillator length `osc_length_nm` centered at
/// `center_nm`, inside hard walls at 0 and `domain_nm`.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_new_harmonic(
    osc_length_nm: f64,
    domain_nm: f64,
    center_nm: f64,
    mass_ratio: f64,
    out: *mut *mut QshapePotential,
) -> QshapeStatus {
    new_potential(
        out,
        Geometry::Harmonic {
            osc_length_nm,
            domain_nm,
            center_nm,
        },
        mass_ratio,
    )
}

/// Box with an impenetrable partition at `partition_nm`.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_new_split_box(
    length_nm: f64,
    partition_nm: f64,
    mass_ratio: f64,
    out: *mut *mut QshapePotential,
) -> QshapeStatus {
    new_potential(
        out,
        Geometry::InfiniteWellInfinitePartition {
            length_nm,
            partition_nm,
        },
        mass_ratio,
    )
}

/// Box with a Gaussian bump of height `height_ev` and width `width_nm`
/// centered at `partition_nm`.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_new_box_bump(
    length_nm: f64,
    partition_nm: f64,
    height_ev: f64,
    width_nm: f64,
    mass_ratio: f64,
    out: *mut *mut QshapePotential,
) -> QshapeStatus {
    new_potential(
        out,
        Geometry::InfiniteWellGaussianBump {
            length_nm,
            partition_nm,
            height_ev,
            width_nm,
        },
        mass_ratio,
    )
}

/// Harmonic well plus Gaussian bump inside hard walls at 0 and `length_nm`.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_new_harmonic_bump(
    length_nm: f64,
    osc_length_nm: f64,
    partition_nm: f64,
    height_ev: f64,
    width_nm: f64,
    mass_ratio: f64,
    out: *mut *mut QshapePotential,
) -> QshapeStatus {
    new_potential(
        out,
        Geometry::HarmonicGaussianBump {
            length_nm,
            osc_length_nm,
            partition_nm,
            height_ev,
            width_nm,
        },
        mass_ratio,
    )
}

/// Release a potential handle. NULL is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_free(potential: *mut QshapePotential) {
    if !potential.is_null() {
        drop(unsafe { Box::from_raw(potential) });
    }
}

/// Potential value at `x_nm` in eV.
#[no_mangle]
pub unsafe extern "C" fn qshape_potential_evaluate(
    potential: *const QshapePotential,
    x_nm: f64,
    out_ev: *mut f64,
) -> QshapeStatus {
    if potential.is_null() || out_ev.is_null() {
        return invalid("potential/out pointer is NULL");
    }
    let spec = unsafe { &(*potential).0 };
    run(|| spec.evaluate(x_nm), |v| unsafe { *out_ev = v })
}

/// Lowest `k` levels of the potential. `rel_tol` <= 0 selects the default
/// refinement tolerance. Exactly representable variants (box, split box,
/// wall-free harmonic well) are solved in closed form.
#[no_mangle]
pub unsafe extern "C" fn qshape_solve(
    potential: *const QshapePotential,
    k: usize,
    rel_tol: f64,
    out: *mut *mut QshapeSpectrum,
) -> QshapeStatus {
    if potential.is_null() || out.is_null() {
        return invalid("potential/out pointer is NULL");
    }
    let spec = unsafe { &(*potential).0 };
    let mut settings = SolverSettings::default();
    if rel_tol > 0.0 {
        settings.rel_tol = rel_tol;
    }
    run(
        || solve(spec, k, &settings),
        |spectrum| unsafe { *out = Box::into_raw(Box::new(QshapeSpectrum(spectrum))) },
    )
}

/// Wrap an ascending list of levels (eV) in a spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn qshape_spectrum_from_levels(
    levels: *const f64,
    count: usize,
    out: *mut *mut QshapeSpectrum,
) -> QshapeStatus {
    if levels.is_null() || out.is_null() {
        return invalid("levels/out pointer is NULL");
    }
    let slice = unsafe { std::slice::from_raw_parts(levels, count) };
    run(
        || Spectrum::from_levels(slice.to_vec()),
        |spectrum| unsafe { *out = Box::into_raw(Box::new(QshapeSpectrum(spectrum))) },
    )
}

/// Release a spectrum handle. NULL is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn qshape_spectrum_free(spectrum: *mut QshapeSpectrum) {
    if !spectrum.is_null() {
        drop(unsafe { Box::from_raw(spectrum) });
    }
}

/// Number of levels held by the spectrum.
#[no_mangle]
pub unsafe extern "C" fn qshape_spectrum_len(
    spectrum: *const QshapeSpectrum,
    out: *mut usize,
) -> QshapeStatus {
    if spectrum.is_null() || out.is_null() {
        return invalid("spectrum/out pointer is NULL");
    }
    unsafe { *out = (*spectrum).0.len() };
    QshapeStatus::Ok
}

/// 1 if the grid refinement stabilized (or the result is exact), else 0.
#[no_mangle]
pub unsafe extern "C" fn qshape_spectrum_converged(
    spectrum: *const QshapeSpectrum,
    out: *mut i32,
) -> QshapeStatus {
    if spectrum.is_null() || out.is_null() {
        return invalid("spectrum/out pointer is NULL");
    }
    unsafe { *out = i32::from((*spectrum).0.converged) };
    QshapeStatus::Ok
}

/// Copy up to `capacity` levels (eV, ascending) into `buffer` and report
/// how many were written.
#[no_mangle]
pub unsafe extern "C" fn qshape_spectrum_levels(
    spectrum: *const QshapeSpectrum,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> QshapeStatus {
    if spectrum.is_null() || buffer.is_null() || written.is_null() {
        return invalid("spectrum/buffer/written pointer is NULL");
    }
    let levels = unsafe { (*spectrum).0.levels() };
    let n = levels.len().min(capacity);
    unsafe {
        std::ptr::copy_nonoverlapping(levels.as_ptr(), buffer, n);
        *written = n;
    }
    QshapeStatus::Ok
}

fn pack(q: &ThermoQuantities) -> QshapeThermo {
    QshapeThermo {
        zeta: q.zeta,
        f_tilde: q.f_tilde,
        u_tilde: q.u_tilde,
        s_tilde: q.s_tilde,
        c_tilde: q.c_tilde,
        truncation_warning: i32::from(q.truncation_warning),
    }
}

/// Closed-form two-level state functions for a dimensionless ground-state
/// energy and gap (both per k_B·T).
#[no_mangle]
pub unsafe extern "C" fn qshape_two_level(
    eg_tilde: f64,
    gap_tilde: f64,
    out: *mut QshapeThermo,
) -> QshapeStatus {
    if out.is_null() {
        return invalid("out pointer is NULL");
    }
    run(
        || {
            two_level(&TwoLevelInput {
                eg_tilde,
                gap_tilde,
            })
        },
        |q| unsafe { *out = pack(&q) },
    )
}

/// Exact Boltzmann sums over the spectrum at `temperature_k`.
#[no_mangle]
pub unsafe extern "C" fn qshape_n_level(
    spectrum: *const QshapeSpectrum,
    temperature_k: f64,
    out: *mut QshapeThermo,
) -> QshapeStatus {
    if spectrum.is_null() || out.is_null() {
        return invalid("spectrum/out pointer is NULL");
    }
    let s = unsafe { &(*spectrum).0 };
    run(|| n_level(s, temperature_k), |q| unsafe { *out = pack(&q) })
}

/// Occupation-weighted mean of consecutive level gaps (eV).
#[no_mangle]
pub unsafe extern "C" fn qshape_mean_level_spacing(
    spectrum: *const QshapeSpectrum,
    temperature_k: f64,
    out_ev: *mut f64,
) -> QshapeStatus {
    if spectrum.is_null() || out_ev.is_null() {
        return invalid("spectrum/out pointer is NULL");
    }
    let s = unsafe { &(*spectrum).0 };
    run(
        || mean_level_spacing(s, temperature_k),
        |v| unsafe { *out_ev = v },
    )
}

/// Boltzmann occupation probabilities; up to `capacity` entries are copied
/// into `buffer`.
#[no_mangle]
pub unsafe extern "C" fn qshape_occupations(
    spectrum: *const QshapeSpectrum,
    temperature_k: f64,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> QshapeStatus {
    if spectrum.is_null() || buffer.is_null() || written.is_null() {
        return invalid("spectrum/buffer/written pointer is NULL");
    }
    let s = unsafe { &(*spectrum).0 };
    run(
        || occupation_probabilities(s, temperature_k),
        |set| {
            let p = set.probabilities();
            let n = p.len().min(capacity);
            unsafe {
                std::ptr::copy_nonoverlapping(p.as_ptr(), buffer, n);
                *written = n;
            }
        },
    )
}

/// Pressure −∂F̃/∂L per k_B·T per nm. `delta_nm` <= 0 selects the default
/// step; `mode` picks the two-level or N-level free energy.
#[no_mangle]
pub unsafe extern "C" fn qshape_pressure(
    potential: *const QshapePotential,
    temperature_k: f64,
    mode: QshapeMode,
    delta_nm: f64,
    out: *mut f64,
) -> QshapeStatus {
    if potential.is_null() || out.is_null() {
        return invalid("potential/out pointer is NULL");
    }
    let spec = unsafe { &(*potential).0 };
    let mode = match mode {
        QshapeMode::TwoLevel => ThermoMode::TwoLevel,
        QshapeMode::NLevel => ThermoMode::NLevel,
    };
    let delta = (delta_nm > 0.0).then_some(delta_nm);
    run(
        || pressure(spec, temperature_k, mode, &SolverSettings::default(), delta),
        |v| unsafe { *out = v },
    )
}

/// Classify an isothermal transition from its dimensionless changes
/// (ΔF̃, ΔŨ, ΔS̃), which must satisfy ΔF̃ = ΔŨ − ΔS̃.
#[no_mangle]
pub unsafe extern "C" fn qshape_classify(
    d_f: f64,
    d_u: f64,
    d_s: f64,
    epsilon: f64,
    out: *mut QshapeClass,
) -> QshapeStatus {
    if out.is_null() {
        return invalid("out pointer is NULL");
    }
    run(
        || classify(&StateDelta { d_f, d_u, d_s }, epsilon),
        |class| {
            let code = match class {
                SpontaneityClass::Typical => QshapeClass::Typical,
                SpontaneityClass::EnergyDriven => QshapeClass::EnergyDriven,
                SpontaneityClass::EntropyDriven => QshapeClass::EntropyDriven,
                SpontaneityClass::NonSpontaneous => QshapeClass::NonSpontaneous,
                SpontaneityClass::Boundary => QshapeClass::Boundary,
            };
            unsafe { *out = code };
        },
    )
}
