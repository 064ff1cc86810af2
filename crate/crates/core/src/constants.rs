//! Physical constants and the dimensionless normalization used everywhere else.
//!
//! Internal unit system: eV for energy, nm for length, K for temperature.
//! All quantities of interest then live in roughly [1e-6, 1e2], which keeps
//! the Boltzmann exponentials far away from underflow at the temperatures
//! this crate targets.

use crate::error::{Error, Result};

/// ħ²/(2mₑ) in eV·nm², for the free electron mass (CODATA, frozen at build time).
pub const HBAR_SQ_OVER_2ME: f64 = 0.0380998;

/// Boltzmann constant in eV/K (CODATA, frozen at build time).
pub const BOLTZMANN: f64 = 8.617333e-5;

/// Default effective-mass ratio m*/mₑ of a GaAs conduction electron.
pub const ELECTRON_MASS_RATIO_DEFAULT: f64 = 0.067;

/// An energy divided by k_B·T. Produced by [`normalize_energy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessEnergy(f64);

impl DimensionlessEnergy {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// ħ²/(2m) in eV·nm² for a particle of mass `mass_ratio`·mₑ.
pub fn kinetic_coefficient(mass_ratio: f64) -> Result<f64> {
    if !(mass_ratio > 0.0) {
        return Err(Error::Domain(format!(
            "mass ratio must be positive, got {mass_ratio}"
        )));
    }
    Ok(HBAR_SQ_OVER_2ME / mass_ratio)
}

/// k_B·T in eV.
pub fn thermal_energy(temperature_k: f64) -> Result<f64> {
    if !(temperature_k > 0.0) {
        return Err(Error::Domain(format!(
            "temperature must be positive, got {temperature_k} K"
        )));
    }
    Ok(BOLTZMANN * temperature_k)
}

/// E/(k_B·T).
pub fn normalize_energy(energy_ev: f64, temperature_k: f64) -> Result<DimensionlessEnergy> {
    let kt = thermal_energy(temperature_k)?;
    let value = energy_ev / kt;
    if !value.is_finite() {
        return Err(Error::Domain(format!(
            "normalized energy is not finite: {energy_ev} eV at {temperature_k} K"
        )));
    }
    Ok(DimensionlessEnergy(value))
}
