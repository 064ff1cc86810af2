//! Canonical-ensemble state functions at fixed temperature.
//!
//! Everything is dimensionless: energies per k_B·T, entropy and heat
//! capacity per k_B. The two-level system has closed forms in the
//! ground-state energy Ẽ_g and gap ΔẼ; N-level systems are exact Boltzmann
//! sums over a [`Spectrum`]. Sums are always taken with the ground state
//! shifted out of the exponent so nothing underflows at low temperatures,
//! and the reported partition function restores the true exponent.

use serde::{Deserialize, Serialize};

use crate::constants::thermal_energy;
use crate::eigensolver::{solve, solve_on_grid_warm, GridInfo, SolverSettings, Spectrum};
use crate::error::{Error, Result};
use crate::potentials::{Geometry, PotentialSpec};

/// Boltzmann weight below which further levels are ignored by the N-level
/// truncation rule.
pub const TAIL_WEIGHT_CUTOFF: f64 = 1e-14;

/// Relative tail mass above which an N-level result is flagged as truncated.
pub const TAIL_WARNING_FRACTION: f64 = 1e-10;

/// Cap on the number of levels an adaptive N-level solve will request.
pub const MAX_LEVELS: usize = 4096;

/// Two-level vs full-spectrum evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThermoMode {
    TwoLevel,
    NLevel,
}

/// Dimensionless two-level system: ground-state energy and gap per k_B·T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelInput {
    pub eg_tilde: f64,
    pub gap_tilde: f64,
}

/// Dimensionless state functions at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoQuantities {
    pub zeta: f64,
    pub f_tilde: f64,
    pub u_tilde: f64,
    pub s_tilde: f64,
    pub c_tilde: f64,
    /// Temperature the dimensionless values refer to, when one is attached.
    pub temperature_k: Option<f64>,
    /// Set when the spectrum ended while its Boltzmann tail still carried
    /// more than [`TAIL_WARNING_FRACTION`] of the partition function.
    pub truncation_warning: bool,
}

impl ThermoQuantities {
    pub fn at_temperature(mut self, temperature_k: f64) -> Self {
        self.temperature_k = Some(temperature_k);
        self
    }

    /// CSV row `T_K,zeta,F_tilde,U_tilde,S_tilde,C_tilde`, 17 significant
    /// digits.
    pub fn to_csv_row(&self) -> Result<String> {
        let t = self.temperature_k.ok_or_else(|| {
            Error::Domain("thermo row has no temperature attached".into())
        })?;
        Ok(format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            t, self.zeta, self.f_tilde, self.u_tilde, self.s_tilde, self.c_tilde
        ))
    }
}

/// Thermal occupation probabilities, ordered like the levels they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationSet {
    probabilities: Vec<f64>,
}

impl OccupationSet {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }
}

/// Closed-form two-level state functions.
///
/// ζ = f(Ẽ_g) + f(Ẽ_g+ΔẼ) with f(x) = e⁻ˣ; F̃ = Ẽ_g − ln[1+f(ΔẼ)];
/// Ũ = Ẽ_g + ΔẼ/(1+f(−ΔẼ)); S̃ = ΔẼ/(1+f(−ΔẼ)) + ln[1+f(ΔẼ)];
/// C̃ = [ΔẼ/(f(−ΔẼ/2)+f(ΔẼ/2))]².
pub fn two_level(input: &TwoLevelInput) -> Result<ThermoQuantities> {
    let eg = input.eg_tilde;
    let gap = input.gap_tilde;
    if !eg.is_finite() || !gap.is_finite() {
        return Err(Error::Domain(format!(
            "two-level inputs must be finite: Eg = {eg}, gap = {gap}"
        )));
    }
    if gap < 0.0 {
        return Err(Error::Domain(format!("gap must be non-negative, got {gap}")));
    }
    let zeta = (-eg).exp() + (-(eg + gap)).exp();
    let fluctuation = (-gap).exp().ln_1p(); // ln[1 + e^(−ΔẼ)]
    let excitation = gap / (1.0 + gap.exp()); // ΔẼ/(1 + e^(ΔẼ))
    let f_tilde = eg - fluctuation;
    let u_tilde = eg + excitation;
    let s_tilde = excitation + fluctuation;
    let half = 0.5 * gap;
    let denom = half.exp() + (-half).exp();
    let c_tilde = (gap / denom).powi(2);
    Ok(ThermoQuantities {
        zeta,
        f_tilde,
        u_tilde,
        s_tilde,
        c_tilde,
        temperature_k: None,
        truncation_warning: false,
    })
}

/// Two-level evaluation of the two lowest levels of a spectrum at `t_k`.
pub fn two_level_from_spectrum(spectrum: &Spectrum, t_k: f64) -> Result<ThermoQuantities> {
    if spectrum.len() < 2 {
        return Err(Error::Domain(
            "two-level evaluation needs at least 2 levels".into(),
        ));
    }
    let kt = thermal_energy(t_k)?;
    let input = TwoLevelInput {
        eg_tilde: spectrum.ground() / kt,
        gap_tilde: spectrum.first_gap()? / kt,
    };
    Ok(two_level(&input)?.at_temperature(t_k))
}

fn shifted_weights(spectrum: &Spectrum, kt: f64) -> Vec<f64> {
    let e1 = spectrum.ground();
    spectrum
        .levels()
        .iter()
        .map(|e| (-(e - e1) / kt).exp())
        .collect()
}

/// Boltzmann occupation probabilities p_n over all levels of the spectrum,
/// computed with the ground state shifted out of the exponent.
pub fn occupation_probabilities(spectrum: &Spectrum, t_k: f64) -> Result<OccupationSet> {
    if spectrum.is_empty() {
        return Err(Error::Domain("empty spectrum".into()));
    }
    let kt = thermal_energy(t_k)?;
    let weights = shifted_weights(spectrum, kt);
    let total: f64 = weights.iter().sum();
    Ok(OccupationSet {
        probabilities: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// Exact Boltzmann sums over the spectrum.
///
/// Levels enter the sums until their shifted weight drops below
/// [`TAIL_WEIGHT_CUTOFF`] (at least two when available). ζ is reported with
/// the true exponent; F̃, Ũ, S̃, C̃ are assembled from shifted sums, so
/// F̃ = Ũ − S̃ holds exactly and S̃, C̃ are non-negative by construction.
pub fn n_level(spectrum: &Spectrum, t_k: f64) -> Result<ThermoQuantities> {
    if spectrum.is_empty() {
        return Err(Error::Domain("empty spectrum".into()));
    }
    let kt = thermal_energy(t_k)?;
    let e1 = spectrum.ground();
    let mut xs = Vec::new(); // shifted dimensionless energies of included levels
    let mut truncated_by_rule = false;
    for (n, e) in spectrum.levels().iter().enumerate() {
        let x = (e - e1) / kt;
        if n >= 2 && (-x).exp() < TAIL_WEIGHT_CUTOFF {
            truncated_by_rule = true;
            break;
        }
        xs.push(x);
    }
    let weights: Vec<f64> = xs.iter().map(|x| (-x).exp()).collect();
    let zeta_shifted: f64 = weights.iter().sum();
    let u_shifted: f64 = xs
        .iter()
        .zip(&weights)
        .map(|(x, w)| x * w)
        .sum::<f64>()
        / zeta_shifted;
    let second_moment: f64 = xs
        .iter()
        .zip(&weights)
        .map(|(x, w)| x * x * w)
        .sum::<f64>()
        / zeta_shifted;
    let eg_tilde = e1 / kt;
    let s_tilde = u_shifted + zeta_shifted.ln();
    let u_tilde = eg_tilde + u_shifted;
    let f_tilde = u_tilde - s_tilde;
    let c_tilde = (second_moment - u_shifted * u_shifted).max(0.0);
    let zeta = (-eg_tilde).exp() * zeta_shifted;
    let truncation_warning = if truncated_by_rule {
        false
    } else {
        // the spectrum ran out first; flag if the tail could still matter
        let last = *weights.last().expect("nonempty");
        spectrum.len() > 1 && last > TAIL_WARNING_FRACTION * zeta_shifted
    };
    Ok(ThermoQuantities {
        zeta,
        f_tilde,
        u_tilde,
        s_tilde,
        c_tilde,
        temperature_k: Some(t_k),
        truncation_warning,
    })
}

/// Evaluate in the requested mode.
pub fn evaluate_mode(
    spectrum: &Spectrum,
    t_k: f64,
    mode: ThermoMode,
) -> Result<ThermoQuantities> {
    match mode {
        ThermoMode::TwoLevel => two_level_from_spectrum(spectrum, t_k),
        ThermoMode::NLevel => n_level(spectrum, t_k),
    }
}

/// Thermally averaged level spacing: consecutive gaps weighted by the
/// occupation of the lower level of each gap,
/// ⟨ΔE⟩_T = Σ_{n<N} p_n (E_{n+1}−E_n) / Σ_{n<N} p_n.
///
/// Reduces to E₂−E₁ for two levels and to the uniform gap for an
/// equally-spaced spectrum at every temperature.
pub fn mean_level_spacing(spectrum: &Spectrum, t_k: f64) -> Result<f64> {
    if spectrum.len() < 2 {
        return Err(Error::Domain(
            "mean level spacing needs at least 2 levels".into(),
        ));
    }
    let kt = thermal_energy(t_k)?;
    let weights = shifted_weights(spectrum, kt);
    let levels = spectrum.levels();
    let mut num = 0.0;
    let mut den = 0.0;
    for n in 0..levels.len() - 1 {
        num += weights[n] * (levels[n + 1] - levels[n]);
        den += weights[n];
    }
    Ok(num / den)
}

/// Estimate how many levels the tail rule will need at temperature `t_k`.
fn estimate_level_count(spec: &PotentialSpec, kt: f64) -> usize {
    let kc = crate::constants::kinetic_coefficient(spec.mass_ratio).unwrap_or(f64::NAN);
    let reach = -TAIL_WEIGHT_CUTOFF.ln() * kt; // energy window above the ground state
    let estimate = match spec.geometry {
        Geometry::Harmonic { osc_length_nm, .. } => {
            let gap = 2.0 * kc / (osc_length_nm * osc_length_nm);
            reach / gap + 2.0
        }
        _ => {
            let length = spec.domain_length_nm();
            let e1 = kc * std::f64::consts::PI.powi(2) / (length * length);
            let vbar = match spec.geometry {
                Geometry::InfiniteWellInfinitePartition { .. } => 0.0,
                _ => {
                    let samples = 33;
                    (1..samples)
                        .map(|i| {
                            spec.evaluate(length * i as f64 / samples as f64)
                                .unwrap_or(0.0)
                        })
                        .sum::<f64>()
                        / (samples - 1) as f64
                }
            };
            length / std::f64::consts::PI * ((e1 + vbar + reach) / kc).sqrt() + 2.0
        }
    };
    if estimate.is_finite() {
        (estimate as usize).clamp(2, MAX_LEVELS)
    } else {
        2
    }
}

/// Solve a potential with enough levels for the requested mode: exactly two
/// in two-level mode, and enough to satisfy the Boltzmann tail rule in
/// N-level mode (level count doubles until the tail is negligible or
/// [`MAX_LEVELS`] is hit; a hit cap surfaces later as a truncation warning).
pub fn solve_for_temperature(
    spec: &PotentialSpec,
    t_k: f64,
    mode: ThermoMode,
    settings: &SolverSettings,
) -> Result<Spectrum> {
    let kt = thermal_energy(t_k)?;
    match mode {
        ThermoMode::TwoLevel => solve(spec, 2, settings),
        ThermoMode::NLevel => {
            let mut k = estimate_level_count(spec, kt);
            loop {
                let spectrum = solve(spec, k, settings)?;
                let spread = spectrum.levels()[spectrum.len() - 1] - spectrum.ground();
                if (-spread / kt).exp() < TAIL_WEIGHT_CUTOFF || k >= MAX_LEVELS {
                    return Ok(spectrum);
                }
                k = (k * 2).min(MAX_LEVELS);
            }
        }
    }
}

/// Pressure per k_B·T per nm: the central difference −[F̃(L+δ) − F̃(L−δ)]/(2δ)
/// of the dimensionless free energy with respect to the size parameter,
/// holding the shape fixed (partition at constant l/L, bump width absolute;
/// see [`PotentialSpec::with_size`]).
///
/// Finite-difference solves along the stencil are pinned to the converged
/// center grid so the discretization error differences out. A stencil that
/// straddles a free-energy feature which disappears at δ/2 is rejected with
/// a step-size error; a feature that persists at δ/2 is a genuine extremum
/// and the (≈0) derivative is returned.
pub fn pressure(
    spec: &PotentialSpec,
    t_k: f64,
    mode: ThermoMode,
    settings: &SolverSettings,
    delta_nm: Option<f64>,
) -> Result<f64> {
    let center = solve_for_temperature(spec, t_k, mode, settings)?;
    pressure_with_center(spec, t_k, mode, settings, delta_nm, &center)
}

/// [`pressure`] reusing an already-solved spectrum of `spec` as the stencil
/// center.
pub fn pressure_with_center(
    spec: &PotentialSpec,
    t_k: f64,
    mode: ThermoMode,
    settings: &SolverSettings,
    delta_nm: Option<f64>,
    center: &Spectrum,
) -> Result<f64> {
    spec.ensure_valid()?;
    thermal_energy(t_k)?;
    let size = spec.size_nm();
    let delta = delta_nm.unwrap_or(size * 1e-4);
    if !(delta > 0.0) || delta >= 0.5 * size {
        return Err(Error::Domain(format!(
            "pressure step must satisfy 0 < delta << L: delta = {delta} nm, L = {size} nm"
        )));
    }
    let k = center.len();
    let pinned = match center.grid {
        GridInfo::FiniteDifference { n_interior, .. } => Some(n_interior),
        _ => None,
    };
    let f_of = |s_nm: f64| -> Result<f64> {
        let scaled = spec.with_size(s_nm);
        let spectrum = match pinned {
            Some(n) => solve_on_grid_warm(&scaled, k, n, Some(center.levels()))?,
            None => solve(&scaled, k, settings)?,
        };
        Ok(evaluate_mode(&spectrum, t_k, mode)?.f_tilde)
    };
    let f_center = evaluate_mode(center, t_k, mode)?.f_tilde;
    let f_minus = f_of(size - delta)?;
    let f_plus = f_of(size + delta)?;
    let monotone = |a: f64, b: f64, c: f64| (b - a) * (c - b) >= 0.0;
    if !monotone(f_minus, f_center, f_plus) {
        let refined_minus = f_of(size - 0.5 * delta)?;
        let refined_plus = f_of(size + 0.5 * delta)?;
        if monotone(refined_minus, f_center, refined_plus) {
            return Err(Error::StepSize(format!(
                "delta = {delta} nm straddles a free-energy feature near size {size} nm"
            )));
        }
    }
    Ok(-(f_plus - f_minus) / (2.0 * delta))
}
