//! Lowest-k eigenvalues of the 1D stationary Schrödinger operator
//! −(ħ²/2m)ψ'' + V(x)ψ on a hard-walled interval.
//!
//! Second-order central differences on a uniform grid produce a symmetric
//! tridiagonal operator whose low eigenvalues are extracted by Sturm
//! bisection ([`tridiagonal`]). A grid-doubling ladder
//! ([`convergence_refine`]) drives the requested levels to a relative
//! tolerance. The box and harmonic wells additionally have closed-form
//! spectra that serve as oracles (and as exact fast paths where the walls
//! provably do not matter), and the infinite-partition well is solved by
//! splitting the domain into two independent boxes.

mod tridiagonal;

pub use tridiagonal::TridiagonalOperator;

use std::f64::consts::PI;

use crate::constants::kinetic_coefficient;
use crate::error::{Error, Result};
use crate::potentials::{Geometry, PotentialSpec};

/// Uniform grid over [0, L] with Dirichlet endpoints excluded from the
/// unknowns: interior points x_i = (i+1)·Δx, Δx = L/(n_interior+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n_interior: usize,
    spacing_nm: f64,
}

impl Grid {
    pub const MIN_INTERIOR: usize = 16;

    pub fn new(domain_nm: f64, n_interior: usize) -> Result<Grid> {
        if !(domain_nm > 0.0) || !domain_nm.is_finite() {
            return Err(Error::Domain(format!(
                "domain length must be positive, got {domain_nm} nm"
            )));
        }
        if n_interior < Self::MIN_INTERIOR {
            return Err(Error::Domain(format!(
                "grid needs at least {} interior points, got {n_interior}",
                Self::MIN_INTERIOR
            )));
        }
        Ok(Grid {
            n_interior,
            spacing_nm: domain_nm / (n_interior as f64 + 1.0),
        })
    }

    pub fn n_interior(&self) -> usize {
        self.n_interior
    }

    pub fn spacing_nm(&self) -> f64 {
        self.spacing_nm
    }
}

/// How a spectrum was produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridInfo {
    /// Closed-form dispersion, no discretization.
    Analytic,
    /// Union of the closed-form spectra of the two sub-wells of an infinite
    /// partition.
    SplitAnalytic { left_nm: f64, right_nm: f64 },
    /// Finite differences on a uniform grid.
    FiniteDifference { n_interior: usize, spacing_nm: f64 },
    /// Solved from a caller-assembled operator; no grid metadata attached.
    BareOperator { dim: usize },
}

/// Sorted eigenvalues (eV) with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    levels: Vec<f64>,
    pub converged: bool,
    pub grid: GridInfo,
    pub spec_hash: u64,
}

impl Spectrum {
    fn new(mut levels: Vec<f64>, converged: bool, grid: GridInfo, spec_hash: u64) -> Spectrum {
        levels.sort_by(f64::total_cmp);
        Spectrum {
            levels,
            converged,
            grid,
            spec_hash,
        }
    }

    /// Wrap an externally supplied, ascending level list (eV) so the thermo
    /// layer can consume it.
    pub fn from_levels(levels: Vec<f64>) -> Result<Spectrum> {
        if levels.is_empty() {
            return Err(Error::Domain("spectrum must have at least one level".into()));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("levels must be finite".into()));
        }
        if levels.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Domain("levels must be sorted ascending".into()));
        }
        Ok(Spectrum {
            levels,
            converged: true,
            grid: GridInfo::Analytic,
            spec_hash: 0,
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Ground-state energy.
    pub fn ground(&self) -> f64 {
        self.levels[0]
    }

    /// Gap between the two lowest levels.
    pub fn first_gap(&self) -> Result<f64> {
        if self.levels.len() < 2 {
            return Err(Error::Domain("spectrum has fewer than 2 levels".into()));
        }
        Ok(self.levels[1] - self.levels[0])
    }

    /// CSV export: header `n,energy_eV`, one row per level, 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,energy_eV\n");
        for (i, e) in self.levels.iter().enumerate() {
            out.push_str(&format!("{},{:.16e}\n", i + 1, e));
        }
        out
    }
}

/// Convergence-ladder and dispatch controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// First grid of the refinement ladder (raised automatically when many
    /// levels are requested).
    pub start_n_interior: usize,
    /// Hard cap; reaching it without stabilizing flags the result unconverged.
    pub max_n_interior: usize,
    /// Relative stabilization tolerance across one grid doubling.
    pub rel_tol: f64,
    /// Let [`solve`] take the closed-form route for the box, and for the
    /// harmonic well when the bounding walls are provably irrelevant.
    pub allow_analytic: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            start_n_interior: 4096,
            max_n_interior: 1 << 20,
            rel_tol: 1e-7,
            allow_analytic: true,
        }
    }
}

/// Absolute tolerance below which two adjacent levels count as degenerate.
pub const DEGENERACY_TOL_EV: f64 = 1e-12;

/// Assemble the symmetric tridiagonal finite-difference operator for a
/// pointwise-evaluable potential: diagonal 2t + V(x_i), off-diagonal −t,
/// t = ħ²/(2m·Δx²).
pub fn discretize(spec: &PotentialSpec, grid: &Grid) -> Result<TridiagonalOperator> {
    spec.ensure_valid()?;
    if matches!(
        spec.geometry,
        Geometry::InfiniteWellInfinitePartition { .. }
    ) {
        return Err(Error::UnsupportedVariant(
            "infinite partition is solved by domain splitting, not discretization".into(),
        ));
    }
    let kc = kinetic_coefficient(spec.mass_ratio)?;
    let dx = grid.spacing_nm();
    let t = kc / (dx * dx);
    let n = grid.n_interior();
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        let x = (i as f64 + 1.0) * dx;
        diagonal.push(2.0 * t + spec.evaluate_unchecked(x, kc));
    }
    TridiagonalOperator::new(diagonal, vec![-t; n - 1])
}

/// Lowest `k` eigenvalues of an assembled operator, as a [`Spectrum`].
pub fn lowest_eigenvalues(op: &TridiagonalOperator, k: usize) -> Result<Spectrum> {
    let levels = op.lowest_eigenvalues(k)?;
    Ok(Spectrum::new(
        levels,
        true,
        GridInfo::BareOperator { dim: op.dim() },
        0,
    ))
}

/// Closed-form box spectrum E_n = (ħ²/2m)·π²n²/L², n = 1..k.
pub fn analytic_box_spectrum(length_nm: f64, mass_ratio: f64, k: usize) -> Result<Spectrum> {
    if !(length_nm > 0.0) || !length_nm.is_finite() {
        return Err(Error::Domain(format!(
            "box length must be positive, got {length_nm} nm"
        )));
    }
    if k < 1 {
        return Err(Error::Domain("need at least one level".into()));
    }
    let kc = kinetic_coefficient(mass_ratio)?;
    let scale = kc * PI * PI / (length_nm * length_nm);
    let levels = (1..=k).map(|n| scale * (n * n) as f64).collect();
    Ok(Spectrum::new(levels, true, GridInfo::Analytic, 0))
}

/// Closed-form harmonic spectrum E_n = 2(ħ²/2m)/L_osc²·(n+1/2), n = 0..k−1.
pub fn analytic_harmonic_spectrum(
    osc_length_nm: f64,
    mass_ratio: f64,
    k: usize,
) -> Result<Spectrum> {
    if !(osc_length_nm > 0.0) || !osc_length_nm.is_finite() {
        return Err(Error::Domain(format!(
            "oscillator length must be positive, got {osc_length_nm} nm"
        )));
    }
    if k < 1 {
        return Err(Error::Domain("need at least one level".into()));
    }
    let kc = kinetic_coefficient(mass_ratio)?;
    let quantum = 2.0 * kc / (osc_length_nm * osc_length_nm);
    let levels = (0..k).map(|n| quantum * (n as f64 + 0.5)).collect();
    Ok(Spectrum::new(levels, true, GridInfo::Analytic, 0))
}

/// Spectrum of the infinite-partition well: the merged, sorted union of the
/// closed-form spectra of the two independent sub-wells of lengths l and
/// L−l, truncated to `k` levels. Degeneracies (l = L/2) are preserved
/// exactly.
pub fn solve_split(spec: &PotentialSpec, k: usize) -> Result<Spectrum> {
    spec.ensure_valid()?;
    let (length, partition) = match spec.geometry {
        Geometry::InfiniteWellInfinitePartition {
            length_nm,
            partition_nm,
        } => (length_nm, partition_nm),
        _ => {
            return Err(Error::Domain(
                "domain splitting applies only to the infinite-partition well".into(),
            ))
        }
    };
    if k < 1 {
        return Err(Error::Domain("need at least one level".into()));
    }
    let left = analytic_box_spectrum(partition, spec.mass_ratio, k)?;
    let right = analytic_box_spectrum(length - partition, spec.mass_ratio, k)?;
    let mut merged = Vec::with_capacity(k);
    let (mut i, mut j) = (0usize, 0usize);
    while merged.len() < k {
        let a = left.levels()[i];
        let b = right.levels()[j];
        if a <= b {
            merged.push(a);
            i += 1;
        } else {
            merged.push(b);
            j += 1;
        }
    }
    Ok(Spectrum::new(
        merged,
        true,
        GridInfo::SplitAnalytic {
            left_nm: partition,
            right_nm: length - partition,
        },
        spec.spec_hash(),
    ))
}

/// Number of levels of the infinite-partition well strictly below `energy_ev`
/// (ties count as below), from the closed-form counting function
/// N(E) = ⌊l·√(E/kc)/π⌋ + ⌊(L−l)·√(E/kc)/π⌋.
pub fn split_level_count(
    length_nm: f64,
    partition_nm: f64,
    mass_ratio: f64,
    energy_ev: f64,
) -> Result<u64> {
    if !(partition_nm > 0.0 && partition_nm < length_nm) {
        return Err(Error::Domain(format!(
            "partition must lie strictly inside (0, L): l = {partition_nm}, L = {length_nm}"
        )));
    }
    if energy_ev <= 0.0 {
        return Ok(0);
    }
    let kc = kinetic_coefficient(mass_ratio)?;
    let wavenumber_over_pi = (energy_ev / kc).sqrt() / PI;
    // the 1e-9 nudge makes exact ties land deterministically on "below"
    let count = |len: f64| (len * wavenumber_over_pi + 1e-9).floor() as u64;
    Ok(count(partition_nm) + count(length_nm - partition_nm))
}

/// Solve on one explicit grid, without any refinement. Used by convergence
/// studies; most callers want [`convergence_refine`] or [`solve`].
pub fn solve_on_grid(spec: &PotentialSpec, k: usize, n_interior: usize) -> Result<Spectrum> {
    solve_on_grid_warm(spec, k, n_interior, None)
}

/// [`solve_on_grid`] seeded with nearby eigenvalue estimates, e.g. the
/// levels of an almost-identical potential along a derivative stencil.
pub fn solve_on_grid_warm(
    spec: &PotentialSpec,
    k: usize,
    n_interior: usize,
    warm: Option<&[f64]>,
) -> Result<Spectrum> {
    let grid = Grid::new(spec.domain_length_nm(), n_interior)?;
    let op = discretize(spec, &grid)?;
    let levels = op.lowest_eigenvalues_warm(k, warm)?;
    Ok(Spectrum::new(
        levels,
        true,
        GridInfo::FiniteDifference {
            n_interior,
            spacing_nm: grid.spacing_nm(),
        },
        spec.spec_hash(),
    ))
}

/// Grid-doubling refinement: solve, double `n_interior`, and stop when the
/// requested levels change by less than `rel_tol` relative, flagging the
/// result unconverged (never silently) if the grid cap is reached first.
pub fn convergence_refine(spec: &PotentialSpec, k: usize, rel_tol: f64) -> Result<Spectrum> {
    let settings = SolverSettings {
        rel_tol,
        ..SolverSettings::default()
    };
    convergence_refine_with(spec, k, &settings)
}

pub fn convergence_refine_with(
    spec: &PotentialSpec,
    k: usize,
    settings: &SolverSettings,
) -> Result<Spectrum> {
    spec.ensure_valid()?;
    if !(settings.rel_tol > 0.0) {
        return Err(Error::Domain(format!(
            "relative tolerance must be positive, got {}",
            settings.rel_tol
        )));
    }
    if k < 1 {
        return Err(Error::Domain("need at least one level".into()));
    }
    if matches!(
        spec.geometry,
        Geometry::InfiniteWellInfinitePartition { .. }
    ) {
        // exact by construction; nothing to refine
        return solve_split(spec, k);
    }
    // enough points that level k is resolved at all on the first grid
    let floor = (16 * k).max(Grid::MIN_INTERIOR).next_power_of_two();
    let mut n = settings
        .start_n_interior
        .max(floor)
        .min(settings.max_n_interior);
    let domain = spec.domain_length_nm();
    let mut prev: Option<Vec<f64>> = None;
    loop {
        let grid = Grid::new(domain, n)?;
        let op = discretize(spec, &grid)?;
        let levels = op.lowest_eigenvalues_warm(k, prev.as_deref())?;
        if let Some(p) = &prev {
            let change = levels
                .iter()
                .zip(p.iter())
                .map(|(new, old)| (new - old).abs() / new.abs().max(1e-30))
                .fold(0.0f64, f64::max);
            if change < settings.rel_tol {
                return Ok(Spectrum::new(
                    levels,
                    true,
                    GridInfo::FiniteDifference {
                        n_interior: n,
                        spacing_nm: grid.spacing_nm(),
                    },
                    spec.spec_hash(),
                ));
            }
        }
        if n >= settings.max_n_interior {
            return Ok(Spectrum::new(
                levels,
                false,
                GridInfo::FiniteDifference {
                    n_interior: n,
                    spacing_nm: grid.spacing_nm(),
                },
                spec.spec_hash(),
            ));
        }
        prev = Some(levels);
        n = (n * 2).min(settings.max_n_interior);
    }
}

/// True when the harmonic well's bounding walls sit far enough beyond the
/// classical turning point of level `k` that the closed-form spectrum is
/// exact to well below solver tolerances.
fn harmonic_walls_negligible(
    osc_length_nm: f64,
    domain_nm: f64,
    center_nm: f64,
    k: usize,
) -> bool {
    let turning = osc_length_nm * (2.0 * k as f64 + 1.0).sqrt();
    let margin = center_nm.min(domain_nm - center_nm);
    margin >= 1.5 * turning
}

/// Solve any potential variant, dispatching to the exact representation
/// where one exists: domain splitting for the infinite partition, closed
/// forms for the box and the wall-free harmonic well, finite differences
/// with grid refinement otherwise.
pub fn solve(spec: &PotentialSpec, k: usize, settings: &SolverSettings) -> Result<Spectrum> {
    spec.ensure_valid()?;
    match spec.geometry {
        Geometry::InfiniteWellInfinitePartition { .. } => solve_split(spec, k),
        Geometry::InfiniteWell { length_nm } if settings.allow_analytic => {
            let mut s = analytic_box_spectrum(length_nm, spec.mass_ratio, k)?;
            s.spec_hash = spec.spec_hash();
            Ok(s)
        }
        Geometry::Harmonic {
            osc_length_nm,
            domain_nm,
            center_nm,
        } if settings.allow_analytic
            && harmonic_walls_negligible(osc_length_nm, domain_nm, center_nm, k) =>
        {
            let mut s = analytic_harmonic_spectrum(osc_length_nm, spec.mass_ratio, k)?;
            s.spec_hash = spec.spec_hash();
            Ok(s)
        }
        _ => convergence_refine_with(spec, k, settings),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::ELECTRON_MASS_RATIO_DEFAULT;

    const MASS: f64 = ELECTRON_MASS_RATIO_DEFAULT;

    fn well_100() -> PotentialSpec {
        PotentialSpec::new(Geometry::InfiniteWell { length_nm: 100.0 }, MASS)
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn discretize_matches_hand_built_operator() {
        // n_interior = 3 over 100 nm: Δx = 25 nm, t = kc/625
        let spec = well_100();
        let grid = Grid::new(100.0, 16).unwrap();
        let op = discretize(&spec, &grid).unwrap();
        let kc = kinetic_coefficient(MASS).unwrap();
        let dx = 100.0 / 17.0;
        let t = kc / (dx * dx);
        assert_eq!(op.dim(), 16);
        for d in &op.diagonal {
            assert!((d - 2.0 * t).abs() < 1e-15 * t);
        }
        for e in &op.off_diagonal {
            assert_eq!(*e, -t);
        }
        // Δx = 25 nm spot-check of the kinetic scale itself
        assert!((kc / (25.0f64 * 25.0) - 0.568654 / 625.0).abs() < 1e-9);
    }

    #[test]
    fn bump_raises_only_the_nearest_diagonal_entries() {
        let flat = well_100();
        let bumped = PotentialSpec::new(
            Geometry::InfiniteWellGaussianBump {
                length_nm: 100.0,
                partition_nm: 60.0,
                height_ev: 0.057,
                width_nm: 1.0,
            },
            MASS,
        );
        let grid = Grid::new(100.0, 199).unwrap(); // Δx = 0.5 nm, x=60 on-grid
        let a = discretize(&flat, &grid).unwrap();
        let b = discretize(&bumped, &grid).unwrap();
        assert_eq!(a.off_diagonal, b.off_diagonal);
        let idx = 119; // x = 60 nm
        assert!((b.diagonal[idx] - a.diagonal[idx] - 0.057).abs() < 1e-12);
    }

    #[test]
    fn box_ground_state_matches_formula() {
        let spectrum = convergence_refine(&well_100(), 3, 1e-7).unwrap();
        assert!(spectrum.converged);
        let exact = analytic_box_spectrum(100.0, MASS, 3).unwrap();
        assert!((spectrum.ground() - 5.613e-4).abs() < 1e-6);
        assert!(rel_err(spectrum.ground(), exact.ground()) < 1e-6);
        let ratio = spectrum.levels()[1] / spectrum.levels()[0];
        assert!((ratio - 4.0).abs() < 1e-4, "E2/E1 = {ratio}");
    }

    #[test]
    fn harmonic_spacing_is_uniform() {
        let spec = PotentialSpec::new(
            Geometry::Harmonic {
                osc_length_nm: 10.0,
                domain_nm: 160.0,
                center_nm: 80.0,
            },
            MASS,
        );
        let s = convergence_refine(&spec, 4, 1e-7).unwrap();
        let g1 = s.levels()[1] - s.levels()[0];
        let g2 = s.levels()[2] - s.levels()[1];
        let g3 = s.levels()[3] - s.levels()[2];
        let quantum = 2.0 * kinetic_coefficient(MASS).unwrap() / 100.0;
        assert!(rel_err(g1, quantum) < 1e-5);
        assert!(rel_err(g2, g1) < 1e-5);
        assert!(rel_err(g3, g1) < 1e-5);
    }

    #[test]
    fn analytic_box_values() {
        let s = analytic_box_spectrum(100.0, MASS, 10).unwrap();
        assert!((s.ground() - 5.613e-4).abs() < 1e-6);
        assert!((s.levels()[9] - 5.613e-2).abs() < 1e-4);
        // 1/L² scaling
        let doubled = analytic_box_spectrum(200.0, MASS, 10).unwrap();
        for (a, b) in s.levels().iter().zip(doubled.levels()) {
            assert!(rel_err(a / 4.0, *b) < 1e-15);
        }
    }

    #[test]
    fn analytic_harmonic_values() {
        let s = analytic_harmonic_spectrum(10.0, MASS, 5).unwrap();
        assert!((s.ground() - 5.687e-3).abs() < 1e-6);
        let q = 2.0 * kinetic_coefficient(MASS).unwrap() / 100.0;
        for w in s.levels().windows(2) {
            assert!(rel_err(w[1] - w[0], q) < 1e-14);
        }
        // vanishing confinement
        let loose = analytic_harmonic_spectrum(1e9, MASS, 3).unwrap();
        assert!(loose.levels().iter().all(|&e| e < 1e-15));
    }

    #[test]
    fn split_center_partition_is_doubly_degenerate() {
        let spec = PotentialSpec::new(
            Geometry::InfiniteWellInfinitePartition {
                length_nm: 100.0,
                partition_nm: 50.0,
            },
            MASS,
        );
        let s = solve_split(&spec, 8).unwrap();
        for pair in s.levels().chunks(2) {
            assert!((pair[0] - pair[1]).abs() < DEGENERACY_TOL_EV);
        }
    }

    #[test]
    fn split_ground_state_is_wider_well_ground_state() {
        let spec = PotentialSpec::new(
            Geometry::InfiniteWellInfinitePartition {
                length_nm: 100.0,
                partition_nm: 60.0,
            },
            MASS,
        );
        let s = solve_split(&spec, 4).unwrap();
        let expected = analytic_box_spectrum(60.0, MASS, 1).unwrap().ground();
        assert_eq!(s.ground(), expected);
    }

    #[test]
    fn split_counting_function_matches_spectrum() {
        let spec = PotentialSpec::new(
            Geometry::InfiniteWellInfinitePartition {
                length_nm: 100.0,
                partition_nm: 70.0,
            },
            MASS,
        );
        let s = solve_split(&spec, 40).unwrap();
        let energy = 120.0 * analytic_box_spectrum(50.0, MASS, 1).unwrap().ground();
        let from_formula = split_level_count(100.0, 70.0, MASS, energy).unwrap();
        let from_levels = s
            .levels()
            .iter()
            .filter(|&&e| e < energy * (1.0 + 1e-9))
            .count() as u64;
        assert_eq!(from_formula, from_levels);
    }

    #[test]
    fn refine_rejects_bad_tolerance_and_flags_grid_cap() {
        assert!(convergence_refine(&well_100(), 4, 0.0).is_err());
        let strangled = SolverSettings {
            start_n_interior: 64,
            max_n_interior: 128,
            rel_tol: 1e-12,
            allow_analytic: false,
        };
        let s = convergence_refine_with(&well_100(), 4, &strangled).unwrap();
        assert!(!s.converged);
        assert!(matches!(
            s.grid,
            GridInfo::FiniteDifference { n_interior: 128, .. }
        ));
    }

    #[test]
    fn refinement_error_ratio_is_second_order() {
        // successive grid-doubling errors shrink by ~4
        let exact = analytic_box_spectrum(100.0, MASS, 1).unwrap().ground();
        let mut errors = Vec::new();
        for n in [64usize, 128, 256, 512] {
            let s = solve_on_grid(&well_100(), 1, n).unwrap();
            errors.push((s.ground() - exact).abs());
        }
        for w in errors.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.6..=4.4).contains(&ratio), "ratio = {ratio}");
        }
    }

    #[test]
    fn raising_the_bump_never_lowers_levels() {
        let mut prev: Option<Vec<f64>> = None;
        for &h in &[0.0, 0.0285, 0.057] {
            let spec = PotentialSpec::new(
                Geometry::InfiniteWellGaussianBump {
                    length_nm: 100.0,
                    partition_nm: 60.0,
                    height_ev: h,
                    width_nm: 1.0,
                },
                MASS,
            );
            let s = convergence_refine(&spec, 6, 1e-6).unwrap();
            if let Some(p) = &prev {
                for (lo, hi) in p.iter().zip(s.levels()) {
                    assert!(hi >= lo, "h = {h}");
                }
            }
            prev = Some(s.levels().to_vec());
        }
    }

    #[test]
    fn narrow_tall_bump_approaches_split_levels_from_below() {
        // the Dirichlet wall is the joint limit h → ∞, w → 0: a penetrable
        // point barrier keeps levels strictly below the split values, while
        // any finite width excludes territory and pushes them above
        let split = PotentialSpec::new(
            Geometry::InfiniteWellInfinitePartition {
                length_nm: 100.0,
                partition_nm: 60.0,
            },
            MASS,
        );
        let exact = solve_split(&split, 2).unwrap();
        let settings = SolverSettings {
            start_n_interior: 1 << 15,
            max_n_interior: 1 << 18,
            rel_tol: 1e-6,
            allow_analytic: false,
        };
        let mut prev_gap: Option<Vec<f64>> = None;
        for &h in &[25.0, 100.0] {
            let tall = PotentialSpec::new(
                Geometry::InfiniteWellGaussianBump {
                    length_nm: 100.0,
                    partition_nm: 60.0,
                    height_ev: h,
                    width_nm: 0.05,
                },
                MASS,
            );
            let numeric = convergence_refine_with(&tall, 2, &settings).unwrap();
            let gaps: Vec<f64> = numeric
                .levels()
                .iter()
                .zip(exact.levels())
                .map(|(n, e)| (e - n) / e)
                .collect();
            for (g, (n, e)) in gaps.iter().zip(numeric.levels().iter().zip(exact.levels())) {
                assert!(*g > 0.0, "barrier level {n} must stay below wall level {e}");
                assert!(*g < 0.01, "{n} vs {e}");
            }
            if let Some(p) = &prev_gap {
                for (tall_gap, short_gap) in gaps.iter().zip(p) {
                    assert!(tall_gap < short_gap, "taller barrier must close the gap");
                }
            }
            prev_gap = Some(gaps);
        }
    }

    #[test]
    fn mirror_symmetry_of_levels() {
        let spec = PotentialSpec::new(
            Geometry::InfiniteWellGaussianBump {
                length_nm: 100.0,
                partition_nm: 63.0,
                height_ev: 0.057,
                width_nm: 1.0,
            },
            MASS,
        );
        let a = convergence_refine(&spec, 4, 1e-7).unwrap();
        let b = convergence_refine(&spec.mirror(), 4, 1e-7).unwrap();
        for (x, y) in a.levels().iter().zip(b.levels()) {
            assert!(rel_err(*x, *y) < 1e-10);
        }
    }

    #[test]
    fn determinism_bit_identical_reruns() {
        let spec = PotentialSpec::new(
            Geometry::HarmonicGaussianBump {
                length_nm: 100.0,
                osc_length_nm: 15.0,
                partition_nm: 72.5,
                height_ev: 0.057,
                width_nm: 1.0,
            },
            MASS,
        );
        let a = convergence_refine(&spec, 8, 1e-6).unwrap();
        let b = convergence_refine(&spec, 8, 1e-6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn levels_exceed_potential_minimum() {
        let spec = PotentialSpec::new(
            Geometry::HarmonicGaussianBump {
                length_nm: 100.0,
                osc_length_nm: 15.0,
                partition_nm: 50.0,
                height_ev: 0.057,
                width_nm: 1.0,
            },
            MASS,
        );
        let s = convergence_refine(&spec, 6, 1e-6).unwrap();
        let min_v = (0..=1000)
            .map(|i| spec.evaluate(100.0 * i as f64 / 1000.0).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(s.ground() > min_v);
    }

    #[test]
    fn solve_dispatches_analytic_and_numeric_agree() {
        let spec = well_100();
        let fast = solve(&spec, 5, &SolverSettings::default()).unwrap();
        assert_eq!(fast.grid, GridInfo::Analytic);
        let slow = solve(
            &spec,
            5,
            &SolverSettings {
                allow_analytic: false,
                ..Default::default()
            },
        )
        .unwrap();
        for (a, b) in fast.levels().iter().zip(slow.levels()) {
            assert!(rel_err(*a, *b) < 1e-6);
        }
    }

    #[test]
    fn solve_keeps_walled_harmonic_numeric_when_walls_matter() {
        // turning point of level 6 is ~36 nm; walls 10 nm away are not negligible
        let spec = PotentialSpec::new(
            Geometry::Harmonic {
                osc_length_nm: 10.0,
                domain_nm: 92.0,
                center_nm: 46.0,
            },
            MASS,
        );
        let s = solve(&spec, 6, &SolverSettings::default()).unwrap();
        assert!(matches!(s.grid, GridInfo::FiniteDifference { .. }));
    }

    #[test]
    fn spectrum_csv_layout() {
        let s = analytic_box_spectrum(100.0, MASS, 2).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,energy_eV"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("1,5.612"), "{first}");
        // 17 significant digits: d.dddddddddddddddd, then the exponent
        assert!(first["1,".len()..].split('e').next().unwrap().len() == 18);
    }
}
