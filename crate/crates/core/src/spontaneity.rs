//! Spontaneity classification of isothermal transitions.
//!
//! A transition from a reference state is described by the dimensionless
//! changes (ΔF̃, ΔŨ, ΔS̃). The sign of ΔF̃ decides whether the forward
//! process is spontaneous; the signs of ΔŨ and ΔS̃ decide what drives it:
//! both helping is typical, falling entropy makes it energy-driven, rising
//! internal energy makes it entropy-driven. Maps over the
//! (Ẽ_g, ΔẼ) plane of a two-level system and classified trajectories of
//! N-level sweeps are built from the same primitive.

use crate::error::{Error, Result};
use crate::thermo::{two_level, ThermoQuantities, TwoLevelInput};

/// Largest allowed residual of the Helmholtz identity ΔF̃ = ΔŨ − ΔS̃.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Default dead-band below which a change counts as zero.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// Changes of the dimensionless state functions between two states at the
/// same temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDelta {
    pub d_f: f64,
    pub d_u: f64,
    pub d_s: f64,
}

impl StateDelta {
    pub fn new(d_f: f64, d_u: f64, d_s: f64) -> Result<StateDelta> {
        let delta = StateDelta { d_f, d_u, d_s };
        delta.check_identity()?;
        Ok(delta)
    }

    /// Change from `reference` to `state`.
    pub fn between(reference: &ThermoQuantities, state: &ThermoQuantities) -> StateDelta {
        StateDelta {
            d_f: state.f_tilde - reference.f_tilde,
            d_u: state.u_tilde - reference.u_tilde,
            d_s: state.s_tilde - reference.s_tilde,
        }
    }

    pub fn reversed(&self) -> StateDelta {
        StateDelta {
            d_f: -self.d_f,
            d_u: -self.d_u,
            d_s: -self.d_s,
        }
    }

    pub fn identity_residual(&self) -> f64 {
        (self.d_f - (self.d_u - self.d_s)).abs()
    }

    fn check_identity(&self) -> Result<()> {
        if !(self.d_f.is_finite() && self.d_u.is_finite() && self.d_s.is_finite()) {
            return Err(Error::Domain("state delta must be finite".into()));
        }
        let scale = self.d_f.abs().max(self.d_u.abs()).max(self.d_s.abs()).max(1.0);
        if self.identity_residual() > IDENTITY_TOL * scale {
            return Err(Error::Domain(format!(
                "delta violates dF = dU - dS: dF = {}, dU = {}, dS = {}",
                self.d_f, self.d_u, self.d_s
            )));
        }
        Ok(())
    }
}

/// What a transition does, relative to its reference state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpontaneityClass {
    /// ΔF̃ < 0 with ΔŨ < 0 and ΔS̃ > 0: both state functions help.
    Typical,
    /// ΔF̃ < 0 despite ΔS̃ < 0: the energy drop pays for the entropy loss.
    EnergyDriven,
    /// ΔF̃ < 0 despite ΔŨ > 0: the entropy gain pays for the energy cost.
    EntropyDriven,
    /// ΔF̃ > 0: the forward process does not happen on its own.
    NonSpontaneous,
    /// Some change is within the dead-band; the point sits on a region border.
    Boundary,
}

impl SpontaneityClass {
    pub fn label(&self) -> &'static str {
        match self {
            SpontaneityClass::Typical => "typical",
            SpontaneityClass::EnergyDriven => "energy",
            SpontaneityClass::EntropyDriven => "entropy",
            SpontaneityClass::NonSpontaneous => "nonspont",
            SpontaneityClass::Boundary => "boundary",
        }
    }
}

/// Classify the forward transition described by `delta`.
///
/// The sign pattern (ΔF̃ < 0, ΔŨ > 0, ΔS̃ < 0) cannot satisfy the Helmholtz
/// identity and is rejected: it only arises from inconsistent inputs.
pub fn classify(delta: &StateDelta, epsilon: f64) -> Result<SpontaneityClass> {
    if !(epsilon >= 0.0) {
        return Err(Error::Domain(format!(
            "epsilon must be non-negative, got {epsilon}"
        )));
    }
    delta.check_identity()?;
    if delta.d_f >= epsilon {
        return Ok(SpontaneityClass::NonSpontaneous);
    }
    if delta.d_f.abs() < epsilon || delta.d_u.abs() < epsilon || delta.d_s.abs() < epsilon {
        return Ok(SpontaneityClass::Boundary);
    }
    // here dF < -eps and dU, dS are decisively signed
    match (delta.d_u > 0.0, delta.d_s > 0.0) {
        (false, false) => Ok(SpontaneityClass::EnergyDriven),
        (true, true) => Ok(SpontaneityClass::EntropyDriven),
        (false, true) => Ok(SpontaneityClass::Typical),
        (true, false) => Err(Error::Domain(format!(
            "impossible sign pattern (dF<0, dU>0, dS<0): dF = {}, dU = {}, dS = {}",
            delta.d_f, delta.d_u, delta.d_s
        ))),
    }
}

/// Classify the transition in its spontaneous direction: forward when
/// ΔF̃ < 0, reversed when ΔF̃ > 0. This is the class that colors a region of
/// the map, where states on both sides of the reference along a typical
/// process belong to the same (typical) region.
pub fn classify_spontaneous_direction(
    delta: &StateDelta,
    epsilon: f64,
) -> Result<SpontaneityClass> {
    if delta.d_f.abs() < epsilon {
        // keep the dead-band semantics of `classify`
        return classify(delta, epsilon);
    }
    if delta.d_f < 0.0 {
        classify(delta, epsilon)
    } else {
        classify(&delta.reversed(), epsilon)
    }
}

/// One cell of a spontaneity map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapCell {
    pub eg_tilde: f64,
    pub gap_tilde: f64,
    pub delta: StateDelta,
    pub class: SpontaneityClass,
}

/// Classified grid over the (Ẽ_g, ΔẼ) plane of a two-level system, relative
/// to a fixed reference state. Cells are stored row-major: the Ẽ_g axis
/// outermost, the ΔẼ axis innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct SpontaneityMap {
    pub reference: TwoLevelInput,
    pub eg_axis: Vec<f64>,
    pub gap_axis: Vec<f64>,
    pub cells: Vec<MapCell>,
}

/// Default reference state Ẽ_g = 1/2, ΔẼ = 3.
pub const DEFAULT_REFERENCE: TwoLevelInput = TwoLevelInput {
    eg_tilde: 0.5,
    gap_tilde: 3.0,
};

/// Default map window. Chosen so the reference state falls exactly on the
/// center grid node of the default 241×241 resolution.
pub const DEFAULT_EG_RANGE: (f64, f64) = (0.05, 0.95);
pub const DEFAULT_GAP_RANGE: (f64, f64) = (0.5, 5.5);
pub const DEFAULT_MAP_RESOLUTION: usize = 241;

fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    let span = end - start;
    (0..n)
        .map(|i| {
            if i + 1 == n {
                end
            } else {
                start + span * (i as f64 / (n as f64 - 1.0))
            }
        })
        .collect()
}

/// Evaluate the two-level closed forms over a grid and classify every cell
/// against the reference. Cell order is independent of traversal order by
/// construction.
pub fn build_map(
    reference: TwoLevelInput,
    eg_range: (f64, f64),
    gap_range: (f64, f64),
    resolution: usize,
) -> Result<SpontaneityMap> {
    if !(eg_range.1 > eg_range.0) || !(gap_range.1 > gap_range.0) {
        return Err(Error::Domain(format!(
            "map ranges must have positive length: Eg {eg_range:?}, gap {gap_range:?}"
        )));
    }
    if resolution < 2 {
        return Err(Error::Domain(format!(
            "map resolution must be at least 2 per axis, got {resolution}"
        )));
    }
    let ref_state = two_level(&reference)?;
    let eg_axis = linspace(eg_range.0, eg_range.1, resolution);
    let gap_axis = linspace(gap_range.0, gap_range.1, resolution);
    let mut cells = Vec::with_capacity(resolution * resolution);
    for &eg in &eg_axis {
        for &gap in &gap_axis {
            let state = two_level(&TwoLevelInput {
                eg_tilde: eg,
                gap_tilde: gap,
            })?;
            let delta = StateDelta::between(&ref_state, &state);
            let class = classify(&delta, DEFAULT_EPSILON)?;
            cells.push(MapCell {
                eg_tilde: eg,
                gap_tilde: gap,
                delta,
                class,
            });
        }
    }
    Ok(SpontaneityMap {
        reference,
        eg_axis,
        gap_axis,
        cells,
    })
}

impl SpontaneityMap {
    pub fn resolution(&self) -> (usize, usize) {
        (self.eg_axis.len(), self.gap_axis.len())
    }

    pub fn cell(&self, eg_index: usize, gap_index: usize) -> &MapCell {
        &self.cells[eg_index * self.gap_axis.len() + gap_index]
    }

    /// CSV export: `Eg_over_kT,gap_over_kT,dF,dU,dS,class`, one row per
    /// cell, 17 significant digits, row-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("Eg_over_kT,gap_over_kT,dF,dU,dS,class\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                cell.eg_tilde,
                cell.gap_tilde,
                cell.delta.d_f,
                cell.delta.d_u,
                cell.delta.d_s,
                cell.class.label()
            ));
        }
        out
    }
}

/// Classify each point of an isothermal path against the point at
/// `reference_index`. All points must carry state functions normalized at
/// the same temperature.
pub fn classify_path(
    points: &[ThermoQuantities],
    reference_index: usize,
    epsilon: f64,
) -> Result<Vec<SpontaneityClass>> {
    if points.len() < 2 {
        return Err(Error::Domain("a path needs at least 2 points".into()));
    }
    let reference = points.get(reference_index).ok_or_else(|| {
        Error::Domain(format!(
            "reference index {reference_index} out of range for {} points",
            points.len()
        ))
    })?;
    points
        .iter()
        .map(|p| classify(&StateDelta::between(reference, p), epsilon))
        .collect()
}

/// Classify each step of an isothermal path by its local direction of
/// motion: point n is labeled with the character of the transition from
/// point n−1 to point n. The first point has no predecessor and is labeled
/// [`SpontaneityClass::Boundary`]. This is the coloring of a trajectory
/// marker: what the process is doing *there*, not where it stands relative
/// to its start.
pub fn classify_local_path(
    points: &[ThermoQuantities],
    epsilon: f64,
) -> Result<Vec<SpontaneityClass>> {
    if points.len() < 2 {
        return Err(Error::Domain("a path needs at least 2 points".into()));
    }
    let mut classes = Vec::with_capacity(points.len());
    classes.push(SpontaneityClass::Boundary);
    for pair in points.windows(2) {
        classes.push(classify(
            &StateDelta::between(&pair[0], &pair[1]),
            epsilon,
        )?);
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn delta(d_f: f64, d_u: f64, d_s: f64) -> StateDelta {
        StateDelta::new(d_f, d_u, d_s).unwrap()
    }

    #[test]
    fn classify_sign_patterns() {
        let eps = DEFAULT_EPSILON;
        assert_eq!(
            classify(&delta(-1.5, -1.0, 0.5), eps).unwrap(),
            SpontaneityClass::Typical
        );
        assert_eq!(
            classify(&delta(-0.2, -0.5, -0.3), eps).unwrap(),
            SpontaneityClass::EnergyDriven
        );
        assert_eq!(
            classify(&delta(-0.3, 0.2, 0.5), eps).unwrap(),
            SpontaneityClass::EntropyDriven
        );
        assert_eq!(
            classify(&delta(0.3, 0.5, 0.2), eps).unwrap(),
            SpontaneityClass::NonSpontaneous
        );
        assert_eq!(
            classify(&delta(0.0, 0.0, 0.0), eps).unwrap(),
            SpontaneityClass::Boundary
        );
    }

    #[test]
    fn inconsistent_deltas_are_rejected() {
        assert!(StateDelta::new(-0.5, 1.0, 0.5).is_err());
        // the impossible sign pattern can only sneak in below the identity
        // tolerance; it is rejected rather than misclassified
        let sneaky = StateDelta {
            d_f: -5e-12,
            d_u: 2e-12,
            d_s: -2e-12,
        };
        assert!(sneaky.check_identity().is_ok());
        assert!(classify(&sneaky, 1e-12).is_err());
    }

    #[test]
    fn boundary_when_any_component_vanishes() {
        let eps = 1e-6;
        assert_eq!(
            classify(&delta(-0.5, -0.5 + 1e-9, 1e-9), eps).unwrap(),
            SpontaneityClass::Boundary
        );
        assert_eq!(
            classify(&delta(-1e-9, 0.3, 0.3 + 1e-9), eps).unwrap(),
            SpontaneityClass::Boundary
        );
    }

    proptest! {
        #[test]
        fn exactly_one_class_and_rescaling_invariance(
            d_u in -10.0f64..10.0,
            d_s in -10.0f64..10.0,
            scale in 1e-3f64..1e3,
        ) {
            let d = StateDelta::new(d_u - d_s, d_u, d_s).unwrap();
            let class = classify(&d, DEFAULT_EPSILON);
            let scaled = StateDelta::new(scale * (d_u - d_s), scale * d_u, scale * d_s).unwrap();
            let class_scaled = classify(&scaled, DEFAULT_EPSILON * scale);
            match (class, class_scaled) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {} // impossible pattern rejected at any scale
                other => prop_assert!(false, "divergent outcomes {:?}", other),
            }
        }

        #[test]
        fn energy_driven_reverses_to_non_spontaneous(
            d_u in -10.0f64..-1e-6,
            d_s in -10.0f64..-1e-6,
        ) {
            prop_assume!(d_u - d_s < -1e-6);
            let d = StateDelta::new(d_u - d_s, d_u, d_s).unwrap();
            prop_assert_eq!(classify(&d, 1e-9).unwrap(), SpontaneityClass::EnergyDriven);
            prop_assert_eq!(
                classify(&d.reversed(), 1e-9).unwrap(),
                SpontaneityClass::NonSpontaneous
            );
        }
    }

    #[test]
    fn map_reference_cell_is_boundary() {
        let map = build_map(
            DEFAULT_REFERENCE,
            DEFAULT_EG_RANGE,
            DEFAULT_GAP_RANGE,
            61,
        )
        .unwrap();
        let cell = map.cell(30, 30);
        assert!((cell.eg_tilde - 0.5).abs() < 1e-12);
        assert!((cell.gap_tilde - 3.0).abs() < 1e-12);
        assert_eq!(cell.class, SpontaneityClass::Boundary);
    }

    #[test]
    fn map_cells_match_direct_evaluation() {
        // gap shrink at fixed ground state raises U toward the excitation
        // peak: entropy-driven, not typical
        let ref_state = two_level(&DEFAULT_REFERENCE).unwrap();
        let shrunk = two_level(&TwoLevelInput {
            eg_tilde: 0.5,
            gap_tilde: 2.0,
        })
        .unwrap();
        let d = StateDelta::between(&ref_state, &shrunk);
        assert!(d.d_f < 0.0 && d.d_u > 0.0 && d.d_s > 0.0, "{d:?}");
        assert_eq!(
            classify(&d, DEFAULT_EPSILON).unwrap(),
            SpontaneityClass::EntropyDriven
        );
        // gap growth at fixed ground state costs free energy
        let grown = two_level(&TwoLevelInput {
            eg_tilde: 0.5,
            gap_tilde: 4.0,
        })
        .unwrap();
        let d = StateDelta::between(&ref_state, &grown);
        assert!(d.d_f > 0.0 && d.d_s < 0.0, "{d:?}");
        assert_eq!(
            classify(&d, DEFAULT_EPSILON).unwrap(),
            SpontaneityClass::NonSpontaneous
        );
    }

    #[test]
    fn uniform_scaling_diagonal_stays_typical() {
        let ref_state = two_level(&DEFAULT_REFERENCE).unwrap();
        for i in 0..=60 {
            let s = 0.5 + 1.5 * i as f64 / 60.0;
            let state = two_level(&TwoLevelInput {
                eg_tilde: 0.5 * s,
                gap_tilde: 3.0 * s,
            })
            .unwrap();
            let d = StateDelta::between(&ref_state, &state);
            let class = classify_spontaneous_direction(&d, DEFAULT_EPSILON).unwrap();
            if (s - 1.0).abs() < 1e-12 {
                assert_eq!(class, SpontaneityClass::Boundary);
            } else {
                assert_eq!(class, SpontaneityClass::Typical, "s = {s}");
            }
        }
    }

    #[test]
    fn map_regions_are_connected() {
        let map = build_map(
            DEFAULT_REFERENCE,
            DEFAULT_EG_RANGE,
            DEFAULT_GAP_RANGE,
            61,
        )
        .unwrap();
        let (rows, cols) = map.resolution();
        use std::collections::HashSet;
        let mut seen_components: HashSet<&'static str> = HashSet::new();
        let mut visited = vec![false; rows * cols];
        for start in 0..rows * cols {
            if visited[start] {
                continue;
            }
            let class = map.cells[start].class;
            if class == SpontaneityClass::Boundary {
                visited[start] = true;
                continue; // border sliver, not a region
            }
            assert!(
                seen_components.insert(class.label()),
                "{} split into multiple components",
                class.label()
            );
            let mut stack = vec![start];
            visited[start] = true;
            while let Some(idx) = stack.pop() {
                let (r, c) = (idx / cols, idx % cols);
                let mut push = |rr: usize, cc: usize, stack: &mut Vec<usize>| {
                    let j = rr * cols + cc;
                    if !visited[j] && map.cells[j].class == class {
                        visited[j] = true;
                        stack.push(j);
                    }
                };
                if r > 0 {
                    push(r - 1, c, &mut stack);
                }
                if r + 1 < rows {
                    push(r + 1, c, &mut stack);
                }
                if c > 0 {
                    push(r, c - 1, &mut stack);
                }
                if c + 1 < cols {
                    push(r, c + 1, &mut stack);
                }
            }
        }
        // the window straddles all four main regions
        for label in ["typical", "energy", "entropy", "nonspont"] {
            assert!(seen_components.contains(label), "missing {label}");
        }
    }

    #[test]
    fn map_csv_header_and_size() {
        let map = build_map(DEFAULT_REFERENCE, (0.4, 0.6), (2.5, 3.5), 5).unwrap();
        let csv = map.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("Eg_over_kT,gap_over_kT,dF,dU,dS,class"));
        assert_eq!(csv.lines().count(), 1 + 25);
    }

    #[test]
    fn build_map_rejects_bad_inputs() {
        assert!(build_map(DEFAULT_REFERENCE, (0.5, 0.5), (0.5, 5.5), 61).is_err());
        assert!(build_map(DEFAULT_REFERENCE, (0.05, 0.95), (5.5, 0.5), 61).is_err());
        assert!(build_map(DEFAULT_REFERENCE, (0.05, 0.95), (0.5, 5.5), 1).is_err());
    }

    #[test]
    fn constant_path_is_all_boundary() {
        let q = two_level(&DEFAULT_REFERENCE).unwrap();
        let path = vec![q; 5];
        let classes = classify_path(&path, 0, DEFAULT_EPSILON).unwrap();
        assert!(classes
            .iter()
            .all(|c| *c == SpontaneityClass::Boundary));
        assert!(classify_path(&path, 9, DEFAULT_EPSILON).is_err());
        assert!(classify_path(&path[..1], 0, DEFAULT_EPSILON).is_err());
    }
}
