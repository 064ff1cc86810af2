//! Versioned run configuration: one JSON file fully determines a run.
//!
//! Potentials appear as a tagged record
//! `{type, L_nm, l_nm, h_eV, w_nm, L_osc_nm, center_nm, mass_ratio}`; sweep,
//! map, and solver blocks are optional with documented defaults. Unknown
//! keys are rejected so typos fail loudly instead of silently running the
//! wrong experiment.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::ELECTRON_MASS_RATIO_DEFAULT;
use crate::eigensolver::SolverSettings;
use crate::error::{Error, Result};
use crate::potentials::{Geometry, PotentialSpec};
use crate::spontaneity::{DEFAULT_EG_RANGE, DEFAULT_EPSILON, DEFAULT_GAP_RANGE, DEFAULT_MAP_RESOLUTION};
use crate::thermo::ThermoMode;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    InfiniteWell,
    Harmonic,
    InfiniteWellInfinitePartition,
    InfiniteWellGaussianBump,
    HarmonicGaussianBump,
}

/// Tagged potential record of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    #[serde(rename = "type")]
    pub kind: PotentialKind,
    #[serde(rename = "L_nm", default, skip_serializing_if = "Option::is_none")]
    pub length_nm: Option<f64>,
    #[serde(rename = "l_nm", default, skip_serializing_if = "Option::is_none")]
    pub partition_nm: Option<f64>,
    #[serde(rename = "h_eV", default, skip_serializing_if = "Option::is_none")]
    pub height_ev: Option<f64>,
    #[serde(rename = "w_nm", default, skip_serializing_if = "Option::is_none")]
    pub width_nm: Option<f64>,
    #[serde(rename = "L_osc_nm", default, skip_serializing_if = "Option::is_none")]
    pub osc_length_nm: Option<f64>,
    #[serde(rename = "center_nm", default, skip_serializing_if = "Option::is_none")]
    pub center_nm: Option<f64>,
    #[serde(default = "default_mass_ratio")]
    pub mass_ratio: f64,
}

fn default_mass_ratio() -> f64 {
    ELECTRON_MASS_RATIO_DEFAULT
}

impl PotentialConfig {
    pub fn to_spec(&self) -> Result<PotentialSpec> {
        let need = |field: Option<f64>, name: &str| {
            field.ok_or_else(|| {
                Error::Config(format!("potential type {:?} requires {name}", self.kind))
            })
        };
        let geometry = match self.kind {
            PotentialKind::InfiniteWell => Geometry::InfiniteWell {
                length_nm: need(self.length_nm, "L_nm")?,
            },
            PotentialKind::Harmonic => {
                let domain = need(self.length_nm, "L_nm (bounding domain)")?;
                Geometry::Harmonic {
                    osc_length_nm: need(self.osc_length_nm, "L_osc_nm")?,
                    domain_nm: domain,
                    center_nm: self.center_nm.unwrap_or(0.5 * domain),
                }
            }
            PotentialKind::InfiniteWellInfinitePartition => {
                Geometry::InfiniteWellInfinitePartition {
                    length_nm: need(self.length_nm, "L_nm")?,
                    partition_nm: need(self.partition_nm, "l_nm")?,
                }
            }
            PotentialKind::InfiniteWellGaussianBump => Geometry::InfiniteWellGaussianBump {
                length_nm: need(self.length_nm, "L_nm")?,
                partition_nm: need(self.partition_nm, "l_nm")?,
                height_ev: need(self.height_ev, "h_eV")?,
                width_nm: need(self.width_nm, "w_nm")?,
            },
            PotentialKind::HarmonicGaussianBump => Geometry::HarmonicGaussianBump {
                length_nm: need(self.length_nm, "L_nm")?,
                osc_length_nm: need(self.osc_length_nm, "L_osc_nm")?,
                partition_nm: need(self.partition_nm, "l_nm")?,
                height_ev: need(self.height_ev, "h_eV")?,
                width_nm: need(self.width_nm, "w_nm")?,
            },
        };
        let spec = PotentialSpec::new(geometry, self.mass_ratio);
        let violations = spec.validate();
        if !violations.is_empty() {
            return Err(Error::Config(format!(
                "invalid potential: {}",
                violations.join("; ")
            )));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    /// Domain size (oscillator length for the pure harmonic well).
    #[serde(rename = "L")]
    Size,
    /// Partition position.
    #[serde(rename = "l")]
    Shape,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub variable: SweepVariable,
    pub start_nm: f64,
    pub end_nm: f64,
    pub steps: usize,
    /// Parameter value of the classification reference row; defaults to the
    /// first row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_param: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapBlock {
    #[serde(default = "default_map_reference")]
    pub reference: [f64; 2],
    #[serde(default = "default_eg_range")]
    pub eg_range: [f64; 2],
    #[serde(default = "default_gap_range")]
    pub gap_range: [f64; 2],
    #[serde(default = "default_map_resolution")]
    pub resolution: usize,
}

fn default_map_reference() -> [f64; 2] {
    [0.5, 3.0]
}

fn default_eg_range() -> [f64; 2] {
    [DEFAULT_EG_RANGE.0, DEFAULT_EG_RANGE.1]
}

fn default_gap_range() -> [f64; 2] {
    [DEFAULT_GAP_RANGE.0, DEFAULT_GAP_RANGE.1]
}

fn default_map_resolution() -> usize {
    DEFAULT_MAP_RESOLUTION
}

impl Default for MapBlock {
    fn default() -> Self {
        MapBlock {
            reference: default_map_reference(),
            eg_range: default_eg_range(),
            gap_range: default_gap_range(),
            resolution: default_map_resolution(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_interior: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_n_interior: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    /// Disable the closed-form fast paths and force finite differences.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub force_numeric: Option<bool>,
}

impl SolverBlock {
    pub fn to_settings(&self) -> SolverSettings {
        let defaults = SolverSettings::default();
        SolverSettings {
            start_n_interior: self.n_interior.unwrap_or(defaults.start_n_interior),
            max_n_interior: self.max_n_interior.unwrap_or(defaults.max_n_interior),
            rel_tol: self.rel_tol.unwrap_or(defaults.rel_tol),
            allow_analytic: !self.force_numeric.unwrap_or(false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    SweepCsv,
    MapCsv,
    SummaryJson,
    TrajectoryCsv,
    SpectrumCsv,
    ThermoCsv,
}

/// One experiment: a potential, a temperature, a mode, and what to do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub potential: PotentialConfig,
    #[serde(rename = "temperature_K")]
    pub temperature_k: f64,
    pub mode: ThermoMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapBlock>,
    #[serde(default)]
    pub solver: SolverBlock,
    /// Classification dead-band.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        let config: RunConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        RunConfig::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                self.schema
            )));
        }
        if !(self.temperature_k > 0.0) {
            return Err(Error::Config(format!(
                "temperature must be positive, got {} K",
                self.temperature_k
            )));
        }
        if !(self.epsilon >= 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be non-negative, got {}",
                self.epsilon
            )));
        }
        let spec = self.potential.to_spec()?;
        if let Some(sweep) = &self.sweep {
            if sweep.steps < 2 {
                return Err(Error::Config(format!(
                    "sweep needs at least 2 steps, got {}",
                    sweep.steps
                )));
            }
            if !(sweep.end_nm > sweep.start_nm) {
                return Err(Error::Config(format!(
                    "sweep range must be increasing, got [{}, {}]",
                    sweep.start_nm, sweep.end_nm
                )));
            }
            match sweep.variable {
                SweepVariable::Size => {
                    if !(sweep.start_nm > 0.0) {
                        return Err(Error::Config("size sweep must stay positive".into()));
                    }
                }
                SweepVariable::Shape => {
                    if spec.partition_nm().is_none() {
                        return Err(Error::Config(
                            "shape sweep needs a potential with a partition position".into(),
                        ));
                    }
                    let length = spec.domain_length_nm();
                    if !(sweep.start_nm > 0.0 && sweep.end_nm < length) {
                        return Err(Error::Config(format!(
                            "shape sweep range [{}, {}] must lie strictly inside (0, {length})",
                            sweep.start_nm, sweep.end_nm
                        )));
                    }
                }
            }
            if let Some(reference) = sweep.reference_param {
                if !(reference >= sweep.start_nm && reference <= sweep.end_nm) {
                    return Err(Error::Config(format!(
                        "reference_param {reference} outside the sweep range"
                    )));
                }
            }
        }
        if let Some(map) = &self.map {
            if !(map.eg_range[1] > map.eg_range[0]) || !(map.gap_range[1] > map.gap_range[0]) {
                return Err(Error::Config("map ranges must have positive length".into()));
            }
            if map.resolution < 2 {
                return Err(Error::Config("map resolution must be at least 2".into()));
            }
            if map.reference[1] < 0.0 {
                return Err(Error::Config("map reference gap must be non-negative".into()));
            }
        }
        let settings = self.solver.to_settings();
        if !(settings.rel_tol > 0.0) {
            return Err(Error::Config(format!(
                "solver rel_tol must be positive, got {}",
                settings.rel_tol
            )));
        }
        if settings.max_n_interior < settings.start_n_interior {
            return Err(Error::Config(
                "solver max_n_interior must be at least n_interior".into(),
            ));
        }
        Ok(())
    }
}
