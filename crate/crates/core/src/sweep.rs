//! End-to-end orchestration: walk a parameter (size L or partition position
//! l) across its range, solve each point, evaluate thermodynamics, take the
//! pressure, classify against a reference row, and summarize. Rows are
//! strictly ordered by parameter value and every step is deterministic, so
//! rerunning a config reproduces its output files byte for byte.

use serde::Serialize;

use crate::config::{OutputKind, RunConfig, SweepVariable};
use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::spontaneity::{
    build_map, classify_local_path, classify_path, SpontaneityClass, SpontaneityMap, StateDelta,
};
use crate::thermo::{
    evaluate_mode, mean_level_spacing, pressure_with_center, solve_for_temperature,
    ThermoMode, ThermoQuantities, TwoLevelInput,
};
use crate::util::linspace;

/// One evaluated sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param_nm: f64,
    pub eg_ev: f64,
    /// E₂ − E₁ in two-level mode, the thermally averaged spacing in N-level
    /// mode.
    pub gap_ev: f64,
    pub thermo: ThermoQuantities,
    /// −∂F̃/∂L, per k_B·T per nm.
    pub pressure: f64,
    /// Pressure over the largest |pressure| in the sweep.
    pub p_norm: f64,
    pub class: SpontaneityClass,
    pub converged: bool,
}

/// Ordered sweep output plus the reference row used for classification.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: RunConfig,
    pub rows: Vec<SweepRow>,
    pub reference_index: usize,
}

/// Run the sweep described by `config` (which must carry a sweep block).
pub fn run_sweep(config: &RunConfig) -> Result<SweepResult> {
    config.validate()?;
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("config has no sweep block".into()))?;
    let template = config.potential.to_spec()?;
    let settings = config.solver.to_settings();
    let params = linspace(sweep.start_nm, sweep.end_nm, sweep.steps);

    let mut specs: Vec<PotentialSpec> = Vec::with_capacity(params.len());
    for &param in &params {
        let spec = match sweep.variable {
            SweepVariable::Size => template.with_size(param),
            SweepVariable::Shape => template.with_partition(param)?,
        };
        spec.ensure_valid()?;
        specs.push(spec);
    }

    let mut eg = Vec::with_capacity(params.len());
    let mut gap = Vec::with_capacity(params.len());
    let mut thermo_rows = Vec::with_capacity(params.len());
    let mut pressures = Vec::with_capacity(params.len());
    let mut converged = Vec::with_capacity(params.len());
    for spec in &specs {
        let spectrum = solve_for_temperature(spec, config.temperature_k, config.mode, &settings)?;
        let quantities = evaluate_mode(&spectrum, config.temperature_k, config.mode)?;
        eg.push(spectrum.ground());
        gap.push(match config.mode {
            ThermoMode::TwoLevel => spectrum.first_gap()?,
            ThermoMode::NLevel => mean_level_spacing(&spectrum, config.temperature_k)?,
        });
        pressures.push(pressure_with_center(
            spec,
            config.temperature_k,
            config.mode,
            &settings,
            None,
            &spectrum,
        )?);
        converged.push(spectrum.converged);
        thermo_rows.push(quantities);
    }

    let reference_index = match sweep.reference_param {
        None => 0,
        Some(target) => params
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - target).abs().total_cmp(&(*b - target).abs())
            })
            .map(|(i, _)| i)
            .unwrap_or(0),
    };
    let classes = classify_path(&thermo_rows, reference_index, config.epsilon)?;

    let max_abs_pressure = pressures.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    let rows = params
        .iter()
        .zip(eg)
        .zip(gap)
        .zip(thermo_rows)
        .zip(pressures)
        .zip(classes)
        .zip(converged)
        .map(
            |((((((param, eg_ev), gap_ev), thermo), pressure), class), converged)| SweepRow {
                param_nm: *param,
                eg_ev,
                gap_ev,
                thermo,
                pressure,
                p_norm: if max_abs_pressure > 0.0 {
                    pressure / max_abs_pressure
                } else {
                    0.0
                },
                class,
                converged,
            },
        )
        .collect();

    Ok(SweepResult {
        config: config.clone(),
        rows,
        reference_index,
    })
}

/// Build the spontaneity map described by `config`. Requires two-level mode:
/// N-level states are not functions of (Ẽ_g, ΔẼ) alone, so their trajectories
/// are classified pointwise instead.
pub fn run_map(config: &RunConfig) -> Result<SpontaneityMap> {
    config.validate()?;
    if config.mode != ThermoMode::TwoLevel {
        return Err(Error::Config(
            "spontaneity maps require two_level mode; use a sweep trajectory for n_level".into(),
        ));
    }
    let block = config.map.clone().unwrap_or_default();
    build_map(
        TwoLevelInput {
            eg_tilde: block.reference[0],
            gap_tilde: block.reference[1],
        },
        (block.eg_range[0], block.eg_range[1]),
        (block.gap_range[0], block.gap_range[1]),
        block.resolution,
    )
}

impl SweepResult {
    /// CSV export with header
    /// `param_nm,Eg_eV,gap_eV,zeta,F_tilde,U_tilde,S_tilde,C_tilde,P_norm,class`.
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("param_nm,Eg_eV,gap_eV,zeta,F_tilde,U_tilde,S_tilde,C_tilde,P_norm,class\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                row.param_nm,
                row.eg_ev,
                row.gap_ev,
                row.thermo.zeta,
                row.thermo.f_tilde,
                row.thermo.u_tilde,
                row.thermo.s_tilde,
                row.thermo.c_tilde,
                row.p_norm,
                row.class.label()
            ));
        }
        out
    }

    /// Classes of each step's local direction of motion along the sweep
    /// (marker colors of a trajectory plot), as opposed to the
    /// reference-relative classes stored on the rows.
    pub fn local_classes(&self) -> Result<Vec<SpontaneityClass>> {
        let thermo: Vec<_> = self.rows.iter().map(|r| r.thermo).collect();
        classify_local_path(&thermo, self.config.epsilon)
    }

    /// Trajectory CSV with header `param_nm,Eg_eV,gap_eV,dF,dU,dS,class`:
    /// the (E_g, gap) path annotated with the per-step local deltas and the
    /// local class of motion (the first row, having no predecessor, carries
    /// zero deltas and the boundary label).
    pub fn to_trajectory_csv(&self) -> Result<String> {
        let classes = self.local_classes()?;
        let mut out = String::from("param_nm,Eg_eV,gap_eV,dF,dU,dS,class\n");
        for (i, row) in self.rows.iter().enumerate() {
            let delta = if i == 0 {
                StateDelta {
                    d_f: 0.0,
                    d_u: 0.0,
                    d_s: 0.0,
                }
            } else {
                StateDelta::between(&self.rows[i - 1].thermo, &row.thermo)
            };
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
                row.param_nm,
                row.eg_ev,
                row.gap_ev,
                delta.d_f,
                delta.d_u,
                delta.d_s,
                classes[i].label()
            ));
        }
        Ok(out)
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.config.outputs.contains(&kind)
    }
}

/// Contiguous run of rows sharing a (non-boundary) class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassInterval {
    pub class: String,
    pub start_nm: f64,
    pub end_nm: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extrema {
    pub c_tilde_argmax_nm: f64,
    pub c_tilde_max: f64,
    pub gap_argmax_nm: f64,
    pub gap_max_ev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Monotonicity {
    pub eg_ev: String,
    pub f_tilde: String,
    pub u_tilde: String,
    pub s_tilde: String,
    pub p_norm: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Convergence {
    pub all_converged: bool,
    pub unconverged_params_nm: Vec<f64>,
    pub truncation_warnings: usize,
}

/// Machine-readable digest of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub schema: u32,
    pub config: RunConfig,
    pub rows: usize,
    pub reference_param_nm: f64,
    /// Contiguous runs of the reference-relative row classes.
    pub class_intervals: Vec<ClassInterval>,
    /// Contiguous runs of the local direction-of-motion classes (trajectory
    /// marker colors).
    pub trajectory_class_intervals: Vec<ClassInterval>,
    pub extrema: Extrema,
    pub monotonicity: Monotonicity,
    pub convergence: Convergence,
}

fn monotonicity_verdict(values: impl Iterator<Item = f64> + Clone) -> String {
    let diffs: Vec<f64> = values
        .clone()
        .zip(values.skip(1))
        .map(|(a, b)| b - a)
        .collect();
    if diffs.is_empty() {
        return "constant".into();
    }
    if diffs.iter().all(|d| *d == 0.0) {
        "constant".into()
    } else if diffs.iter().all(|d| *d > 0.0) {
        "increasing".into()
    } else if diffs.iter().all(|d| *d < 0.0) {
        "decreasing".into()
    } else {
        "non_monotone".into()
    }
}

/// Contiguous per-class intervals of a classified sequence; boundary
/// entries separate intervals and are not reported themselves.
pub fn intervals_of(classes: &[SpontaneityClass], params: &[f64]) -> Vec<ClassInterval> {
    let mut intervals: Vec<ClassInterval> = Vec::new();
    let mut open: Option<(SpontaneityClass, f64, f64, usize)> = None;
    let close = |open: &mut Option<(SpontaneityClass, f64, f64, usize)>,
                 intervals: &mut Vec<ClassInterval>| {
        if let Some((class, start, end, count)) = open.take() {
            intervals.push(ClassInterval {
                class: class.label().into(),
                start_nm: start,
                end_nm: end,
                rows: count,
            });
        }
    };
    for (class, &param) in classes.iter().zip(params) {
        match &mut open {
            _ if *class == SpontaneityClass::Boundary => {
                close(&mut open, &mut intervals);
            }
            Some((current, _, end, count)) if current == class => {
                *end = param;
                *count += 1;
            }
            _ => {
                close(&mut open, &mut intervals);
                open = Some((*class, param, param, 1));
            }
        }
    }
    close(&mut open, &mut intervals);
    intervals
}

/// [`intervals_of`] over the reference-relative classes of sweep rows.
pub fn class_intervals(rows: &[SweepRow]) -> Vec<ClassInterval> {
    let classes: Vec<SpontaneityClass> = rows.iter().map(|r| r.class).collect();
    let params: Vec<f64> = rows.iter().map(|r| r.param_nm).collect();
    intervals_of(&classes, &params)
}

/// Digest a finished sweep.
pub fn emit_summary(result: &SweepResult) -> Result<Summary> {
    if result.rows.is_empty() {
        return Err(Error::Domain("cannot summarize an empty sweep".into()));
    }
    let rows = &result.rows;
    let argmax = |f: &dyn Fn(&SweepRow) -> f64| {
        rows.iter()
            .max_by(|a, b| f(a).total_cmp(&f(b)))
            .expect("nonempty")
    };
    let c_best = argmax(&|r: &SweepRow| r.thermo.c_tilde);
    let gap_best = argmax(&|r: &SweepRow| r.gap_ev);
    let unconverged: Vec<f64> = rows
        .iter()
        .filter(|r| !r.converged)
        .map(|r| r.param_nm)
        .collect();
    let params: Vec<f64> = rows.iter().map(|r| r.param_nm).collect();
    Ok(Summary {
        schema: 1,
        config: result.config.clone(),
        rows: rows.len(),
        reference_param_nm: rows[result.reference_index].param_nm,
        class_intervals: class_intervals(rows),
        trajectory_class_intervals: intervals_of(&result.local_classes()?, &params),
        extrema: Extrema {
            c_tilde_argmax_nm: c_best.param_nm,
            c_tilde_max: c_best.thermo.c_tilde,
            gap_argmax_nm: gap_best.param_nm,
            gap_max_ev: gap_best.gap_ev,
        },
        monotonicity: Monotonicity {
            eg_ev: monotonicity_verdict(rows.iter().map(|r| r.eg_ev)),
            f_tilde: monotonicity_verdict(rows.iter().map(|r| r.thermo.f_tilde)),
            u_tilde: monotonicity_verdict(rows.iter().map(|r| r.thermo.u_tilde)),
            s_tilde: monotonicity_verdict(rows.iter().map(|r| r.thermo.s_tilde)),
            p_norm: monotonicity_verdict(rows.iter().map(|r| r.p_norm)),
        },
        convergence: Convergence {
            all_converged: unconverged.is_empty(),
            unconverged_params_nm: unconverged,
            truncation_warnings: rows.iter().filter(|r| r.thermo.truncation_warning).count(),
        },
    })
}

impl Summary {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}
