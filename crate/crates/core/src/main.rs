use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qshape::config::{OutputKind, RunConfig};
use qshape::eigensolver::GridInfo;
use qshape::presets::{preset, PRESET_NAMES};
use qshape::sweep::{emit_summary, run_map, run_sweep};
use qshape::thermo::{evaluate_mode, solve_for_temperature};
use qshape::{Error, Result};

/// Confined-spectrum and canonical-thermodynamics workbench: solve 1D
/// potentials, sweep size or shape parameters, and classify spontaneity.
#[derive(Parser)]
#[command(name = "qshape", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured potential and write its level list
    Spectrum(SpectrumArgs),
    /// Evaluate state functions at the configured temperature
    Thermo(CommonArgs),
    /// Run the configured parameter sweep end to end
    Sweep(SweepArgs),
    /// Build the configured two-level spontaneity map
    Map(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a run configuration (JSON, schema 1)
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Name of a bundled configuration (see --help for the list)
    #[arg(long, value_name = "NAME", long_help = preset_help())]
    preset: Option<String>,
    /// Override the configured temperature (K)
    #[arg(long = "T", value_name = "KELVIN")]
    temperature: Option<f64>,
    /// Directory output files are written into (created if missing)
    #[arg(long, value_name = "DIR", default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of levels to solve for (default: as many as the mode needs)
    #[arg(long, value_name = "COUNT")]
    k: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Override the configured number of sweep steps
    #[arg(long, value_name = "COUNT")]
    steps: Option<usize>,
    /// Exit 0 even when some sweep points did not converge
    #[arg(long)]
    allow_unconverged: bool,
}

fn preset_help() -> String {
    format!(
        "Name of a bundled configuration. Available presets:\n  {}",
        PRESET_NAMES.join("\n  ")
    )
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut config = match (&common.config, &common.preset) {
        (Some(path), None) => RunConfig::from_path(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => {
            return Err(Error::Config(
                "provide either --config <path> or --preset <name>".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    if let Some(t) = common.temperature {
        config.temperature_k = t;
    }
    config.validate()?;
    Ok(config)
}

fn write_output(dir: &Path, file: &str, content: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file);
    fs::write(&path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<ExitCode> {
    let config = load_config(&args.common)?;
    let spec = config.potential.to_spec()?;
    let settings = config.solver.to_settings();
    let spectrum = match args.k {
        Some(k) => qshape::eigensolver::solve(&spec, k, &settings)?,
        None => solve_for_temperature(&spec, config.temperature_k, config.mode, &settings)?,
    };
    match spectrum.grid {
        GridInfo::FiniteDifference {
            n_interior,
            spacing_nm,
        } => println!(
            "solved {} levels on {} interior points (dx = {spacing_nm} nm), converged: {}",
            spectrum.len(),
            n_interior,
            spectrum.converged
        ),
        _ => println!("solved {} levels in closed form", spectrum.len()),
    }
    write_output(&args.common.out_dir, "spectrum.csv", &spectrum.to_csv())?;
    if !spectrum.converged {
        eprintln!("warning: spectrum did not converge at the grid cap");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_thermo(common: &CommonArgs) -> Result<ExitCode> {
    let config = load_config(common)?;
    let spec = config.potential.to_spec()?;
    let settings = config.solver.to_settings();
    let spectrum = solve_for_temperature(&spec, config.temperature_k, config.mode, &settings)?;
    let quantities = evaluate_mode(&spectrum, config.temperature_k, config.mode)?;
    let mut csv = String::from("T_K,zeta,F_tilde,U_tilde,S_tilde,C_tilde\n");
    csv.push_str(&quantities.to_csv_row()?);
    csv.push('\n');
    write_output(&common.out_dir, "thermo.csv", &csv)?;
    if quantities.truncation_warning {
        eprintln!("warning: Boltzmann tail not fully resolved by the level count");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let mut config = load_config(&args.common)?;
    if let Some(steps) = args.steps {
        match &mut config.sweep {
            Some(block) => block.steps = steps,
            None => return Err(Error::Config("config has no sweep block".into())),
        }
        config.validate()?;
    }
    let result = run_sweep(&config)?;
    let dir = &args.common.out_dir;
    write_output(dir, "sweep.csv", &result.to_csv())?;
    if result.wants(OutputKind::TrajectoryCsv) {
        write_output(dir, "trajectory.csv", &result.to_trajectory_csv()?)?;
    }
    if result.wants(OutputKind::SummaryJson) || result.config.outputs.is_empty() {
        let summary = emit_summary(&result)?;
        write_output(dir, "summary.json", &summary.to_json()?)?;
    }
    if !result.all_converged() && !args.allow_unconverged {
        eprintln!("warning: some sweep points did not converge (see summary)");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_map(common: &CommonArgs) -> Result<ExitCode> {
    let config = load_config(common)?;
    let map = run_map(&config)?;
    write_output(&common.out_dir, "map.csv", &map.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn exit_code_for(error: &Error) -> ExitCode {
    match error {
        Error::Config(_) | Error::Domain(_) | Error::UnsupportedVariant(_) => ExitCode::from(2),
        Error::Solver(_) | Error::StepSize(_) => ExitCode::from(3),
        Error::Io(_) => ExitCode::from(4),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Thermo(args) => cmd_thermo(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Map(args) => cmd_map(args),
    };
    match outcome {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            exit_code_for(&error)
        }
    }
}
