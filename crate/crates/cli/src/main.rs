//! `otto`: figure and table data for the harmonic quantum Otto cycle.

mod commands;
mod grid;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use otto_core::protocol::{RampShape, DEFAULT_ATOL, DEFAULT_RTOL};
use otto_core::sampler::{sample_histogram, Machine, SampleSpec, Sidecar};
use otto_core::{Execution, OperationMode, TempRegime};
use serde_json::{json, Value};

use commands::{CycleArgs, CycleDrive, LambdaArgs, Stroke};
use grid::Grid;
use table::Table;

#[derive(Parser, Debug)]
#[command(
    name = "otto",
    version,
    about = "Harmonic quantum Otto engine and refrigerator data"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (default: RAYON_NUM_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every grid and sampler loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Significant digits in the output.
    #[arg(long, global = true, default_value_t = 12,
          value_parser = clap::value_parser!(u8).range(6..=17))]
    precision: u8,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

const ETA_C_GRID: &str = "0.005:0.995:181";
const ZETA_C_GRID: &str = "0.05:9.05:181";

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal engine efficiencies against the Carnot efficiency.
    EngineCurves {
        /// `start:stop:count` or a comma-separated list.
        #[arg(long, default_value = ETA_C_GRID)]
        eta_c_grid: Grid,
    },
    /// Optimal refrigerator COPs against the Carnot COP.
    FridgeCurves {
        #[arg(long, default_value = ZETA_C_GRID)]
        zeta_c_grid: Grid,
    },
    /// Relative losses and work ratios of the two optimization targets.
    LossCompare {
        #[arg(long, default_value = ETA_C_GRID)]
        eta_c_grid: Grid,
    },
    /// Histogram of sudden-switch efficiencies or COPs over random frequencies.
    BoundHistogram(HistogramOpts),
    /// Adiabaticity parameter of a finite-time frequency ramp.
    Lambda(LambdaOpts),
    /// Energetics of a single cycle, as JSON.
    Cycle(CycleOpts),
}

#[derive(Args, Debug)]
struct HistogramOpts {
    #[arg(long, value_enum)]
    machine: MachineArg,
    #[arg(long, default_value_t = 1.0)]
    beta_c: f64,
    #[arg(long)]
    beta_h: f64,
    #[arg(long, default_value_t = 0.0)]
    omega_min: f64,
    #[arg(long, default_value_t = 30.0)]
    omega_max: f64,
    /// Number of frequency pairs drawn.
    #[arg(long, default_value_t = 10_000_000)]
    n: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.01)]
    bin_width: f64,
    /// JSON summary path (default: the output path with a `.json` extension).
    #[arg(long)]
    sidecar: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MachineArg {
    Engine,
    Fridge,
}

#[derive(Args, Debug)]
struct LambdaOpts {
    #[arg(long, value_enum)]
    ramp: RampArg,
    /// Ramp durations, as a grid.
    #[arg(long)]
    duration: Grid,
    #[arg(long, default_value_t = 1.0)]
    omega_c: f64,
    #[arg(long, default_value_t = 2.0)]
    omega_h: f64,
    #[arg(long, value_enum, default_value_t = StrokeArg::Compression)]
    stroke: StrokeArg,
    #[arg(long, default_value_t = DEFAULT_RTOL)]
    rtol: f64,
    #[arg(long, default_value_t = DEFAULT_ATOL)]
    atol: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RampArg {
    Linear,
    #[value(alias = "exponential")]
    Exp,
    Quadratic,
}

impl From<RampArg> for RampShape {
    fn from(r: RampArg) -> Self {
        match r {
            RampArg::Linear => RampShape::Linear,
            RampArg::Exp => RampShape::Exponential,
            RampArg::Quadratic => RampShape::Quadratic,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrokeArg {
    Compression,
    Expansion,
}

#[derive(Args, Debug)]
struct CycleOpts {
    #[arg(long)]
    beta_c: f64,
    #[arg(long)]
    beta_h: f64,
    #[arg(long)]
    omega_c: f64,
    #[arg(long)]
    omega_h: f64,
    #[arg(long, value_enum, default_value_t = DriveArg::Adiabatic)]
    drive: DriveArg,
    /// Adiabaticity parameter for `--drive custom`.
    #[arg(long, required_if_eq("drive", "custom"))]
    lambda: Option<f64>,
    /// Ramp shape for `--drive ramp`.
    #[arg(long, value_enum, required_if_eq("drive", "ramp"))]
    ramp: Option<RampArg>,
    /// Ramp duration for `--drive ramp`.
    #[arg(long, required_if_eq("drive", "ramp"))]
    duration: Option<f64>,
    #[arg(long, value_enum, default_value_t = RegimeArg::Exact)]
    regime: RegimeArg,
    /// Fail with exit code 3 unless the cycle operates in this mode.
    #[arg(long, value_enum)]
    require: Option<RequireArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DriveArg {
    Adiabatic,
    SuddenSwitch,
    Custom,
    Ramp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Exact,
    HighT,
    LowT,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RequireArg {
    Engine,
    Refrigerator,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] otto_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn io(path: Option<&Path>, source: io::Error) -> Self {
        let path = path.map_or("<stdout>".to_string(), |p| p.display().to_string());
        CliError::Io { path, source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    fn report(&self) -> Value {
        match self {
            CliError::Domain(e) => json!({
                "error": e.kind(),
                "precondition": e.precondition(),
                "message": e.to_string(),
            }),
            CliError::Io { .. } => json!({ "error": "IoError", "message": self.to_string() }),
            CliError::Usage(_) => json!({ "error": "UsageError", "message": self.to_string() }),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.report());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = &cli.global;
    configure_threads(g.threads)?;
    let exec = if g.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let digits = g.precision as usize;
    match &cli.command {
        Command::EngineCurves { eta_c_grid } => {
            emit_table(g, &commands::engine_curves(&eta_c_grid.0, exec)?)
        }
        Command::FridgeCurves { zeta_c_grid } => {
            emit_table(g, &commands::fridge_curves(&zeta_c_grid.0, exec)?)
        }
        Command::LossCompare { eta_c_grid } => {
            emit_table(g, &commands::loss_compare(&eta_c_grid.0, exec)?)
        }
        Command::Lambda(o) => {
            let args = LambdaArgs {
                shape: o.ramp.into(),
                stroke: match o.stroke {
                    StrokeArg::Compression => Stroke::Compression,
                    StrokeArg::Expansion => Stroke::Expansion,
                },
                omega_c: o.omega_c,
                omega_h: o.omega_h,
                rtol: o.rtol,
                atol: o.atol,
            };
            emit_table(g, &commands::lambda_table(&args, &o.duration.0, exec)?)
        }
        Command::BoundHistogram(o) => bound_histogram(g, o, exec, digits),
        Command::Cycle(o) => cycle(g, o, digits),
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: Option<usize>) -> Result<(), CliError> {
    Ok(())
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(Some(p), e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let mut w = open_output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::io(path, e))
}

fn emit_table(g: &Global, t: &Table) -> Result<(), CliError> {
    let digits = g.precision as usize;
    let path = g.output.as_deref();
    match g.format {
        Format::Csv => {
            let mut w = open_output(path)?;
            t.write_csv(&mut w, digits)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(path, e))
        }
        Format::Json => write_json(path, &t.to_json(digits)),
    }
}

fn bound_histogram(
    g: &Global,
    o: &HistogramOpts,
    exec: Execution,
    digits: usize,
) -> Result<(), CliError> {
    let spec = SampleSpec {
        beta_c: o.beta_c,
        beta_h: o.beta_h,
        omega_min: o.omega_min,
        omega_max: o.omega_max,
        n_samples: o.n,
        seed: o.seed,
        bin_width: o.bin_width,
    };
    let machine = match o.machine {
        MachineArg::Engine => Machine::Engine,
        MachineArg::Fridge => Machine::Fridge,
    };
    let h = sample_histogram(machine, &spec, exec)?;
    let sidecar = serde_json::to_value(Sidecar::new(&spec, &h)).expect("sidecar serializes");
    let path = g.output.as_deref();
    match g.format {
        Format::Csv => {
            let mut w = open_output(path)?;
            h.write_csv(&mut w, digits)
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(path, e))?;
            let side_path = o
                .sidecar
                .clone()
                .or_else(|| path.map(|p| p.with_extension("json")));
            match side_path {
                Some(p) => write_json(Some(&p), &sidecar)?,
                None => eprintln!("{sidecar}"),
            }
        }
        Format::Json => {
            let counts: Vec<u64> = h.counts.clone();
            write_json(path, &json!({ "summary": sidecar, "counts": counts }))?;
        }
    }
    h.check_bound()?;
    Ok(())
}

fn cycle(g: &Global, o: &CycleOpts, digits: usize) -> Result<(), CliError> {
    let drive = match o.drive {
        DriveArg::Adiabatic => CycleDrive::Adiabatic,
        DriveArg::SuddenSwitch => CycleDrive::SuddenSwitch,
        DriveArg::Custom => CycleDrive::Custom(o.lambda.expect("required by clap")),
        DriveArg::Ramp => CycleDrive::Ramp {
            shape: o.ramp.expect("required by clap").into(),
            duration: o.duration.expect("required by clap"),
        },
    };
    if o.lambda.is_some() && o.drive != DriveArg::Custom {
        return Err(CliError::Usage(
            "--lambda only applies to --drive custom".into(),
        ));
    }
    let args = CycleArgs {
        beta_c: o.beta_c,
        beta_h: o.beta_h,
        omega_c: o.omega_c,
        omega_h: o.omega_h,
        drive,
        regime: match o.regime {
            RegimeArg::Exact => TempRegime::Exact,
            RegimeArg::HighT => TempRegime::HighT,
            RegimeArg::LowT => TempRegime::LowT,
        },
    };
    let (report, mode) = commands::cycle_report(&args, digits)?;
    write_json(g.output.as_deref(), &report)?;
    let expected = match o.require {
        None => return Ok(()),
        Some(RequireArg::Engine) => OperationMode::Engine,
        Some(RequireArg::Refrigerator) => OperationMode::Refrigerator,
    };
    if mode != expected {
        return Err(otto_core::Error::OperationMode {
            expected,
            found: mode,
        }
        .into());
    }
    Ok(())
}
