//! Command-line front end: argument parsing, dispatch and file output.
//!
//! Every subcommand reads an optional `key = value` config file, writes its
//! results into the output directory (`--out-dir`, else `FLUXSENSE_OUT_DIR`,
//! else the working directory) and prints the written paths. Failures print a
//! single JSON object on stderr and exit with 2 (configuration), 3 (numerical)
//! or 4 (I/O).

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fluxsense::config::{parse_config, ConfigError, RunConfig};
use fluxsense::decoherence::rates_table;
use fluxsense::magnetostatics::mutual_inductances;
use fluxsense::manifest::RunManifest;
use fluxsense::optimizer::{find_optimal_flux, ridge_scan};
use fluxsense::pea::{build_flux_grid, run_campaign, PeaConfig};
use fluxsense::report;
use fluxsense::{FluxBias, FringeEvaluator};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "FLUXSENSE_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "fluxsense",
    version,
    about = "Transmon flux-sensor design and phase-estimation simulation"
)]
pub struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides FLUXSENSE_OUT_DIR.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Also write manifest.json describing the run.
    #[arg(long, global = true)]
    pub manifest: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decay rates at a list of flux biases (rates.csv).
    Rates {
        /// Comma-separated flux biases in Φ₀.
        #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4")]
        phi: Vec<f64>,
    },
    /// Optimal operating point (optimal_point.json).
    OptimalPoint,
    /// Sensitivity surface and ridge curves (ridge_surface.csv, ridge_curves.csv).
    Ridge(RidgeArgs),
    /// Probability pattern over the flux grid (calibration_n<N>.csv).
    Calibration {
        #[arg(long)]
        n_qubits: Option<u32>,
        /// Delay in ns; defaults to the minimal delay.
        #[arg(long)]
        tau_ns: Option<f64>,
    },
    /// Kitaev phase-estimation campaign (pea_steps.csv, pea_runs.csv).
    Pea(PeaArgs),
    /// Bias-line mutual inductances (inductance.json).
    Inductance,
}

#[derive(Debug, Args)]
pub struct RidgeArgs {
    /// Comma-separated temperatures in mK; defaults to the configured one.
    #[arg(long, value_delimiter = ',')]
    pub temps: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub fmin_ghz: f64,
    #[arg(long, default_value_t = 20.0)]
    pub fmax_ghz: f64,
    #[arg(long, default_value_t = 50)]
    pub n_freq: usize,
    #[arg(long, default_value_t = 200)]
    pub n_phi: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Desk,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct PeaArgs {
    #[arg(long)]
    pub n_qubits: Option<u32>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub decoherence: Option<Switch>,
}

/// A failure with its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Numeric(fluxsense::Error),
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io { .. } => 4,
        }
    }

    /// Machine-readable description.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CliError::Usage(m) => json!({"error": "usage", "message": m}),
            CliError::Config(e) => json!({
                "error": "config",
                "message": e.to_string(),
                "key": e.key(),
                "line": e.line(),
            }),
            CliError::Numeric(e) => json!({"error": "numerical", "message": e.to_string()}),
            CliError::Io { path, message } => json!({
                "error": "io",
                "message": message,
                "path": path.display().to_string(),
            }),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<fluxsense::Error> for CliError {
    fn from(e: fluxsense::Error) -> Self {
        CliError::Numeric(e)
    }
}

fn io_err(path: &Path, e: impl ToString) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub outputs: Vec<PathBuf>,
    pub manifest: Option<PathBuf>,
}

/// Resolves the output directory from the flag, then the environment.
pub fn output_dir(flag: Option<&Path>) -> PathBuf {
    match flag {
        Some(p) => p.to_path_buf(),
        None => std::env::var_os(OUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, CliError> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            Ok(parse_config(&text)?)
        }
    }
}

struct Output {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Output {
    fn create(&mut self, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(|e| io_err(&path, e))?;
        self.written.push(path.clone());
        Ok((path, BufWriter::new(file)))
    }

    fn csv(
        &mut self,
        name: &str,
        write: impl FnOnce(&mut BufWriter<File>) -> report::CsvResult,
    ) -> Result<(), CliError> {
        let (path, mut w) = self.create(name)?;
        write(&mut w).map_err(|e| io_err(&path, e))?;
        w.flush().map_err(|e| io_err(&path, e))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let (path, mut w) = self.create(name)?;
        report::write_json(value, &mut w).map_err(|e| io_err(&path, e))?;
        w.flush().map_err(|e| io_err(&path, e))
    }
}

fn operating_point(cfg: &RunConfig) -> Result<FluxBias, CliError> {
    match cfg.bias_phi {
        Some(phi) => Ok(FluxBias::new(phi)?),
        None => Ok(FluxBias::new(
            find_optimal_flux(&cfg.design, cfg.pea.tau_min)?.phi_star,
        )?),
    }
}

fn revalidate(cfg: &RunConfig) -> Result<(), CliError> {
    cfg.validate().map_err(CliError::Config)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

fn dispatch(command: &Command, cfg: &mut RunConfig, out: &mut Output) -> Result<(), CliError> {
    match command {
        Command::Rates { phi } => {
            let biases = phi
                .iter()
                .map(|&p| FluxBias::new(p))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("--phi: {e}")))?;
            let rows = rates_table(&cfg.design, &biases);
            out.csv("rates.csv", |w| report::write_rates_csv(&rows, w))
        }
        Command::OptimalPoint => {
            let opt = find_optimal_flux(&cfg.design, cfg.pea.tau_min)?;
            out.json(
                "optimal_point.json",
                &json!({
                    "phi_star": opt.phi_star,
                    "tau_opt": opt.tau_opt,
                    "sensitivity": opt.sensitivity,
                    "T2": opt.t2,
                    "n_steps": opt.n_steps,
                    "dynamic_range": opt.dynamic_range,
                    "at_boundary": opt.at_boundary,
                }),
            )
        }
        Command::Ridge(args) => {
            if args.n_freq == 0
                || args.n_phi == 0
                || args.fmax_ghz.is_nan()
                || args.fmin_ghz.is_nan()
                || args.fmax_ghz < args.fmin_ghz
            {
                return Err(CliError::Usage(
                    "ridge needs a non-empty frequency and flux grid".into(),
                ));
            }
            let freqs: Vec<f64> = linspace(args.fmin_ghz, args.fmax_ghz, args.n_freq)
                .into_iter()
                .map(|f| f * 1e9)
                .collect();
            let phis = linspace(0.0, fluxsense::qubit::PHI_LIMIT, args.n_phi);
            let temps: Vec<f64> = if args.temps.is_empty() {
                vec![cfg.design.temperature]
            } else {
                args.temps.iter().map(|t| t * 1e-3).collect()
            };
            let surface = ridge_scan(
                &cfg.design,
                &freqs,
                &phis,
                &[cfg.design.temperature],
                cfg.pea.tau_min,
            )?;
            let curves = ridge_scan(&cfg.design, &freqs, &[], &temps, cfg.pea.tau_min)?;
            out.csv("ridge_surface.csv", |w| {
                report::write_surface_csv(&surface.surface, w)
            })?;
            out.csv("ridge_curves.csv", |w| {
                report::write_ridge_csv(&curves.ridge, w)
            })
        }
        Command::Calibration { n_qubits, tau_ns } => {
            if let Some(n) = n_qubits {
                cfg.pea.n_qubits = *n;
            }
            revalidate(cfg)?;
            let bias = operating_point(cfg)?;
            let tau = tau_ns.map_or(cfg.pea.tau_min, |t| t * 1e-9);
            let grid = build_flux_grid(&cfg.pea, &cfg.design, bias)?;
            let ev = FringeEvaluator::new(cfg.design.clone(), bias, cfg.pea.n_qubits)?
                .with_decoherence(cfg.pea.decoherence_enabled);
            let p = ev.pattern_grid(&grid, tau)?;
            let name = format!("calibration_n{}.csv", cfg.pea.n_qubits);
            out.csv(&name, |w| report::write_calibration_csv(&grid, &p, w))
        }
        Command::Pea(args) => {
            let pea = &mut cfg.pea;
            if let Some(n) = args.n_qubits {
                pea.n_qubits = n;
            }
            if let Some(preset) = args.preset {
                let base = match preset {
                    Preset::Desk => PeaConfig::desk(pea.n_qubits),
                    Preset::Full => PeaConfig::full(pea.n_qubits),
                };
                pea.n_targets = base.n_targets;
                pea.n_repetitions = base.n_repetitions;
                pea.n_steps = base.n_steps;
            }
            if let Some(seed) = args.seed {
                pea.master_seed = seed;
            }
            if let Some(d) = args.decoherence {
                pea.decoherence_enabled = d == Switch::On;
            }
            revalidate(cfg)?;
            let bias = operating_point(cfg)?;
            let result = run_campaign(&cfg.pea, &cfg.design, bias)?;
            out.csv("pea_steps.csv", |w| report::aggregate_report(&result, w))?;
            out.csv("pea_runs.csv", |w| report::write_pea_runs_csv(&result, w))
        }
        Command::Inductance => {
            let m = mutual_inductances(&cfg.geometry)?;
            out.json(
                "inductance.json",
                &json!({
                    "M_pH": m.m * 1e12,
                    "M_parasitic_pH": m.m_parasitic * 1e12,
                    "periodicity_mA": m.periodicity() * 1e3,
                    "quadrature_error": m.error * 1e12,
                }),
            )
        }
    }
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Rates { .. } => "rates",
        Command::OptimalPoint => "optimal-point",
        Command::Ridge(_) => "ridge",
        Command::Calibration { .. } => "calibration",
        Command::Pea(_) => "pea",
        Command::Inductance => "inductance",
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli, arguments: Vec<String>) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let mut cfg = load_config(cli.config.as_deref())?;
    let dir = output_dir(cli.out_dir.as_deref());
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let mut out = Output {
        dir,
        written: Vec::new(),
    };
    dispatch(&cli.command, &mut cfg, &mut out)?;

    let manifest = if cli.manifest {
        let m = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand_name(&cli.command).to_string(),
            arguments,
            master_seed: cfg.pea.master_seed,
            config: cfg,
            outputs: out
                .written
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        };
        let path = out.dir.join("manifest.json");
        let text = m.to_json().map_err(|e| io_err(&path, e))?;
        fs::write(&path, text + "\n").map_err(|e| io_err(&path, e))?;
        Some(path)
    } else {
        None
    };
    Ok(Outcome {
        outputs: out.written,
        manifest,
    })
}

/// Parses `args` (including the program name) and runs them. Help and
/// version requests are returned as `Ok(Err(text))`.
pub fn run<I, T>(args: I) -> Result<Result<Outcome, String>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Ok(Err(e.to_string())),
                _ => Err(CliError::Usage(e.to_string())),
            };
        }
    };
    let arguments = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    execute(&cli, arguments).map(Ok)
}
