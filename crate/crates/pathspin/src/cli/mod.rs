//! Command line front end: argument and config parsing, command
//! execution, and report rendering.
//!
//! Every command resolves to a [`RunConfig`] assembled from three
//! layers: command line flags override config-file values, which
//! override built-in defaults. Execution is deterministic: a resolved
//! config always produces byte-identical output, including the Monte
//! Carlo command, whose per-point generator seeds derive from the root
//! seed.
//!
//! Exit codes: 0 on success, 1 when a computation violates one of its
//! own invariants or output cannot be written, 2 for usage errors.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

use crate::elements::{BeamSplitterParams, SpinSetting, TiltedBasis};
use crate::experiments::{
    compare_channels, prepare_pan_home, sweep_de_zela, sweep_pan_home, SweepRow,
};
use crate::noncontextual::{chsh_search, feasibility_lp, reproduce_de_zela_channels, ChshWitness};
use report::{Cell, Report};

/// Default transmission amplitudes for sweeps.
pub const DEFAULT_GAMMAS: [f64; 5] = [0.0, 0.25, 0.5, std::f64::consts::FRAC_1_SQRT_2, 1.0];
/// Default analyzer angles (radians).
pub const DEFAULT_THETAS: [f64; 4] = [
    0.0,
    std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_4,
    3.0 * std::f64::consts::FRAC_PI_8,
];
/// Default preparation tilt angles (radians).
pub const DEFAULT_VARTHETAS: [f64; 5] = [
    0.0,
    std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_4,
    3.0 * std::f64::consts::FRAC_PI_8,
    std::f64::consts::FRAC_PI_2,
];
/// Default Monte Carlo sample count.
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Default root seed.
pub const DEFAULT_SEED: u64 = 0;
/// Default CHSH search grid density.
pub const DEFAULT_GRID_DENSITY: usize = 32;
/// Smallest sample count the Monte Carlo command accepts.
pub const MIN_SAMPLES: u64 = 10_000;

/// Errors surfaced to the user, split by exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    /// Bad flags, config values, or parameter ranges; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A computation or write failed after parsing; exit code 1.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

/// Output format of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Comma-separated values with a header row.
    Csv,
    /// A JSON document with explicit column order.
    Json,
    /// A Markdown pipe table.
    Markdown,
}

/// The command being run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    /// Sweep of the recombined configuration.
    PanHome,
    /// Sweep of the open-arm configuration.
    DeZela,
    /// Channel equivalence table between the two configurations.
    Compare,
    /// CHSH search over the setting space.
    Chsh,
    /// Monte Carlo reproduction of the channel means.
    HvCheck,
    /// Noncontextual-mixture feasibility test.
    Feasibility,
}

impl CommandKind {
    /// The subcommand name as typed on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::PanHome => "pan-home",
            CommandKind::DeZela => "de-zela",
            CommandKind::Compare => "compare",
            CommandKind::Chsh => "chsh",
            CommandKind::HvCheck => "hv-check",
            CommandKind::Feasibility => "feasibility",
        }
    }
}

/// Fully resolved inputs of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Which command to run.
    pub command: CommandKind,
    /// Transmission amplitudes (sweeps and path settings).
    pub gammas: Vec<f64>,
    /// Analyzer angles in radians.
    pub thetas: Vec<f64>,
    /// Preparation tilt angles in radians.
    pub varthetas: Vec<f64>,
    /// Monte Carlo sample count per channel.
    pub samples: u64,
    /// Root seed for the Monte Carlo command.
    pub seed: u64,
    /// Grid density of the CHSH search.
    pub grid_density: usize,
    /// Report format.
    pub format: OutputFormat,
    /// Output path; stdout when absent.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Parser)]
#[command(
    name = "pathspin",
    version,
    about = "Path-spin interferometry simulator and hidden-variable toolkit"
)]
pub struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Debug, Args, Default)]
struct CommonArgs {
    /// JSON config file; flags given here override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Interpret all angle inputs (theta, vartheta) as degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Sweep the recombined interferometer over gamma and theta.
    PanHome {
        /// Transmission amplitude gamma in [0, 1]; repeatable.
        #[arg(long = "gamma", value_name = "GAMMA")]
        gamma: Vec<f64>,
        /// Analyzer angle theta; repeatable.
        #[arg(long = "theta", value_name = "THETA", allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep the open-arm configuration over vartheta and theta.
    DeZela {
        /// Preparation tilt angle vartheta; repeatable.
        #[arg(
            long = "vartheta",
            value_name = "VARTHETA",
            allow_negative_numbers = true
        )]
        vartheta: Vec<f64>,
        /// Analyzer angle theta; repeatable.
        #[arg(long = "theta", value_name = "THETA", allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate the channel equivalence between the two configurations.
    Compare {
        /// Preparation tilt angle vartheta; repeatable.
        #[arg(
            long = "vartheta",
            value_name = "VARTHETA",
            allow_negative_numbers = true
        )]
        vartheta: Vec<f64>,
        /// Analyzer angle theta; repeatable.
        #[arg(long = "theta", value_name = "THETA", allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Search the setting space for the largest CHSH combination.
    Chsh {
        /// Points per axis of the coarse search grid (at least 8).
        #[arg(long = "grid-density", value_name = "N")]
        grid_density: Option<usize>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reproduce the channel means with the sphere-model sampler.
    HvCheck {
        /// Preparation tilt angle vartheta; repeatable.
        #[arg(
            long = "vartheta",
            value_name = "VARTHETA",
            allow_negative_numbers = true
        )]
        vartheta: Vec<f64>,
        /// Analyzer angle theta; repeatable.
        #[arg(long = "theta", value_name = "THETA", allow_negative_numbers = true)]
        theta: Vec<f64>,
        /// Samples per channel (at least 10000).
        #[arg(long, value_name = "N")]
        samples: Option<u64>,
        /// Root seed; every grid point derives its own stream from it.
        #[arg(long, value_name = "SEED")]
        seed: Option<u64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Test a setting table for a noncontextual assignment mixture.
    Feasibility {
        /// Path setting gamma in [0, 1]; repeatable.
        #[arg(long = "gamma", value_name = "GAMMA")]
        gamma: Vec<f64>,
        /// Spin setting theta; repeatable.
        #[arg(long = "theta", value_name = "THETA", allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl CliArgs {
    fn common(&self) -> &CommonArgs {
        match &self.command {
            CliCommand::PanHome { common, .. }
            | CliCommand::DeZela { common, .. }
            | CliCommand::Compare { common, .. }
            | CliCommand::Chsh { common, .. }
            | CliCommand::HvCheck { common, .. }
            | CliCommand::Feasibility { common, .. } => common,
        }
    }

    /// Config file requested on the command line, if any.
    pub fn config_path(&self) -> Option<PathBuf> {
        self.common().config.clone()
    }
}

/// Config-file schema; keys mirror the long flag names.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    /// Values for --gamma.
    pub gamma: Option<Vec<f64>>,
    /// Values for --theta.
    pub theta: Option<Vec<f64>>,
    /// Values for --vartheta.
    pub vartheta: Option<Vec<f64>>,
    /// Value for --samples.
    pub samples: Option<u64>,
    /// Value for --seed.
    pub seed: Option<u64>,
    /// Value for --grid-density.
    pub grid_density: Option<usize>,
    /// Value for --format.
    pub format: Option<String>,
    /// Value for --out.
    pub out: Option<String>,
    /// Value for --degrees.
    pub degrees: Option<bool>,
}

/// Parses config-file text. The file is a single JSON object whose
/// keys mirror the long flag names.
pub fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))
}

/// Parses raw command line arguments without touching the filesystem.
pub fn parse_args<I, T>(argv: I) -> Result<CliArgs, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    CliArgs::try_parse_from(argv)
}

fn merge_list(flag: Vec<f64>, file: Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
    if !flag.is_empty() {
        flag
    } else if let Some(values) = file {
        values
    } else {
        default.to_vec()
    }
}

fn check_finite(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Usage(format!("{name} list is empty")));
    }
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(CliError::Usage(format!("{name} value {v} is not finite"))),
        None => Ok(()),
    }
}

fn check_gammas(values: &[f64]) -> Result<(), CliError> {
    check_finite("gamma", values)?;
    match values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        Some(v) => Err(CliError::Usage(format!("gamma {v} lies outside [0, 1]"))),
        None => Ok(()),
    }
}

/// Merges parsed flags with an optional config file and validates the
/// values the selected command will use.
pub fn resolve(args: CliArgs, file: Option<FileConfig>) -> Result<RunConfig, CliError> {
    let file = file.unwrap_or_default();
    let degrees = args.common().degrees || file.degrees.unwrap_or(false);
    let format = match args.common().format {
        Some(f) => f,
        None => match &file.format {
            Some(name) => <OutputFormat as ValueEnum>::from_str(name, true)
                .map_err(|_| CliError::Usage(format!("unknown format {name:?}")))?,
            None => OutputFormat::Csv,
        },
    };
    let out = args
        .common()
        .out
        .clone()
        .or_else(|| file.out.as_ref().map(PathBuf::from));

    let to_radians = |values: Vec<f64>| -> Vec<f64> {
        if degrees {
            values.into_iter().map(f64::to_radians).collect()
        } else {
            values
        }
    };

    let mut config = RunConfig {
        command: CommandKind::PanHome,
        gammas: merge_list(Vec::new(), file.gamma.clone(), &DEFAULT_GAMMAS),
        thetas: Vec::new(),
        varthetas: Vec::new(),
        samples: file.samples.unwrap_or(DEFAULT_SAMPLES),
        seed: file.seed.unwrap_or(DEFAULT_SEED),
        grid_density: file.grid_density.unwrap_or(DEFAULT_GRID_DENSITY),
        format,
        out,
    };

    let file_thetas = file.theta.clone();
    let file_varthetas = file.vartheta.clone();
    match args.command {
        CliCommand::PanHome { gamma, theta, .. } => {
            config.command = CommandKind::PanHome;
            config.gammas = merge_list(gamma, file.gamma, &DEFAULT_GAMMAS);
            config.thetas = to_radians(merge_list(theta, file_thetas, &DEFAULT_THETAS));
            check_gammas(&config.gammas)?;
            check_finite("theta", &config.thetas)?;
        }
        CliCommand::DeZela {
            vartheta, theta, ..
        } => {
            config.command = CommandKind::DeZela;
            config.varthetas = to_radians(merge_list(vartheta, file_varthetas, &DEFAULT_VARTHETAS));
            config.thetas = to_radians(merge_list(theta, file_thetas, &DEFAULT_THETAS));
            check_finite("vartheta", &config.varthetas)?;
            check_finite("theta", &config.thetas)?;
        }
        CliCommand::Compare {
            vartheta, theta, ..
        } => {
            config.command = CommandKind::Compare;
            config.varthetas = to_radians(merge_list(vartheta, file_varthetas, &DEFAULT_VARTHETAS));
            config.thetas = to_radians(merge_list(theta, file_thetas, &DEFAULT_THETAS));
            check_finite("vartheta", &config.varthetas)?;
            check_finite("theta", &config.thetas)?;
        }
        CliCommand::Chsh { grid_density, .. } => {
            config.command = CommandKind::Chsh;
            config.grid_density = grid_density
                .or(file.grid_density)
                .unwrap_or(DEFAULT_GRID_DENSITY);
            if config.grid_density < 8 {
                return Err(CliError::Usage(format!(
                    "grid density {} is below the minimum of 8",
                    config.grid_density
                )));
            }
        }
        CliCommand::HvCheck {
            vartheta,
            theta,
            samples,
            seed,
            ..
        } => {
            config.command = CommandKind::HvCheck;
            config.varthetas = to_radians(merge_list(vartheta, file_varthetas, &DEFAULT_VARTHETAS));
            config.thetas = to_radians(merge_list(theta, file_thetas, &DEFAULT_THETAS));
            config.samples = samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
            config.seed = seed.or(file.seed).unwrap_or(DEFAULT_SEED);
            check_finite("vartheta", &config.varthetas)?;
            check_finite("theta", &config.thetas)?;
            if config.samples < MIN_SAMPLES {
                return Err(CliError::Usage(format!(
                    "{} samples are too few; at least {MIN_SAMPLES} are required",
                    config.samples
                )));
            }
        }
        CliCommand::Feasibility { gamma, theta, .. } => {
            config.command = CommandKind::Feasibility;
            config.gammas = merge_list(gamma, file.gamma, &DEFAULT_GAMMAS);
            config.thetas = to_radians(merge_list(theta, file_thetas, &DEFAULT_THETAS));
            check_gammas(&config.gammas)?;
            check_finite("theta", &config.thetas)?;
            let total = config.gammas.len() + config.thetas.len();
            if total > crate::noncontextual::assignments::MAX_TOTAL_SETTINGS {
                return Err(CliError::Usage(format!(
                    "{total} settings exceed the enumeration limit of 20"
                )));
            }
        }
    }
    Ok(config)
}

/// Derives one generator seed per grid point from the root seed
/// (splitmix64 finalizer of the pair), so points decorrelate while the
/// whole run stays a pure function of the root seed.
fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fail<E: std::fmt::Display>(err: E) -> CliError {
    CliError::Failure(err.to_string())
}

const SWEEP_COLUMNS: [&str; 11] = [
    "gamma",
    "delta",
    "theta",
    "p3",
    "p4",
    "cond_mean_sg1",
    "cond_mean_sg2",
    "weighted_mean_sg1",
    "weighted_mean_sg2",
    "total_expectation",
    "correlator",
];

fn sweep_report(command: &'static str, rows: Vec<SweepRow>) -> Report {
    let cells = rows
        .into_iter()
        .map(|row| {
            let opt = |v: Option<f64>| v.map_or(Cell::Empty, Cell::Float);
            vec![
                Cell::Float(row.gamma),
                Cell::Float(row.delta),
                Cell::Float(row.theta),
                Cell::Float(row.report.p3),
                Cell::Float(row.report.p4),
                opt(row.report.cond_mean_sg1),
                opt(row.report.cond_mean_sg2),
                Cell::Float(row.report.weighted_mean_sg1),
                Cell::Float(row.report.weighted_mean_sg2),
                Cell::Float(row.report.total_expectation),
                Cell::Float(row.correlator),
            ]
        })
        .collect();
    Report {
        command,
        columns: SWEEP_COLUMNS.to_vec(),
        rows: cells,
    }
}

fn witness_cells(witness: &Option<ChshWitness>, gammas: &[f64], thetas: &[f64]) -> [Cell; 6] {
    match witness {
        Some(w) => {
            let signs: String = w
                .signs
                .iter()
                .map(|&s| if s < 0.0 { '-' } else { '+' })
                .collect();
            [
                Cell::Float(w.value),
                Cell::Float(gammas[w.path_pair.0]),
                Cell::Float(gammas[w.path_pair.1]),
                Cell::Float(thetas[w.spin_pair.0]),
                Cell::Float(thetas[w.spin_pair.1]),
                Cell::Text(signs),
            ]
        }
        None => [
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ],
    }
}

/// Runs a resolved config and assembles its report.
pub fn execute(config: &RunConfig) -> Result<Report, CliError> {
    match config.command {
        CommandKind::PanHome => {
            let rows = sweep_pan_home(&config.gammas, &config.thetas).map_err(fail)?;
            Ok(sweep_report("pan-home", rows))
        }
        CommandKind::DeZela => {
            let rows = sweep_de_zela(&config.varthetas, &config.thetas).map_err(fail)?;
            Ok(sweep_report("de-zela", rows))
        }
        CommandKind::Compare => {
            let mut rows = Vec::new();
            for &vartheta in &config.varthetas {
                let basis = TiltedBasis::new(vartheta).map_err(fail)?;
                for &theta in &config.thetas {
                    let setting = SpinSetting::new(theta).map_err(fail)?;
                    let cmp = compare_channels(&basis, &setting).map_err(fail)?;
                    rows.push(vec![
                        Cell::Float(cmp.vartheta),
                        Cell::Float(cmp.theta),
                        Cell::Float(cmp.dz_ch1),
                        Cell::Float(cmp.dz_ch2),
                        Cell::Float(cmp.ph_sg1_mapped),
                        Cell::Float(cmp.ph_sg2_mapped),
                        Cell::Float(cmp.residual_ch1),
                        Cell::Float(cmp.residual_ch2),
                    ]);
                }
            }
            Ok(Report {
                command: "compare",
                columns: vec![
                    "vartheta",
                    "theta",
                    "dz_ch1",
                    "dz_ch2",
                    "ph_sg1_mapped",
                    "ph_sg2_mapped",
                    "residual_ch1",
                    "residual_ch2",
                ],
                rows,
            })
        }
        CommandKind::Chsh => {
            let outcome = chsh_search(&prepare_pan_home(), config.grid_density).map_err(fail)?;
            let signs: String = outcome
                .signs
                .iter()
                .map(|&s| if s < 0.0 { '-' } else { '+' })
                .collect();
            Ok(Report {
                command: "chsh",
                columns: vec![
                    "grid_density",
                    "value",
                    "gamma1",
                    "gamma2",
                    "theta1",
                    "theta2",
                    "e11",
                    "e12",
                    "e21",
                    "e22",
                    "signs",
                ],
                rows: vec![vec![
                    Cell::Int(config.grid_density as u64),
                    Cell::Float(outcome.value),
                    Cell::Float(outcome.gammas[0]),
                    Cell::Float(outcome.gammas[1]),
                    Cell::Float(outcome.thetas[0]),
                    Cell::Float(outcome.thetas[1]),
                    Cell::Float(outcome.table[0][0]),
                    Cell::Float(outcome.table[0][1]),
                    Cell::Float(outcome.table[1][0]),
                    Cell::Float(outcome.table[1][1]),
                    Cell::Text(signs),
                ]],
            })
        }
        CommandKind::HvCheck => {
            let mut rows = Vec::new();
            let mut index = 0u64;
            for &vartheta in &config.varthetas {
                let basis = TiltedBasis::new(vartheta).map_err(fail)?;
                for &theta in &config.thetas {
                    let setting = SpinSetting::new(theta).map_err(fail)?;
                    let seed = derive_seed(config.seed, index);
                    index += 1;
                    let check = reproduce_de_zela_channels(&basis, &setting, config.samples, seed)
                        .map_err(fail)?;
                    for channel in check.channels {
                        rows.push(vec![
                            Cell::Float(check.vartheta),
                            Cell::Float(check.theta),
                            Cell::Int(u64::from(channel.channel)),
                            Cell::Float(channel.quantum),
                            Cell::Float(channel.sampled),
                            Cell::Float(channel.abs_error),
                            Cell::Float(check.tolerance),
                            Cell::Text(
                                if channel.abs_error <= check.tolerance {
                                    "true"
                                } else {
                                    "false"
                                }
                                .to_owned(),
                            ),
                        ]);
                    }
                }
            }
            Ok(Report {
                command: "hv-check",
                columns: vec![
                    "vartheta",
                    "theta",
                    "channel",
                    "quantum",
                    "sampled",
                    "abs_error",
                    "tolerance",
                    "within_tolerance",
                ],
                rows,
            })
        }
        CommandKind::Feasibility => {
            let path_settings = config
                .gammas
                .iter()
                .map(|&g| BeamSplitterParams::from_gamma(g))
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            let spin_settings = config
                .thetas
                .iter()
                .map(|&t| SpinSetting::new(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(fail)?;
            let outcome = feasibility_lp(&prepare_pan_home(), &path_settings, &spin_settings)
                .map_err(fail)?;
            let verdict = if outcome.feasible {
                "FEASIBLE"
            } else {
                "INFEASIBLE"
            };
            let num_assignments = 1u64 << (config.gammas.len() + config.thetas.len());
            let witness = witness_cells(&outcome.witness, &config.gammas, &config.thetas);
            let mut row = vec![
                Cell::Text(verdict.to_owned()),
                Cell::Int(config.gammas.len() as u64),
                Cell::Int(config.thetas.len() as u64),
                Cell::Int(num_assignments),
                Cell::Float(outcome.max_residual),
            ];
            row.extend(witness);
            Ok(Report {
                command: "feasibility",
                columns: vec![
                    "verdict",
                    "num_path_settings",
                    "num_spin_settings",
                    "num_assignments",
                    "max_residual",
                    "witness_value",
                    "witness_gamma1",
                    "witness_gamma2",
                    "witness_theta1",
                    "witness_theta2",
                    "witness_signs",
                ],
                rows: vec![row],
            })
        }
    }
}

/// Renders a report in the requested format.
pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => report.to_json(),
        OutputFormat::Markdown => report.to_markdown(),
    }
}

/// Full command line entry point; returns the process exit code.
pub fn main_entry<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match parse_args(argv) {
        Ok(args) => args,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    let file = match args.config_path() {
        Some(path) => match fs::read_to_string(&path) {
            Ok(text) => match parse_config(&text) {
                Ok(parsed) => Some(parsed),
                Err(err) => {
                    eprintln!("pathspin: {err}");
                    return err.exit_code();
                }
            },
            Err(err) => {
                eprintln!("pathspin: cannot read {}: {err}", path.display());
                return 2;
            }
        },
        None => None,
    };
    let config = match resolve(args, file) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("pathspin: {err}");
            return err.exit_code();
        }
    };
    let report = match execute(&config) {
        Ok(report) => report,
        Err(err) => {
            eprintln!("pathspin: {err}");
            return err.exit_code();
        }
    };
    let text = render(&report, config.format);
    match &config.out {
        Some(path) => {
            if let Err(err) = fs::write(path, text) {
                eprintln!("pathspin: cannot write {}: {err}", path.display());
                return 1;
            }
        }
        None => print!("{text}"),
    }
    0
}
