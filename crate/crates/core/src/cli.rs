//! Command-line front end. Each subcommand produces a [`Table`] that is
//! rendered as CSV or column-array JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::channels::{self, ChannelError, DecaySample};
use crate::density::{DensityMatrix, Slit};
use crate::io::{self, InputError};
use crate::metrics::{self, MetricError};
use crate::propagation::{self, GaussianBeamPair, PropagationError};
use crate::screen::{self, ScreenError, SlitGeometry};

pub const DIGITS_ENV: &str = "COHPOL_FLOAT_DIGITS";
pub const DEFAULT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "cohpol", version, about = "Coherence and polarization of photon ensembles from a 4×4 density matrix")]
pub struct Cli {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree of coherence, Stokes vectors and degrees of polarization.
    Metrics(MetricsArgs),
    /// Double-slit screen pattern.
    Screen(ScreenArgs),
    /// Degree of polarization of two diffracting subensembles versus z.
    Propagate(PropagateArgs),
    /// Decoherence under an environment channel.
    Evolve(EvolveArgs),
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub state: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScreenArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// Wavenumber (rad/m).
    #[arg(long)]
    pub k: f64,
    /// Slit separation d (m).
    #[arg(long = "slit-sep")]
    pub slit_sep: f64,
    /// Mask-to-screen distance L (m).
    #[arg(long)]
    pub distance: f64,
    /// Defaults to −5 fringe periods.
    #[arg(long = "y-min", allow_negative_numbers = true)]
    pub y_min: Option<f64>,
    /// Defaults to +5 fringe periods.
    #[arg(long = "y-max", allow_negative_numbers = true)]
    pub y_max: Option<f64>,
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct PropagateArgs {
    /// Rayleigh length of the H subensemble (m).
    #[arg(long, default_value_t = 1.0)]
    pub z1: f64,
    /// Rayleigh length of the V subensemble (m).
    #[arg(long, default_value_t = 2.0)]
    pub z2: f64,
    /// Initial population of the H subensemble; the V one gets 1 − w1.
    #[arg(long, default_value_t = 0.5)]
    pub w1: f64,
    /// Largest propagation distance (m).
    #[arg(long = "z-max", default_value_t = 10.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Waist widths (m); they do not affect the on-axis weights.
    #[arg(long, default_value_t = 1e-3)]
    pub sigma1: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub sigma2: f64,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub channel: PathBuf,
    /// Interaction rate Γ (1/s); continuous mode only.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Final time (s); continuous mode only.
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = EvolveMode::Continuous)]
    pub mode: EvolveMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvolveMode {
    /// Closed-form e^{−Γt} decay for a built-in channel kind.
    Continuous,
    /// Repeated application of the channel file's Kraus set; `t` is the step
    /// index.
    Discrete,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: InputError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Screen(#[from] ScreenError),
    #[error(transparent)]
    Propagation(#[from] PropagationError),
    #[error(transparent)]
    Channel(ChannelError),
    #[error(transparent)]
    Metric(MetricError),
    #[error("writing output: {0}")]
    Write(std::io::Error),
}

impl From<ChannelError> for CliError {
    fn from(err: ChannelError) -> Self {
        match err {
            ChannelError::Metric(m) => CliError::Metric(m),
            other => CliError::Channel(other),
        }
    }
}

impl CliError {
    /// 2 for input and validation problems, 3 for domain errors such as an
    /// unpopulated slit, 1 for I/O failures on output.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Metric(_) => 3,
            CliError::Write(_) => 1,
            _ => 2,
        }
    }
}

/// Column-oriented result. `None` cells render as `undefined`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    fn new(headers: Vec<&'static str>) -> Self {
        Self { headers, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.headers.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| format_cell(*c, digits)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, digits: usize) -> String {
        let mut obj = Map::new();
        for (i, name) in self.headers.iter().enumerate() {
            let values = self
                .rows
                .iter()
                .map(|row| match row[i] {
                    Some(x) if x.is_finite() => format_cell(Some(x), digits)
                        .parse::<f64>()
                        .ok()
                        .and_then(serde_json::Number::from_f64)
                        .map_or(Value::Null, Value::Number),
                    Some(_) => Value::Null,
                    None => Value::String("undefined".into()),
                })
                .collect();
            obj.insert((*name).to_string(), Value::Array(values));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json value serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format, digits: usize) -> String {
        match format {
            Format::Csv => self.to_csv(digits),
            Format::Json => self.to_json(digits),
        }
    }
}

/// Scientific notation with `digits` significant digits.
pub fn format_float(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    // Avoid a "-0" that depends on which branch produced the zero.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.*e}", digits - 1, x)
}

fn format_cell(cell: Option<f64>, digits: usize) -> String {
    cell.map_or_else(|| "undefined".to_string(), |x| format_float(x, digits))
}

/// Reads the output precision from [`DIGITS_ENV`].
pub fn float_digits() -> Result<usize, CliError> {
    match std::env::var(DIGITS_ENV) {
        Err(_) => Ok(DEFAULT_DIGITS),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(d) if (1..=17).contains(&d) => Ok(d),
            _ => Err(CliError::Usage(format!("{DIGITS_ENV} must be an integer in 1..=17, got {v:?}"))),
        },
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

pub fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    io::parse_state(&read(path)?).map_err(|source| CliError::Input { path: path.display().to_string(), source })
}

fn optional<T>(r: Result<T, MetricError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(MetricError::SlitUnpopulated(_)) => Ok(None),
        Err(e) => Err(CliError::Metric(e)),
    }
}

pub fn run_metrics(rho: &DensityMatrix) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        "mu_re", "mu_im", "abs_mu", "s0_q0", "s1_q0", "s2_q0", "s3_q0", "s0_q1", "s1_q1", "s2_q1", "s3_q1", "p0", "p1",
    ]);
    let mu = optional(metrics::degree_of_coherence(rho))?;
    let mut row = vec![mu.map(|m| m.value().re), mu.map(|m| m.value().im), mu.map(|m| m.modulus())];
    for slit in [Slit::Q0, Slit::Q1] {
        let s = metrics::stokes(rho, slit);
        row.extend([s.s0, s.s1, s.s2, s.s3].map(Some));
    }
    for slit in [Slit::Q0, Slit::Q1] {
        row.push(optional(metrics::degree_of_polarization(rho, slit))?.map(|p| p.p));
    }
    table.rows.push(row);
    Ok(table)
}

pub fn run_screen(rho: &DensityMatrix, args: &ScreenArgs) -> Result<Table, CliError> {
    let geom = SlitGeometry::new(args.slit_sep, args.distance, args.k)?;
    let span = 5.0 * geom.fringe_period();
    let samples = screen::pattern(
        rho,
        &geom,
        args.y_min.unwrap_or(-span),
        args.y_max.unwrap_or(span),
        args.points,
    )?;
    let normalized = screen::normalized_density(&samples);
    let mut table = Table::new(vec!["y", "rho_total", "rho_q0", "rho_q1", "rho_normalized"]);
    table.rows = samples
        .iter()
        .zip(normalized)
        .map(|(s, n)| vec![Some(s.y), Some(s.rho_total), Some(s.rho_q0), Some(s.rho_q1), Some(n)])
        .collect();
    Ok(table)
}

pub fn run_propagate(args: &PropagateArgs) -> Result<Table, CliError> {
    let pair = GaussianBeamPair::new(args.sigma1, args.sigma2, args.z1, args.z2, args.w1, 1.0 - args.w1)?;
    let curve = propagation::polarization_curve(&pair, args.z_max, args.steps)?;
    let mut table = Table::new(vec!["z_over_z1", "w1", "w2", "p", "abs_mu"]);
    table.rows = curve
        .iter()
        .map(|s| vec![Some(s.z / args.z1), Some(s.w1), Some(s.w2), Some(s.p), Some(s.mu)])
        .collect();
    Ok(table)
}

pub fn run_evolve(rho: &DensityMatrix, spec: &io::ChannelSpec, args: &EvolveArgs) -> Result<Table, CliError> {
    let series: Vec<DecaySample> = match args.mode {
        EvolveMode::Continuous => {
            let kind = spec.kind().ok_or_else(|| {
                CliError::Usage("custom Kraus channels have no continuous limit; use --mode discrete".into())
            })?;
            let gamma = args.gamma.ok_or_else(|| CliError::Usage("--gamma is required in continuous mode".into()))?;
            let t_max = args.t_max.ok_or_else(|| CliError::Usage("--t-max is required in continuous mode".into()))?;
            channels::decay_report(rho, kind, gamma, t_max, args.steps)?
        }
        EvolveMode::Discrete => channels::step_report(&spec.to_channel()?, rho, args.steps)?,
    };
    let mut table = Table::new(vec!["t", "abs_mu", "p0", "p1"]);
    table.rows = series
        .iter()
        .map(|s| vec![Some(s.t), Some(s.abs_mu), Some(s.p0), Some(s.p1)])
        .collect();
    Ok(table)
}

/// Runs the parsed command and returns its table.
pub fn execute(cli: &Cli) -> Result<Table, CliError> {
    match &cli.command {
        Command::Metrics(a) => run_metrics(&load_state(&a.state)?),
        Command::Screen(a) => run_screen(&load_state(&a.state)?, a),
        Command::Propagate(a) => run_propagate(a),
        Command::Evolve(a) => {
            let rho = load_state(&a.state)?;
            let spec = io::parse_channel(&read(&a.channel)?)
                .map_err(|source| CliError::Input { path: a.channel.display().to_string(), source })?;
            run_evolve(&rho, &spec, a)
        }
    }
}

/// Executes and writes the rendered table to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let digits = float_digits()?;
    let rendered = execute(cli)?.render(cli.format, digits);
    match &cli.out {
        Some(path) => fs::write(path, rendered).map_err(CliError::Write),
        None => std::io::stdout().lock().write_all(rendered.as_bytes()).map_err(CliError::Write),
    }
}
