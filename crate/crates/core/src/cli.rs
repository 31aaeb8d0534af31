//! Command-line front end: figure data, simulation and analysis.
//!
//! Every subcommand writes plot-ready CSV (or JSON-lines records) to `--out`,
//! or to standard output when no path is given.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bath::{self, BathSpec, SpectralFamily};
use crate::error::Error;
use crate::interference::{self, linspace, logspace, CurveKind};
use crate::jump_dynamics::SourceConfig;
use crate::trajectories::{self, Sampler, Window};

const UNITS: &str = "Units: every quantity is dimensionless in the bath cutoff ω_c. \
Times (tau, delta, t1) are ω_c·t, the decay rate g is γ/ω_c and theta is ω_c·β.";

/// Exit statuses.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const NUMERIC: i32 = 3;
    pub const IO: i32 = 4;
    pub const EMPTY: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(
    name = "homsim",
    version,
    about = "Time-resolved two-photon interference from dephasing emitters",
    after_help = UNITS
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decoherence function Γ(τ): closed form next to direct quadrature.
    Gamma(GammaArgs),
    /// Time-resolved visibility of the three reference baths.
    Fig1(Fig1Args),
    /// Post-selected visibility of the three reference baths against window width.
    Fig2(Fig2Args),
    /// Time-resolved visibility ν(τ) for one source configuration.
    Visibility(VisibilityArgs),
    /// Post-selected visibility ν′(Δ) for one source configuration.
    Windowed(WindowedArgs),
    /// Draw click records and write them as JSON lines.
    Simulate(SimulateArgs),
    /// Estimate the visibility from a record file.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BathKind {
    Ohmic,
    Superohmic,
    Markovian,
    PowerLaw,
}

#[derive(Debug, Clone, Args)]
pub struct BathArgs {
    /// Spectral density of the bath.
    #[arg(long, value_enum, default_value = "ohmic")]
    pub bath: BathKind,
    /// Coupling strength A.
    #[arg(long = "A", default_value_t = 0.5, allow_negative_numbers = true)]
    pub a: f64,
    /// Inverse temperature θ = ω_c·β.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Exponent n of a power-law spectral density (with --bath power-law).
    #[arg(long)]
    pub exponent: Option<f64>,
}

impl BathArgs {
    fn spec(&self) -> Result<BathSpec, CliError> {
        bath_spec(self.bath, self.a, self.theta, self.exponent)
    }
}

/// Second emitter; any flag given here makes the sources distinct, with
/// unspecified values copied from the first emitter.
#[derive(Debug, Clone, Args)]
pub struct SecondBathArgs {
    /// Spectral density of the second emitter's bath.
    #[arg(long, value_enum)]
    pub bath2: Option<BathKind>,
    /// Coupling strength of the second emitter.
    #[arg(long = "A2", allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Inverse temperature of the second emitter.
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    /// Power-law exponent of the second emitter.
    #[arg(long)]
    pub exponent2: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub bath: BathArgs,
    #[command(flatten)]
    pub second: SecondBathArgs,
    /// Spontaneous emission rate g = γ/ω_c.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub g: f64,
}

impl SourceArgs {
    fn source(&self) -> Result<SourceConfig, CliError> {
        let first = self.bath.spec()?;
        let s = &self.second;
        let src =
            if s.bath2.is_none() && s.a2.is_none() && s.theta2.is_none() && s.exponent2.is_none() {
                SourceConfig::identical(self.g, first)
            } else {
                let second = bath_spec(
                    s.bath2.unwrap_or(self.bath.bath),
                    s.a2.unwrap_or(self.bath.a),
                    s.theta2.unwrap_or(self.bath.theta),
                    s.exponent2.or(self.bath.exponent),
                )?;
                SourceConfig::pair(self.g, first, second)
            };
        src.map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TauGrid {
    /// Largest τ on the grid; the grid starts at 0.
    #[arg(long, default_value_t = 10.0)]
    pub tau_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

impl TauGrid {
    fn grid(&self) -> Result<Vec<f64>, CliError> {
        usage(
            self.tau_max.is_finite() && self.tau_max > 0.0,
            "--tau-max must be positive",
        )?;
        usage(self.points >= 2, "--points must be at least 2")?;
        Ok(linspace(0.0, self.tau_max, self.points))
    }
}

#[derive(Debug, Clone, Args)]
pub struct DeltaGrid {
    /// Smallest window width Δ.
    #[arg(long, default_value_t = 1e-3)]
    pub delta_min: f64,
    /// Largest window width Δ.
    #[arg(long, default_value_t = 10.0)]
    pub delta_max: f64,
    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
}

impl DeltaGrid {
    fn grid(&self) -> Result<Vec<f64>, CliError> {
        usage(
            self.delta_min > 0.0 && self.delta_max > self.delta_min && self.delta_max.is_finite(),
            "need 0 < --delta-min < --delta-max",
        )?;
        usage(self.points >= 2, "--points must be at least 2")?;
        Ok(logspace(self.delta_min, self.delta_max, self.points))
    }
}

#[derive(Debug, Clone, Args)]
pub struct GammaArgs {
    #[command(flatten)]
    pub bath: BathArgs,
    #[command(flatten)]
    pub grid: TauGrid,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    /// Coupling strength A shared by the three baths.
    #[arg(long = "A", default_value_t = 0.5, allow_negative_numbers = true)]
    pub a: f64,
    /// Inverse temperature θ = ω_c·β.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub theta: f64,
    #[command(flatten)]
    pub grid: TauGrid,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Fig2Args {
    /// Coupling strength A shared by the three baths.
    #[arg(long = "A", default_value_t = 0.5, allow_negative_numbers = true)]
    pub a: f64,
    /// Inverse temperature θ = ω_c·β.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Spontaneous emission rate g = γ/ω_c.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub g: f64,
    #[command(flatten)]
    pub grid: DeltaGrid,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VisibilityArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// First-click time, used only for distinct sources.
    #[arg(long, default_value_t = 0.0)]
    pub t1: f64,
    #[command(flatten)]
    pub grid: TauGrid,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowedArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Also require t₁ ≤ this value (distinct sources only).
    #[arg(long)]
    pub t1_max: Option<f64>,
    #[command(flatten)]
    pub grid: DeltaGrid,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Number of records.
    #[arg(long)]
    pub n: usize,
    /// Seed of the random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (all cores by default).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output JSON-lines path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Record file written by `simulate`.
    #[arg(long)]
    pub input: PathBuf,
    /// Accept click separations τ ≤ Δ (default: no limit).
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Accept first clicks t₁ ≤ this value.
    #[arg(long, allow_negative_numbers = true)]
    pub t1_max: Option<f64>,
    /// Number of uniform τ bins for a binned visibility table.
    #[arg(long, requires = "bins_out")]
    pub bins: Option<usize>,
    /// Upper edge of the τ bins.
    #[arg(long, default_value_t = 10.0)]
    pub bin_max: f64,
    /// Output CSV path for the binned table.
    #[arg(long)]
    pub bins_out: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Empty(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Numeric(_) => exit::NUMERIC,
            CliError::Io { .. } => exit::IO,
            CliError::Empty(_) => exit::EMPTY,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Unsupported(_) | Error::NotIdentical => {
                CliError::Usage(e.to_string())
            }
            Error::EmptyEnsemble { .. } => CliError::Empty(e),
            Error::Divergent { .. } | Error::NonConvergence { .. } => CliError::Numeric(e),
        }
    }
}

fn usage(cond: bool, msg: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Usage(msg.into()))
    }
}

fn bath_spec(
    kind: BathKind,
    a: f64,
    theta: f64,
    exponent: Option<f64>,
) -> Result<BathSpec, CliError> {
    let spec = match (kind, exponent) {
        (BathKind::PowerLaw, Some(n)) => BathSpec::power_law(n, a, theta),
        (BathKind::PowerLaw, None) => {
            return Err(CliError::Usage("--bath power-law needs --exponent".into()))
        }
        (_, Some(_)) => return Err(CliError::Usage("--exponent needs --bath power-law".into())),
        (BathKind::Ohmic, None) => BathSpec::ohmic(a, theta),
        (BathKind::Superohmic, None) => BathSpec::superohmic(a, theta),
        (BathKind::Markovian, None) => BathSpec::markovian(a, theta),
    };
    Ok(spec?)
}

fn reference_baths(a: f64, theta: f64) -> Result<[BathSpec; 3], CliError> {
    Ok([
        BathSpec::ohmic(a, theta)?,
        BathSpec::superohmic(a, theta)?,
        BathSpec::markovian(a, theta)?,
    ])
}

fn io_error(path: Option<&Path>) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.map_or_else(|| "<stdout>".into(), |p| p.display().to_string()),
        source,
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_error(path))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn fmt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

/// Write a header and rows of optional numbers; missing values stay blank.
fn write_csv(
    path: Option<&Path>,
    header: &[&str],
    rows: &[Vec<Option<f64>>],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(open_output(path)?);
    let mut emit = || -> Result<(), csv::Error> {
        w.write_record(header)?;
        for row in rows {
            w.write_record(row.iter().map(|&x| fmt(x)))?;
        }
        w.flush()?;
        Ok(())
    };
    emit().map_err(|e| io_error(path)(e.into()))
}

/// Parse `args` (program name first), run the subcommand and return its exit
/// status. Diagnostics go to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::USAGE
            } else {
                exit::SUCCESS
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            eprintln!("homsim: {e}");
            e.exit_code()
        }
    }
}

/// Run one parsed subcommand.
pub fn execute(cmd: &Command) -> Result<(), CliError> {
    match cmd {
        Command::Gamma(a) => cmd_gamma(a),
        Command::Fig1(a) => cmd_fig1(a),
        Command::Fig2(a) => cmd_fig2(a),
        Command::Visibility(a) => cmd_visibility(a),
        Command::Windowed(a) => cmd_windowed(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Analyze(a) => cmd_analyze(a),
    }
}

fn cmd_gamma(args: &GammaArgs) -> Result<(), CliError> {
    use rayon::prelude::*;
    let spec = args.bath.spec()?;
    let grid = args.grid.grid()?;
    let rows = grid
        .par_iter()
        .map(|&tau| {
            let closed = match bath::gamma_closed(&spec, tau) {
                Ok(v) => Some(v.gamma),
                Err(Error::Unsupported(_)) => None,
                Err(e) => return Err(e),
            };
            let quad = match spec.family() {
                SpectralFamily::Markovian => None,
                _ => Some(bath::gamma_quadrature(&spec, tau)?.gamma),
            };
            let diff = closed.zip(quad).map(|(c, q)| (c - q).abs());
            Ok(vec![Some(tau), closed, quad, diff])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_csv(
        args.out.as_deref(),
        &["tau", "gamma_closed", "gamma_quadrature", "abs_diff"],
        &rows,
    )
}

fn three_bath_rows(
    kind: CurveKind,
    baths: &[BathSpec; 3],
    g: f64,
    grid: &[f64],
) -> Result<Vec<Vec<Option<f64>>>, CliError> {
    let curves = baths
        .iter()
        .map(|b| interference::sample_curve(kind, &SourceConfig::identical(g, *b)?, grid))
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(grid
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            std::iter::once(Some(x))
                .chain(curves.iter().map(|c| Some(c.values[i])))
                .collect()
        })
        .collect())
}

fn cmd_fig1(args: &Fig1Args) -> Result<(), CliError> {
    let baths = reference_baths(args.a, args.theta)?;
    let rows = three_bath_rows(CurveKind::TimeResolved, &baths, 0.01, &args.grid.grid()?)?;
    write_csv(
        args.out.as_deref(),
        &["tau", "nu_ohmic", "nu_superohmic", "nu_markovian"],
        &rows,
    )
}

fn cmd_fig2(args: &Fig2Args) -> Result<(), CliError> {
    let baths = reference_baths(args.a, args.theta)?;
    let rows = three_bath_rows(CurveKind::Windowed, &baths, args.g, &args.grid.grid()?)?;
    write_csv(
        args.out.as_deref(),
        &["delta", "nu_ohmic", "nu_superohmic", "nu_markovian"],
        &rows,
    )
}

fn cmd_visibility(args: &VisibilityArgs) -> Result<(), CliError> {
    use rayon::prelude::*;
    let src = args.source.source()?;
    usage(
        args.t1.is_finite() && args.t1 >= 0.0,
        "--t1 must be nonnegative",
    )?;
    let grid = args.grid.grid()?;
    let rows = grid
        .par_iter()
        .map(|&tau| {
            let nu = if src.is_identical() {
                interference::visibility(&src, tau)?
            } else {
                interference::visibility_nonidentical(&src, args.t1, tau)?
            };
            Ok(vec![Some(tau), Some(nu)])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_csv(args.out.as_deref(), &["tau", "nu"], &rows)
}

fn cmd_windowed(args: &WindowedArgs) -> Result<(), CliError> {
    use rayon::prelude::*;
    let src = args.source.source()?;
    usage(
        args.t1_max.is_none() || !src.is_identical(),
        "--t1-max applies to distinct sources only",
    )?;
    let grid = args.grid.grid()?;
    let b = *src.bath1();
    let rows = grid
        .par_iter()
        .map(|&delta| {
            let nu = if src.is_identical() {
                interference::windowed_visibility(&src, delta)?
            } else {
                interference::windowed_visibility_nonidentical(&src, delta, args.t1_max)?
            };
            let closed = match (src.is_identical(), b.family()) {
                (true, SpectralFamily::Markovian) => {
                    Some(interference::windowed_visibility_markovian(&b, delta)?)
                }
                (true, SpectralFamily::Ohmic) => Some(
                    interference::windowed_visibility_ohmic_low_temperature(&b, delta)?,
                ),
                _ => None,
            };
            let kept = interference::retained_fraction(src.g(), delta);
            Ok(vec![Some(delta), Some(nu), closed, Some(kept)])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    write_csv(
        args.out.as_deref(),
        &[
            "delta",
            "nu_windowed",
            "nu_closed_form",
            "retained_fraction",
        ],
        &rows,
    )
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let src = args.source.source()?;
    usage(args.n >= 1, "--n must be at least 1")?;
    usage(args.workers != Some(0), "--workers must be at least 1")?;
    let sampler = Sampler::new(src)?;
    let records = trajectories::simulate_with(args.seed, args.n, &sampler, args.workers)?;
    let path = args.out.as_deref();
    let out = open_output(path)?;
    trajectories::write_records(&records, out).map_err(io_error(path))
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let mut window = match args.delta {
        Some(d) => Window::new(d)?,
        None => Window::unbounded(),
    };
    if let Some(t) = args.t1_max {
        window = window.with_t1_max(t)?;
    }
    let edges = match args.bins {
        Some(k) => {
            usage(k >= 1, "--bins must be at least 1")?;
            usage(
                args.bin_max.is_finite() && args.bin_max > 0.0,
                "--bin-max must be positive",
            )?;
            Some(linspace(0.0, args.bin_max, k + 1))
        }
        None => None,
    };
    let input = Some(args.input.as_path());
    let file = File::open(&args.input).map_err(io_error(input))?;
    let records = trajectories::read_records(BufReader::new(file)).map_err(io_error(input))?;
    let est = trajectories::estimate_visibility(&records, &window)?;
    println!("records     {}", records.len());
    println!(
        "retained    {} (same {}, different {})",
        est.retained(),
        est.n_same,
        est.n_diff
    );
    println!("efficiency  {}", est.efficiency);
    println!("nu_hat      {}", est.nu_hat);
    println!("ci95        [{}, {}]", est.ci_low, est.ci_high);
    if let Some(edges) = edges {
        let binned = trajectories::binned_visibility(&records, &edges)?;
        let rows: Vec<_> = binned
            .bins
            .iter()
            .map(|b| {
                let e = b.estimate;
                vec![
                    Some(b.mid()),
                    Some(b.n as f64),
                    e.map(|e| e.nu_hat),
                    e.map(|e| e.ci_low),
                    e.map(|e| e.ci_high),
                ]
            })
            .collect();
        write_csv(
            args.bins_out.as_deref(),
            &["tau_mid", "n", "nu_hat", "ci_low", "ci_high"],
            &rows,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("homsim").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults_are_reference_parameters() {
        match parse(&["fig2"]).command {
            Command::Fig2(a) => {
                assert_eq!((a.a, a.theta, a.g), (0.5, 10.0, 0.01));
                assert_eq!(a.grid.delta_min, 1e-3);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn second_bath_flags_make_distinct_sources() {
        let Command::Visibility(v) = parse(&["visibility"]).command else {
            unreachable!()
        };
        assert!(v.source.source().unwrap().is_identical());
        let Command::Visibility(v) = parse(&["visibility", "--A2", "0.3"]).command else {
            unreachable!()
        };
        let src = v.source.source().unwrap();
        assert!(!src.is_identical());
        assert_eq!(src.bath2().coupling(), 0.3);
        assert_eq!(src.bath2().family(), SpectralFamily::Ohmic);
    }

    #[test]
    fn exponent_requires_power_law() {
        assert!(bath_spec(BathKind::Ohmic, 0.5, 10.0, Some(2.0)).is_err());
        assert!(bath_spec(BathKind::PowerLaw, 0.5, 10.0, None).is_err());
        let b = bath_spec(BathKind::PowerLaw, 0.5, 10.0, Some(2.0)).unwrap();
        assert_eq!(b.family(), SpectralFamily::PowerLaw(2.0));
    }

    #[test]
    fn error_classes() {
        assert_eq!(CliError::from(Error::Domain("x".into())).exit_code(), 2);
        assert_eq!(
            CliError::from(Error::Divergent { exponent: 0.5 }).exit_code(),
            3
        );
        assert_eq!(
            CliError::from(Error::EmptyEnsemble { total: 3 }).exit_code(),
            5
        );
    }

    #[test]
    fn help_mentions_units() {
        let err = Cli::try_parse_from(["homsim", "--help"]).unwrap_err();
        assert!(err.to_string().contains("ω_c"));
        assert_eq!(run(["homsim", "--help"]), 0);
        assert_eq!(run(["homsim", "bogus"]), 2);
    }
}
