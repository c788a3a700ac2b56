//! Command-line front-end.
//!
//! Exit codes: 0 on success, 1 on runtime or I/O failure, 2 on usage errors.
//! Output goes to `--out PATH` if given, otherwise to a default file name in
//! `$GAUSSCAP_OUT_DIR` if set, otherwise to stdout.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::capacity::OptimizerSettings;
use crate::channels::ChannelParams;
use crate::error::Error;
use crate::optimize::linear_grid;
use crate::report::{
    compile_report, rate_report, selfcheck, sweep_gamma, sweep_nbar, threshold_report,
    write_sweep_csv, SweepAxis, SweepRow,
};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GAUSSCAP_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gausscap",
    version,
    about = "Achievable rates of Gaussian thermal loss channels and GFT circuit compilation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-mode rate f, correlated bound F and the optimal x* = M/N.
    Rate(RateArgs),
    /// Rates over a grid of loss probabilities (CSV by default).
    SweepGamma(SweepGammaArgs),
    /// Rates over a grid of input photon numbers (CSV by default).
    SweepNbar(SweepNbarArgs),
    /// Crossover loss probability gamma* and photon number n_bar*.
    Thresholds(ThresholdArgs),
    /// Compile the N-mode Gaussian Fourier transform into gates.
    Compile(CompileArgs),
    /// Run a quick internal consistency check.
    Selfcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `start:stop:steps`, `steps` points inclusive of both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linear_grid(self.start, self.stop, self.steps)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(format!("expected start:stop:steps, got `{s}`"));
        };
        let start: f64 = start
            .parse()
            .map_err(|_| format!("bad grid start `{start}`"))?;
        let stop: f64 = stop
            .parse()
            .map_err(|_| format!("bad grid stop `{stop}`"))?;
        let steps: usize = steps
            .parse()
            .map_err(|_| format!("bad grid step count `{steps}`"))?;
        if steps < 2 || !(stop > start) {
            return Err("grid needs start < stop and at least 2 points".into());
        }
        Ok(Self { start, stop, steps })
    }
}

fn parse_mn(s: &str) -> Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected M,N, got `{s}`"))?;
    let m: usize = m.trim().parse().map_err(|_| format!("bad M `{m}`"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad N `{n}`"))?;
    if m < 1 || m > n {
        return Err(format!("need 1 <= M <= N, got {m},{n}"));
    }
    Ok((m, n))
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    /// Transmissivity eta in [0, 1].
    #[arg(long, conflicts_with = "gamma")]
    pub eta: Option<f64>,
    /// Loss probability gamma = 1 - eta.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Environment thermal photon number.
    #[arg(long, default_value_t = 1.0)]
    pub nth: f64,
}

impl ChannelArgs {
    fn params(&self, default_eta: f64) -> Result<ChannelParams, Error> {
        let eta = match (self.eta, self.gamma) {
            (Some(eta), _) => eta,
            (None, Some(gamma)) => 1.0 - gamma,
            (None, None) => default_eta,
        };
        ChannelParams::new(eta, self.nth)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file. Defaults to $GAUSSCAP_OUT_DIR/<name>, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    /// Points of the logarithmic x grid before refinement.
    #[arg(long = "x-grid", default_value_t = 512)]
    pub x_grid: usize,
}

impl OptimizerArgs {
    fn settings(&self) -> OptimizerSettings {
        OptimizerSettings {
            grid_size: self.x_grid,
            ..OptimizerSettings::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Mean photon number per input mode.
    #[arg(long, default_value_t = 1.0)]
    pub nbar: f64,
    /// Cross-check (M/N) f(N n/M) against the covariance-level rate of the
    /// M-of-N correlated state.
    #[arg(long = "check-mn", value_parser = parse_mn)]
    pub check_mn: Option<(usize, usize)>,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepGammaArgs {
    #[arg(long, default_value_t = 1.0)]
    pub nth: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nbar: f64,
    /// Loss-probability grid.
    #[arg(long, default_value = "0:0.5:101")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepNbarArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    /// Photon-number grid.
    #[arg(long, default_value = "0.05:5:100")]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 1.0)]
    pub nbar: f64,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    /// Number of modes, a power of two.
    pub n: usize,
    /// Where to write the circuit text. Metrics go to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(format!("I/O error: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(format!("serialization error: {e}"))
    }
}

/// Flag, then environment directory, then stdout.
fn open_output(out: &Option<PathBuf>, default_name: &str) -> Result<Box<dyn Write>, Failure> {
    let path = out.clone().or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| PathBuf::from(d).join(default_name))
    });
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(&p).map_err(|e| {
            Failure::Runtime(format!("cannot create {}: {e}", p.display()))
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(mut w: Box<dyn Write>, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_rows(
    output: &OutputArgs,
    name: &str,
    axis: SweepAxis,
    rows: &[SweepRow],
) -> Result<(), Failure> {
    match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = open_output(&output.out, &format!("{name}.csv"))?;
            write_sweep_csv(&mut w, axis, rows)?;
            w.flush()?;
            Ok(())
        }
        Format::Json => write_json(open_output(&output.out, &format!("{name}.json"))?, &rows),
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rate(a) => {
            let params = a.channel.params(f64::NAN)?;
            let report = rate_report(params, a.nbar, a.check_mn, &a.optimizer.settings())?;
            match a.output.format.unwrap_or(Format::Json) {
                Format::Json => write_json(open_output(&a.output.out, "rate.json")?, &report),
                Format::Csv => {
                    let mut w = open_output(&a.output.out, "rate.csv")?;
                    let x = report.x_star.unwrap_or(0.0);
                    writeln!(w, "eta,n_th,n_bar,f,F,x_star")?;
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        report.eta, report.n_th, report.n_bar, report.f, report.big_f, x
                    )?;
                    w.flush()?;
                    Ok(())
                }
            }
        }
        Command::SweepGamma(a) => {
            let rows = sweep_gamma(a.nth, a.nbar, &a.grid.points(), &a.optimizer.settings())?;
            emit_rows(&a.output, "sweep_gamma", SweepAxis::Gamma, &rows)
        }
        Command::SweepNbar(a) => {
            let params = a.channel.params(0.81)?;
            let rows = sweep_nbar(params, &a.grid.points(), &a.optimizer.settings())?;
            emit_rows(&a.output, "sweep_nbar", SweepAxis::NBar, &rows)
        }
        Command::Thresholds(a) => {
            let params = a.channel.params(0.81)?;
            let report =
                threshold_report(params.eta(), params.n_th(), a.nbar, &a.optimizer.settings())?;
            write_json(open_output(&a.output.out, "thresholds.json")?, &report)
        }
        Command::Compile(a) => {
            let (circuit, report) = compile_report(a.n)?;
            let mut w = open_output(&a.out, &format!("gft_{}.txt", a.n))?;
            w.write_all(circuit.to_text().as_bytes())?;
            w.flush()?;
            drop(w);
            let mut err = io::stderr().lock();
            let mut stdout = io::stdout().lock();
            // keep metrics off stdout when stdout carries the circuit
            let metrics_sink: &mut dyn Write =
                if a.out.is_some() || std::env::var_os(OUT_DIR_ENV).is_some() {
                    &mut stdout
                } else {
                    &mut err
                };
            serde_json::to_writer_pretty(&mut *metrics_sink, &report)?;
            writeln!(metrics_sink)?;
            Ok(())
        }
        Command::Selfcheck => {
            let checks = selfcheck()?;
            let mut all = true;
            for c in &checks {
                println!(
                    "[{}] {} ({})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
                all &= c.passed;
            }
            if all {
                Ok(())
            } else {
                Err(Failure::Runtime("self-check failed".into()))
            }
        }
    }
}

/// Parses `args` (including the program name) and runs, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RUNTIME
        }
    }
}
