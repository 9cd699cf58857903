//! Command-line driver for the `bergman-core` verification suites.
//!
//! `bergcheck <subcommand> [flags]` runs one suite (or `all`), writes one
//! report per case as CSV or JSON lines, and prints a summary to standard
//! error. Exit status is 0 when every case passes, 1 when any fails and 2 on
//! usage or configuration errors. `BERGMAN_THREADS` sets the worker count.

pub mod config;
pub mod emit;
pub mod range;
pub mod suites;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use bergman_core::{DomainModel, VerificationReport};
use clap::Parser;
use thiserror::Error;

use crate::config::ExperimentConfig;
use crate::emit::{Emitter, Format};
pub use crate::suites::Suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numeric(_) => 1,
        }
    }
}

impl From<bergman_core::Error> for CliError {
    fn from(e: bergman_core::Error) -> Self {
        use bergman_core::Error as E;
        match e {
            E::InvalidArgument(_) | E::Unsupported(_) | E::DimensionMismatch { .. } | E::NotInterior { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bergcheck", version, about = "Numerical checks of Bergman kernel inequalities on model domains")]
pub struct Cli {
    #[command(subcommand)]
    pub suite: Suite,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Default, clap::Args)]
pub struct Flags {
    /// disc, polydisc<n>, ball<n> or ellipsoid<m>.
    #[arg(long, global = true)]
    pub domain: Option<DomainModel>,
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Boundary distances: `a..b[:k]` (log-spaced), a list, or one value.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub deltas: Option<String>,
    /// `a..b[:k]` (evenly spaced), a list, or one value.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Dimensions for verify-infimum: `a..b` or a list.
    #[arg(long, global = true)]
    pub n: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON experiment configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub tolerance_scale: Option<f64>,
}

impl Flags {
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if self.domain.is_some() {
            cfg.domain = self.domain;
        }
        if self.resolution.is_some() {
            cfg.resolution = self.resolution;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = &self.deltas {
            cfg.deltas = Some(range::parse_geometric(s)?);
        }
        if let Some(s) = &self.r {
            cfg.r = Some(range::parse_linear(s)?);
        }
        if let Some(s) = &self.alpha {
            cfg.alpha = Some(range::parse_linear(s)?);
        }
        if let Some(s) = &self.t {
            cfg.t = Some(range::parse_linear(s)?);
        }
        if let Some(s) = &self.n {
            cfg.n = Some(range::parse_integers(s)?);
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if self.out.is_some() {
            cfg.output.path = self.out.clone();
        }
        if let Some(s) = self.tolerance_scale {
            cfg.tolerance_scale = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("BERGMAN_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("BERGMAN_THREADS must be a positive integer, got {v:?}")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

pub fn write_reports<W: Write>(sink: W, format: Format, reports: &[VerificationReport]) -> Result<W, CliError> {
    let mut e = Emitter::new(sink, format);
    e.header()?;
    for r in reports {
        e.emit(r)?;
    }
    e.finish()
}

fn summary(suite: Suite, reports: &[VerificationReport]) -> String {
    let failed = reports.iter().filter(|r| !r.pass).count();
    format!("{}: {} cases, {} passed, {} failed", suite.name(), reports.len(), reports.len() - failed, failed)
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let cfg = cli.flags.resolve()?;
    let pool = thread_pool()?;
    // Open the sink first so an unwritable path fails before any work.
    let file = match &cfg.output.path {
        Some(p) => Some(File::create(p).map_err(|e| CliError::Io(format!("cannot open {}: {e}", p.display())))?),
        None => None,
    };
    let reports = pool.install(|| cli.suite.run(&cfg))?;
    match file {
        Some(f) => drop(write_reports(io::BufWriter::new(f), cfg.output.format, &reports)?),
        None => drop(write_reports(io::stdout().lock(), cfg.output.format, &reports)?),
    }
    let mut err = io::stderr().lock();
    for r in reports.iter().filter(|r| !r.pass) {
        let _ = writeln!(err, "FAIL {} {} {}", r.statement_id, r.domain, emit::csv_record(r)[2]);
    }
    let _ = writeln!(err, "{}", summary(cli.suite, &reports));
    Ok(reports.iter().all(|r| r.pass))
}

/// Parses `args` (including the program name) and runs; returns the exit
/// status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
