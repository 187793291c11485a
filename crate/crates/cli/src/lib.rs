//! Batch front end: granulate, tune, fit, forecast, compare and diagnose
//! from a monthly CSV, writing JSON, CSV and SVG artifacts to one directory.

pub mod commands;
pub mod config;
pub mod plot;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::{Overrides, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("plot: {0}")]
    Plot(String),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] granfore_core::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "granfore",
    version,
    about = "Granulated SVR + ARIMA hybrid forecasting of monthly series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Monthly series as `YYYY-MM,value` CSV (forecast and diagnose also take model.json)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Flat JSON config; flags override its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true)]
    pub window_len: Option<usize>,

    #[arg(long, global = true)]
    pub lag: Option<usize>,

    /// Forecast horizon in windows
    #[arg(long, global = true)]
    pub horizon: Option<usize>,

    /// Residual ARIMA orders: `p,d,q` for all sequences or `p,d,q;p,d,q;p,d,q`
    #[arg(long, global = true)]
    pub orders: Option<String>,

    /// Print the effective config as JSON and exit
    #[arg(long, global = true)]
    pub dump_config: bool,

    /// More log output on stderr (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Triangular granules per window
    Granulate,
    /// GA search of SVR hyperparameters per granule sequence
    Tune,
    /// Fit the hybrid model
    Fit,
    /// Forecast future windows from model.json or a CSV
    Forecast,
    /// Hold out the final windows and score ARIMA, GRNN, GA-SVR and the hybrid
    Compare,
    /// ADF, ACF/PACF, order scan and Ljung-Box on a series or on model residuals
    Diagnose,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Granulate => "granulate",
            Command::Tune => "tune",
            Command::Fit => "fit",
            Command::Forecast => "forecast",
            Command::Compare => "compare",
            Command::Diagnose => "diagnose",
        }
    }
}

impl Cli {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            input: self.input.clone(),
            out: self.out.clone(),
            seed: self.seed,
            window_len: self.window_len,
            lag: self.lag,
            horizon: self.horizon,
            orders: self.orders.clone(),
            verbosity: self.verbose,
        }
    }

    /// File values first, then flags.
    pub fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        s.apply(&self.overrides());
        Ok(s)
    }
}

/// Contents of `run.json`, written by every subcommand.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: Command,
    pub version: &'static str,
    pub seed: u64,
    pub config: Settings,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
    pub errors: Vec<String>,
    pub status: &'static str,
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
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
    let settings = match cli.settings() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    init_logging(settings.verbosity);
    if cli.dump_config {
        print!("{}", settings.to_json());
        return 0;
    }
    let manifest = commands::execute(cli.command, settings);
    for e in &manifest.errors {
        eprintln!("error: {e}");
    }
    if manifest.errors.is_empty() {
        0
    } else {
        1
    }
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    // a second init in the same process (tests) is ignored
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .try_init();
}
