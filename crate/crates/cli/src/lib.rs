//! The `salp-ensemble` command line: preprocessing, weight optimization,
//! evaluation, paired comparison, HTML reporting and dataset splitting.
//!
//! Exit codes are a stable contract: 0 success, 1 partial or data failure,
//! 2 usage or validation failure.

pub mod commands;
pub mod meta;
pub mod svg;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use salp_ensemble::imaging::FusionConfig;
use salp_ensemble::types::{Bounds, SsaConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DATA: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "SALP_ENSEMBLE_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "salp-ensemble",
    version,
    about = "Salp swarm weighted ensembles for fundus grading"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Directory receiving all outputs; created if missing. Defaults to
    /// `out`, or to the run directory for `report`.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    /// Swarm size.
    #[arg(long, global = true, default_value_t = 100)]
    pub salps: usize,

    /// Swarm iterations.
    #[arg(long, global = true, default_value_t = 100)]
    pub iterations: usize,

    /// Weight bounds as `lower,upper`, applied to every model.
    #[arg(long, global = true, default_value = "0,1", value_parser = parse_bounds)]
    pub bounds: (f64, f64),

    #[arg(long, global = true, default_value_t = 0.8)]
    pub gamma: f64,

    #[arg(long, global = true, default_value_t = 2.0)]
    pub clahe_clip: f64,

    /// CLAHE tile grid as `COLSxROWS`.
    #[arg(long, global = true, default_value = "8x8", value_parser = parse_tiles)]
    pub clahe_tiles: (usize, usize),

    #[arg(long, global = true, default_value_t = 1)]
    pub wavelet_levels: usize,

    /// Gamma-correct the original rather than the CLAHE output before fusion.
    #[arg(long, global = true)]
    pub parallel_branches: bool,
}

impl GlobalArgs {
    pub fn out_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn fusion(&self) -> FusionConfig {
        FusionConfig {
            levels: self.wavelet_levels,
            clahe_clip: self.clahe_clip,
            clahe_tiles: self.clahe_tiles,
            gamma: self.gamma,
            parallel_branches: self.parallel_branches,
            ..FusionConfig::default()
        }
    }

    pub fn ssa(&self, dimensions: usize) -> Result<SsaConfig, Failure> {
        let bounds = Bounds::uniform(dimensions, self.bounds.0, self.bounds.1).map_err(Failure::usage)?;
        let config = SsaConfig {
            num_salps: self.salps,
            max_iterations: self.iterations,
            dimensions,
            bounds,
            seed: self.seed,
        };
        config.validate().map_err(Failure::usage)?;
        Ok(config)
    }
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected `lower,upper`")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    Ok((lo, hi))
}

fn parse_tiles(s: &str) -> Result<(usize, usize), String> {
    let (x, y) = s.split_once(['x', 'X']).ok_or("expected `COLSxROWS`, e.g. 8x8")?;
    let x = x.trim().parse().map_err(|_| format!("bad tile count `{x}`"))?;
    let y = y.trim().parse().map_err(|_| format!("bad tile count `{y}`"))?;
    Ok((x, y))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enhance, fuse and resize every image in a directory.
    Preprocess(commands::preprocess::PreprocessArgs),
    /// Search ensemble weights on stored prediction files.
    Optimize(commands::optimize::OptimizeArgs),
    /// Score a weighted ensemble: report, confusion matrix, ROC and PR.
    Evaluate(commands::evaluate::EvaluateArgs),
    /// McNemar's test between two classifiers.
    Compare(commands::compare::CompareArgs),
    /// Render a run directory as one HTML page.
    Report(commands::report::ReportArgs),
    /// Stratified train/test manifest from a labels file.
    Split(commands::split::SplitArgs),
}

/// A failed command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Some inputs could not be processed; exit 1.
    Data(String),
    /// Invalid arguments or inputs; exit 2.
    Usage(String),
}

impl Failure {
    pub fn usage(e: impl fmt::Display) -> Self {
        Failure::Usage(e.to_string())
    }

    pub fn data(e: impl fmt::Display) -> Self {
        Failure::Data(e.to_string())
    }

    pub fn code(&self) -> u8 {
        match self {
            Failure::Data(_) => EXIT_DATA,
            Failure::Usage(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Data(m) | Failure::Usage(m) => f.write_str(m),
        }
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<(), Failure> {
    if !matches!(cli.command, Command::Report(_)) {
        let dir = cli.global.out_dir();
        std::fs::create_dir_all(&dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    }
    match &cli.command {
        Command::Preprocess(a) => commands::preprocess::run(&cli.global, a),
        Command::Optimize(a) => commands::optimize::run(&cli.global, a),
        Command::Evaluate(a) => commands::evaluate::run(&cli.global, a),
        Command::Compare(a) => commands::compare::run(&cli.global, a),
        Command::Report(a) => commands::report::run(&cli.global, a),
        Command::Split(a) => commands::split::run(&cli.global, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_parsers() {
        assert_eq!(parse_bounds("0,1"), Ok((0.0, 1.0)));
        assert_eq!(parse_bounds(" 0.1 , 0.9"), Ok((0.1, 0.9)));
        assert!(parse_bounds("0:1").is_err());
        assert_eq!(parse_tiles("8x4"), Ok((8, 4)));
        assert!(parse_tiles("8").is_err());
    }

    #[test]
    fn defaults_follow_parameter_table() {
        let cli = Cli::try_parse_from(["salp-ensemble", "split", "--labels", "l.csv"]).unwrap();
        let ssa = cli.global.ssa(3).unwrap();
        assert_eq!((ssa.num_salps, ssa.max_iterations, ssa.seed), (100, 100, 42));
        assert_eq!(ssa.bounds, Bounds::unit(3));
        assert_eq!(cli.global.fusion(), FusionConfig::default());
    }

    #[test]
    fn globals_after_subcommand() {
        let cli = Cli::try_parse_from([
            "salp-ensemble",
            "split",
            "--labels",
            "l.csv",
            "--seed",
            "7",
            "--clahe-tiles",
            "4x2",
        ])
        .unwrap();
        assert_eq!((cli.global.seed, cli.global.clahe_tiles), (7, (4, 2)));
    }
}
