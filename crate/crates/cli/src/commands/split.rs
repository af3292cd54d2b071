use std::path::PathBuf;

use clap::{Args, ValueEnum};
use salp_ensemble::dataio::{
    load_labels, save_manifest, stratified_split_with, Rounding, Split, DEFAULT_TEST_FRACTION,
};

use crate::meta::RunMeta;
use crate::{Failure, GlobalArgs};

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RoundingArg {
    Nearest,
    Down,
    Up,
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    /// `sample_id,label` CSV whose ids are image paths.
    #[arg(long)]
    pub labels: PathBuf,

    #[arg(long, default_value_t = DEFAULT_TEST_FRACTION)]
    pub test_fraction: f64,

    /// How per-class test counts are rounded.
    #[arg(long, value_enum, default_value = "nearest")]
    pub rounding: RoundingArg,
}

/// Writes `manifest.csv`.
pub fn run(global: &GlobalArgs, args: &SplitArgs) -> Result<(), Failure> {
    let table = load_labels(&args.labels).map_err(Failure::usage)?;
    let rounding = match args.rounding {
        RoundingArg::Nearest => Rounding::Nearest,
        RoundingArg::Down => Rounding::Down,
        RoundingArg::Up => Rounding::Up,
    };
    let manifest =
        stratified_split_with(&table.pairs(), args.test_fraction, global.seed, rounding).map_err(Failure::usage)?;
    save_manifest(global.out_dir().join("manifest.csv"), &manifest).map_err(Failure::data)?;
    println!(
        "train={} test={}",
        manifest.count(Split::Train),
        manifest.count(Split::Test)
    );

    let mut meta = RunMeta::new("split", global);
    meta.push("labels", args.labels.display());
    meta.push("test_fraction", args.test_fraction);
    meta.push("rounding", format!("{:?}", rounding).to_lowercase());
    meta.write(&global.out_dir())
}
