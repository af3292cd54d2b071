use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use log::info;
use salp_ensemble::dataio::{save_history, save_weights, stratified_split, Split, WeightsFile};
use salp_ensemble::ensemble::{optimize_ensemble, EnsembleOptions};

use super::{load_problem, write};
use crate::meta::RunMeta;
use crate::{Failure, GlobalArgs};

#[derive(Debug, Clone, Args)]
pub struct OptimizeArgs {
    /// Prediction CSVs, one per base model (at least two).
    #[arg(long, num_args = 1.., required = true)]
    pub predictions: Vec<PathBuf>,

    /// Labels CSV; its row order is the sample order.
    #[arg(long)]
    pub labels: PathBuf,

    /// Do not seed the swarm with the one-hot and uniform weight vectors.
    #[arg(long)]
    pub no_inject: bool,

    /// Hold out this fraction of samples (stratified by label) and report
    /// accuracy on it; weights are fitted on the rest.
    #[arg(long)]
    pub holdout: Option<f64>,
}

/// Writes `weights.csv`, `history.csv` and `optimize.txt`.
pub fn run(global: &GlobalArgs, args: &OptimizeArgs) -> Result<(), Failure> {
    if args.predictions.len() < 2 {
        return Err(Failure::usage("optimize needs at least two prediction files"));
    }
    let (table, problem) = load_problem(&args.predictions, &args.labels)?;
    let config = global.ssa(problem.models())?;

    let (fit, holdout) = match args.holdout {
        None => (problem.clone(), None),
        Some(f) => {
            let manifest = stratified_split(&table.pairs(), f, global.seed).map_err(Failure::usage)?;
            let pick = |s: Split| -> Vec<usize> {
                manifest
                    .entries
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.split == s)
                    .map(|(i, _)| i)
                    .collect()
            };
            (
                problem.subset(&pick(Split::Train)),
                Some(problem.subset(&pick(Split::Test))),
            )
        }
    };
    let options = EnsembleOptions {
        inject_one_hot: !args.no_inject,
    };
    let outcome = optimize_ensemble(&fit, &config, options).map_err(Failure::usage)?;
    info!(
        "best accuracy {} after {} evaluations",
        outcome.accuracy, outcome.result.evaluations
    );

    let dir = &global.out_dir();
    let weights = WeightsFile {
        models: problem.model_names().to_vec(),
        weights: outcome.weights.to_vec(),
    };
    save_weights(dir.join("weights.csv"), &weights).map_err(Failure::data)?;
    save_history(dir.join("history.csv"), &outcome.result).map_err(Failure::data)?;

    let mut summary = String::from("kind=optimize\n");
    writeln!(summary, "accuracy={}", outcome.accuracy).unwrap();
    writeln!(summary, "samples={}", fit.samples()).unwrap();
    writeln!(summary, "evaluations={}", outcome.result.evaluations).unwrap();
    for (i, name) in problem.model_names().iter().enumerate() {
        writeln!(summary, "single_model_accuracy.{name}={}", fit.single_model_accuracy(i)).unwrap();
    }
    if let Some(h) = &holdout {
        let acc = h.accuracy_at(&outcome.weights).map_err(Failure::usage)?;
        writeln!(summary, "holdout_samples={}", h.samples()).unwrap();
        writeln!(summary, "holdout_accuracy={acc}").unwrap();
        println!("holdout_accuracy={acc:.6}");
    }
    write(&dir.join("optimize.txt"), &summary)?;
    println!("accuracy={:.6}", outcome.accuracy);

    let mut meta = RunMeta::new("optimize", global);
    meta.paths("predictions", &args.predictions);
    meta.push("labels", args.labels.display());
    meta.push("inject_one_hot", !args.no_inject);
    meta.push("holdout", args.holdout.map_or("none".to_string(), |f| f.to_string()));
    meta.write(dir)
}
