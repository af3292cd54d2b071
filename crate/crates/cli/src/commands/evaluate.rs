use std::path::PathBuf;

use clap::Args;
use log::warn;
use salp_ensemble::dataio::{load_weights, save_class_report, save_confusion, save_curve, save_labels};
use salp_ensemble::ensemble::{aggregate_labels, weighted_aggregate};
use salp_ensemble::metrics::{class_report, confusion_matrix, pr_curve_micro, roc_curve_micro};

use super::{load_problem, write};
use crate::meta::RunMeta;
use crate::{svg, Failure, GlobalArgs};

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Prediction CSVs, in the order of the weights file rows.
    #[arg(long, num_args = 1.., required = true)]
    pub predictions: Vec<PathBuf>,

    /// `model,weight,normalized` CSV, as written by `optimize`.
    #[arg(long)]
    pub weights: PathBuf,

    #[arg(long)]
    pub labels: PathBuf,
}

/// Writes `report.txt`, `confusion.csv`, `roc.csv`, `pr.csv`, their SVG
/// plots and `ensemble_labels.csv`.
pub fn run(global: &GlobalArgs, args: &EvaluateArgs) -> Result<(), Failure> {
    let (table, problem) = load_problem(&args.predictions, &args.labels)?;
    let weights = load_weights(&args.weights).map_err(Failure::usage)?;
    if weights.weights.len() != problem.models() {
        return Err(Failure::usage(format!(
            "{} has {} weights for {} prediction files",
            args.weights.display(),
            weights.weights.len(),
            problem.models()
        )));
    }
    for (given, file) in weights.models.iter().zip(problem.model_names()) {
        if given != file {
            warn!("weight for `{given}` applied to predictions `{file}`");
        }
    }

    let scores = weighted_aggregate(&problem, &weights.weights).map_err(Failure::usage)?;
    let predicted = aggregate_labels(&scores);
    let cm = confusion_matrix(problem.truth(), &predicted, problem.classes()).map_err(Failure::usage)?;
    let report = class_report(&cm);
    let roc = roc_curve_micro(problem.truth(), &scores).map_err(Failure::usage)?;
    let pr = pr_curve_micro(problem.truth(), &scores).map_err(Failure::usage)?;

    let dir = &global.out_dir();
    save_class_report(dir.join("report.txt"), &report).map_err(Failure::data)?;
    save_confusion(dir.join("confusion.csv"), &cm).map_err(Failure::data)?;
    save_curve(dir.join("roc.csv"), &roc).map_err(Failure::data)?;
    save_curve(dir.join("pr.csv"), &pr).map_err(Failure::data)?;
    save_labels(dir.join("ensemble_labels.csv"), &table.ids, &predicted).map_err(Failure::data)?;
    write(&dir.join("roc.svg"), &svg::roc(&roc.points, roc.summary))?;
    write(&dir.join("pr.svg"), &svg::pr(&pr.points, pr.summary))?;

    println!("accuracy={:.6}", report.accuracy);
    println!("correct={}/{}", cm.trace(), cm.total());
    println!("macro_f1={:.6}", report.macro_f1);
    println!("auc={:.6}", roc.summary);
    println!("ap={:.6}", pr.summary);

    let mut meta = RunMeta::new("evaluate", global);
    meta.paths("predictions", &args.predictions);
    meta.push("weights", args.weights.display());
    meta.push("labels", args.labels.display());
    meta.write(dir)
}
