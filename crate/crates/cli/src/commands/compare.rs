use std::path::{Path, PathBuf};

use clap::Args;
use salp_ensemble::dataio::{align_predictions, load_labels, load_predictions, save_mcnemar, LabelTable};
use salp_ensemble::ensemble::aggregate_labels;
use salp_ensemble::metrics::mcnemar;
use salp_ensemble::types::{ClassLabel, LabelVector};

use crate::meta::RunMeta;
use crate::{Failure, GlobalArgs};

/// Significance level for the printed verdict.
pub const ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// First classifier: a prediction CSV (argmax is taken) or a
    /// `sample_id,label` CSV of predicted labels.
    #[arg(long)]
    pub a: PathBuf,

    /// Second classifier, same forms as `--a`.
    #[arg(long)]
    pub b: PathBuf,

    /// Ground-truth labels.
    #[arg(long)]
    pub labels: PathBuf,
}

fn is_label_file(path: &Path) -> Result<bool, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(text.lines().next().map(str::trim) == Some("sample_id,label"))
}

/// Predicted labels in truth order.
fn predicted(path: &Path, truth: &LabelTable) -> Result<LabelVector, Failure> {
    let err = |e: salp_ensemble::Error| Failure::usage(format!("{}: {e}", path.display()));
    if is_label_file(path)? {
        let given = load_labels(path).map_err(err)?;
        if given.len() != truth.len() {
            let known: std::collections::HashSet<&str> = truth.ids.iter().map(String::as_str).collect();
            let odd = given
                .ids
                .iter()
                .find(|id| !known.contains(id.as_str()))
                .or_else(|| truth.ids.iter().find(|id| !given.ids.contains(id)))
                .cloned()
                .unwrap_or_default();
            return Err(err(salp_ensemble::Error::UnknownSampleId(odd)));
        }
        let index: std::collections::HashMap<&str, ClassLabel> = given
            .ids
            .iter()
            .map(String::as_str)
            .zip(given.labels.iter().copied())
            .collect();
        truth
            .ids
            .iter()
            .map(|id| {
                index
                    .get(id.as_str())
                    .copied()
                    .ok_or_else(|| err(salp_ensemble::Error::UnknownSampleId(id.clone())))
            })
            .collect()
    } else {
        let table = load_predictions(path).map_err(err)?;
        let aligned = align_predictions(truth, &table).map_err(err)?;
        Ok(aggregate_labels(&aligned))
    }
}

/// Writes `mcnemar.txt` and prints the verdict at `ALPHA`.
pub fn run(global: &GlobalArgs, args: &CompareArgs) -> Result<(), Failure> {
    let truth = load_labels(&args.labels).map_err(Failure::usage)?;
    let a = predicted(&args.a, &truth)?;
    let b = predicted(&args.b, &truth)?;
    let result = mcnemar(&truth.labels, &a, &b).map_err(Failure::usage)?;
    save_mcnemar(global.out_dir().join("mcnemar.txt"), &result).map_err(Failure::data)?;

    println!("b={} c={}", result.discordant_b, result.discordant_c);
    println!("statistic={} method={}", result.statistic, result.method);
    println!("p_value={:.6}", result.p_value);
    if result.significant(ALPHA) {
        println!("significant at alpha={ALPHA}");
    } else {
        println!("not significant at alpha={ALPHA}");
    }

    let mut meta = RunMeta::new("compare", global);
    meta.push("a", args.a.display());
    meta.push("b", args.b.display());
    meta.push("labels", args.labels.display());
    meta.push("alpha", ALPHA);
    meta.write(&global.out_dir())
}
