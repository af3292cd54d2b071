pub mod compare;
pub mod evaluate;
pub mod optimize;
pub mod preprocess;
pub mod report;
pub mod split;

use std::path::{Path, PathBuf};

use log::info;
use salp_ensemble::dataio::{align_predictions, load_labels, load_predictions, LabelTable};
use salp_ensemble::ensemble::EnsembleProblem;

use crate::Failure;

/// Model names from file stems, suffixed where two files share a stem.
pub fn model_names(paths: &[PathBuf]) -> Vec<String> {
    let stems: Vec<String> = paths
        .iter()
        .map(|p| {
            p.file_stem()
                .map_or_else(|| "model".to_string(), |s| s.to_string_lossy().into_owned())
                .replace([',', '"', '\n'], "_")
        })
        .collect();
    stems
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if stems.iter().filter(|t| *t == s).count() > 1 {
                format!("{s}_{i}")
            } else {
                s.clone()
            }
        })
        .collect()
}

/// Loads labels and every prediction file, aligned to label order.
pub fn load_problem(predictions: &[PathBuf], labels: &Path) -> Result<(LabelTable, EnsembleProblem), Failure> {
    let table = load_labels(labels).map_err(Failure::usage)?;
    let mut matrices = Vec::with_capacity(predictions.len());
    for path in predictions {
        let preds = load_predictions(path).map_err(Failure::usage)?;
        let aligned =
            align_predictions(&table, &preds).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        info!(
            "{}: {} samples x {} classes",
            path.display(),
            aligned.samples(),
            aligned.classes()
        );
        matrices.push(aligned);
    }
    let problem =
        EnsembleProblem::new(matrices, table.labels.clone(), model_names(predictions)).map_err(Failure::usage)?;
    Ok((table, problem))
}

pub fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}
