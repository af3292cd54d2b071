//! On-disk formats: prediction and label CSVs, dataset manifests, and the
//! text artifacts written by evaluation runs. Every writer is deterministic
//! (UTF-8, LF line endings, fixed key order) so repeated runs produce
//! byte-identical files.

mod reports;
mod split;
mod tables;

use std::fs;
use std::path::Path;

pub use reports::{
    load_class_report, load_confusion, load_curve, load_history, load_mcnemar, load_weights, save_class_report,
    save_confusion, save_curve, save_history, save_mcnemar, save_weights, WeightsFile,
};
pub use split::{
    load_manifest, save_manifest, stratified_split, stratified_split_with, DatasetManifest, ManifestEntry, Rounding,
    Split, DEFAULT_TEST_FRACTION,
};
pub use tables::{
    align_predictions, load_labels, load_predictions, save_labels, save_predictions, LabelTable, PredictionTable,
};

use crate::error::{Error, Result};

fn parse_error(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Maps a csv-crate failure to a parse or IO error with its line number.
fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::io(path, e),
        kind => parse_error(path, line, format!("{kind:?}")),
    }
}
