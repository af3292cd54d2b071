//! Evaluation metrics: confusion matrices and per-class reports, micro
//! averaged ROC and precision-recall curves, and McNemar's paired test.

mod confusion;
mod curves;
mod mcnemar;
pub mod special;

pub use confusion::{accuracy_score, class_report, confusion_matrix, ClassMetrics, ClassReport};
pub use curves::{pr_curve_micro, roc_curve_micro};
pub use mcnemar::{mcnemar, mcnemar_from_counts, McNemarMethod, McNemarResult, EXACT_BELOW};
