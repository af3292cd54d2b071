use crate::error::{Error, Result};
use crate::types::{ClassLabel, ConfusionMatrix};

/// Fraction of positions where `predicted` equals `truth`. Zero for empty
/// input. Lengths are assumed equal; extra entries are ignored.
pub fn accuracy_score(truth: &[ClassLabel], predicted: &[ClassLabel]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    let correct = truth.iter().zip(predicted).filter(|(t, p)| t == p).count();
    correct as f64 / truth.len() as f64
}

/// Counts `(truth, predicted)` pairs into a `classes x classes` matrix.
pub fn confusion_matrix(truth: &[ClassLabel], predicted: &[ClassLabel], classes: usize) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} true labels, {} predicted",
            truth.len(),
            predicted.len()
        )));
    }
    let mut cm = ConfusionMatrix::zeros(classes);
    for (t, p) in truth.iter().zip(predicted) {
        for label in [t, p] {
            if label.0 >= classes {
                return Err(Error::LabelOutOfRange {
                    label: label.0,
                    classes,
                });
            }
        }
        cm.increment(t.0, p.0);
    }
    Ok(cm)
}

/// One-vs-rest rates for a single class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// Nothing was predicted as this class; precision reported as 0.
    pub precision_undefined: bool,
    /// The class has no samples; recall reported as 0.
    pub recall_undefined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassReport {
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

fn ratio(num: u64, den: u64) -> (f64, bool) {
    if den == 0 {
        (0.0, true)
    } else {
        (num as f64 / den as f64, false)
    }
}

/// Precision, recall and F1 per class plus their unweighted means, and the
/// global accuracy `trace / total`.
pub fn class_report(cm: &ConfusionMatrix) -> ClassReport {
    let k = cm.classes();
    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|c| {
            let tp = cm.get(c, c);
            let (precision, precision_undefined) = ratio(tp, cm.col_sum(c));
            let (recall, recall_undefined) = ratio(tp, cm.row_sum(c));
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                precision,
                recall,
                f1,
                support: cm.row_sum(c),
                precision_undefined,
                recall_undefined,
            }
        })
        .collect();
    let mean = |f: fn(&ClassMetrics) -> f64| {
        if k == 0 {
            0.0
        } else {
            per_class.iter().map(f).sum::<f64>() / k as f64
        }
    };
    ClassReport {
        macro_precision: mean(|m| m.precision),
        macro_recall: mean(|m| m.recall),
        macro_f1: mean(|m| m.f1),
        accuracy: ratio(cm.trace(), cm.total()).0,
        per_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::labels;

    #[test]
    fn counts_pairs() {
        let cm = confusion_matrix(&labels(&[0, 1, 2]), &labels(&[0, 1, 1]), 3).unwrap();
        assert_eq!((cm.get(0, 0), cm.get(1, 1), cm.get(2, 2)), (1, 1, 0));
        assert_eq!(cm.get(2, 1), 1);
        assert_eq!(cm.total(), 3);
    }

    #[test]
    fn perfect_prediction_is_diagonal() {
        let t = labels(&[0, 1, 1, 3, 2, 0]);
        let cm = confusion_matrix(&t, &t, 4).unwrap();
        assert_eq!(cm.trace(), 6);
        let r = class_report(&cm);
        assert_eq!(r.accuracy, 1.0);
        assert!(r
            .per_class
            .iter()
            .all(|m| m.precision == 1.0 && m.recall == 1.0 && m.f1 == 1.0));
    }

    #[test]
    fn rejects_out_of_range_and_length_mismatch() {
        assert!(matches!(
            confusion_matrix(&labels(&[0, 5]), &labels(&[0, 1]), 3),
            Err(Error::LabelOutOfRange { label: 5, classes: 3 })
        ));
        assert!(confusion_matrix(&labels(&[0]), &labels(&[0, 1]), 3).is_err());
    }

    #[test]
    fn two_by_two_report() {
        let cm = ConfusionMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        let r = class_report(&cm);
        let m = &r.per_class[0];
        assert!((m.precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((m.f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.accuracy - 4.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn zero_denominators_are_flagged() {
        // class 2 is never predicted and never present
        let cm = ConfusionMatrix::from_rows(&[vec![3, 0, 0], vec![1, 2, 0], vec![0, 0, 0]]).unwrap();
        let r = class_report(&cm);
        let m = &r.per_class[2];
        assert!(m.precision_undefined && m.recall_undefined);
        assert_eq!((m.precision, m.recall, m.f1), (0.0, 0.0, 0.0));
        assert!(!r.per_class[0].precision_undefined);
        assert!((r.macro_recall - (1.0 + 2.0 / 3.0) / 3.0).abs() < 1e-15);
    }
}
