//! Micro-averaged ROC and precision-recall curves.
//!
//! Both curves flatten an `S x K` score matrix into `S * K` binary
//! instances (`truth_i == k` against `score[i][k]`) and sweep a threshold
//! down through every distinct score. Instances sharing a score cross the
//! threshold together, so ties produce one diagonal step rather than an
//! order-dependent staircase.

use crate::error::{Error, Result};
use crate::types::{ClassLabel, CurveSeries, ScoreMatrix};

/// Cumulative `(true positives, false positives)` after each distinct
/// threshold, highest score first, plus the positive and negative totals.
struct Sweep {
    steps: Vec<(u64, u64)>,
    positives: u64,
    negatives: u64,
}

fn sweep(truth: &[ClassLabel], scores: &ScoreMatrix) -> Result<Sweep> {
    if truth.len() != scores.samples() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {} score rows",
            truth.len(),
            scores.samples()
        )));
    }
    let classes = scores.classes();
    let mut instances = Vec::with_capacity(truth.len() * classes);
    for (i, t) in truth.iter().enumerate() {
        if t.0 >= classes {
            return Err(Error::LabelOutOfRange { label: t.0, classes });
        }
        for (k, &s) in scores.row(i).iter().enumerate() {
            instances.push((s, k == t.0));
        }
    }
    instances.sort_by(|a, b| b.0.total_cmp(&a.0));

    let positives = instances.iter().filter(|x| x.1).count() as u64;
    let negatives = instances.len() as u64 - positives;
    let mut steps = Vec::new();
    let (mut tp, mut fp) = (0u64, 0u64);
    for (idx, &(score, positive)) in instances.iter().enumerate() {
        if positive {
            tp += 1;
        } else {
            fp += 1;
        }
        let last_of_group = instances.get(idx + 1).is_none_or(|next| next.0 != score);
        if last_of_group {
            steps.push((tp, fp));
        }
    }
    Ok(Sweep {
        steps,
        positives,
        negatives,
    })
}

fn rate(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// `(FPR, TPR)` points from `(0, 0)` to `(1, 1)`, summarized by the
/// trapezoidal area under them.
pub fn roc_curve_micro(truth: &[ClassLabel], scores: &ScoreMatrix) -> Result<CurveSeries> {
    let sw = sweep(truth, scores)?;
    let mut points = Vec::with_capacity(sw.steps.len() + 1);
    points.push((0.0, 0.0));
    for &(tp, fp) in &sw.steps {
        points.push((rate(fp, sw.negatives), rate(tp, sw.positives)));
    }
    let summary = points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[1].1 + w[0].1) / 2.0)
        .sum();
    Ok(CurveSeries { points, summary })
}

/// `(recall, precision)` points, starting from the conventional `(0, 1)`
/// anchor, summarized by step-wise average precision
/// `sum_n (R_n - R_{n-1}) P_n` without interpolation.
pub fn pr_curve_micro(truth: &[ClassLabel], scores: &ScoreMatrix) -> Result<CurveSeries> {
    let sw = sweep(truth, scores)?;
    let mut points = Vec::with_capacity(sw.steps.len() + 1);
    points.push((0.0, 1.0));
    let mut summary = 0.0;
    let mut prev_recall = 0.0;
    for &(tp, fp) in &sw.steps {
        let recall = rate(tp, sw.positives);
        let precision = rate(tp, tp + fp);
        summary += (recall - prev_recall) * precision;
        prev_recall = recall;
        points.push((recall, precision));
    }
    Ok(CurveSeries { points, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::labels;

    fn one_hot(truth: &[usize], classes: usize, hit: f64, miss: f64) -> ScoreMatrix {
        let rows: Vec<Vec<f64>> = truth
            .iter()
            .map(|&t| (0..classes).map(|k| if k == t { hit } else { miss }).collect())
            .collect();
        ScoreMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn perfect_scores() {
        let t = [0, 2, 1, 1, 4];
        let s = one_hot(&t, 5, 0.8, 0.05);
        assert_eq!(roc_curve_micro(&labels(&t), &s).unwrap().summary, 1.0);
        assert_eq!(pr_curve_micro(&labels(&t), &s).unwrap().summary, 1.0);
    }

    #[test]
    fn constant_scores() {
        let t = [0, 2, 1, 1, 4];
        let s = one_hot(&t, 5, 0.2, 0.2);
        let roc = roc_curve_micro(&labels(&t), &s).unwrap();
        assert_eq!(roc.points, vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(roc.summary, 0.5);
        let pr = pr_curve_micro(&labels(&t), &s).unwrap();
        assert!((pr.summary - 0.2).abs() < 1e-15);
    }

    #[test]
    fn curve_shape_invariants() {
        let t = labels(&[0, 1, 1, 0]);
        let s = ScoreMatrix::from_rows(&[vec![0.6, 0.4], vec![0.3, 0.7], vec![0.55, 0.45], vec![0.2, 0.8]]).unwrap();
        for curve in [roc_curve_micro(&t, &s).unwrap(), pr_curve_micro(&t, &s).unwrap()] {
            assert!(curve.points.windows(2).all(|w| w[1].0 >= w[0].0));
            assert!(curve
                .points
                .iter()
                .all(|&(x, y)| (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y)));
            assert!((0.0..=1.0).contains(&curve.summary));
        }
        let roc = roc_curve_micro(&t, &s).unwrap();
        assert_eq!(*roc.points.last().unwrap(), (1.0, 1.0));
    }

    #[test]
    fn shape_errors() {
        let s = one_hot(&[0, 1], 2, 0.9, 0.1);
        assert!(roc_curve_micro(&labels(&[0]), &s).is_err());
        assert!(pr_curve_micro(&labels(&[0, 3]), &s).is_err());
    }
}
