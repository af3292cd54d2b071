//! Domain types shared by every module.
//!
//! Everything here is immutable once constructed and only performs
//! validation; algorithms live in the sibling modules.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// Absolute tolerance on the row sums of a [`PredictionMatrix`].
pub const ROW_SUM_TOLERANCE: f64 = 1e-4;

/// Diabetic-retinopathy grade names, indexed by class.
pub const DR_GRADES: [&str; 5] = ["Normal", "Mild", "Moderate", "Severe", "Proliferative"];

/// Display name for a class index. Indices past the five DR grades fall
/// back to `class<k>`.
pub fn class_name(index: usize) -> String {
    DR_GRADES
        .get(index)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("class{index}"))
}

/// A class index in `0..K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassLabel(pub usize);

impl ClassLabel {
    pub fn index(self) -> usize {
        self.0
    }

    pub fn name(self) -> String {
        class_name(self.0)
    }
}

impl From<usize> for ClassLabel {
    fn from(v: usize) -> Self {
        ClassLabel(v)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One label per sample.
pub type LabelVector = Vec<ClassLabel>;

/// Convenience conversion from raw indices.
pub fn labels(raw: &[usize]) -> LabelVector {
    raw.iter().copied().map(ClassLabel).collect()
}

/// Dense row-major `S x K` matrix of real scores, with no constraints on
/// its entries. Weighted ensemble outputs live here.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    samples: usize,
    classes: usize,
    data: Vec<f64>,
}

impl ScoreMatrix {
    pub fn from_flat(samples: usize, classes: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != samples * classes {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {samples}x{classes} matrix",
                data.len()
            )));
        }
        Ok(ScoreMatrix { samples, classes, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let classes = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != classes) {
            return Err(Error::ShapeMismatch(format!(
                "row {bad} has {} columns, expected {classes}",
                rows[bad].len()
            )));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(ScoreMatrix {
            samples: rows.len(),
            classes,
            data,
        })
    }

    pub fn zeros(samples: usize, classes: usize) -> Self {
        ScoreMatrix {
            samples,
            classes,
            data: vec![0.0; samples * classes],
        }
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.classes..(i + 1) * self.classes]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.classes..(i + 1) * self.classes]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.classes.max(1)).take(self.samples)
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.classes + k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Keeps only the listed rows, in the listed order.
    pub fn select_rows(&self, idx: &[usize]) -> ScoreMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.classes);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        ScoreMatrix {
            samples: idx.len(),
            classes: self.classes,
            data,
        }
    }
}

/// Per-model class probabilities: finite, nonnegative, rows summing to one
/// within [`ROW_SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionMatrix(ScoreMatrix);

impl PredictionMatrix {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        Self::validate(ScoreMatrix::from_rows(rows)?)
    }

    pub fn from_flat(samples: usize, classes: usize, data: Vec<f64>) -> Result<Self> {
        Self::validate(ScoreMatrix::from_flat(samples, classes, data)?)
    }

    /// Checks every invariant; rows are never renormalized.
    pub fn validate(scores: ScoreMatrix) -> Result<Self> {
        if scores.samples < 1 {
            return Err(Error::config("prediction matrix needs at least one sample"));
        }
        if scores.classes < 2 {
            return Err(Error::config("prediction matrix needs at least two classes"));
        }
        for (row, values) in scores.rows().enumerate() {
            for (col, &v) in values.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
                if v < 0.0 {
                    return Err(Error::NegativeScore { row, col });
                }
            }
            let sum: f64 = values.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::RowSumOutOfTolerance { row, sum });
            }
        }
        Ok(PredictionMatrix(scores))
    }

    pub fn scores(&self) -> &ScoreMatrix {
        &self.0
    }

    pub fn into_scores(self) -> ScoreMatrix {
        self.0
    }

    pub fn select_rows(&self, idx: &[usize]) -> PredictionMatrix {
        PredictionMatrix(self.0.select_rows(idx))
    }
}

impl Deref for PredictionMatrix {
    type Target = ScoreMatrix;

    fn deref(&self) -> &ScoreMatrix {
        &self.0
    }
}

/// Box constraints for a search space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::config(format!(
                "{} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::config(format!(
                    "dimension {j}: need finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Bounds { lower, upper })
    }

    /// The same interval on every dimension.
    pub fn uniform(dimensions: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dimensions], vec![upper; dimensions])
    }

    /// `[0, 1]` on every dimension.
    pub fn unit(dimensions: usize) -> Self {
        Bounds {
            lower: vec![0.0; dimensions],
            upper: vec![1.0; dimensions],
        }
    }

    pub fn dimensions(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn clamp(&self, j: usize, v: f64) -> f64 {
        v.clamp(self.lower[j], self.upper[j])
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dimensions()
            && position
                .iter()
                .enumerate()
                .all(|(j, &v)| v >= self.lower[j] && v <= self.upper[j])
    }
}

/// Nonnegative ensemble weights in `[0, 1]`, one per base model. The sum is
/// unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::config("weight vector is empty"));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite() || !(0.0..=1.0).contains(w)) {
            return Err(Error::config(format!("weight {i} = {} outside [0, 1]", weights[i])));
        }
        Ok(WeightVector(weights))
    }

    /// Weights divided by their sum, or unchanged when they sum to zero.
    pub fn normalized(&self) -> Vec<f64> {
        let sum: f64 = self.0.iter().sum();
        if sum > 0.0 {
            self.0.iter().map(|w| w / sum).collect()
        } else {
            self.0.clone()
        }
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for WeightVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Salp swarm settings. Defaults:
/// 100 salps, 100 iterations, three weights in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SsaConfig {
    pub num_salps: usize,
    pub max_iterations: usize,
    pub dimensions: usize,
    pub bounds: Bounds,
    pub seed: u64,
}

impl Default for SsaConfig {
    fn default() -> Self {
        SsaConfig {
            num_salps: 100,
            max_iterations: 100,
            dimensions: 3,
            bounds: Bounds::unit(3),
            seed: 42,
        }
    }
}

impl SsaConfig {
    /// Table defaults over `dimensions` unit-interval weights.
    pub fn with_dimensions(dimensions: usize) -> Self {
        SsaConfig {
            dimensions,
            bounds: Bounds::unit(dimensions),
            ..Default::default()
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_salps < 2 {
            return Err(Error::config("need at least two salps (a leader and a follower)"));
        }
        if self.max_iterations < 1 {
            return Err(Error::config("max_iterations must be positive"));
        }
        if self.dimensions < 1 {
            return Err(Error::config("dimensions must be positive"));
        }
        if self.bounds.dimensions() != self.dimensions {
            return Err(Error::config(format!(
                "bounds cover {} dimensions, config has {}",
                self.bounds.dimensions(),
                self.dimensions
            )));
        }
        Ok(())
    }
}

/// `K x K` counts; rows are the true class, columns the predicted class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(classes: usize) -> Self {
        ConfusionMatrix {
            classes,
            counts: vec![0; classes * classes],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let classes = rows.len();
        if rows.iter().any(|r| r.len() != classes) {
            return Err(Error::ShapeMismatch("confusion matrix must be square".into()));
        }
        Ok(ConfusionMatrix {
            classes,
            counts: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.classes + predicted]
    }

    pub(crate) fn increment(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.classes + predicted] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|k| self.get(k, k)).sum()
    }

    /// Support of class `k`.
    pub fn row_sum(&self, k: usize) -> u64 {
        (0..self.classes).map(|p| self.get(k, p)).sum()
    }

    /// Number of samples predicted as class `k`.
    pub fn col_sum(&self, k: usize) -> u64 {
        (0..self.classes).map(|t| self.get(t, k)).sum()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.classes.max(1)).map(<[u64]>::to_vec).collect()
    }
}

/// A plotted curve with its scalar summary (AUC or average precision).
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSeries {
    pub points: Vec<(f64, f64)>,
    pub summary: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_normalized_rows() {
        let m = PredictionMatrix::new(&[vec![0.7, 0.3], vec![0.5, 0.5]]).unwrap();
        assert_eq!(m.samples(), 2);
        assert_eq!(m.classes(), 2);
        // re-validation is idempotent
        let again = PredictionMatrix::validate(m.scores().clone()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn rejects_bad_row_sum() {
        match PredictionMatrix::new(&[vec![0.7, 0.4]]) {
            Err(Error::RowSumOutOfTolerance { row: 0, sum }) => {
                assert!((sum - 1.1).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_negative_before_sum() {
        assert!(matches!(
            PredictionMatrix::new(&[vec![-0.1, 1.1]]),
            Err(Error::NegativeScore { row: 0, col: 0 })
        ));
    }

    #[test]
    fn rejects_non_finite_and_tiny_shapes() {
        assert!(matches!(
            PredictionMatrix::new(&[vec![0.5, f64::NAN]]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
        assert!(matches!(
            PredictionMatrix::new(&[vec![1.0]]),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(PredictionMatrix::new(&[]), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn tolerance_admits_six_decimal_rounding() {
        // five entries each rounded by up to 5e-7
        let row = vec![0.200_000_5, 0.200_000_5, 0.200_000_5, 0.200_000_5, 0.200_000_5];
        assert!(PredictionMatrix::new(&[row]).is_ok());
        assert!(PredictionMatrix::new(&[vec![0.49, 0.49]]).is_err());
    }

    #[test]
    fn bounds_and_config_validation() {
        assert!(Bounds::new(vec![0.0], vec![0.0]).is_err());
        assert!(Bounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
        let cfg = SsaConfig::default();
        assert_eq!((cfg.num_salps, cfg.max_iterations, cfg.dimensions), (100, 100, 3));
        assert_eq!(cfg.bounds, Bounds::unit(3));
        cfg.validate().unwrap();
        let bad = SsaConfig {
            num_salps: 1,
            ..SsaConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn weights_stay_in_unit_interval() {
        assert!(WeightVector::new(vec![0.2, 1.2]).is_err());
        assert!(WeightVector::new(vec![-0.1]).is_err());
        let w = WeightVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(w.normalized(), vec![0.5, 0.25, 0.25]);
        let z = WeightVector::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(z.normalized(), vec![0.0, 0.0]);
    }

    #[test]
    fn class_names_follow_grade_order() {
        assert_eq!(ClassLabel(0).name(), "Normal");
        assert_eq!(ClassLabel(4).name(), "Proliferative");
        assert_eq!(class_name(7), "class7");
    }
}
