//! Weighted soft-voting ensembles and the accuracy objective the swarm
//! maximizes.
//!
//! The ensemble score matrix is `sum_i w_i * P_i` over the base models'
//! probability matrices (rows are not renormalized), the predicted label is
//! the row argmax with ties going to the lowest class index, and the
//! fitness of a weight vector is plain accuracy against the truth labels.

use crate::error::{Error, Result};
use crate::metrics::accuracy_score;
use crate::ssa::{OptimizationResult, SalpSwarm};
use crate::types::{ClassLabel, LabelVector, PredictionMatrix, ScoreMatrix, SsaConfig, WeightVector};

/// Upper limit on lattice points visited by [`grid_search_oracle`].
pub const MAX_GRID_POINTS: u128 = 10_000_000;

/// Aligned base-model predictions and the labels they are scored against.
#[derive(Debug, Clone)]
pub struct EnsembleProblem {
    predictions: Vec<PredictionMatrix>,
    truth: LabelVector,
    model_names: Vec<String>,
}

impl EnsembleProblem {
    /// All matrices must share their shape, `truth` must have one label per
    /// row, and every label must be a valid column index.
    pub fn new(predictions: Vec<PredictionMatrix>, truth: LabelVector, model_names: Vec<String>) -> Result<Self> {
        let first = predictions
            .first()
            .ok_or_else(|| Error::config("ensemble needs at least one model"))?;
        let (samples, classes) = (first.samples(), first.classes());
        for (i, p) in predictions.iter().enumerate() {
            if p.samples() != samples || p.classes() != classes {
                return Err(Error::ShapeMismatch(format!(
                    "model {i} is {}x{}, model 0 is {samples}x{classes}",
                    p.samples(),
                    p.classes()
                )));
            }
        }
        if truth.len() != samples {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {samples} samples",
                truth.len()
            )));
        }
        if let Some(bad) = truth.iter().find(|l| l.0 >= classes) {
            return Err(Error::LabelOutOfRange { label: bad.0, classes });
        }
        if model_names.len() != predictions.len() {
            return Err(Error::config(format!(
                "{} model names for {} models",
                model_names.len(),
                predictions.len()
            )));
        }
        Ok(EnsembleProblem {
            predictions,
            truth,
            model_names,
        })
    }

    /// Names the models `model_0`, `model_1`, ...
    pub fn unnamed(predictions: Vec<PredictionMatrix>, truth: LabelVector) -> Result<Self> {
        let names = (0..predictions.len()).map(|i| format!("model_{i}")).collect();
        Self::new(predictions, truth, names)
    }

    pub fn models(&self) -> usize {
        self.predictions.len()
    }

    pub fn samples(&self) -> usize {
        self.truth.len()
    }

    pub fn classes(&self) -> usize {
        self.predictions[0].classes()
    }

    pub fn predictions(&self) -> &[PredictionMatrix] {
        &self.predictions
    }

    pub fn truth(&self) -> &[ClassLabel] {
        &self.truth
    }

    pub fn model_names(&self) -> &[String] {
        &self.model_names
    }

    /// Restriction to the given sample indices.
    pub fn subset(&self, idx: &[usize]) -> EnsembleProblem {
        EnsembleProblem {
            predictions: self.predictions.iter().map(|p| p.select_rows(idx)).collect(),
            truth: idx.iter().map(|&i| self.truth[i]).collect(),
            model_names: self.model_names.clone(),
        }
    }

    fn check_weights(&self, weights: &[f64]) -> Result<()> {
        if weights.len() != self.models() {
            return Err(Error::config(format!(
                "{} weights for {} models",
                weights.len(),
                self.models()
            )));
        }
        Ok(())
    }

    /// Accuracy of the ensemble under `weights`.
    pub fn accuracy_at(&self, weights: &[f64]) -> Result<f64> {
        self.check_weights(weights)?;
        Ok(self.accuracy_unchecked(weights))
    }

    /// Accuracy of model `i` on its own.
    pub fn single_model_accuracy(&self, i: usize) -> f64 {
        let predicted = aggregate_labels(self.predictions[i].scores());
        accuracy_score(&self.truth, &predicted)
    }

    // Same summation order as `weighted_aggregate`, without materializing
    // the score matrix.
    fn accuracy_unchecked(&self, weights: &[f64]) -> f64 {
        let classes = self.classes();
        let mut row = vec![0.0; classes];
        let mut correct = 0usize;
        for (i, truth) in self.truth.iter().enumerate() {
            row.iter_mut().for_each(|v| *v = 0.0);
            for (w, p) in weights.iter().zip(&self.predictions) {
                for (acc, &x) in row.iter_mut().zip(p.row(i)) {
                    *acc += w * x;
                }
            }
            if argmax(&row) == truth.0 {
                correct += 1;
            }
        }
        correct as f64 / self.samples() as f64
    }
}

/// `sum_i weights[i] * P_i`, elementwise.
pub fn weighted_aggregate(problem: &EnsembleProblem, weights: &[f64]) -> Result<ScoreMatrix> {
    problem.check_weights(weights)?;
    let mut out = ScoreMatrix::zeros(problem.samples(), problem.classes());
    for i in 0..problem.samples() {
        let row = out.row_mut(i);
        for (w, p) in weights.iter().zip(&problem.predictions) {
            for (acc, &x) in row.iter_mut().zip(p.row(i)) {
                *acc += w * x;
            }
        }
    }
    Ok(out)
}

/// Row argmax, ties to the lowest index.
pub fn aggregate_labels(scores: &ScoreMatrix) -> LabelVector {
    scores.rows().map(|r| ClassLabel(argmax(r))).collect()
}

fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = k;
        }
    }
    best
}

/// The fitness function handed to the swarm. A weight vector of the wrong
/// length yields NaN, which the optimizer reports as an objective failure.
pub fn accuracy_objective(problem: &EnsembleProblem) -> impl Fn(&[f64]) -> f64 + '_ {
    move |w: &[f64]| problem.accuracy_at(w).unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchResult {
    pub weights: Vec<f64>,
    pub accuracy: f64,
    pub evaluated: usize,
}

/// Exhaustive search over `{0, step, 2 step, ...} ∩ [0, 1]` per weight.
///
/// Points are visited in lexicographic order (first weight slowest) and
/// only a strictly better accuracy replaces the incumbent, so ties resolve
/// to the lexicographically first point.
pub fn grid_search_oracle(problem: &EnsembleProblem, step: f64) -> Result<GridSearchResult> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::config(format!("grid step {step} outside (0, 0.5]")));
    }
    let per_axis = (1.0 / step + 1e-9).floor() as usize + 1;
    let dims = problem.models();
    let total = (per_axis as u128).checked_pow(dims as u32).unwrap_or(u128::MAX);
    if total > MAX_GRID_POINTS {
        return Err(Error::TooManyGridPoints {
            points: total,
            limit: MAX_GRID_POINTS,
        });
    }
    let value = |k: usize| (k as f64 * step).min(1.0);

    let mut index = vec![0usize; dims];
    let mut weights = vec![0.0; dims];
    let mut best = GridSearchResult {
        weights: weights.clone(),
        accuracy: f64::NEG_INFINITY,
        evaluated: 0,
    };
    let mut evaluated = 0usize;
    loop {
        for (w, &k) in weights.iter_mut().zip(&index) {
            *w = value(k);
        }
        let acc = problem.accuracy_unchecked(&weights);
        evaluated += 1;
        if acc > best.accuracy {
            best.accuracy = acc;
            best.weights.copy_from_slice(&weights);
        }
        // odometer, last axis fastest
        let mut axis = dims;
        loop {
            if axis == 0 {
                best.evaluated = evaluated;
                return Ok(best);
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < per_axis {
                break;
            }
            index[axis] = 0;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleOptions {
    /// Start the swarm from every one-hot vector and the uniform vector.
    pub inject_one_hot: bool,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions { inject_one_hot: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleOutcome {
    pub weights: WeightVector,
    pub accuracy: f64,
    pub result: OptimizationResult,
}

/// One-hot vectors for every model followed by the uniform vector.
pub fn seed_positions(models: usize) -> Vec<Vec<f64>> {
    let mut seeds: Vec<Vec<f64>> = (0..models)
        .map(|i| (0..models).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    seeds.push(vec![1.0 / models as f64; models]);
    seeds
}

/// Searches ensemble weights with the salp swarm.
pub fn optimize_ensemble(
    problem: &EnsembleProblem,
    config: &SsaConfig,
    options: EnsembleOptions,
) -> Result<EnsembleOutcome> {
    if config.dimensions != problem.models() {
        return Err(Error::config(format!(
            "config has {} dimensions for {} models",
            config.dimensions,
            problem.models()
        )));
    }
    let b = &config.bounds;
    if b.lower().iter().any(|&l| l < 0.0) || b.upper().iter().any(|&u| u > 1.0) {
        return Err(Error::config("ensemble weight bounds must lie within [0, 1]"));
    }
    let swarm = SalpSwarm::new(config.clone())?;
    let mut seeds = if options.inject_one_hot {
        seed_positions(problem.models())
    } else {
        Vec::new()
    };
    seeds.truncate(config.num_salps);
    let result = swarm.optimize_from(accuracy_objective(problem), &seeds)?;
    Ok(EnsembleOutcome {
        weights: WeightVector::new(result.best_position.clone())?,
        accuracy: result.best_fitness,
        result,
    })
}
