use std::fmt;

use super::special::chi_squared_sf;
use crate::error::{Error, Result};
use crate::types::ClassLabel;

/// Below this many discordant pairs the exact binomial test is used.
pub const EXACT_BELOW: u64 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McNemarMethod {
    /// `(|b - c| - 1)^2 / (b + c)` against chi-squared with one degree of freedom.
    ChiSquaredCorrected,
    /// Two-sided binomial test of `min(b, c)` out of `b + c` at `p = 0.5`.
    ExactBinomial,
}

impl McNemarMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            McNemarMethod::ChiSquaredCorrected => "chi2_corrected",
            McNemarMethod::ExactBinomial => "exact_binomial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "chi2_corrected" => Some(McNemarMethod::ChiSquaredCorrected),
            "exact_binomial" => Some(McNemarMethod::ExactBinomial),
            _ => None,
        }
    }
}

impl fmt::Display for McNemarMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McNemarResult {
    /// Model A right, model B wrong.
    pub discordant_b: u64,
    /// Model A wrong, model B right.
    pub discordant_c: u64,
    /// The chi-squared statistic, or `min(b, c)` for the exact test.
    pub statistic: f64,
    pub p_value: f64,
    pub method: McNemarMethod,
}

impl McNemarResult {
    pub fn significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Paired test on the samples where exactly one of two classifiers is right.
pub fn mcnemar(truth: &[ClassLabel], pred_a: &[ClassLabel], pred_b: &[ClassLabel]) -> Result<McNemarResult> {
    if truth.len() != pred_a.len() || truth.len() != pred_b.len() {
        return Err(Error::ShapeMismatch(format!(
            "label vectors of lengths {}, {}, {}",
            truth.len(),
            pred_a.len(),
            pred_b.len()
        )));
    }
    let (mut b, mut c) = (0u64, 0u64);
    for ((t, a), p) in truth.iter().zip(pred_a).zip(pred_b) {
        match (a == t, p == t) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    Ok(mcnemar_from_counts(b, c))
}

/// McNemar's test from the discordant counts directly.
pub fn mcnemar_from_counts(b: u64, c: u64) -> McNemarResult {
    let n = b + c;
    let (statistic, p_value, method) = if n == 0 {
        (0.0, 1.0, McNemarMethod::ExactBinomial)
    } else if n >= EXACT_BELOW {
        let diff = b.abs_diff(c) as f64 - 1.0;
        let stat = diff.max(0.0).powi(2) / n as f64;
        (stat, chi_squared_sf(stat, 1.0), McNemarMethod::ChiSquaredCorrected)
    } else {
        let k = b.min(c);
        (k as f64, binomial_two_sided(k, n), McNemarMethod::ExactBinomial)
    };
    McNemarResult {
        discordant_b: b,
        discordant_c: c,
        statistic,
        p_value,
        method,
    }
}

/// `min(1, 2 P(X <= k))` for `X ~ Binomial(n, 1/2)`, `k <= n/2`.
fn binomial_two_sided(k: u64, n: u64) -> f64 {
    let mut term = 0.5f64.powi(n as i32);
    let mut tail = term;
    for i in 0..k {
        term *= (n - i) as f64 / (i + 1) as f64;
        tail += term;
    }
    (2.0 * tail).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::labels;

    #[test]
    #[allow(clippy::excessive_precision)]
    fn planted_chi_squared_case() {
        let r = mcnemar_from_counts(20, 5);
        assert_eq!(r.method, McNemarMethod::ChiSquaredCorrected);
        assert_eq!(r.statistic, 7.84);
        // erfc(sqrt(3.92)) at 40 digits
        assert!((r.p_value - 0.005_110_260_660_855_865_6).abs() < 5e-13);
        assert!((r.p_value - 0.005110).abs() < 1e-5);
    }

    #[test]
    fn small_counts_use_exact_test() {
        let r = mcnemar_from_counts(10, 2);
        assert_eq!(r.method, McNemarMethod::ExactBinomial);
        // 2 * (1 + 12 + 66) / 4096
        assert!((r.p_value - 158.0 / 4096.0).abs() < 1e-15);
        assert_eq!(mcnemar_from_counts(3, 3).p_value, 1.0);
    }

    #[test]
    fn identical_predictions() {
        let t = labels(&[0, 1, 2, 1]);
        let p = labels(&[0, 2, 2, 0]);
        let r = mcnemar(&t, &p, &p).unwrap();
        assert_eq!((r.discordant_b, r.discordant_c), (0, 0));
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        assert!(!r.significant(0.05));
    }

    #[test]
    fn counts_and_symmetry() {
        let t = labels(&[0, 0, 1, 1, 2]);
        let a = labels(&[0, 1, 1, 0, 2]);
        let b = labels(&[1, 0, 1, 1, 0]);
        let ab = mcnemar(&t, &a, &b).unwrap();
        let ba = mcnemar(&t, &b, &a).unwrap();
        assert_eq!((ab.discordant_b, ab.discordant_c), (2, 2));
        assert_eq!((ab.statistic, ab.p_value), (ba.statistic, ba.p_value));
        assert!(mcnemar(&t, &a, &labels(&[0])).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [McNemarMethod::ChiSquaredCorrected, McNemarMethod::ExactBinomial] {
            assert_eq!(McNemarMethod::parse(m.as_str()), Some(m));
        }
    }
}
