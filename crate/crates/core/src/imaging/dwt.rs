//! Orthonormal 2-D Haar transform.
//!
//! Analysis pairs `(x[2k], x[2k+1])` into `a = (x0 + x1)/sqrt2` and
//! `d = (x0 - x1)/sqrt2`, rows first, then columns. An odd-length signal is
//! extended by repeating its last sample (half-sample symmetric), so every
//! level halves each dimension rounding up and reconstruction stays exact.
//!
//! Subband naming: `LH` is low-pass along rows and high-pass along columns
//! (horizontal edges), `HL` the reverse, `HH` high-pass in both.

use std::f64::consts::FRAC_1_SQRT_2;

use super::Matrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DetailBands {
    pub lh: Matrix,
    pub hl: Matrix,
    pub hh: Matrix,
}

/// Multi-level decomposition. `details[0]` is the finest level and
/// `shapes[l]` the `(rows, cols)` of the signal that level `l` analysed.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandPyramid {
    pub approx: Matrix,
    pub details: Vec<DetailBands>,
    pub shapes: Vec<(usize, usize)>,
}

impl SubbandPyramid {
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Sum of squares over every coefficient.
    pub fn energy(&self) -> f64 {
        self.approx.energy()
            + self
                .details
                .iter()
                .map(|d| d.lh.energy() + d.hl.energy() + d.hh.energy())
                .sum::<f64>()
    }
}

fn half(n: usize) -> usize {
    n.div_ceil(2)
}

fn analyze(signal: &[f64], low: &mut [f64], high: &mut [f64]) {
    let n = signal.len();
    for k in 0..low.len() {
        let x0 = signal[2 * k];
        let x1 = if 2 * k + 1 < n { signal[2 * k + 1] } else { x0 };
        low[k] = (x0 + x1) * FRAC_1_SQRT_2;
        high[k] = (x0 - x1) * FRAC_1_SQRT_2;
    }
}

fn synthesize(low: &[f64], high: &[f64], out: &mut [f64]) {
    let n = out.len();
    for k in 0..low.len() {
        out[2 * k] = (low[k] + high[k]) * FRAC_1_SQRT_2;
        if 2 * k + 1 < n {
            out[2 * k + 1] = (low[k] - high[k]) * FRAC_1_SQRT_2;
        }
    }
}

fn analyze_level(x: &Matrix) -> (Matrix, DetailBands) {
    let (rows, cols) = (x.rows, x.cols);
    let (hr, hc) = (half(rows), half(cols));
    // rows: L | H, each rows x hc
    let mut row_low = Matrix::zeros(rows, hc);
    let mut row_high = Matrix::zeros(rows, hc);
    for r in 0..rows {
        analyze(
            &x.data[r * cols..(r + 1) * cols],
            &mut row_low.data[r * hc..(r + 1) * hc],
            &mut row_high.data[r * hc..(r + 1) * hc],
        );
    }
    let columns = |m: &Matrix| {
        let mut low = Matrix::zeros(hr, hc);
        let mut high = Matrix::zeros(hr, hc);
        let mut col = vec![0.0; rows];
        let (mut lo, mut hi) = (vec![0.0; hr], vec![0.0; hr]);
        for c in 0..hc {
            for (r, v) in col.iter_mut().enumerate() {
                *v = m.get(r, c);
            }
            analyze(&col, &mut lo, &mut hi);
            for r in 0..hr {
                low.set(r, c, lo[r]);
                high.set(r, c, hi[r]);
            }
        }
        (low, high)
    };
    let (ll, lh) = columns(&row_low);
    let (hl, hh) = columns(&row_high);
    (ll, DetailBands { lh, hl, hh })
}

fn synthesize_level(ll: &Matrix, d: &DetailBands, rows: usize, cols: usize) -> Matrix {
    let (hr, hc) = (half(rows), half(cols));
    let columns = |low: &Matrix, high: &Matrix| {
        let mut out = Matrix::zeros(rows, hc);
        let (mut lo, mut hi) = (vec![0.0; hr], vec![0.0; hr]);
        let mut col = vec![0.0; rows];
        for c in 0..hc {
            for r in 0..hr {
                lo[r] = low.get(r, c);
                hi[r] = high.get(r, c);
            }
            synthesize(&lo, &hi, &mut col);
            for (r, &v) in col.iter().enumerate() {
                out.set(r, c, v);
            }
        }
        out
    };
    let row_low = columns(ll, &d.lh);
    let row_high = columns(&d.hl, &d.hh);
    let mut out = Matrix::zeros(rows, cols);
    for r in 0..rows {
        synthesize(
            &row_low.data[r * hc..(r + 1) * hc],
            &row_high.data[r * hc..(r + 1) * hc],
            &mut out.data[r * cols..(r + 1) * cols],
        );
    }
    out
}

/// `levels`-deep Haar analysis; recursion continues on `LL` only.
pub fn dwt2(x: &Matrix, levels: usize) -> Result<SubbandPyramid> {
    if levels == 0 {
        return Err(Error::config("wavelet levels must be at least 1"));
    }
    let need = 1usize.checked_shl(levels as u32).unwrap_or(usize::MAX);
    if x.rows < need || x.cols < need || x.data.len() != x.rows * x.cols {
        return Err(Error::config(format!(
            "{}x{} input cannot support {levels} wavelet levels",
            x.rows, x.cols
        )));
    }
    let mut current = x.clone();
    let mut details = Vec::with_capacity(levels);
    let mut shapes = Vec::with_capacity(levels);
    for _ in 0..levels {
        shapes.push((current.rows, current.cols));
        let (ll, bands) = analyze_level(&current);
        details.push(bands);
        current = ll;
    }
    Ok(SubbandPyramid {
        approx: current,
        details,
        shapes,
    })
}

/// Exact inverse of [`dwt2`].
pub fn idwt2(pyr: &SubbandPyramid) -> Result<Matrix> {
    if pyr.details.is_empty() || pyr.details.len() != pyr.shapes.len() {
        return Err(Error::config("pyramid has no levels or mismatched shape list"));
    }
    let mut current = pyr.approx.clone();
    for (bands, &(rows, cols)) in pyr.details.iter().zip(&pyr.shapes).rev() {
        let (hr, hc) = (half(rows), half(cols));
        let ok = [&current, &bands.lh, &bands.hl, &bands.hh]
            .iter()
            .all(|m| m.rows == hr && m.cols == hc && m.data.len() == hr * hc);
        if !ok {
            return Err(Error::config(format!("subbands do not match a {rows}x{cols} level")));
        }
        current = synthesize_level(&current, bands, rows, cols);
    }
    Ok(current)
}
