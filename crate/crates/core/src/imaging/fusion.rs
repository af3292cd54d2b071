use super::dwt::{dwt2, idwt2, DetailBands, SubbandPyramid};
use super::{clahe, gamma_correct, Image, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Wavelet {
    #[default]
    Haar,
}

/// How the approximation (LL) bands are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ApproxRule {
    #[default]
    Average,
}

/// How detail bands are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetailRule {
    /// Keep the coefficient of larger magnitude; ties keep the first image's.
    #[default]
    MaxAbs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FusionConfig {
    pub wavelet: Wavelet,
    pub levels: usize,
    pub approx_rule: ApproxRule,
    pub detail_rule: DetailRule,
    pub clahe_clip: f64,
    pub clahe_tiles: (usize, usize),
    pub gamma: f64,
    /// Gamma-correct the original image rather than the CLAHE output before
    /// fusing.
    pub parallel_branches: bool,
}

impl Default for FusionConfig {
    fn default() -> Self {
        FusionConfig {
            wavelet: Wavelet::Haar,
            levels: 1,
            approx_rule: ApproxRule::Average,
            detail_rule: DetailRule::MaxAbs,
            clahe_clip: 2.0,
            clahe_tiles: (8, 8),
            gamma: 0.8,
            parallel_branches: false,
        }
    }
}

impl FusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::config(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.clahe_clip >= 1.0 && self.clahe_clip.is_finite()) {
            return Err(Error::config(format!(
                "clip limit must be >= 1, got {}",
                self.clahe_clip
            )));
        }
        if self.clahe_tiles.0 == 0 || self.clahe_tiles.1 == 0 {
            return Err(Error::config("tile grid must be at least 1x1"));
        }
        if self.levels == 0 {
            return Err(Error::config("wavelet levels must be at least 1"));
        }
        Ok(())
    }
}

fn pick(a: &Matrix, b: &Matrix) -> Matrix {
    let data = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(&x, &y)| if y.abs() > x.abs() { y } else { x })
        .collect();
    Matrix { data, ..a.clone() }
}

fn merge(a: &SubbandPyramid, b: &SubbandPyramid) -> SubbandPyramid {
    let approx = Matrix {
        data: a
            .approx
            .data
            .iter()
            .zip(&b.approx.data)
            .map(|(x, y)| (x + y) / 2.0)
            .collect(),
        ..a.approx.clone()
    };
    let details = a
        .details
        .iter()
        .zip(&b.details)
        .map(|(da, db)| DetailBands {
            lh: pick(&da.lh, &db.lh),
            hl: pick(&da.hl, &db.hl),
            hh: pick(&da.hh, &db.hh),
        })
        .collect();
    SubbandPyramid {
        approx,
        details,
        shapes: a.shapes.clone(),
    }
}

/// Fuses two real planes without quantizing the result.
pub fn fuse_planes(a: &Matrix, b: &Matrix, cfg: &FusionConfig) -> Result<Matrix> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} vs {}x{} planes",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let pa = dwt2(a, cfg.levels)?;
    let pb = dwt2(b, cfg.levels)?;
    idwt2(&merge(&pa, &pb))
}

/// Per-channel wavelet fusion of two equally shaped images.
pub fn fuse(a: &Image, b: &Image, cfg: &FusionConfig) -> Result<Image> {
    cfg.validate()?;
    if !a.same_shape(b) {
        return Err(Error::ShapeMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    let planes = (0..a.channels())
        .map(|c| fuse_planes(&a.channel(c), &b.channel(c), cfg))
        .collect::<Result<Vec<_>>>()?;
    Image::from_planes_u8(&planes)
}

/// CLAHE, then gamma, then fusion of the two enhanced variants.
pub fn full_pipeline(img: &Image, cfg: &FusionConfig) -> Result<Image> {
    cfg.validate()?;
    let enhanced = clahe(img, cfg.clahe_clip, cfg.clahe_tiles)?;
    let brightened = if cfg.parallel_branches {
        gamma_correct(img, cfg.gamma)?
    } else {
        gamma_correct(&enhanced, cfg.gamma)?
    };
    fuse(&enhanced, &brightened, cfg)
}
