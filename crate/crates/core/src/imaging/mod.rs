//! Fundus-image preprocessing: CLAHE, gamma correction, Haar wavelet
//! fusion, resizing and augmentation.
//!
//! Images are row-major and interleaved. Samples are either 8-bit or reals
//! in `[0, 1]`; [`Samples`] records which. Every stage that produces 8-bit
//! output rounds half up and clamps to `[0, 255]`, so results are
//! reproducible bit-for-bit across platforms.

mod clahe;
mod dwt;
mod fusion;
mod geometry;
mod tone;

use std::path::Path;

pub use clahe::clahe;
pub use dwt::{dwt2, idwt2, DetailBands, SubbandPyramid};
pub use fusion::{full_pipeline, fuse, fuse_planes, ApproxRule, DetailRule, FusionConfig, Wavelet};
pub use geometry::{
    augment, crop_resize, flip_horizontal, flip_vertical, resize_bilinear, resize_normalize, rotate, AugmentSpec,
    MAX_ROTATION_DEG, MIN_CROP_AREA,
};
pub use tone::gamma_correct;

use crate::error::{Error, Result};

/// Round half up and clamp into the 8-bit range.
pub(crate) fn to_u8(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

#[derive(Debug, Clone, PartialEq)]
pub enum Samples {
    Bytes(Vec<u8>),
    /// Normalized reals in `[0, 1]`.
    Unit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Samples,
}

impl Image {
    fn check(width: usize, height: usize, channels: usize, len: usize) -> Result<()> {
        if channels != 1 && channels != 3 {
            return Err(Error::config(format!("{channels} channels; expected 1 or 3")));
        }
        if width == 0 || height == 0 {
            return Err(Error::config("image has no pixels"));
        }
        if len != width * height * channels {
            return Err(Error::ShapeMismatch(format!(
                "{len} samples for {width}x{height}x{channels}"
            )));
        }
        Ok(())
    }

    pub fn from_bytes(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        Self::check(width, height, channels, data.len())?;
        Ok(Image {
            width,
            height,
            channels,
            samples: Samples::Bytes(data),
        })
    }

    pub fn from_unit(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        Self::check(width, height, channels, data.len())?;
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: i / (width * channels),
                col: i % (width * channels),
            });
        }
        Ok(Image {
            width,
            height,
            channels,
            samples: Samples::Unit(data),
        })
    }

    /// A single-valued 8-bit image.
    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self> {
        Self::from_bytes(width, height, channels, vec![value; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    pub fn is_bytes(&self) -> bool {
        matches!(self.samples, Samples::Bytes(_))
    }

    /// The 8-bit samples, or an error for a normalized image.
    pub fn bytes(&self) -> Result<&[u8]> {
        match &self.samples {
            Samples::Bytes(b) => Ok(b),
            Samples::Unit(_) => Err(Error::config("operation needs an 8-bit image")),
        }
    }

    /// Samples on the 0..=255 scale as reals, whatever the representation.
    pub(crate) fn values_255(&self) -> Vec<f64> {
        match &self.samples {
            Samples::Bytes(b) => b.iter().map(|&v| v as f64).collect(),
            Samples::Unit(u) => u.iter().map(|&v| v * 255.0).collect(),
        }
    }

    /// Quantizes normalized samples to 8 bits; 8-bit images are returned as is.
    pub fn to_bytes(&self) -> Image {
        match &self.samples {
            Samples::Bytes(_) => self.clone(),
            Samples::Unit(u) => Image {
                width: self.width,
                height: self.height,
                channels: self.channels,
                samples: Samples::Bytes(u.iter().map(|&v| to_u8(v * 255.0)).collect()),
            },
        }
    }

    pub(crate) fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    /// One channel as a `height x width` real matrix on the 0..=255 scale.
    pub fn channel(&self, c: usize) -> Matrix {
        let values = self.values_255();
        let data = values.iter().skip(c).step_by(self.channels).copied().collect();
        Matrix {
            rows: self.height,
            cols: self.width,
            data,
        }
    }

    /// Interleaves real planes back into an 8-bit image.
    pub(crate) fn from_planes_u8(planes: &[Matrix]) -> Result<Image> {
        let first = &planes[0];
        let channels = planes.len();
        let mut data = vec![0u8; first.rows * first.cols * channels];
        for (c, plane) in planes.iter().enumerate() {
            for (i, &v) in plane.data.iter().enumerate() {
                data[i * channels + c] = to_u8(v);
            }
        }
        Image::from_bytes(first.cols, first.rows, channels, data)
    }

    /// Reads PNG or JPEG. Gray images stay single-channel; anything else
    /// becomes 8-bit RGB.
    pub fn load(path: impl AsRef<Path>) -> Result<Image> {
        let img = image::open(path.as_ref())?;
        let gray = matches!(
            img.color(),
            image::ColorType::L8 | image::ColorType::L16 | image::ColorType::La8 | image::ColorType::La16
        );
        if gray {
            let g = img.to_luma8();
            Image::from_bytes(g.width() as usize, g.height() as usize, 1, g.into_raw())
        } else {
            let rgb = img.to_rgb8();
            Image::from_bytes(rgb.width() as usize, rgb.height() as usize, 3, rgb.into_raw())
        }
    }

    /// Writes an 8-bit PNG, quantizing normalized samples first.
    pub fn save_png(&self, path: impl AsRef<Path>) -> Result<()> {
        let bytes = self.to_bytes();
        let data = bytes.bytes()?.to_vec();
        let color = if self.channels == 1 {
            image::ExtendedColorType::L8
        } else {
            image::ExtendedColorType::Rgb8
        };
        image::save_buffer_with_format(
            path.as_ref(),
            &data,
            self.width as u32,
            self.height as u32,
            color,
            image::ImageFormat::Png,
        )?;
        Ok(())
    }
}

/// Dense row-major real matrix used for wavelet coefficients and image planes.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn energy(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn rms_diff(&self, other: &Matrix) -> f64 {
        let n = self.data.len().max(1) as f64;
        let sq: f64 = self.data.iter().zip(&other.data).map(|(a, b)| (a - b) * (a - b)).sum();
        (sq / n).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_up_and_clamped() {
        assert_eq!(to_u8(127.5), 128);
        assert_eq!(to_u8(127.499_999), 127);
        assert_eq!(to_u8(-3.0), 0);
        assert_eq!(to_u8(300.0), 255);
    }

    #[test]
    fn shape_checks() {
        assert!(Image::from_bytes(2, 2, 2, vec![0; 8]).is_err());
        assert!(Image::from_bytes(2, 2, 1, vec![0; 3]).is_err());
        assert!(Image::from_unit(1, 1, 1, vec![f64::NAN]).is_err());
        let img = Image::from_unit(1, 1, 1, vec![0.5]).unwrap();
        assert!(img.bytes().is_err());
        assert_eq!(img.to_bytes().bytes().unwrap(), &[128]);
    }

    #[test]
    fn png_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.png");
        let data: Vec<u8> = (0..4 * 3 * 3).map(|v| (v * 7) as u8).collect();
        let img = Image::from_bytes(4, 3, 3, data).unwrap();
        img.save_png(&path).unwrap();
        assert_eq!(Image::load(&path).unwrap(), img);
        let gray = Image::from_bytes(3, 2, 1, vec![0, 50, 100, 150, 200, 250]).unwrap();
        gray.save_png(&path).unwrap();
        assert_eq!(Image::load(&path).unwrap(), gray);
    }

    #[test]
    fn channel_planes() {
        let img = Image::from_bytes(2, 1, 3, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(img.channel(1).data, vec![2.0, 5.0]);
        let back = Image::from_planes_u8(&[img.channel(0), img.channel(1), img.channel(2)]).unwrap();
        assert_eq!(back, img);
    }
}
