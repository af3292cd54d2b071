use super::{to_u8, Image};
use crate::error::{Error, Result};

/// Power-law brightness mapping `y = x^gamma` on `[0, 1]`-scaled 8-bit
/// samples. `gamma < 1` brightens.
pub fn gamma_correct(img: &Image, gamma: f64) -> Result<Image> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::config(format!("gamma must be positive, got {gamma}")));
    }
    let lut: Vec<u8> = (0..256)
        .map(|v| to_u8(255.0 * (v as f64 / 255.0).powf(gamma)))
        .collect();
    let data = img.bytes()?.iter().map(|&v| lut[v as usize]).collect();
    Image::from_bytes(img.width(), img.height(), img.channels(), data)
}
