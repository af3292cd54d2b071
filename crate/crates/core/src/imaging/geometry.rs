//! Resampling and augmentation.
//!
//! All resampling is bilinear with half-pixel centers: destination pixel `d`
//! reads source coordinate `(d + 0.5) * src/dst - 0.5`, clamped to the image
//! (border replicate). Samples keep their representation; 8-bit results are
//! rounded half up.

use rand::Rng;

use super::{to_u8, Image, Samples};
use crate::error::{Error, Result};

/// Largest rotation angle, in degrees, either way.
pub const MAX_ROTATION_DEG: f64 = 15.0;
/// Smallest fraction of the image area a random crop may keep.
pub const MIN_CROP_AREA: f64 = 0.8;

/// Native-scale samples of one image, for resampling.
struct Raster<'a> {
    img: &'a Image,
    values: Vec<f64>,
}

impl<'a> Raster<'a> {
    fn new(img: &'a Image) -> Self {
        let values = match img.samples() {
            Samples::Bytes(b) => b.iter().map(|&v| v as f64).collect(),
            Samples::Unit(u) => u.clone(),
        };
        Raster { img, values }
    }

    fn at(&self, x: usize, y: usize, c: usize) -> f64 {
        self.values[(y * self.img.width() + x) * self.img.channels() + c]
    }

    /// Bilinear sample at real coordinates, clamped to the border.
    fn sample(&self, x: f64, y: f64, c: usize) -> f64 {
        let (w, h) = (self.img.width(), self.img.height());
        let x = x.clamp(0.0, (w - 1) as f64);
        let y = y.clamp(0.0, (h - 1) as f64);
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        if fx == 0.0 && fy == 0.0 {
            return self.at(x0, y0, c);
        }
        let top = self.at(x0, y0, c) * (1.0 - fx) + self.at(x1, y0, c) * fx;
        let bottom = self.at(x0, y1, c) * (1.0 - fx) + self.at(x1, y1, c) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Builds a `w x h` image of the same kind, `f(x, y, c)` giving each
    /// native-scale sample.
    fn build(&self, w: usize, h: usize, f: impl Fn(usize, usize, usize) -> f64) -> Result<Image> {
        let channels = self.img.channels();
        let values = (0..h)
            .flat_map(|y| (0..w).flat_map(move |x| (0..channels).map(move |c| (x, y, c))))
            .map(|(x, y, c)| f(x, y, c));
        if self.img.is_bytes() {
            Image::from_bytes(w, h, channels, values.map(to_u8).collect())
        } else {
            Image::from_unit(w, h, channels, values.map(|v| v.clamp(0.0, 1.0)).collect())
        }
    }
}

pub fn resize_bilinear(img: &Image, width: usize, height: usize) -> Result<Image> {
    if width == 0 || height == 0 {
        return Err(Error::config("resize target has no pixels"));
    }
    let r = Raster::new(img);
    let sx = img.width() as f64 / width as f64;
    let sy = img.height() as f64 / height as f64;
    r.build(width, height, |x, y, c| {
        r.sample((x as f64 + 0.5) * sx - 0.5, (y as f64 + 0.5) * sy - 0.5, c)
    })
}

/// Square bilinear resize followed by scaling to `[0, 1]` reals.
pub fn resize_normalize(img: &Image, side: usize) -> Result<Image> {
    if side == 0 {
        return Err(Error::config("resize target has no pixels"));
    }
    let scale = if img.is_bytes() { 255.0 } else { 1.0 };
    let r = Raster::new(img);
    let sx = img.width() as f64 / side as f64;
    let sy = img.height() as f64 / side as f64;
    let mut data = Vec::with_capacity(side * side * img.channels());
    for y in 0..side {
        for x in 0..side {
            for c in 0..img.channels() {
                let v = r.sample((x as f64 + 0.5) * sx - 0.5, (y as f64 + 0.5) * sy - 0.5, c);
                data.push((v / scale).clamp(0.0, 1.0));
            }
        }
    }
    Image::from_unit(side, side, img.channels(), data)
}

pub fn flip_horizontal(img: &Image) -> Image {
    let r = Raster::new(img);
    let w = img.width();
    r.build(w, img.height(), |x, y, c| r.at(w - 1 - x, y, c))
        .expect("same shape")
}

pub fn flip_vertical(img: &Image) -> Image {
    let r = Raster::new(img);
    let h = img.height();
    r.build(img.width(), h, |x, y, c| r.at(x, h - 1 - y, c))
        .expect("same shape")
}

/// Rotates about the image center by `degrees` (counter-clockwise), keeping
/// the frame size and replicating the border into uncovered corners.
pub fn rotate(img: &Image, degrees: f64) -> Result<Image> {
    if !degrees.is_finite() {
        return Err(Error::config("rotation angle must be finite"));
    }
    let r = Raster::new(img);
    let (sin, cos) = degrees.to_radians().sin_cos();
    let cx = (img.width() as f64 - 1.0) / 2.0;
    let cy = (img.height() as f64 - 1.0) / 2.0;
    r.build(img.width(), img.height(), |x, y, c| {
        // inverse map: destination -> source
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        let sx = cos * dx - sin * dy + cx;
        let sy = sin * dx + cos * dy + cy;
        r.sample(sx, sy, c)
    })
}

/// Crops the `width x height` window at `(x, y)` and resizes it back to the
/// original frame.
pub fn crop_resize(img: &Image, x: usize, y: usize, width: usize, height: usize) -> Result<Image> {
    if width == 0 || height == 0 || x + width > img.width() || y + height > img.height() {
        return Err(Error::config(format!(
            "crop {width}x{height}+{x}+{y} outside {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let r = Raster::new(img);
    let sx = width as f64 / img.width() as f64;
    let sy = height as f64 / img.height() as f64;
    r.build(img.width(), img.height(), |dx, dy, c| {
        // sample inside the window only, clamping to its border
        let px = ((dx as f64 + 0.5) * sx - 0.5).clamp(0.0, (width - 1) as f64) + x as f64;
        let py = ((dy as f64 + 0.5) * sy - 0.5).clamp(0.0, (height - 1) as f64) + y as f64;
        r.sample(px, py, c)
    })
}

/// Which augmentations are enabled. Enabled flips fire with probability
/// one half; rotation draws an angle uniformly from
/// `[-max_rotation_deg, max_rotation_deg]`; crop keeps an area fraction drawn
/// uniformly from `[min_crop_area, 1]` with the frame's aspect ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentSpec {
    pub rotate: bool,
    pub max_rotation_deg: f64,
    pub hflip: bool,
    pub vflip: bool,
    pub crop: bool,
    pub min_crop_area: f64,
}

impl Default for AugmentSpec {
    fn default() -> Self {
        AugmentSpec {
            rotate: true,
            max_rotation_deg: MAX_ROTATION_DEG,
            hflip: true,
            vflip: true,
            crop: true,
            min_crop_area: MIN_CROP_AREA,
        }
    }
}

impl AugmentSpec {
    pub fn none() -> Self {
        AugmentSpec {
            rotate: false,
            hflip: false,
            vflip: false,
            crop: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=MAX_ROTATION_DEG).contains(&self.max_rotation_deg) {
            return Err(Error::config(format!(
                "rotation limit {} outside [0, {MAX_ROTATION_DEG}]",
                self.max_rotation_deg
            )));
        }
        if !(MIN_CROP_AREA..=1.0).contains(&self.min_crop_area) {
            return Err(Error::config(format!(
                "crop area {} outside [{MIN_CROP_AREA}, 1]",
                self.min_crop_area
            )));
        }
        Ok(())
    }
}

/// Random augmentation. Draws happen in a fixed order (rotation, flips,
/// crop) and only for enabled steps, so a seeded stream gives the same
/// result every time.
pub fn augment<R: Rng + ?Sized>(img: &Image, spec: &AugmentSpec, rng: &mut R) -> Result<Image> {
    spec.validate()?;
    let mut out = img.clone();
    if spec.rotate && spec.max_rotation_deg > 0.0 {
        let angle = rng.gen_range(-spec.max_rotation_deg..=spec.max_rotation_deg);
        out = rotate(&out, angle)?;
    }
    if spec.hflip && rng.gen_bool(0.5) {
        out = flip_horizontal(&out);
    }
    if spec.vflip && rng.gen_bool(0.5) {
        out = flip_vertical(&out);
    }
    if spec.crop {
        let area = if spec.min_crop_area < 1.0 {
            rng.gen_range(spec.min_crop_area..=1.0)
        } else {
            1.0
        };
        let side = area.sqrt();
        let (w, h) = (out.width(), out.height());
        let cw = ((w as f64 * side).ceil() as usize).clamp(1, w);
        let ch = ((h as f64 * side).ceil() as usize).clamp(1, h);
        let x = rng.gen_range(0..=w - cw);
        let y = rng.gen_range(0..=h - ch);
        out = crop_resize(&out, x, y, cw, ch)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn noise(w: usize, h: usize, channels: usize, seed: u64) -> Image {
        let data = (0..w * h * channels)
            .map(|i| ((i as u64 + seed).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 56) as u8)
            .collect();
        Image::from_bytes(w, h, channels, data).unwrap()
    }

    #[test]
    fn same_size_resize_is_identity() {
        let img = noise(224, 224, 3, 1);
        assert_eq!(resize_bilinear(&img, 224, 224).unwrap(), img);
        let n = resize_normalize(&img, 224).unwrap();
        assert_eq!((n.width(), n.height()), (224, 224));
        assert_eq!(n.to_bytes(), img);
    }

    #[test]
    fn constant_downscale() {
        let img = Image::filled(448, 448, 1, 77).unwrap();
        let n = resize_normalize(&img, 224).unwrap();
        match n.samples() {
            Samples::Unit(u) => assert!(u.iter().all(|&v| (v - 77.0 / 255.0).abs() < 1e-15)),
            Samples::Bytes(_) => panic!("expected normalized samples"),
        }
    }

    #[test]
    fn halving_averages_pairs() {
        // 4x1 -> 2x1 samples at source x = 0.5 and 2.5
        let img = Image::from_bytes(4, 1, 1, vec![0, 10, 20, 31]).unwrap();
        assert_eq!(resize_bilinear(&img, 2, 1).unwrap().bytes().unwrap(), &[5, 26]);
    }

    #[test]
    fn zero_rotation_and_full_crop_are_identity() {
        let img = noise(31, 17, 3, 9);
        assert_eq!(rotate(&img, 0.0).unwrap(), img);
        assert_eq!(crop_resize(&img, 0, 0, 31, 17).unwrap(), img);
        assert!(crop_resize(&img, 1, 0, 31, 17).is_err());
    }

    #[test]
    fn quarter_turn_of_square() {
        let img = Image::from_bytes(2, 2, 1, vec![1, 2, 3, 4]).unwrap();
        // counter-clockwise as displayed: the top-right corner moves to top-left
        let out = rotate(&img, 90.0).unwrap();
        assert_eq!(out.bytes().unwrap(), &[2, 4, 1, 3]);
    }

    #[test]
    fn flips() {
        let img = Image::from_bytes(3, 2, 1, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(flip_horizontal(&img).bytes().unwrap(), &[3, 2, 1, 6, 5, 4]);
        assert_eq!(flip_vertical(&img).bytes().unwrap(), &[4, 5, 6, 1, 2, 3]);
    }

    #[test]
    fn augment_is_seeded_and_bounded() {
        let img = noise(40, 30, 3, 4);
        let spec = AugmentSpec::default();
        let a = augment(&img, &spec, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = augment(&img, &spec, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert!(a.same_shape(&img));
        assert_eq!(
            augment(&img, &AugmentSpec::none(), &mut ChaCha8Rng::seed_from_u64(7)).unwrap(),
            img
        );
        let wild = AugmentSpec {
            max_rotation_deg: 30.0,
            ..spec.clone()
        };
        assert!(augment(&img, &wild, &mut ChaCha8Rng::seed_from_u64(7)).is_err());
        let tight = AugmentSpec {
            min_crop_area: 0.5,
            ..spec
        };
        assert!(tight.validate().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn flips_are_involutions(w in 1usize..20, h in 1usize..20, rgb in any::<bool>(), seed in any::<u64>()) {
            let img = noise(w, h, if rgb { 3 } else { 1 }, seed);
            prop_assert_eq!(flip_horizontal(&flip_horizontal(&img)), img.clone());
            prop_assert_eq!(flip_vertical(&flip_vertical(&img)), img);
        }

        #[test]
        fn rotation_stays_in_range(angle in -15.0f64..15.0, seed in any::<u64>()) {
            let img = Image::from_unit(9, 7, 1, (0..63).map(|i| ((i as u64 ^ seed) % 100) as f64 / 99.0).collect()).unwrap();
            match rotate(&img, angle).unwrap().samples() {
                Samples::Unit(u) => prop_assert!(u.iter().all(|v| (0.0..=1.0).contains(v))),
                Samples::Bytes(_) => prop_assert!(false),
            }
        }
    }
}
