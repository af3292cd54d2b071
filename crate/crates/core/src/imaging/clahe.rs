//! Contrast-limited adaptive histogram equalization.
//!
//! The image is split into a `tiles_x x tiles_y` grid (tile edges at
//! `floor(i * W / tiles_x)`). Each tile's 256-bin histogram is clipped at
//! `clip * mean bin height`, the clipped mass is spread evenly over all
//! bins, and the tile mapping is the bin-midpoint CDF
//! `256 * (C(v - 1) + h(v) / 2) / N - 0.5`, which is the identity for a
//! flat histogram. Each output pixel blends the mappings of the four
//! nearest tile centers bilinearly. RGB input is equalized on the BT.601
//! luma channel with chroma held fixed.

use super::{to_u8, Image};
use crate::error::{Error, Result};

const BINS: usize = 256;

pub fn clahe(img: &Image, clip: f64, tiles: (usize, usize)) -> Result<Image> {
    if !(clip >= 1.0 && clip.is_finite()) {
        return Err(Error::config(format!("clip limit must be >= 1, got {clip}")));
    }
    let (tiles_x, tiles_y) = tiles;
    if tiles_x == 0 || tiles_y == 0 {
        return Err(Error::config("tile grid must be at least 1x1"));
    }
    let (w, h) = (img.width(), img.height());
    if w < tiles_x || h < tiles_y {
        return Err(Error::TileGridTooFine {
            width: w,
            height: h,
            tiles_x,
            tiles_y,
        });
    }
    let bytes = img.bytes()?;
    match img.channels() {
        1 => {
            let out = equalize(bytes, w, h, clip, tiles_x, tiles_y);
            Image::from_bytes(w, h, 1, out)
        }
        _ => {
            let mut luma = Vec::with_capacity(w * h);
            let mut chroma = Vec::with_capacity(w * h);
            for px in bytes.chunks(3) {
                let (r, g, b) = (px[0] as f64, px[1] as f64, px[2] as f64);
                let y = 0.299 * r + 0.587 * g + 0.114 * b;
                let cb = 128.0 - 0.168_736 * r - 0.331_264 * g + 0.5 * b;
                let cr = 128.0 + 0.5 * r - 0.418_688 * g - 0.081_312 * b;
                luma.push(to_u8(y));
                chroma.push((cb - 128.0, cr - 128.0));
            }
            let eq = equalize(&luma, w, h, clip, tiles_x, tiles_y);
            let mut out = Vec::with_capacity(bytes.len());
            for (&y, &(cb, cr)) in eq.iter().zip(&chroma) {
                let y = y as f64;
                out.push(to_u8(y + 1.402 * cr));
                out.push(to_u8(y - 0.344_136 * cb - 0.714_136 * cr));
                out.push(to_u8(y + 1.772 * cb));
            }
            Image::from_bytes(w, h, 3, out)
        }
    }
}

fn edges(len: usize, n: usize) -> Vec<usize> {
    (0..=n).map(|i| i * len / n).collect()
}

fn tile_mapping(plane: &[u8], width: usize, xs: (usize, usize), ys: (usize, usize), clip: f64) -> [f64; BINS] {
    let mut hist = [0.0f64; BINS];
    for y in ys.0..ys.1 {
        for &v in &plane[y * width + xs.0..y * width + xs.1] {
            hist[v as usize] += 1.0;
        }
    }
    let count = ((xs.1 - xs.0) * (ys.1 - ys.0)) as f64;
    let limit = clip * count / BINS as f64;
    let mut excess = 0.0;
    for bin in hist.iter_mut() {
        if *bin > limit {
            excess += *bin - limit;
            *bin = limit;
        }
    }
    let share = excess / BINS as f64;
    let mut lut = [0.0f64; BINS];
    let mut below = 0.0;
    for (v, bin) in hist.iter().enumerate() {
        let mass = bin + share;
        let mapped = BINS as f64 * (below + mass / 2.0) / count - 0.5;
        lut[v] = mapped.clamp(0.0, 255.0);
        below += mass;
    }
    lut
}

/// Index of the lower neighbouring center and the blend weight toward the
/// upper one.
fn locate(pos: f64, centers: &[f64]) -> (usize, usize, f64) {
    let last = centers.len() - 1;
    if pos <= centers[0] {
        return (0, 0, 0.0);
    }
    if pos >= centers[last] {
        return (last, last, 0.0);
    }
    let i = centers.iter().rposition(|&c| c <= pos).unwrap_or(0);
    let f = (pos - centers[i]) / (centers[i + 1] - centers[i]);
    (i, i + 1, f)
}

fn equalize(plane: &[u8], w: usize, h: usize, clip: f64, tiles_x: usize, tiles_y: usize) -> Vec<u8> {
    let ex = edges(w, tiles_x);
    let ey = edges(h, tiles_y);
    let mut luts = Vec::with_capacity(tiles_x * tiles_y);
    for ty in 0..tiles_y {
        for tx in 0..tiles_x {
            luts.push(tile_mapping(plane, w, (ex[tx], ex[tx + 1]), (ey[ty], ey[ty + 1]), clip));
        }
    }
    let cx: Vec<f64> = ex.windows(2).map(|e| (e[0] + e[1]) as f64 / 2.0 - 0.5).collect();
    let cy: Vec<f64> = ey.windows(2).map(|e| (e[0] + e[1]) as f64 / 2.0 - 0.5).collect();

    let mut out = vec![0u8; w * h];
    for y in 0..h {
        let (y0, y1, fy) = locate(y as f64, &cy);
        for x in 0..w {
            let (x0, x1, fx) = locate(x as f64, &cx);
            let v = plane[y * w + x] as usize;
            let top = luts[y0 * tiles_x + x0][v] * (1.0 - fx) + luts[y0 * tiles_x + x1][v] * fx;
            let bottom = luts[y1 * tiles_x + x0][v] * (1.0 - fx) + luts[y1 * tiles_x + x1][v] * fx;
            out[y * w + x] = to_u8(top * (1.0 - fy) + bottom * fy);
        }
    }
    out
}
