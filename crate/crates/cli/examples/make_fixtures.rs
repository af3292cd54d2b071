//! Regenerates the committed test fixtures.
//!
//!     cargo run -p salp-ensemble-cli --example make_fixtures -- crates/cli/tests/fixtures
//!
//! Everything is derived from fixed seeds, so rerunning reproduces the
//! committed files byte for byte.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use salp_ensemble::dataio::{save_labels, save_predictions, save_weights, WeightsFile};
use salp_ensemble::imaging::{full_pipeline, resize_normalize, FusionConfig, Image};
use salp_ensemble::types::{ClassLabel, ScoreMatrix};

const MODELS: [&str; 3] = ["densenet169", "mobilenet_v1", "xception"];

/// Test-set confusion matrix of the weighted ensemble: rows are true
/// grades, 326 of 366 on the diagonal.
const ENSEMBLE_CM: [[usize; 5]; 5] = [
    [178, 2, 1, 0, 0],
    [1, 28, 7, 0, 1],
    [1, 4, 86, 4, 5],
    [0, 0, 4, 13, 2],
    [0, 1, 5, 2, 21],
];

const FIG_WEIGHTS: [f64; 3] = [0.42, 0.35, 0.23];

/// A probability row in millionths whose argmax is `label`.
fn row_for(rng: &mut ChaCha8Rng, label: usize, classes: usize) -> Vec<u32> {
    let peak = rng.gen_range(0.35..0.9);
    let mut rest: Vec<f64> = (0..classes).map(|_| rng.gen::<f64>() + 0.05).collect();
    rest[label] = 0.0;
    let sum: f64 = rest.iter().sum();
    let mut micro: Vec<u32> = rest
        .iter()
        .map(|v| ((1.0 - peak) * v / sum * 1e6).floor() as u32)
        .collect();
    let used: u32 = micro.iter().sum();
    micro[label] = 1_000_000 - used;
    if micro.iter().enumerate().any(|(k, &m)| k != label && m >= micro[label]) {
        return row_for(rng, label, classes);
    }
    micro
}

fn weighted_argmax(rows: &[&[u32]], weights: &[f64]) -> usize {
    let classes = rows[0].len();
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..classes {
        let s: f64 = rows.iter().zip(weights).map(|(r, w)| w * (r[k] as f64 / 1e6)).sum();
        if s > best.1 {
            best = (k, s);
        }
    }
    best.0
}

fn to_matrix(rows: &[Vec<u32>], classes: usize) -> ScoreMatrix {
    let data = rows.iter().flatten().map(|&m| m as f64 / 1e6).collect();
    ScoreMatrix::from_flat(rows.len(), classes, data).unwrap()
}

/// Three base models whose weighted vote reproduces `ENSEMBLE_CM`, with
/// 315, 313 and 312 individually correct.
fn anchor366(dir: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // (truth, ensemble label) for every test image
    let mut cells = Vec::new();
    for (t, row) in ENSEMBLE_CM.iter().enumerate() {
        for (p, &n) in row.iter().enumerate() {
            cells.extend(std::iter::repeat_n((t, p), n));
        }
    }
    let (right, wrong): (Vec<_>, Vec<_>) = cells.into_iter().partition(|(t, p)| t == p);
    // which base models are correct on each image
    let mut patterns: Vec<[bool; 3]> = Vec::new();
    let mut push = |n: usize, p: [bool; 3]| patterns.extend(std::iter::repeat_n(p, n));
    push(17, [true, true, false]);
    push(16, [true, false, true]);
    push(15, [false, true, true]);
    push(278, [true, true, true]);
    push(4, [true, false, false]);
    push(3, [false, true, false]);
    push(3, [false, false, true]);
    push(30, [false, false, false]);
    let items: Vec<((usize, usize), [bool; 3])> = right.into_iter().chain(wrong).zip(patterns).collect();
    assert_eq!(items.len(), 366);

    let mut samples = Vec::new();
    for ((truth, ens), pattern) in items {
        loop {
            let rows: Vec<Vec<u32>> = pattern
                .iter()
                .map(|&ok| {
                    let label = if ok {
                        truth
                    } else if ens != truth && rng.gen_bool(0.8) {
                        ens
                    } else {
                        let mut l = rng.gen_range(0..4);
                        if l >= truth {
                            l += 1;
                        }
                        l
                    };
                    row_for(&mut rng, label, 5)
                })
                .collect();
            let refs: Vec<&[u32]> = rows.iter().map(Vec::as_slice).collect();
            if weighted_argmax(&refs, &FIG_WEIGHTS) == ens {
                samples.push((truth, rows));
                break;
            }
        }
    }
    samples.shuffle(&mut rng);
    write_problem(dir, &samples, 5);
    save_weights(
        dir.join("weights.csv"),
        &WeightsFile {
            models: MODELS.iter().map(|s| s.to_string()).collect(),
            weights: FIG_WEIGHTS.to_vec(),
        },
    )
    .unwrap();
}

fn write_problem(dir: &Path, samples: &[(usize, Vec<Vec<u32>>)], classes: usize) {
    fs::create_dir_all(dir).unwrap();
    let ids: Vec<String> = (0..samples.len()).map(|i| format!("img_{:04}", i + 1)).collect();
    let truth: Vec<ClassLabel> = samples.iter().map(|(t, _)| ClassLabel(*t)).collect();
    save_labels(dir.join("labels.csv"), &ids, &truth).unwrap();
    for (m, name) in MODELS.iter().enumerate() {
        let rows: Vec<Vec<u32>> = samples.iter().map(|(_, r)| r[m].clone()).collect();
        save_predictions(dir.join(format!("{name}.csv")), &ids, &to_matrix(&rows, classes)).unwrap();
    }
}

/// 60 samples, five grades, three noisy models of differing skill.
fn synthetic60(dir: &Path) {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let skill = [0.62, 0.55, 0.5];
    let samples: Vec<(usize, Vec<Vec<u32>>)> = (0..60)
        .map(|_| {
            let truth = rng.gen_range(0..5);
            let rows = skill
                .iter()
                .map(|&s| {
                    let label = if rng.gen_bool(s) { truth } else { rng.gen_range(0..5) };
                    row_for(&mut rng, label, 5)
                })
                .collect();
            (truth, rows)
        })
        .collect();
    write_problem(dir, &samples, 5);
}

/// Two classifiers over 100 samples: 20 only A gets right, 5 only B.
fn mcnemar_planted(dir: &Path) {
    fs::create_dir_all(dir).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2005);
    let ids: Vec<String> = (0..100).map(|i| format!("case_{i:03}")).collect();
    let truth: Vec<usize> = (0..100).map(|_| rng.gen_range(0..3)).collect();
    let wrong = |t: usize| (t + 1) % 3;
    // 50 both right, 20 only A, 5 only B, 25 both wrong
    let mut kinds: Vec<(bool, bool)> = Vec::new();
    kinds.extend(std::iter::repeat_n((true, true), 50));
    kinds.extend(std::iter::repeat_n((true, false), 20));
    kinds.extend(std::iter::repeat_n((false, true), 5));
    kinds.extend(std::iter::repeat_n((false, false), 25));
    kinds.shuffle(&mut rng);
    let pick = |ok: bool, t: usize| ClassLabel(if ok { t } else { wrong(t) });
    let a: Vec<ClassLabel> = kinds.iter().zip(&truth).map(|(k, &t)| pick(k.0, t)).collect();
    let b: Vec<ClassLabel> = kinds.iter().zip(&truth).map(|(k, &t)| pick(k.1, t)).collect();
    let truth: Vec<ClassLabel> = truth.into_iter().map(ClassLabel).collect();
    save_labels(dir.join("labels.csv"), &ids, &truth).unwrap();
    save_labels(dir.join("model_a.csv"), &ids, &a).unwrap();
    save_labels(dir.join("model_b.csv"), &ids, &b).unwrap();
}

fn fundus(w: usize, h: usize, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let r = 0.46 * w.min(h) as f64;
    let disc = (cx + 0.45 * r, cy - 0.1 * r);
    // a few vessels as sinusoidal arcs leaving the optic disc
    let vessels: Vec<(f64, f64, f64)> = (0..5)
        .map(|_| {
            (
                rng.gen_range(-2.6..2.6),
                rng.gen_range(0.05..0.2),
                rng.gen_range(1.5..4.0),
            )
        })
        .collect();
    let lesions: Vec<(f64, f64)> = (0..6)
        .map(|_| {
            (
                rng.gen_range(cx - 0.6 * r..cx + 0.3 * r),
                rng.gen_range(cy - 0.5 * r..cy + 0.5 * r),
            )
        })
        .collect();
    let mut data = Vec::with_capacity(w * h * 3);
    for y in 0..h {
        for x in 0..w {
            let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
            let d = ((fx - cx).powi(2) + (fy - cy).powi(2)).sqrt() / r;
            let noise: f64 = rng.gen_range(-6.0..6.0);
            if d > 1.0 {
                data.extend([2u8, 2, 2]);
                continue;
            }
            // vignetted orange-red background
            let shade = 1.0 - 0.55 * d * d;
            let mut rgb = [170.0 * shade, 70.0 * shade, 25.0 * shade];
            let dd = ((fx - disc.0).powi(2) + (fy - disc.1).powi(2)).sqrt() / (0.16 * r);
            if dd < 1.0 {
                let k = 1.0 - dd * dd;
                rgb = [rgb[0] + 80.0 * k, rgb[1] + 120.0 * k, rgb[2] + 70.0 * k];
            }
            let angle = (fy - disc.1).atan2(fx - disc.0);
            let dist = ((fx - disc.0).powi(2) + (fy - disc.1).powi(2)).sqrt() / r;
            for &(a0, amp, freq) in &vessels {
                let target = a0 + amp * (freq * dist).sin();
                let gap = ((angle - target + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI)
                    - std::f64::consts::PI)
                    .abs()
                    * dist
                    * r;
                if gap < 1.4 && dist > 0.12 {
                    rgb = [rgb[0] * 0.6, rgb[1] * 0.55, rgb[2] * 0.6];
                }
            }
            for &(lx, ly) in &lesions {
                if (fx - lx).powi(2) + (fy - ly).powi(2) < 4.0 {
                    rgb = [rgb[0] + 60.0, rgb[1] + 70.0, rgb[2] + 20.0];
                }
            }
            data.extend(rgb.map(|v| (v + noise).round().clamp(0.0, 255.0) as u8));
        }
    }
    Image::from_bytes(w, h, 3, data).unwrap()
}

fn gray(w: usize, h: usize, f: impl Fn(usize, usize) -> u8) -> Image {
    let data = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .map(|(x, y)| f(x, y))
        .collect();
    Image::from_bytes(w, h, 1, data).unwrap()
}

fn images(dir: &Path) {
    fs::create_dir_all(dir).unwrap();
    let f = fundus(160, 144, 19);
    f.save_png(dir.join("fundus.png")).unwrap();
    let golden = full_pipeline(&f, &FusionConfig::default()).unwrap();
    golden.save_png(dir.join("fundus_pipeline.golden.png")).unwrap();
    resize_normalize(&golden, 224)
        .unwrap()
        .save_png(dir.join("fundus_224.golden.png"))
        .unwrap();
    gray(64, 64, |x, y| {
        if (20..36).contains(&x) && (20..36).contains(&y) {
            150
        } else {
            90
        }
    })
    .save_png(dir.join("two_tone.png"))
    .unwrap();
    gray(64, 64, |x, y| (60 + 2 * x + y) as u8)
        .save_png(dir.join("low_frequency.png"))
        .unwrap();
    gray(64, 64, |x, y| if (x + y) % 2 == 0 { 100 } else { 160 })
        .save_png(dir.join("high_frequency.png"))
        .unwrap();
    // a small batch for the preprocessing command
    let batch = dir.join("batch");
    fs::create_dir_all(&batch).unwrap();
    for (i, seed) in [3u64, 4, 5].iter().enumerate() {
        fundus(72, 64, *seed)
            .save_png(batch.join(format!("eye_{i}.png")))
            .unwrap();
    }
}

fn main() {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("crates/cli/tests/fixtures"));
    anchor366(&root.join("anchor366"));
    synthetic60(&root.join("synthetic60"));
    mcnemar_planted(&root.join("mcnemar"));
    images(&root.join("images"));
    println!("fixtures written to {}", root.display());
}
