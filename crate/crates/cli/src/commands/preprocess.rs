use std::path::{Path, PathBuf};

use clap::Args;
use log::{error, info};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use salp_ensemble::imaging::{augment, full_pipeline, resize_normalize, AugmentSpec, FusionConfig, Image};

use crate::meta::RunMeta;
use crate::{Failure, GlobalArgs};

#[derive(Debug, Clone, Args)]
pub struct PreprocessArgs {
    /// Directory of PNG or JPEG images (not searched recursively).
    pub input_dir: PathBuf,

    /// Output side length in pixels.
    #[arg(long, default_value_t = 224)]
    pub side: usize,

    /// Augmented copies to write per image, in addition to the plain output.
    #[arg(long, default_value_t = 0)]
    pub augment: usize,
}

fn is_image(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
}

fn list_images(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = std::fs::read_dir(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && is_image(p))
        .collect();
    files.sort();
    Ok(files)
}

struct Job<'a> {
    cfg: &'a FusionConfig,
    side: usize,
    copies: usize,
    seed: u64,
    out: &'a Path,
}

impl Job<'_> {
    /// Processes file number `index`; the augmentation stream is keyed by
    /// the seed and that index, so output never depends on scheduling.
    fn process(&self, index: usize, path: &Path) -> Result<usize, String> {
        let img = Image::load(path).map_err(|e| e.to_string())?;
        let fused = full_pipeline(&img, self.cfg).map_err(|e| e.to_string())?;
        let stem = path
            .file_stem()
            .map_or_else(|| format!("image_{index}"), |s| s.to_string_lossy().into_owned());
        let save = |img: &Image, name: String| -> Result<(), String> {
            resize_normalize(img, self.side)
                .and_then(|n| n.save_png(self.out.join(name)))
                .map_err(|e| e.to_string())
        };
        save(&fused, format!("{stem}.png"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        for k in 0..self.copies {
            let aug = augment(&fused, &AugmentSpec::default(), &mut rng).map_err(|e| e.to_string())?;
            save(&aug, format!("{stem}_aug{k}.png"))?;
        }
        Ok(1 + self.copies)
    }
}

/// Writes one PNG per input (plus augmented copies). Every readable image is
/// processed even when others fail; any failure gives exit 1.
pub fn run(global: &GlobalArgs, args: &PreprocessArgs) -> Result<(), Failure> {
    let cfg = global.fusion();
    cfg.validate().map_err(Failure::usage)?;
    if args.side == 0 {
        return Err(Failure::usage("--side must be positive"));
    }
    let out = global.out_dir();
    let files = list_images(&args.input_dir)?;
    let mut meta = RunMeta::new("preprocess", global);
    meta.push("input_dir", args.input_dir.display());
    meta.push("side", args.side);
    meta.push("augment", args.augment);
    meta.write(&out)?;
    if files.is_empty() {
        return Err(Failure::data(format!(
            "no images found in {}",
            args.input_dir.display()
        )));
    }

    let job = Job {
        cfg: &cfg,
        side: args.side,
        copies: args.augment,
        seed: global.seed,
        out: &out,
    };
    let results: Vec<Result<usize, String>> = files.par_iter().enumerate().map(|(i, p)| job.process(i, p)).collect();

    let mut failed = Vec::new();
    let mut written = 0;
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(n) => {
                info!("{}: ok", path.display());
                written += n;
            }
            Err(e) => {
                error!("{}: {e}", path.display());
                failed.push(format!("{}: {e}", path.display()));
            }
        }
    }
    println!(
        "processed={} failed={} written={written}",
        files.len() - failed.len(),
        failed.len()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::data(format!(
            "{} of {} images failed:\n  {}",
            failed.len(),
            files.len(),
            failed.join("\n  ")
        )))
    }
}
