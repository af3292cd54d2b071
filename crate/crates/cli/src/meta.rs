//! `run_meta_<command>.txt`: every effective parameter of a run, so it can
//! be repeated exactly. Nothing time- or host-dependent is recorded, which
//! keeps the file itself reproducible.

use std::fmt::Write as _;
use std::path::Path;

use crate::{Failure, GlobalArgs};

pub struct RunMeta {
    command: &'static str,
    lines: Vec<(String, String)>,
}

impl RunMeta {
    pub fn new(command: &'static str, global: &GlobalArgs) -> Self {
        let mut meta = RunMeta {
            command,
            lines: Vec::new(),
        };
        meta.push("seed", global.seed);
        meta.push("salps", global.salps);
        meta.push("iterations", global.iterations);
        meta.push("bounds", format!("{},{}", global.bounds.0, global.bounds.1));
        meta.push("gamma", global.gamma);
        meta.push("clahe_clip", global.clahe_clip);
        meta.push(
            "clahe_tiles",
            format!("{}x{}", global.clahe_tiles.0, global.clahe_tiles.1),
        );
        meta.push("wavelet", "haar");
        meta.push("wavelet_levels", global.wavelet_levels);
        meta.push("approx_rule", "average");
        meta.push("detail_rule", "max_abs");
        meta.push("parallel_branches", global.parallel_branches);
        meta.push("output_dir", global.out_dir().display());
        meta
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl std::fmt::Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn paths<'a>(&mut self, key: &str, paths: impl IntoIterator<Item = &'a std::path::PathBuf>) {
        for (i, p) in paths.into_iter().enumerate() {
            self.push(format!("{key}.{i}"), p.display());
        }
    }

    pub fn render(&self) -> String {
        let mut t = format!("command={}\nversion={}\n", self.command, env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.lines {
            writeln!(t, "{k}={v}").unwrap();
        }
        t
    }

    pub fn write(&self, dir: &Path) -> Result<(), Failure> {
        let path = dir.join(format!("run_meta_{}.txt", self.command));
        std::fs::write(&path, self.render()).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
    }
}
