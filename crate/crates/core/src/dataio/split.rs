use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{parse_error, read_text, write_text};
use crate::error::{Error, Result};
use crate::types::ClassLabel;

pub const DEFAULT_TEST_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

/// How a class's test count `n * fraction` becomes an integer. Nonempty
/// classes always get at least one test item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    #[default]
    Nearest,
    Down,
    Up,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub image_path: String,
    pub label: ClassLabel,
    pub split: Split,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
    pub seed: u64,
}

impl DatasetManifest {
    pub fn count(&self, split: Split) -> usize {
        self.entries.iter().filter(|e| e.split == split).count()
    }
}

pub fn stratified_split(items: &[(String, ClassLabel)], test_fraction: f64, seed: u64) -> Result<DatasetManifest> {
    stratified_split_with(items, test_fraction, seed, Rounding::Nearest)
}

/// Per class (ascending), shuffles that class's items with one seeded
/// stream and sends the first `round(n * fraction)` to test. Entries keep
/// input order.
pub fn stratified_split_with(
    items: &[(String, ClassLabel)],
    test_fraction: f64,
    seed: u64,
    rounding: Rounding,
) -> Result<DatasetManifest> {
    if items.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::config(format!("test fraction {test_fraction} outside (0, 1)")));
    }
    let classes = items.iter().map(|(_, l)| l.0).max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, (_, l)) in items.iter().enumerate() {
        members[l.0].push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = vec![Split::Train; items.len()];
    for idx in members.iter_mut().filter(|m| !m.is_empty()) {
        idx.shuffle(&mut rng);
        let exact = idx.len() as f64 * test_fraction;
        let n_test = match rounding {
            Rounding::Nearest => exact.round(),
            Rounding::Down => exact.floor(),
            Rounding::Up => exact.ceil(),
        } as usize;
        for &i in &idx[..n_test.clamp(1, idx.len())] {
            split[i] = Split::Test;
        }
    }
    let entries = items
        .iter()
        .zip(split)
        .map(|((path, label), split)| ManifestEntry {
            image_path: path.clone(),
            label: *label,
            split,
        })
        .collect();
    Ok(DatasetManifest { entries, seed })
}

/// `# seed=<n>` followed by `image_path,label,split` rows.
pub fn save_manifest(path: impl AsRef<Path>, manifest: &DatasetManifest) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["image_path", "label", "split"])
        .map_err(|e| super::csv_error(path, e))?;
    for e in &manifest.entries {
        w.write_record([e.image_path.as_str(), &e.label.0.to_string(), e.split.as_str()])
            .map_err(|e| super::csv_error(path, e))?;
    }
    let body = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    let mut text = String::new();
    writeln!(text, "# seed={}", manifest.seed).unwrap();
    text.push_str(std::str::from_utf8(&body).expect("csv output is UTF-8"));
    write_text(path, &text)
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let first = text.lines().next().unwrap_or("");
    let seed = first
        .strip_prefix("# seed=")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| parse_error(path, 1, "expected `# seed=<n>`"))?;
    let body = text.split_once('\n').map_or("", |(_, rest)| rest);
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(body.as_bytes());
    let header = rdr.headers().map_err(|e| super::csv_error(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != ["image_path", "label", "split"] {
        return Err(parse_error(path, 2, "expected header image_path,label,split"));
    }
    let mut entries = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| super::csv_error(path, e))?;
        // one extra line for the seed comment
        let line = record.position().map_or(0, |p| p.line()) + 1;
        if record.len() != 3 {
            return Err(parse_error(path, line, format!("{} fields, expected 3", record.len())));
        }
        let label = record[1]
            .parse()
            .map_err(|_| parse_error(path, line, format!("`{}` is not a class index", &record[1])))?;
        let split = match &record[2] {
            "train" => Split::Train,
            "test" => Split::Test,
            other => return Err(parse_error(path, line, format!("unknown split `{other}`"))),
        };
        entries.push(ManifestEntry {
            image_path: record[0].to_string(),
            label: ClassLabel(label),
            split,
        });
    }
    Ok(DatasetManifest { entries, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn items(hist: &[usize]) -> Vec<(String, ClassLabel)> {
        hist.iter()
            .enumerate()
            .flat_map(|(k, &n)| (0..n).map(move |i| (format!("c{k}/img_{i:04}.png"), ClassLabel(k))))
            .collect()
    }

    #[test]
    fn one_class_of_hundred() {
        let m = stratified_split(&items(&[100]), 0.1, 3).unwrap();
        assert_eq!(m.count(Split::Test), 10);
        assert_eq!(m, stratified_split(&items(&[100]), 0.1, 3).unwrap());
        assert_ne!(m, stratified_split(&items(&[100]), 0.1, 4).unwrap());
    }

    #[test]
    fn aptos_histogram() {
        let hist = [1805, 370, 999, 193, 295];
        let m = stratified_split(&items(&hist), 0.1, 42).unwrap();
        // per class 181 + 37 + 100 + 19 + 30 (29.5 rounds away from zero)
        assert_eq!(m.count(Split::Test), 367);
        assert!((m.count(Split::Test) as i64 - 366).abs() <= 1);
        let down = stratified_split_with(&items(&hist), 0.1, 42, Rounding::Down).unwrap();
        assert_eq!(down.count(Split::Test), 180 + 37 + 99 + 19 + 29);
    }

    #[test]
    fn tiny_classes_get_one_test_item() {
        let m = stratified_split(&items(&[3, 1]), 0.1, 0).unwrap();
        assert_eq!(m.count(Split::Test), 2);
        assert!(matches!(stratified_split(&[], 0.1, 0), Err(Error::EmptyDataset)));
        assert!(stratified_split(&items(&[3]), 1.0, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn split_preserves_items_and_round_trips(hist in prop::collection::vec(0usize..40, 1..6), seed in any::<u64>(), frac in 0.05f64..0.5) {
            let input = items(&hist);
            prop_assume!(!input.is_empty());
            let m = stratified_split(&input, frac, seed).unwrap();
            let got: Vec<_> = m.entries.iter().map(|e| (e.image_path.clone(), e.label)).collect();
            prop_assert_eq!(&got, &input);
            for (k, &n) in hist.iter().enumerate() {
                let test = m.entries.iter().filter(|e| e.label.0 == k && e.split == Split::Test).count();
                let want = if n == 0 { 0 } else { ((n as f64 * frac).round() as usize).clamp(1, n) };
                prop_assert_eq!(test, want);
            }
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("manifest.csv");
            save_manifest(&p, &m).unwrap();
            prop_assert_eq!(load_manifest(&p).unwrap(), m);
        }
    }
}
