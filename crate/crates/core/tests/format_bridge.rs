//! Files produced by an external inference script must load through
//! `dataio` unchanged.

use salp_ensemble::dataio::{
    align_predictions, load_manifest, load_predictions, save_manifest, DatasetManifest, LabelTable, ManifestEntry,
    Split,
};
use salp_ensemble::types::ClassLabel;

fn toy_manifest() -> DatasetManifest {
    let entry = |path: &str, label, split| ManifestEntry {
        image_path: path.to_string(),
        label: ClassLabel(label),
        split,
    };
    DatasetManifest {
        entries: vec![
            entry("images/a.png", 0, Split::Test),
            entry("images/b.png", 2, Split::Test),
            entry("images/c.png", 4, Split::Test),
            entry("images/d.png", 1, Split::Train),
        ],
        seed: 42,
    }
}

// what a softmax head rounded to six places looks like: rows can miss 1 by
// a few millionths
const EXPORTED: &str = "sample_id,p0,p1,p2,p3,p4
images/a.png,0.912345,0.043210,0.022222,0.011111,0.011111
images/b.png,0.000001,0.100000,0.799999,0.050000,0.050001
images/c.png,0.200000,0.200000,0.200000,0.200000,0.200001
";

#[test]
fn exported_csv_loads_and_aligns_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    save_manifest(dir.path().join("manifest.csv"), &toy_manifest()).unwrap();
    std::fs::write(dir.path().join("densenet169.csv"), EXPORTED).unwrap();

    let manifest = load_manifest(dir.path().join("manifest.csv")).unwrap();
    let table = load_predictions(dir.path().join("densenet169.csv")).unwrap();
    assert_eq!(table.ids.len(), 3);
    assert_eq!(table.matrix.classes(), 5);

    let test: Vec<&ManifestEntry> = manifest.entries.iter().filter(|e| e.split == Split::Test).collect();
    let labels = LabelTable {
        ids: test.iter().map(|e| e.image_path.clone()).collect(),
        labels: test.iter().map(|e| e.label).collect(),
    };
    let aligned = align_predictions(&labels, &table).unwrap();
    assert_eq!(aligned.samples(), 3);
    assert_eq!(aligned.get(1, 2), 0.799999);
}

#[test]
fn crlf_exports_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("windows.csv");
    std::fs::write(&path, EXPORTED.replace('\n', "\r\n")).unwrap();
    assert_eq!(load_predictions(&path).unwrap().ids.len(), 3);
}
