use std::collections::HashMap;
use std::path::Path;

use super::{csv_error, parse_error, write_text};
use crate::error::{Error, Result};
use crate::types::{ClassLabel, LabelVector, PredictionMatrix, ScoreMatrix};

/// A prediction file: one validated matrix plus the row ids in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionTable {
    pub ids: Vec<String>,
    pub matrix: PredictionMatrix,
}

/// A labels file in file order. This order defines sample order everywhere
/// downstream.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabelTable {
    pub ids: Vec<String>,
    pub labels: LabelVector,
}

impl LabelTable {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn pairs(&self) -> Vec<(String, ClassLabel)> {
        self.ids.iter().cloned().zip(self.labels.iter().copied()).collect()
    }
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Reads `sample_id,p0,...,p{K-1}` and validates the matrix.
pub fn load_predictions(path: impl AsRef<Path>) -> Result<PredictionTable> {
    let path = path.as_ref();
    let mut rdr = reader(path)?;
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let classes = header.len().saturating_sub(1);
    let header_ok = header.get(0) == Some("sample_id")
        && classes >= 2
        && header.iter().skip(1).enumerate().all(|(k, h)| h == format!("p{k}"));
    if !header_ok {
        return Err(parse_error(
            path,
            1,
            format!(
                "expected header sample_id,p0,...,p{{K-1}} with K >= 2, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut ids = Vec::new();
    let mut data = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = line_of(&record);
        if record.len() != classes + 1 {
            return Err(parse_error(
                path,
                line,
                format!("{} fields, expected {}", record.len(), classes + 1),
            ));
        }
        ids.push(record[0].to_string());
        for field in record.iter().skip(1) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line, format!("`{field}` is not a number")))?;
            data.push(v);
        }
    }
    if ids.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let matrix = PredictionMatrix::validate(ScoreMatrix::from_flat(ids.len(), classes, data)?)?;
    Ok(PredictionTable { ids, matrix })
}

/// Writes probabilities with six decimals.
pub fn save_predictions(path: impl AsRef<Path>, ids: &[String], matrix: &ScoreMatrix) -> Result<()> {
    let path = path.as_ref();
    if ids.len() != matrix.samples() {
        return Err(Error::ShapeMismatch(format!(
            "{} ids for {} rows",
            ids.len(),
            matrix.samples()
        )));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["sample_id".to_string()];
    header.extend((0..matrix.classes()).map(|k| format!("p{k}")));
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for (id, row) in ids.iter().zip(matrix.rows()) {
        let mut record = vec![id.clone()];
        record.extend(row.iter().map(|v| format!("{v:.6}")));
        w.write_record(&record).map_err(|e| csv_error(path, e))?;
    }
    finish(path, w)
}

fn finish(path: &Path, w: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    write_text(path, &String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Reads `sample_id,label`. Ids must be unique.
pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelTable> {
    let path = path.as_ref();
    let mut rdr = reader(path)?;
    let header = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if header.len() != 2 || &header[0] != "sample_id" || &header[1] != "label" {
        return Err(parse_error(path, 1, "expected header sample_id,label"));
    }
    let mut table = LabelTable::default();
    let mut seen = HashMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = line_of(&record);
        if record.len() != 2 {
            return Err(parse_error(path, line, format!("{} fields, expected 2", record.len())));
        }
        let id = record[0].to_string();
        let label: usize = record[1]
            .trim()
            .parse()
            .map_err(|_| parse_error(path, line, format!("`{}` is not a class index", &record[1])))?;
        if seen.insert(id.clone(), ()).is_some() {
            return Err(Error::DuplicateSampleId(id));
        }
        table.ids.push(id);
        table.labels.push(ClassLabel(label));
    }
    if table.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(table)
}

pub fn save_labels(path: impl AsRef<Path>, ids: &[String], labels: &[ClassLabel]) -> Result<()> {
    let path = path.as_ref();
    if ids.len() != labels.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} ids for {} labels",
            ids.len(),
            labels.len()
        )));
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["sample_id", "label"]).map_err(|e| csv_error(path, e))?;
    for (id, l) in ids.iter().zip(labels) {
        w.write_record([id.as_str(), &l.0.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    finish(path, w)
}

/// Reorders a prediction table into label-file order. The two id sets must
/// match exactly, and every label must be a valid class.
pub fn align_predictions(labels: &LabelTable, table: &PredictionTable) -> Result<PredictionMatrix> {
    let mut index = HashMap::with_capacity(table.ids.len());
    for (i, id) in table.ids.iter().enumerate() {
        if index.insert(id.as_str(), i).is_some() {
            return Err(Error::DuplicateSampleId(id.clone()));
        }
    }
    let mut order = Vec::with_capacity(labels.len());
    for (id, label) in labels.ids.iter().zip(&labels.labels) {
        let i = *index
            .get(id.as_str())
            .ok_or_else(|| Error::UnknownSampleId(id.clone()))?;
        if label.0 >= table.matrix.classes() {
            return Err(Error::LabelOutOfRange {
                label: label.0,
                classes: table.matrix.classes(),
            });
        }
        order.push(i);
    }
    if table.ids.len() != labels.len() {
        // some prediction row has no label
        let known: std::collections::HashSet<&str> = labels.ids.iter().map(String::as_str).collect();
        let extra = table
            .ids
            .iter()
            .find(|id| !known.contains(id.as_str()))
            .expect("sizes differ");
        return Err(Error::UnknownSampleId(extra.clone()));
    }
    Ok(table.matrix.select_rows(&order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::fs;

    fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn single_row_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            &dir,
            "m.csv",
            "sample_id,p0,p1,p2,p3,p4\nimg_001,0.90,0.05,0.03,0.01,0.01\n",
        );
        let t = load_predictions(&p).unwrap();
        assert_eq!(t.ids, vec!["img_001"]);
        assert_eq!((t.matrix.samples(), t.matrix.classes()), (1, 5));
        assert_eq!(t.matrix.row(0), &[0.90, 0.05, 0.03, 0.01, 0.01]);
    }

    #[test]
    fn parse_failures_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "m.csv", "sample_id,p0,p1\na,0.5,0.5\nb,0.5\n");
        match load_predictions(&p) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let p = write(&dir, "m.csv", "sample_id,p0,p1\na,0.5,x\n");
        assert!(matches!(load_predictions(&p), Err(Error::Parse { line: 2, .. })));
        let p = write(&dir, "m.csv", "id,p0,p1\na,0.5,0.5\n");
        assert!(matches!(load_predictions(&p), Err(Error::Parse { line: 1, .. })));
        let p = write(&dir, "m.csv", "sample_id,p0,p1\na,0.98,0.0\n");
        assert!(matches!(
            load_predictions(&p),
            Err(Error::RowSumOutOfTolerance { row: 0, .. })
        ));
        assert!(matches!(
            load_predictions(dir.path().join("nope.csv")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn labels_and_alignment() {
        let dir = tempfile::tempdir().unwrap();
        let l = load_labels(write(&dir, "l.csv", "sample_id,label\nimg_002,1\nimg_001,0\n")).unwrap();
        assert_eq!(l.labels, vec![ClassLabel(1), ClassLabel(0)]);
        let t = load_predictions(write(
            &dir,
            "m.csv",
            "sample_id,p0,p1\nimg_001,0.9,0.1\nimg_002,0.2,0.8\n",
        ))
        .unwrap();
        let m = align_predictions(&l, &t).unwrap();
        assert_eq!(m.row(0), &[0.2, 0.8]);

        let dup = write(&dir, "d.csv", "sample_id,label\na,0\na,1\n");
        assert!(matches!(load_labels(dup), Err(Error::DuplicateSampleId(id)) if id == "a"));

        let missing = load_labels(write(&dir, "l2.csv", "sample_id,label\nimg_003,0\nimg_001,0\n")).unwrap();
        assert!(matches!(align_predictions(&missing, &t), Err(Error::UnknownSampleId(id)) if id == "img_003"));
        let short = load_labels(write(&dir, "l3.csv", "sample_id,label\nimg_001,0\n")).unwrap();
        assert!(matches!(align_predictions(&short, &t), Err(Error::UnknownSampleId(id)) if id == "img_002"));
        let wide = load_labels(write(&dir, "l4.csv", "sample_id,label\nimg_001,2\nimg_002,0\n")).unwrap();
        assert!(matches!(
            align_predictions(&wide, &t),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn predictions_round_trip(rows in prop::collection::vec(prop::collection::vec(0u32..1000, 3), 1..20)) {
            // values on the six-decimal grid survive exactly
            let ids: Vec<String> = (0..rows.len()).map(|i| format!("s,{i}")).collect();
            let data: Vec<f64> = rows
                .iter()
                .flat_map(|r| {
                    let total: u32 = r.iter().sum::<u32>().max(1);
                    let a = (r[0] as u64 * 1_000_000 / total as u64) as i64;
                    let b = (r[1] as u64 * 1_000_000 / total as u64) as i64;
                    let b = b.min(1_000_000 - a);
                    [a, b, 1_000_000 - a - b].map(|k| k as f64 / 1e6)
                })
                .collect();
            let m = ScoreMatrix::from_flat(rows.len(), 3, data).unwrap();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("p.csv");
            save_predictions(&p, &ids, &m).unwrap();
            let back = load_predictions(&p).unwrap();
            prop_assert_eq!(back.ids, ids);
            prop_assert_eq!(back.matrix.scores(), &m);
        }

        #[test]
        fn labels_round_trip(raw in prop::collection::vec(0usize..5, 1..40)) {
            let ids: Vec<String> = (0..raw.len()).map(|i| format!("id \"{i}\"")).collect();
            let labels: Vec<ClassLabel> = raw.into_iter().map(ClassLabel).collect();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("l.csv");
            save_labels(&p, &ids, &labels).unwrap();
            let back = load_labels(&p).unwrap();
            prop_assert_eq!(back.ids, ids);
            prop_assert_eq!(back.labels, labels);
        }
    }
}
