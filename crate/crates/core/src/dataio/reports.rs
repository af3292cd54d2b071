//! Text artifacts. Reals are written with Rust's shortest round-trip
//! formatting, so every loader here reproduces what was saved bit for bit.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use super::{parse_error, read_text, write_text};
use crate::error::{Error, Result};
use crate::metrics::{ClassMetrics, ClassReport, McNemarMethod, McNemarResult};
use crate::ssa::OptimizationResult;
use crate::types::{class_name, ConfusionMatrix, CurveSeries};

fn parse_field<T: FromStr>(path: &Path, line: u64, what: &str, raw: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| parse_error(path, line, format!("bad {what} `{raw}`")))
}

/// Ordered `key=value` lines.
struct KeyValues<'a> {
    path: &'a Path,
    pairs: Vec<(u64, String, String)>,
}

impl<'a> KeyValues<'a> {
    fn parse(path: &'a Path, text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i as u64 + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse_error(path, n, "expected key=value"))?;
            pairs.push((n, k.to_string(), v.to_string()));
        }
        Ok(KeyValues { path, pairs })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let (n, _, v) = self
            .pairs
            .iter()
            .find(|(_, k, _)| k == key)
            .ok_or_else(|| parse_error(self.path, 0, format!("missing key `{key}`")))?;
        parse_field(self.path, *n, key, v)
    }
}

/// `# summary=<value>` then one `x,y` row per point.
pub fn save_curve(path: impl AsRef<Path>, curve: &CurveSeries) -> Result<()> {
    let mut text = format!("# summary={}\n", curve.summary);
    for (x, y) in &curve.points {
        writeln!(text, "{x},{y}").unwrap();
    }
    write_text(path.as_ref(), &text)
}

pub fn load_curve(path: impl AsRef<Path>) -> Result<CurveSeries> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines();
    let summary = lines
        .next()
        .and_then(|l| l.strip_prefix("# summary="))
        .ok_or_else(|| parse_error(path, 1, "expected `# summary=<value>`"))?;
    let summary = parse_field(path, 1, "summary", summary)?;
    let mut points = Vec::new();
    for (i, line) in lines.enumerate() {
        let n = i as u64 + 2;
        let (x, y) = line
            .split_once(',')
            .ok_or_else(|| parse_error(path, n, "expected x,y"))?;
        points.push((parse_field(path, n, "x", x)?, parse_field(path, n, "y", y)?));
    }
    Ok(CurveSeries { points, summary })
}

pub fn save_class_report(path: impl AsRef<Path>, report: &ClassReport) -> Result<()> {
    let mut t = String::from("kind=class_report\n");
    writeln!(t, "accuracy={}", report.accuracy).unwrap();
    writeln!(t, "macro_precision={}", report.macro_precision).unwrap();
    writeln!(t, "macro_recall={}", report.macro_recall).unwrap();
    writeln!(t, "macro_f1={}", report.macro_f1).unwrap();
    writeln!(t, "classes={}", report.per_class.len()).unwrap();
    for (k, m) in report.per_class.iter().enumerate() {
        writeln!(t, "class.{k}.name={}", class_name(k)).unwrap();
        writeln!(t, "class.{k}.precision={}", m.precision).unwrap();
        writeln!(t, "class.{k}.recall={}", m.recall).unwrap();
        writeln!(t, "class.{k}.f1={}", m.f1).unwrap();
        writeln!(t, "class.{k}.support={}", m.support).unwrap();
        writeln!(t, "class.{k}.precision_undefined={}", m.precision_undefined).unwrap();
        writeln!(t, "class.{k}.recall_undefined={}", m.recall_undefined).unwrap();
    }
    write_text(path.as_ref(), &t)
}

pub fn load_class_report(path: impl AsRef<Path>) -> Result<ClassReport> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let kv = KeyValues::parse(path, &text)?;
    let kind: String = kv.get("kind")?;
    if kind != "class_report" {
        return Err(parse_error(
            path,
            1,
            format!("expected kind=class_report, found `{kind}`"),
        ));
    }
    let classes: usize = kv.get("classes")?;
    let per_class = (0..classes)
        .map(|k| {
            Ok(ClassMetrics {
                precision: kv.get(&format!("class.{k}.precision"))?,
                recall: kv.get(&format!("class.{k}.recall"))?,
                f1: kv.get(&format!("class.{k}.f1"))?,
                support: kv.get(&format!("class.{k}.support"))?,
                precision_undefined: kv.get(&format!("class.{k}.precision_undefined"))?,
                recall_undefined: kv.get(&format!("class.{k}.recall_undefined"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassReport {
        per_class,
        macro_precision: kv.get("macro_precision")?,
        macro_recall: kv.get("macro_recall")?,
        macro_f1: kv.get("macro_f1")?,
        accuracy: kv.get("accuracy")?,
    })
}

pub fn save_mcnemar(path: impl AsRef<Path>, result: &McNemarResult) -> Result<()> {
    let t = format!(
        "kind=mcnemar\ndiscordant_b={}\ndiscordant_c={}\nstatistic={}\np_value={}\nmethod={}\n",
        result.discordant_b, result.discordant_c, result.statistic, result.p_value, result.method
    );
    write_text(path.as_ref(), &t)
}

pub fn load_mcnemar(path: impl AsRef<Path>) -> Result<McNemarResult> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let kv = KeyValues::parse(path, &text)?;
    let method: String = kv.get("method")?;
    Ok(McNemarResult {
        discordant_b: kv.get("discordant_b")?,
        discordant_c: kv.get("discordant_c")?,
        statistic: kv.get("statistic")?,
        p_value: kv.get("p_value")?,
        method: McNemarMethod::parse(&method)
            .ok_or_else(|| parse_error(path, 0, format!("unknown method `{method}`")))?,
    })
}

/// Confusion counts with a `truth\predicted` corner cell; rows are truth.
pub fn save_confusion(path: impl AsRef<Path>, cm: &ConfusionMatrix) -> Result<()> {
    let k = cm.classes();
    let mut t = String::from("truth\\predicted");
    for j in 0..k {
        write!(t, ",{}", class_name(j)).unwrap();
    }
    t.push('\n');
    for (i, row) in cm.rows().iter().enumerate() {
        t.push_str(&class_name(i));
        for v in row {
            write!(t, ",{v}").unwrap();
        }
        t.push('\n');
    }
    write_text(path.as_ref(), &t)
}

pub fn load_confusion(path: impl AsRef<Path>) -> Result<ConfusionMatrix> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let n = i as u64 + 1;
        let row = line
            .split(',')
            .skip(1)
            .map(|f| parse_field(path, n, "count", f))
            .collect::<Result<Vec<u64>>>()?;
        rows.push(row);
    }
    ConfusionMatrix::from_rows(&rows)
}

/// Comment lines for the best point, then `iteration,fitness` per history
/// entry.
pub fn save_history(path: impl AsRef<Path>, result: &OptimizationResult) -> Result<()> {
    let position: Vec<String> = result.best_position.iter().map(|v| v.to_string()).collect();
    let mut t = format!(
        "# best_fitness={}\n# best_position={}\n# evaluations={}\n",
        result.best_fitness,
        position.join(";"),
        result.evaluations
    );
    for (it, f) in &result.history {
        writeln!(t, "{it},{f}").unwrap();
    }
    write_text(path.as_ref(), &t)
}

pub fn load_history(path: impl AsRef<Path>) -> Result<OptimizationResult> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut out = OptimizationResult {
        best_position: Vec::new(),
        best_fitness: f64::NAN,
        history: Vec::new(),
        evaluations: 0,
    };
    let mut seen = 0;
    for (i, line) in text.lines().enumerate() {
        let n = i as u64 + 1;
        if let Some(comment) = line.strip_prefix("# ") {
            let (k, v) = comment
                .split_once('=')
                .ok_or_else(|| parse_error(path, n, "expected key=value"))?;
            match k {
                "best_fitness" => out.best_fitness = parse_field(path, n, k, v)?,
                "best_position" if v.is_empty() => {}
                "best_position" => {
                    out.best_position = v
                        .split(';')
                        .map(|x| parse_field(path, n, k, x))
                        .collect::<Result<_>>()?
                }
                "evaluations" => out.evaluations = parse_field(path, n, k, v)?,
                _ => return Err(parse_error(path, n, format!("unknown key `{k}`"))),
            }
            seen += 1;
            continue;
        }
        let (it, f) = line
            .split_once(',')
            .ok_or_else(|| parse_error(path, n, "expected iteration,fitness"))?;
        out.history.push((
            parse_field(path, n, "iteration", it)?,
            parse_field(path, n, "fitness", f)?,
        ));
    }
    if seen != 3 {
        return Err(parse_error(
            path,
            1,
            "missing best_fitness/best_position/evaluations header",
        ));
    }
    Ok(out)
}

/// Per-model weights as optimized, with their normalized counterparts for
/// reading only.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightsFile {
    pub models: Vec<String>,
    pub weights: Vec<f64>,
}

impl WeightsFile {
    pub fn normalized(&self) -> Vec<f64> {
        let sum: f64 = self.weights.iter().sum();
        if sum > 0.0 {
            self.weights.iter().map(|w| w / sum).collect()
        } else {
            self.weights.clone()
        }
    }
}

/// `model,weight,normalized`.
pub fn save_weights(path: impl AsRef<Path>, file: &WeightsFile) -> Result<()> {
    if file.models.len() != file.weights.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} model names for {} weights",
            file.models.len(),
            file.weights.len()
        )));
    }
    let mut t = String::from("model,weight,normalized\n");
    for ((m, w), n) in file.models.iter().zip(&file.weights).zip(file.normalized()) {
        if m.contains([',', '"', '\n']) {
            return Err(Error::config(format!("model name `{m}` contains a CSV delimiter")));
        }
        writeln!(t, "{m},{w},{n}").unwrap();
    }
    write_text(path.as_ref(), &t)
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<WeightsFile> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let mut lines = text.lines();
    if lines.next() != Some("model,weight,normalized") {
        return Err(parse_error(path, 1, "expected header model,weight,normalized"));
    }
    let mut out = WeightsFile {
        models: Vec::new(),
        weights: Vec::new(),
    };
    for (i, line) in lines.enumerate() {
        let n = i as u64 + 2;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_error(path, n, format!("{} fields, expected 3", fields.len())));
        }
        out.models.push(fields[0].to_string());
        out.weights.push(parse_field(path, n, "weight", fields[1])?);
    }
    Ok(out)
}
