use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use salp_ensemble::dataio::{load_class_report, load_confusion, load_curve, load_history, load_mcnemar, load_weights};
use salp_ensemble::types::class_name;

use super::write;
use crate::meta::RunMeta;
use crate::svg::{self, escape};
use crate::{Failure, GlobalArgs};

/// Files a run directory must contain.
pub const REQUIRED: [&str; 5] = ["report.txt", "confusion.csv", "roc.csv", "pr.csv", "history.csv"];

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Directory holding `optimize` and `evaluate` outputs.
    pub run_dir: PathBuf,
}

fn pct(v: f64) -> String {
    format!("{:.2}", 100.0 * v)
}

/// Writes `report.html` with every table and plot inlined.
pub fn run(global: &GlobalArgs, args: &ReportArgs) -> Result<(), Failure> {
    let dir = &args.run_dir;
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|f| !dir.join(f).is_file()).collect();
    if !missing.is_empty() {
        return Err(Failure::usage(format!(
            "{} is missing {}",
            dir.display(),
            missing.join(", ")
        )));
    }
    let load = |e: salp_ensemble::Error| Failure::usage(e);
    let report = load_class_report(dir.join("report.txt")).map_err(load)?;
    let cm = load_confusion(dir.join("confusion.csv")).map_err(load)?;
    let roc = load_curve(dir.join("roc.csv")).map_err(load)?;
    let pr = load_curve(dir.join("pr.csv")).map_err(load)?;
    let history = load_history(dir.join("history.csv")).map_err(load)?;
    let optional = |name: &str| Some(dir.join(name)).filter(|p| p.is_file());

    let mut h = String::new();
    h.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n");
    h.push_str("<title>Ensemble evaluation report</title>\n<style>\n");
    h.push_str("body{font-family:sans-serif;max-width:960px;margin:2em auto;color:#222}\n");
    h.push_str(
        "table{border-collapse:collapse;margin:1em 0}td,th{border:1px solid #bbb;padding:4px 8px;text-align:right}\n",
    );
    h.push_str("th:first-child,td:first-child{text-align:left}.plots{display:flex;flex-wrap:wrap;gap:1em}\n");
    h.push_str("</style>\n</head>\n<body>\n<h1>Ensemble evaluation report</h1>\n");
    writeln!(
        h,
        "<p>Accuracy <b>{}%</b> ({} of {} correct); macro F1 {}%; micro AUC {:.4}; AP {:.4}.</p>",
        pct(report.accuracy),
        cm.trace(),
        cm.total(),
        pct(report.macro_f1),
        roc.summary,
        pr.summary
    )
    .unwrap();

    h.push_str("<h2>Per-class metrics</h2>\n<table>\n<tr><th>Class</th><th>Precision (%)</th><th>Recall (%)</th><th>F1 (%)</th><th>Support</th></tr>\n");
    for (k, m) in report.per_class.iter().enumerate() {
        writeln!(
            h,
            "<tr><td>{}</td><td>{}{}</td><td>{}{}</td><td>{}</td><td>{}</td></tr>",
            escape(&class_name(k)),
            pct(m.precision),
            if m.precision_undefined { "*" } else { "" },
            pct(m.recall),
            if m.recall_undefined { "*" } else { "" },
            pct(m.f1),
            m.support
        )
        .unwrap();
    }
    writeln!(
        h,
        "<tr><th>Macro</th><th>{}</th><th>{}</th><th>{}</th><th>{}</th></tr>\n</table>",
        pct(report.macro_precision),
        pct(report.macro_recall),
        pct(report.macro_f1),
        cm.total()
    )
    .unwrap();
    if report
        .per_class
        .iter()
        .any(|m| m.precision_undefined || m.recall_undefined)
    {
        h.push_str("<p>* undefined (zero denominator), reported as 0.</p>\n");
    }

    h.push_str("<h2>Confusion matrix</h2>\n<p>Rows are true classes, columns predicted.</p>\n<table>\n<tr><th></th>");
    for k in 0..cm.classes() {
        write!(h, "<th>{}</th>", escape(&class_name(k))).unwrap();
    }
    h.push_str("</tr>\n");
    for (i, row) in cm.rows().iter().enumerate() {
        write!(h, "<tr><th>{}</th>", escape(&class_name(i))).unwrap();
        for v in row {
            write!(h, "<td>{v}</td>").unwrap();
        }
        h.push_str("</tr>\n");
    }
    h.push_str("</table>\n");

    if let Some(path) = optional("weights.csv") {
        let w = load_weights(&path).map_err(load)?;
        h.push_str("<h2>Ensemble weights</h2>\n<table>\n<tr><th>Model</th><th>Weight</th><th>Normalized</th></tr>\n");
        for ((m, v), n) in w.models.iter().zip(&w.weights).zip(w.normalized()) {
            writeln!(h, "<tr><td>{}</td><td>{v:.6}</td><td>{n:.6}</td></tr>", escape(m)).unwrap();
        }
        h.push_str("</table>\n");
    }
    if let Some(path) = optional("mcnemar.txt") {
        let m = load_mcnemar(&path).map_err(load)?;
        writeln!(
            h,
            "<h2>McNemar's test</h2>\n<p>b = {}, c = {}, statistic = {} ({}), p = {:.6}: {}.</p>",
            m.discordant_b,
            m.discordant_c,
            m.statistic,
            m.method,
            m.p_value,
            if m.significant(0.05) {
                "significant at 0.05"
            } else {
                "not significant at 0.05"
            }
        )
        .unwrap();
    }

    writeln!(
        h,
        "<h2>Curves</h2>\n<div class=\"plots\">\n{}{}{}</div>",
        svg::roc(&roc.points, roc.summary),
        svg::pr(&pr.points, pr.summary),
        svg::convergence(&history.history)
    )
    .unwrap();
    writeln!(
        h,
        "<p>Best fitness {} after {} objective evaluations.</p>",
        history.best_fitness, history.evaluations
    )
    .unwrap();
    h.push_str("</body>\n</html>\n");

    let out = global.output_dir.clone().unwrap_or_else(|| dir.clone());
    std::fs::create_dir_all(&out).map_err(|e| Failure::data(format!("{}: {e}", out.display())))?;
    write(&out.join("report.html"), &h)?;
    let mut meta = RunMeta::new("report", global);
    meta.push("run_dir", dir.display());
    meta.write(&out)
}
