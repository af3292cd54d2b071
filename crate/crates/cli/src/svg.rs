//! Minimal deterministic SVG line plots. Coordinates are printed with a
//! fixed number of decimals so identical data gives identical bytes.

use std::fmt::Write as _;

const WIDTH: f64 = 420.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

pub struct Plot<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Dashed reference line, e.g. the ROC chance diagonal.
    pub reference: Option<[(f64, f64); 2]>,
}

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

impl Plot<'_> {
    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let span = |r: (f64, f64)| if r.1 > r.0 { r.1 - r.0 } else { 1.0 };
        let px = MARGIN + (x - self.x_range.0) / span(self.x_range) * (WIDTH - 2.0 * MARGIN);
        let py = HEIGHT - MARGIN - (y - self.y_range.0) / span(self.y_range) * (HEIGHT - 2.0 * MARGIN);
        (px, py)
    }

    fn polyline(&self, points: &[(f64, f64)]) -> String {
        let mut s = String::new();
        for (i, &p) in points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()).enumerate() {
            let (x, y) = self.map(p);
            if i > 0 {
                s.push(' ');
            }
            write!(s, "{x:.2},{y:.2}").unwrap();
        }
        s
    }

    pub fn render(&self, points: &[(f64, f64)]) -> String {
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
        )
        .unwrap();
        writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
        let (x0, y0) = self.map((self.x_range.0, self.y_range.0));
        let (x1, y1) = self.map((self.x_range.1, self.y_range.1));
        writeln!(
            s,
            r#"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        )
        .unwrap();
        for i in 0..=4 {
            let f = i as f64 / 4.0;
            let xv = self.x_range.0 + f * (self.x_range.1 - self.x_range.0);
            let yv = self.y_range.0 + f * (self.y_range.1 - self.y_range.0);
            let (px, _) = self.map((xv, self.y_range.0));
            let (_, py) = self.map((self.x_range.0, yv));
            writeln!(
                s,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + 14.0,
                tick(xv)
            )
            .unwrap();
            writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 4.0,
                py + 4.0,
                tick(yv)
            )
            .unwrap();
        }
        writeln!(
            s,
            r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            escape(self.title)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 10.0,
            escape(self.x_label)
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(self.y_label)
        )
        .unwrap();
        if let Some(line) = self.reference {
            writeln!(
                s,
                r##"<polyline points="{}" fill="none" stroke="#999" stroke-dasharray="4 3"/>"##,
                self.polyline(&line)
            )
            .unwrap();
        }
        writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#1f5fa8" stroke-width="1.6"/>"##,
            self.polyline(points)
        )
        .unwrap();
        s.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    if v.abs() >= 100.0 || v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

pub fn roc(points: &[(f64, f64)], auc: f64) -> String {
    Plot {
        title: &format!("Micro-averaged ROC (AUC = {auc:.4})"),
        x_label: "False positive rate",
        y_label: "True positive rate",
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        reference: Some([(0.0, 0.0), (1.0, 1.0)]),
    }
    .render(points)
}

pub fn pr(points: &[(f64, f64)], ap: f64) -> String {
    Plot {
        title: &format!("Micro-averaged precision-recall (AP = {ap:.4})"),
        x_label: "Recall",
        y_label: "Precision",
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        reference: None,
    }
    .render(points)
}

pub fn convergence(history: &[(usize, f64)]) -> String {
    let points: Vec<(f64, f64)> = history.iter().map(|&(t, f)| (t as f64, f)).collect();
    let last = points.last().map_or(1.0, |p| p.0.max(1.0));
    let lo = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if lo.is_finite() && hi > lo {
        (lo, hi)
    } else {
        (lo.min(0.0), lo.max(0.0) + 1.0)
    };
    Plot {
        title: "Convergence (best fitness)",
        x_label: "Iteration",
        y_label: "Fitness",
        x_range: (0.0, last),
        y_range: (lo, hi),
        reference: None,
    }
    .render(&points)
}
