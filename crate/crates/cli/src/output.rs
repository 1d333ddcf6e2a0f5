//! CSV and SVG emitters.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Full-precision number format used in every CSV cell; parses back to the
/// identical `f64`.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

/// A CSV table of preformatted cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Table whose first column is `x` followed by one column per series.
    pub fn from_series(x_name: &str, x: &[f64], series: &[(&str, &[f64])]) -> Self {
        let mut table = Table::new(std::iter::once(x_name).chain(series.iter().map(|s| s.0)));
        for (i, &xi) in x.iter().enumerate() {
            let mut row = vec![fmt_num(xi)];
            row.extend(series.iter().map(|s| fmt_num(s.1[i])));
            table.rows.push(row);
        }
        table
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi > lo {
        (lo, hi)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.5 };
        (lo - pad, hi + pad)
    }
}

/// Static line plot: one polyline per series over a shared `x`, with axes,
/// end-point tick labels and a legend. Non-finite points are skipped.
pub fn render_svg(x_label: &str, x: &[f64], series: &[(&str, &[f64])]) -> String {
    let (x0, x1) = range(x.iter().copied());
    let (y0, y1) = range(series.iter().flat_map(|s| s.1.iter().copied()));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (v - x0) / (x1 - x0) * plot_w;
    let py = |v: f64| TOP + (y1 - v) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let (ax0, ax1, ay0, ay1) = (LEFT, LEFT + plot_w, TOP + plot_h, TOP);
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{ax0}" y1="{ay0}" x2="{ax1}" y2="{ay0}"/><line x1="{ax0}" y1="{ay0}" x2="{ax0}" y2="{ay1}"/></g>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{ax0}" y="{}" text-anchor="middle">{x0:.3e}</text><text x="{ax1}" y="{}" text-anchor="middle">{x1:.3e}</text>"#,
        ay0 + 16.0,
        ay0 + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{ay0}" text-anchor="end">{y0:.3e}</text><text x="{}" y="{}" text-anchor="end">{y1:.3e}</text>"#,
        ax0 - 4.0,
        ax0 - 4.0,
        ay1 + 4.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );

    for (i, (name, ys)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut points = String::new();
        for (&xv, &yv) in x.iter().zip(ys.iter()) {
            if xv.is_finite() && yv.is_finite() {
                if !points.is_empty() {
                    points.push(' ');
                }
                let _ = write!(points, "{:.4},{:.4}", px(xv), py(yv));
            }
        }
        let _ = writeln!(
            svg,
            r#"<polyline data-series="{}" fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>"#,
            escape(name)
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<g class="legend"><line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text></g>"#,
            lx + 25.0,
            lx + 32.0,
            ly + 4.0,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = [0.0, 0.5, 1.0];
        let y = [1.0, 0.1, f64::INFINITY];
        let csv = Table::from_series("t", &t, &[("rho1", &y)]).to_csv();
        assert_eq!(csv.lines().count(), 4);
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with("inf\n"));
        assert_eq!(csv.lines().next(), Some("t,rho1"));
    }

    #[test]
    fn number_round_trip() {
        for v in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02214076e23,
            f64::MIN_POSITIVE,
            0.0,
        ] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
    }

    #[test]
    fn svg_structure() {
        let x = [0.0, 1.0, 2.0];
        let svg = render_svg(
            "t",
            &x,
            &[("a", &[0.0, 1.0, 0.5]), ("b", &[1.0, f64::NAN, 0.0])],
        );
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(r#"data-series="a""#));
        assert_eq!(svg.matches("class=\"legend\"").count(), 2);
    }

    #[test]
    fn flat_series_has_finite_coordinates() {
        let svg = render_svg("t", &[0.0, 1.0], &[("c", &[2.0, 2.0])]);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
