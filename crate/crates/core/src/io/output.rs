//! Artifact writers: field and trajectory CSV, deterministic SVG line plots.
//! Every file is written to a temporary sibling and renamed into place.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{LabError, Result};
use crate::numerics::{Grid, Representation, WaveField};

fn io_err(path: &Path, e: impl std::fmt::Display) -> LabError {
    LabError::Io(format!("{}: {e}", path.display()))
}

/// Writes `bytes` to `path` atomically (temporary file in the same directory, then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| io_err(path, "not a file path"))?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(path, e)
    })
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| LabError::Io(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| LabError::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| LabError::Io(e.to_string()))
}

/// `x,re,im,density`, one row per lattice point of the position representation.
pub fn emit_field_csv(field: &WaveField, path: &Path) -> Result<()> {
    let pos = field.to_rep(Representation::Position);
    let rows = pos.grid().x_values().into_iter().zip(pos.amplitudes().to_vec()).map(|(x, a)| {
        vec![float(x), float(a.re), float(a.im), float(a.norm_sqr())]
    });
    write_atomic(path, &csv_bytes(&["x", "re", "im", "density"], rows)?)
}

/// `t,x_peak` rows.
pub fn emit_trajectory_csv(times: &[f64], peaks: &[f64], path: &Path) -> Result<()> {
    if times.len() != peaks.len() {
        return Err(LabError::Parameter("trajectory columns differ in length".into()));
    }
    let rows = times.iter().zip(peaks).map(|(t, x)| vec![float(*t), float(*x)]);
    write_atomic(path, &csv_bytes(&["t", "x_peak"], rows)?)
}

/// Reads a file written by [`emit_field_csv`] back onto `grid`.
pub fn read_field_csv(path: &Path, grid: &Grid) -> Result<WaveField> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let header = r.headers().map_err(|e| io_err(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != ["x", "re", "im", "density"] {
        return Err(LabError::Config(format!("{}: unexpected header {header:?}", path.display())));
    }
    let mut amps = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| LabError::Config(format!("{}: bad number in column {i}", path.display())))
        };
        amps.push(Complex64::new(num(1)?, num(2)?));
    }
    WaveField::new(*grid, Representation::Position, amps, 0.0)
}

/// One labelled polyline of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PlotSeries {
    pub fn new(label: &str, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { label: label.to_string(), x, y }
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi == lo {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Renders the series as a standalone SVG document.
pub fn render_svg(series: &[PlotSeries], title: &str) -> Result<String> {
    if series.is_empty() {
        return Err(LabError::Parameter("nothing to plot: empty series list".into()));
    }
    for s in series {
        if s.x.len() != s.y.len() || s.x.is_empty() {
            return Err(LabError::Parameter(format!("series '{}' is empty or has unequal columns", s.label)));
        }
    }
    let (x0, x1) = range(series.iter().flat_map(|s| s.x.iter().copied()));
    let (y0, y1) = range(series.iter().flat_map(|s| s.y.iter().copied()));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if !title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="18" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            escape(title)
        );
    }
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="1"><line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/></g>"#,
        TOP + ph,
        LEFT + pw,
        TOP + ph,
        TOP + ph
    );
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="11">"#);
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let (xv, yv) = (x0 + f * (x1 - x0), y0 + f * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(out, "</g>");
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = s
            .x
            .iter()
            .zip(&s.y)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = LEFT + pw + 15.0;
        let _ = writeln!(
            out,
            r#"<g class="legend"><line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text></g>"#,
            lx + 20.0,
            lx + 25.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_svg_plot(series: &[PlotSeries], title: &str, path: &Path) -> Result<()> {
    write_atomic(path, render_svg(series, title)?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::make_grid;

    fn sample_field(n: usize) -> WaveField {
        let g = make_grid(n, -3.0, 3.0).unwrap();
        WaveField::from_fn(g, Representation::Position, 0.0, |x| Complex64::new((-x * x).exp() / 3.0, x.sin() * 1e-7))
    }

    #[test]
    fn field_csv_shape_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let f = sample_field(8);
        emit_field_csv(&f, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 9);
        assert_eq!(text.lines().next().unwrap(), "x,re,im,density");
        for line in text.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            let d = v[1] * v[1] + v[2] * v[2];
            assert!((v[3] - d).abs() <= 1e-15 * d.max(1e-300));
        }
        let back = read_field_csv(&path, f.grid()).unwrap();
        for (a, b) in back.amplitudes().iter().zip(f.amplitudes()) {
            assert!((a - b).norm() <= 1e-15 * b.norm());
        }
    }

    #[test]
    fn trajectory_csv_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        emit_trajectory_csv(&[0.0, 1.0], &[0.5, -0.25], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "t,x_peak");
        assert_eq!(text.lines().count(), 3);
        assert!(emit_trajectory_csv(&[0.0], &[], &path).is_err());
    }

    #[test]
    fn svg_structure_and_determinism() {
        let one = [PlotSeries::new("a", vec![0.0, 1.0], vec![0.0, 2.0])];
        let svg = render_svg(&one, "t").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        let two = [
            PlotSeries::new("tau = 0", vec![0.0, 1.0, 2.0], vec![1.0, 0.5, 0.1]),
            PlotSeries::new("tau = 1", vec![0.0, 1.0, 2.0], vec![0.1, 0.5, 1.0]),
        ];
        let svg = render_svg(&two, "").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">tau = 0<") && svg.contains(">tau = 1<"));
        assert_eq!(svg, render_svg(&two, "").unwrap());
        assert!(render_svg(&[], "x").is_err());
        assert!(render_svg(&[PlotSeries::new("bad", vec![1.0], vec![])], "x").is_err());
    }

    #[test]
    fn tick_labels_are_plain_decimals() {
        assert_eq!(tick_label(1234.5), "1234.5");
        assert_eq!(tick_label(-0.25), "-0.25");
        assert_eq!(tick_label(2.0), "2");
        assert_eq!(tick_label(1.5e-6), "1.50e-6");
    }

    #[test]
    fn atomic_write_failure_reports_io() {
        let r = write_atomic(Path::new("/nonexistent-dir/x/y.txt"), b"1");
        assert!(matches!(r, Err(LabError::Io(_))));
    }
}
