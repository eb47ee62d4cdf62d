//! CSV and SVG emission.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use sigpart::{Error, PartitionTable};

pub const CSV_HEADER: &str = "n,p,logsc_p";

/// Writes rows `n,p,logsc_p` for `1 <= n <= N` and returns the row count.
pub fn write_series_csv<W: Write>(table: &PartitionTable, mut out: W) -> Result<usize> {
    writeln!(out, "{CSV_HEADER}")?;
    for n in 1..=table.n_max() {
        writeln!(out, "{},{},{:.6}", n, table.values()[n], table.logsc(n))?;
    }
    out.flush()?;
    Ok(table.n_max())
}

pub fn emit_series_csv(table: &PartitionTable, out: &Path) -> Result<usize> {
    let file = File::create(out).with_context(|| format!("cannot write {}", out.display()))?;
    write_series_csv(table, BufWriter::new(file))
}

/// `(n, logsc_p)` pairs from a series CSV.
pub fn read_series_csv(path: &Path) -> Result<Vec<(u64, f64)>> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next().transpose()?;
    if header.as_deref() != Some(CSV_HEADER) {
        bail!("{}: missing header '{CSV_HEADER}'", path.display());
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let mut cols = line.split(',');
        let (Some(n), Some(_), Some(v), None) = (cols.next(), cols.next(), cols.next(), cols.next())
        else {
            bail!("{}:{}: expected three columns", path.display(), i + 2);
        };
        rows.push((n.parse()?, v.parse()?));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Series {
            label: label.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotLabels {
    pub title: String,
    pub x: String,
    pub y: String,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn bounds(series: &[Series]) -> Result<(f64, f64, f64, f64)> {
    let mut b = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite point in '{}'", s.label)).into());
            }
            b = (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y));
        }
    }
    if b.1 <= b.0 {
        b.1 = b.0 + 1.0;
    }
    if b.3 <= b.2 {
        b.3 = b.2 + 1.0;
    }
    Ok(b)
}

fn tick_label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.2}")
    }
}

/// Renders a self-contained SVG line plot.
pub fn render_svg(series: &[Series], labels: &PlotLabels) -> Result<String> {
    if series.is_empty() || series.iter().any(|s| s.points.is_empty()) {
        return Err(Error::InvalidInput("nothing to plot: every series needs at least one point".into()).into());
    }
    let (x0, x1, y0, y1) = bounds(series)?;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&labels.title)
    )?;
    writeln!(
        svg,
        r#"<g stroke="black" fill="none"><rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}"/></g>"#
    )?;
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (sx(xv), sy(yv));
        writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            tick_label(xv)
        )?;
        writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv)
        )?;
    }
    if y0 < 0.0 && y1 > 0.0 {
        writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            sy(0.0),
            LEFT + pw
        )?;
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0,
        escape(&labels.x)
    )?;
    writeln!(
        svg,
        r#"<text x="16" y="{0:.1}" text-anchor="middle" transform="rotate(-90 16 {0:.1})">{1}</text>"#,
        TOP + ph / 2.0,
        escape(&labels.y)
    )?;
    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for &(x, y) in &s.points {
            write!(points, "{:.2},{:.2} ", sx(x), sy(y))?;
        }
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"/>"#,
            points.trim_end()
        )?;
        let ly = TOP + 16.0 + 16.0 * i as f64;
        writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{colour}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            LEFT + 10.0,
            LEFT + 30.0,
            LEFT + 35.0,
            ly + 4.0,
            escape(&s.label)
        )?;
    }
    writeln!(svg, "</svg>")?;
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_svg_plot(series: &[Series], labels: &PlotLabels, out: &Path) -> Result<()> {
    let svg = render_svg(series, labels)?;
    std::fs::write(out, svg).with_context(|| format!("cannot write {}", out.display()))
}
