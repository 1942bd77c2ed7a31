//! CSV tables and minimal SVG line charts.

use anyhow::Context;
use calderon_born::forward::SOLVER_VERSION;
use std::fmt::Write as _;
use std::path::Path;

/// Header lines written as `#` comments above every table.
#[derive(Debug, Clone)]
pub struct Provenance {
    pub config_hash: String,
    pub lines: Vec<String>,
}

impl Provenance {
    pub fn new(config_hash: impl Into<String>) -> Self {
        Provenance { config_hash: config_hash.into(), lines: Vec::new() }
    }

    pub fn with(mut self, line: impl Into<String>) -> Self {
        self.lines.push(line.into());
        self
    }
}

pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Int(i) => write!(out, "{i}").unwrap(),
            Cell::Num(x) => write!(out, "{}", num(*x)).unwrap(),
            Cell::Text(t) => out.push_str(t),
        }
    }
}

/// 17 significant digits, `.` decimal separator.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn render_csv(prov: &Provenance, columns: &[&str], rows: &[Vec<Cell>]) -> String {
    let mut s = String::new();
    writeln!(s, "# calderon-born {SOLVER_VERSION}").unwrap();
    writeln!(s, "# config_sha256 {}", prov.config_hash).unwrap();
    for l in &prov.lines {
        writeln!(s, "# {l}").unwrap();
    }
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        for (i, c) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            c.render(&mut s);
        }
        s.push('\n');
    }
    s
}

pub fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub struct Series<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
    pub color: &'a str,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 32.0;
const BOTTOM: f64 = 44.0;

fn span<'a>(vals: impl Iterator<Item = &'a f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in vals.filter(|v| v.is_finite()) {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        // flat data still gets a visible band
        let pad = 0.5 * (1.0 + lo.abs());
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn tick(v: f64) -> String {
    let t = format!("{v:.3}");
    if t == "-0.000" {
        "0.000".into()
    } else {
        t
    }
}

/// Line chart with axes, five ticks per axis and a legend.
pub fn render_svg(title: &str, xlabel: &str, series: &[Series]) -> String {
    let (x0, x1) = span(series.iter().flat_map(|s| s.x.iter()));
    let (y0, y1) = span(series.iter().flat_map(|s| s.y.iter()));
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#).unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{}" y="18" text-anchor="middle" font-size="13">{}</text>"#, W / 2.0, escape(title)).unwrap();
    let (bx, by) = (H - BOTTOM, LEFT);
    writeln!(s, r#"<line x1="{LEFT}" y1="{bx}" x2="{}" y2="{bx}" stroke="black"/>"#, W - RIGHT).unwrap();
    writeln!(s, r#"<line x1="{by}" y1="{TOP}" x2="{by}" y2="{bx}" stroke="black"/>"#).unwrap();
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (cx, cy) = (px(xv), py(yv));
        writeln!(s, r#"<line x1="{cx:.2}" y1="{bx}" x2="{cx:.2}" y2="{}" stroke="black"/>"#, bx + 4.0).unwrap();
        writeln!(s, r#"<text x="{cx:.2}" y="{}" text-anchor="middle">{}</text>"#, bx + 16.0, tick(xv)).unwrap();
        writeln!(s, r#"<line x1="{}" y1="{cy:.2}" x2="{by}" y2="{cy:.2}" stroke="black"/>"#, by - 4.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, by - 6.0, cy + 4.0, tick(yv)).unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, (LEFT + W - RIGHT) / 2.0, H - 8.0, escape(xlabel)).unwrap();
    for (k, ser) in series.iter().enumerate() {
        let mut pts = String::new();
        for (&x, &y) in ser.x.iter().zip(ser.y) {
            if x.is_finite() && y.is_finite() {
                if !pts.is_empty() {
                    pts.push(' ');
                }
                write!(pts, "{:.2},{:.2}", px(x), py(y)).unwrap();
            }
        }
        writeln!(s, r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{pts}"/>"#, ser.color).unwrap();
        let ly = TOP + 14.0 * k as f64 + 4.0;
        let lx = W - RIGHT - 150.0;
        writeln!(s, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/>"#, lx + 20.0, ser.color).unwrap();
        writeln!(s, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(ser.label)).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
