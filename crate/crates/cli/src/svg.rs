//! Minimal SVG line, scatter and histogram charts with a fixed viewport.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const TICKS: usize = 5;

const PALETTE: &[&str] = &["#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d4870f", "#555555"];

#[derive(Debug, Clone)]
pub enum Series {
    Line { points: Vec<(f64, f64)>, color: usize, label: Option<String> },
    Scatter { points: Vec<(f64, f64)>, color: usize, radius: f64, label: Option<String> },
    /// `(x_lo, x_hi, height)` bars from zero.
    Bars { bars: Vec<(f64, f64, f64)>, color: usize, label: Option<String> },
}

impl Series {
    pub fn line(points: Vec<(f64, f64)>, color: usize) -> Self {
        Series::Line { points, color, label: None }
    }

    pub fn scatter(points: Vec<(f64, f64)>, color: usize, radius: f64) -> Self {
        Series::Scatter { points, color, radius, label: None }
    }

    pub fn bars(bars: Vec<(f64, f64, f64)>, color: usize) -> Self {
        Series::Bars { bars, color, label: None }
    }

    pub fn labelled(mut self, text: &str) -> Self {
        match &mut self {
            Series::Line { label, .. } | Series::Scatter { label, .. } | Series::Bars { label, .. } => {
                *label = Some(text.to_string())
            }
        }
        self
    }

    fn color(&self) -> usize {
        match self {
            Series::Line { color, .. } | Series::Scatter { color, .. } | Series::Bars { color, .. } => *color,
        }
    }

    fn label(&self) -> Option<&str> {
        match self {
            Series::Line { label, .. } | Series::Scatter { label, .. } | Series::Bars { label, .. } => {
                label.as_deref()
            }
        }
    }

    fn extend_bounds(&self, b: &mut Bounds) {
        match self {
            Series::Line { points, .. } | Series::Scatter { points, .. } => {
                for &(x, y) in points {
                    b.add(x, y);
                }
            }
            Series::Bars { bars, .. } => {
                for &(x0, x1, h) in bars {
                    b.add(x0, 0.0);
                    b.add(x1, h);
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Bounds {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Bounds {
    fn empty() -> Self {
        Bounds { x0: f64::INFINITY, x1: f64::NEG_INFINITY, y0: f64::INFINITY, y1: f64::NEG_INFINITY }
    }

    fn add(&mut self, x: f64, y: f64) {
        if x.is_finite() && y.is_finite() {
            self.x0 = self.x0.min(x);
            self.x1 = self.x1.max(x);
            self.y0 = self.y0.min(y);
            self.y1 = self.y1.max(y);
        }
    }

    fn padded(mut self) -> Self {
        if !self.x0.is_finite() {
            return Bounds { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        }
        for (lo, hi) in [(&mut self.x0, &mut self.x1), (&mut self.y0, &mut self.y1)] {
            let span = *hi - *lo;
            let pad = if span > 0.0 { 0.04 * span } else { 0.5 * lo.abs().max(1.0) };
            *lo -= pad;
            *hi += pad;
        }
        self
    }
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Chart {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series: Vec::new(),
        }
    }

    pub fn with(mut self, series: Series) -> Self {
        self.series.push(series);
        self
    }

    pub fn render(&self) -> String {
        let mut bounds = Bounds::empty();
        for s in &self.series {
            s.extend_bounds(&mut bounds);
        }
        let b = bounds.padded();
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - b.x0) / (b.x1 - b.x0) * plot_w;
        let sy = |y: f64| TOP + (b.y1 - y) / (b.y1 - b.y0) * plot_h;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#000"/>"##
        );
        for k in 0..=TICKS {
            let t = k as f64 / TICKS as f64;
            let xv = b.x0 + t * (b.x1 - b.x0);
            let yv = b.y0 + t * (b.y1 - b.y0);
            let (px, py) = (sx(xv), sy(yv));
            let _ = writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#000"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP + plot_h,
                TOP + plot_h + 5.0,
                TOP + plot_h + 18.0,
                tick(xv)
            );
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT - 5.0,
                LEFT - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 14.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for series in &self.series {
            let color = PALETTE[series.color() % PALETTE.len()];
            match series {
                Series::Line { points, .. } => {
                    for run in finite_runs(points) {
                        let mut path = String::new();
                        for (x, y) in run {
                            let _ = write!(path, "{:.2},{:.2} ", sx(*x), sy(*y));
                        }
                        let _ = writeln!(
                            s,
                            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#,
                            path.trim_end()
                        );
                    }
                }
                Series::Scatter { points, radius, .. } => {
                    for &(x, y) in points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}"/>"#,
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Series::Bars { bars, .. } => {
                    for &(x0, x1, h) in bars.iter().filter(|b| b.2.is_finite()) {
                        let (top, base) = (sy(h.max(0.0)), sy(h.min(0.0)));
                        let _ = writeln!(
                            s,
                            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="0.5"/>"#,
                            sx(x0),
                            top,
                            sx(x1) - sx(x0),
                            base - top
                        );
                    }
                }
            }
        }

        let mut row = 0;
        for series in &self.series {
            if let Some(label) = series.label() {
                let color = PALETTE[series.color() % PALETTE.len()];
                let y = TOP + 16.0 + 16.0 * row as f64;
                let x = WIDTH - RIGHT - 150.0;
                let _ = writeln!(
                    s,
                    r#"<rect x="{x:.1}" y="{:.1}" width="12" height="8" fill="{color}"/><text x="{:.1}" y="{y:.1}">{}</text>"#,
                    y - 8.0,
                    x + 18.0,
                    escape(label)
                );
                row += 1;
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

fn finite_runs(points: &[(f64, f64)]) -> Vec<&[(f64, f64)]> {
    points
        .split(|(x, y)| !x.is_finite() || !y.is_finite())
        .filter(|r| r.len() > 1)
        .collect()
}

fn tick(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
