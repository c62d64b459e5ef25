//! Direct SVG geometry emission: scatter plots, polylines, heatmaps and
//! curve panels. No interactivity; every figure is a static view of numbers
//! that also land in a CSV next to it.

use std::fmt::Write as _;

/// Distinct colors for intent classes (and other categorical series).
pub const PALETTE: [&str; 10] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#17becf",
    "#666666", "#bcbd22",
];

pub fn class_color(class: usize) -> &'static str {
    PALETTE[class % PALETTE.len()]
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const ML: f64 = 64.0;
const MR: f64 = 150.0;
const MT: f64 = 40.0;
const MB: f64 = 52.0;

/// Maps data coordinates onto the plot area and accumulates SVG elements.
pub struct Canvas {
    out: String,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Canvas {
    pub fn new(title: &str, xlabel: &str, ylabel: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let (x0, x1) = pad_range(x);
        let (y0, y1) = pad_range(y);
        let mut c = Canvas {
            out: String::new(),
            x0,
            x1,
            y0,
            y1,
        };
        let _ = write!(
            c.out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="Helvetica,Arial,sans-serif">"#
        );
        let _ = write!(
            c.out,
            r#"<rect width="{W}" height="{H}" fill="white"/><rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="#333" stroke-width="1"/>"#,
            pw = W - ML - MR,
            ph = H - MT - MB,
        );
        let _ = write!(
            c.out,
            r#"<text x="{tx}" y="24" font-size="15" text-anchor="middle" fill="#111">{}</text>"#,
            escape(title),
            tx = ML + (W - ML - MR) / 2.0,
        );
        let _ = write!(
            c.out,
            r#"<text x="{tx}" y="{ty}" font-size="12" text-anchor="middle" fill="#111">{}</text>"#,
            escape(xlabel),
            tx = ML + (W - ML - MR) / 2.0,
            ty = H - 14.0,
        );
        let _ = write!(
            c.out,
            r#"<text x="16" y="{ty}" font-size="12" text-anchor="middle" fill="#111" transform="rotate(-90 16 {ty})">{}</text>"#,
            escape(ylabel),
            ty = MT + (H - MT - MB) / 2.0,
        );
        c.draw_ticks();
        c
    }

    fn px(&self, x: f64) -> f64 {
        ML + (x - self.x0) / (self.x1 - self.x0) * (W - ML - MR)
    }

    fn py(&self, y: f64) -> f64 {
        H - MB - (y - self.y0) / (self.y1 - self.y0) * (H - MT - MB)
    }

    fn draw_ticks(&mut self) {
        for t in tick_positions(self.x0, self.x1) {
            let px = self.px(t);
            let _ = write!(
                self.out,
                r#"<line x1="{px:.1}" y1="{y}" x2="{px:.1}" y2="{y2}" stroke="#333"/><text x="{px:.1}" y="{ty}" font-size="10" text-anchor="middle" fill="#333">{}</text>"#,
                tick_label(t),
                y = H - MB,
                y2 = H - MB + 5.0,
                ty = H - MB + 16.0,
            );
        }
        for t in tick_positions(self.y0, self.y1) {
            let py = self.py(t);
            let _ = write!(
                self.out,
                r#"<line x1="{x}" y1="{py:.1}" x2="{x2}" y2="{py:.1}" stroke="#333"/><text x="{tx}" y="{ty:.1}" font-size="10" text-anchor="end" fill="#333">{}</text>"#,
                tick_label(t),
                x = ML,
                x2 = ML - 5.0,
                tx = ML - 8.0,
                ty = py + 3.5,
            );
        }
    }

    pub fn circle(&mut self, x: f64, y: f64, r: f64, color: &str, opacity: f64) {
        let _ = write!(
            self.out,
            r#"<circle cx="{:.1}" cy="{:.1}" r="{r}" fill="{color}" fill-opacity="{opacity}"/>"#,
            self.px(x),
            self.py(y),
        );
    }

    pub fn square(&mut self, x: f64, y: f64, half: f64, color: &str) {
        let _ = write!(
            self.out,
            r#"<rect x="{:.1}" y="{:.1}" width="{w}" height="{w}" fill="{color}"/>"#,
            self.px(x) - half,
            self.py(y) - half,
            w = 2.0 * half,
        );
    }

    pub fn diamond(&mut self, x: f64, y: f64, half: f64, color: &str) {
        let (cx, cy) = (self.px(x), self.py(y));
        let _ = write!(
            self.out,
            r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{color}" stroke="#222" stroke-width="0.6"/>"#,
            cx, cy - half, cx + half, cy, cx, cy + half, cx - half, cy,
        );
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, width: f64, dashed: bool) {
        if pts.len() < 2 {
            return;
        }
        let mut path = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(
                path,
                "{}{:.1},{:.1}",
                if i == 0 { "" } else { " " },
                self.px(x),
                self.py(y)
            );
        }
        let dash = if dashed { r#" stroke-dasharray="5,4""# } else { "" };
        let _ = write!(
            self.out,
            r#"<polyline points="{path}" fill="none" stroke="{color}" stroke-width="{width}"{dash}/>"#
        );
    }

    pub fn hline(&mut self, y: f64, color: &str, dashed: bool) {
        self.polyline(&[(self.x0, y), (self.x1, y)], color, 1.0, dashed);
    }

    pub fn vline(&mut self, x: f64, color: &str, dashed: bool) {
        self.polyline(&[(x, self.y0), (x, self.y1)], color, 1.0, dashed);
    }

    /// Arrow from the origin of data space to `(x, y)`.
    pub fn arrow(&mut self, from: (f64, f64), to: (f64, f64), color: &str) {
        let (x1, y1) = (self.px(from.0), self.py(from.1));
        let (x2, y2) = (self.px(to.0), self.py(to.1));
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (ux, uy) = (dx / len, dy / len);
        let (hx, hy) = (x2 - 8.0 * ux, y2 - 8.0 * uy);
        let _ = write!(
            self.out,
            r#"<line x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="{color}" stroke-width="1.6"/><polygon points="{x2:.1},{y2:.1} {:.1},{:.1} {:.1},{:.1}" fill="{color}"/>"#,
            hx - 3.0 * uy,
            hy + 3.0 * ux,
            hx + 3.0 * uy,
            hy - 3.0 * ux,
        );
    }

    pub fn legend(&mut self, entries: &[(String, String)]) {
        let x = W - MR + 10.0;
        for (i, (label, color)) in entries.iter().enumerate() {
            let y = MT + 12.0 + i as f64 * 16.0;
            let _ = write!(
                self.out,
                r#"<rect x="{x}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}" font-size="11" fill="#111">{}</text>"#,
                y - 9.0,
                x + 14.0,
                y,
                escape(label),
            );
        }
    }

    pub fn finish(mut self) -> String {
        self.out.push_str("</svg>");
        self.out
    }
}

fn pad_range((lo, hi): (f64, f64)) -> (f64, f64) {
    let (lo, hi) = if lo.is_finite() && hi.is_finite() && lo < hi {
        (lo, hi)
    } else {
        (0.0, 1.0)
    };
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn tick_positions(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| span / s <= 7.0)
        .unwrap_or(mag * 10.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-12 {
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

fn tick_label(t: f64) -> String {
    if t == t.trunc() && t.abs() < 1e6 {
        format!("{}", t as i64)
    } else {
        format!("{t:.2}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn bounds(points: impl Iterator<Item = (f64, f64)>) -> ((f64, f64), (f64, f64)) {
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    ((x0, x1), (y0, y1))
}

/// Cumulative explained-variance curve with the threshold and the resulting
/// dimensionality marked.
pub fn variance_curve(cumulative: &[f64], threshold: f64, d: usize, title: &str) -> String {
    let pts: Vec<(f64, f64)> = cumulative
        .iter()
        .enumerate()
        .map(|(i, &c)| ((i + 1) as f64, c))
        .collect();
    let mut c = Canvas::new(
        title,
        "principal components",
        "cumulative explained variance",
        (1.0, cumulative.len() as f64),
        (0.0, 1.0),
    );
    c.hline(threshold, "#d62728", true);
    c.vline(d as f64, "#d62728", false);
    c.polyline(&pts, "#377eb8", 2.0, false);
    for &(x, y) in &pts {
        c.circle(x, y, 3.0, "#377eb8", 1.0);
    }
    c.finish()
}

/// Scatter of projected states colored by class, with optional trajectory
/// polylines (each tagged by class) and the shared initial state marked by a
/// black square.
pub fn state_scatter(
    title: &str,
    points: &[(f64, f64)],
    classes: &[usize],
    class_names: &[String],
    trajectories: &[(usize, Vec<(f64, f64)>)],
    origin: Option<(f64, f64)>,
) -> String {
    let all = points
        .iter()
        .copied()
        .chain(trajectories.iter().flat_map(|(_, p)| p.iter().copied()));
    let (xr, yr) = bounds(all);
    let mut c = Canvas::new(title, "pc 1", "pc 2", xr, yr);
    for (&(x, y), &cls) in points.iter().zip(classes) {
        c.circle(x, y, 1.6, class_color(cls), 0.35);
    }
    for (cls, path) in trajectories {
        c.polyline(path, class_color(*cls), 1.8, false);
        for &(x, y) in path {
            c.circle(x, y, 3.0, class_color(*cls), 1.0);
        }
    }
    if let Some((x, y)) = origin {
        c.square(x, y, 4.0, "#000000");
    }
    let legend: Vec<(String, String)> = class_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), class_color(i).to_string()))
        .collect();
    c.legend(&legend);
    c.finish()
}

/// Heatmap with per-cell value annotations (used for cosine matrices and
/// grid summaries).
pub fn heatmap(
    title: &str,
    values: &[Vec<f64>],
    row_labels: &[String],
    col_labels: &[String],
    lo: f64,
    hi: f64,
) -> String {
    let rows = values.len();
    let cols = values.first().map(|r| r.len()).unwrap_or(0);
    let mut out = String::new();
    let cell = 54.0_f64;
    let left = 150.0;
    let top = 60.0;
    let w = left + cols as f64 * cell + 20.0;
    let h = top + rows as f64 * cell + 20.0;
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="Helvetica,Arial,sans-serif"><rect width="{w}" height="{h}" fill="white"/><text x="{tx}" y="24" font-size="15" text-anchor="middle" fill="#111">{}</text>"#,
        escape(title),
        tx = left + cols as f64 * cell / 2.0,
    );
    for (j, label) in col_labels.iter().enumerate() {
        let _ = write!(
            out,
            r#"<text x="{x:.1}" y="{y}" font-size="10" text-anchor="middle" fill="#111">{}</text>"#,
            escape(label),
            x = left + (j as f64 + 0.5) * cell,
            y = top - 8.0,
        );
    }
    for (i, row) in values.iter().enumerate() {
        let _ = write!(
            out,
            r#"<text x="{x}" y="{y:.1}" font-size="10" text-anchor="end" fill="#111">{}</text>"#,
            escape(&row_labels[i]),
            x = left - 6.0,
            y = top + (i as f64 + 0.55) * cell,
        );
        for (j, &v) in row.iter().enumerate() {
            let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
            let color = diverging_color(t);
            let text_color = if !(0.25..=0.8).contains(&t) { "#eee" } else { "#111" };
            let _ = write!(
                out,
                r#"<rect x="{x:.1}" y="{y:.1}" width="{cell}" height="{cell}" fill="{color}" stroke="white"/><text x="{cx:.1}" y="{cy:.1}" font-size="10" text-anchor="middle" fill="{text_color}">{v:.2}</text>"#,
                x = left + j as f64 * cell,
                y = top + i as f64 * cell,
                cx = left + (j as f64 + 0.5) * cell,
                cy = top + (i as f64 + 0.55) * cell,
            );
        }
    }
    out.push_str("</svg>");
    out
}

/// Blue-white-red diverging map on t in [0, 1].
fn diverging_color(t: f64) -> String {
    let (r, g, b) = if t < 0.5 {
        let u = t * 2.0;
        (
            (5.0 + 250.0 * u) as u8,
            (48.0 + 200.0 * u) as u8,
            (97.0 + 150.0 * u) as u8,
        )
    } else {
        let u = (t - 0.5) * 2.0;
        (
            (255.0 - 50.0 * u) as u8,
            (248.0 - 200.0 * u) as u8,
            (247.0 - 210.0 * u) as u8,
        )
    };
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Classic silhouette panel: one horizontal profile of sorted coefficients
/// per cluster, with the global mean as a dashed line.
pub fn silhouette_panel(
    title: &str,
    per_point: &[f64],
    assignments: &[usize],
    score: f64,
) -> String {
    let k = assignments.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let n = per_point.len();
    let mut c = Canvas::new(title, "silhouette coefficient", "cluster", (-0.2, 1.0), (0.0, n as f64));
    let mut offset = 0usize;
    for cluster in 0..k {
        let mut vals: Vec<f64> = per_point
            .iter()
            .zip(assignments)
            .filter(|(_, &a)| a == cluster)
            .map(|(&v, _)| v)
            .collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (row, &v) in vals.iter().enumerate() {
            let y = (offset + row) as f64;
            c.polyline(&[(0.0, y), (v, y)], class_color(cluster), 1.0, false);
        }
        offset += vals.len() + 2;
    }
    c.vline(score, "#d62728", true);
    c.finish()
}
