//! Minimal data-faithful SVG charts.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 56.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit<'a>(pts: impl Iterator<Item = &'a (f64, f64)>) -> Self {
        let (mut x, mut y) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
        for &(a, b) in pts.filter(|(a, b)| a.is_finite() && b.is_finite()) {
            x = (x.0.min(a), x.1.max(a));
            y = (y.0.min(b), y.1.max(b));
        }
        let widen = |(lo, hi): (f64, f64)| {
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo < 1e-12 * (1.0 + lo.abs()) {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        Self { x: widen(x), y: widen(y) }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x.0) / (self.x.1 - self.x.0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y.0) / (self.y.1 - self.y.0) * (H - 2.0 * PAD)
    }
}

fn open(s: &mut String, title: &str, x_label: &str, y_label: &str, f: &Frame) {
    let _ = write!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>
<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="#444"/>
<text x="{}" y="{}" text-anchor="middle">{}</text>
<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>
"##,
        W / 2.0,
        escape(title),
        W - 2.0 * PAD,
        H - 2.0 * PAD,
        W / 2.0,
        H - 12.0,
        escape(x_label),
        H / 2.0,
        H / 2.0,
        escape(y_label),
    );
    for (v, anchor, x, y) in [
        (f.x.0, "start", PAD, H - PAD + 14.0),
        (f.x.1, "end", W - PAD, H - PAD + 14.0),
        (f.y.0, "end", PAD - 4.0, H - PAD),
        (f.y.1, "end", PAD - 4.0, PAD + 8.0),
    ] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#, tick(v));
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let frame = Frame::fit(series.iter().flat_map(|s| s.points.iter()));
    let mut s = String::new();
    open(&mut s, title, x_label, y_label, &frame);
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        if series.len() > 1 {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
                W - PAD - 4.0,
                PAD + 14.0 * (i + 1) as f64,
                escape(ser.name)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Color on a blue (low) to red (high) scale for `t` in `[0, 1]`.
fn heat(t: f64) -> String {
    let t = t.clamp(0.0, 1.0);
    let r = (40.0 + 215.0 * t) as u8;
    let b = (255.0 - 215.0 * t) as u8;
    format!("#{r:02x}30{b:02x}")
}

/// Beeswarm-style scatter: one row per feature, attribution on the x axis,
/// point color by the feature value's percentile.
pub fn beeswarm(title: &str, features: &[&str], points: &[(usize, f64, f64)]) -> String {
    let n = features.len().max(1);
    let xs: Vec<(f64, f64)> = points.iter().map(|&(_, v, _)| (v, 0.0)).collect();
    let mut frame = Frame::fit(xs.iter());
    frame.y = (-0.5, n as f64 - 0.5);
    let mut s = String::new();
    open(&mut s, title, "Shapley value", "", &frame);
    for (i, f) in features.iter().enumerate() {
        let y = frame.py((n - 1 - i) as f64);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, PAD - 4.0, y + 4.0, escape(f));
    }
    let zero = frame.px(0.0);
    let _ = writeln!(s, r##"<line x1="{zero:.2}" y1="{PAD}" x2="{zero:.2}" y2="{}" stroke="#999"/>"##, H - PAD);
    for (k, &(f, v, pct)) in points.iter().enumerate() {
        // deterministic vertical spread within the feature's row
        let jitter = ((k * 7919) % 97) as f64 / 97.0 - 0.5;
        let y = frame.py((n - 1 - f) as f64 + 0.6 * jitter);
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{y:.2}" r="2" fill="{}"/>"#, frame.px(v), heat(pct / 100.0));
    }
    s.push_str("</svg>\n");
    s
}
