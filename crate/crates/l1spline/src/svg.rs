//! Minimal SVG line plots: axes, polylines, data markers and a legend.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

pub struct Series<'a> {
    pub name: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

/// Renders `curves` as polylines over optional scattered `points`.
pub fn render(title: &str, curves: &[Series<'_>], points: Option<Series<'_>>) -> String {
    let all = curves.iter().chain(points.as_ref());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in all {
        for (&x, &y) in s.x.iter().zip(s.y) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !(x1 > x0) {
        (x0, x1) = (x0 - 1.0, x0 + 1.0);
    }
    if !(y1 > y0) {
        (y0, y1) = (y0 - 1.0, y0 + 1.0);
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let (left, right, bottom, top) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left},{top} L{left},{bottom} L{right},{bottom}" fill="none" stroke="black"/>"#
    );
    for (v, anchor) in [(x0, "start"), (x1, "end")] {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{}" text-anchor="{anchor}">{}</text>"#, px(v), bottom + 16.0, tick(v));
    }
    for v in [y0 + pad, y1 - pad] {
        let _ = writeln!(out, r#"<text x="{}" y="{:.1}" text-anchor="end">{}</text>"#, left - 4.0, py(v) + 4.0, tick(v));
    }

    if let Some(p) = &points {
        let _ = writeln!(out, r##"<g fill="#555" fill-opacity="0.6">"##);
        for (&x, &y) in p.x.iter().zip(p.y) {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, px(x), py(y));
        }
        let _ = writeln!(out, "</g>");
    }
    for (k, s) in curves.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut d = String::new();
        for (j, (&x, &y)) in s.x.iter().zip(s.y).enumerate() {
            let _ = write!(d, "{}{:.2},{:.2}", if j == 0 { "M" } else { " L" }, px(x), py(y));
        }
        let _ = writeln!(out, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
    }

    let mut legend: Vec<(&str, &str)> = curves.iter().enumerate().map(|(k, s)| (s.name, COLORS[k % COLORS.len()])).collect();
    if let Some(p) = &points {
        legend.push((p.name, "#555"));
    }
    for (k, (name, color)) in legend.iter().enumerate() {
        let y = top + 10.0 + 16.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="12" height="3" fill="{color}"/><text x="{}" y="{}">{}</text>"#,
            right - 120.0,
            y - 4.0,
            right - 104.0,
            y,
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    format!("{v:.4}").trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_every_series() {
        let x = [0.0, 0.5, 1.0];
        let y = [0.0, 1.0, 0.0];
        let svg = render(
            "a < b",
            &[Series { name: "l1", x: &x, y: &y }, Series { name: "l2", x: &x, y: &y }],
            Some(Series { name: "data", x: &x, y: &y }),
        );
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches("stroke-width").count(), 2);
        assert!(svg.contains("a &lt; b"));
    }

    #[test]
    fn flat_input_does_not_divide_by_zero() {
        let svg = render("flat", &[Series { name: "c", x: &[1.0], y: &[2.0] }], None);
        assert!(!svg.contains("NaN"));
    }
}
