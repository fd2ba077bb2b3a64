//! Minimal SVG rendering of a projected curve and its convex hull.

use std::fmt::Write;

use curveflow::convexity::hull_2d;

const SIZE: f64 = 512.0;
const MARGIN: f64 = 16.0;

/// Draws the closed polyline `points` and, when it exists, the outline of
/// its convex hull. The y axis points up.
pub fn render(points: &[[f64; 2]], caption: &str) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let map = |p: &[f64; 2]| {
        (
            MARGIN + (p[0] - lo[0]) * scale,
            SIZE - MARGIN - (p[1] - lo[1]) * scale,
        )
    };
    let path = |pts: &mut dyn Iterator<Item = &[f64; 2]>| {
        let mut d = String::new();
        for (k, p) in pts.enumerate() {
            let (x, y) = map(p);
            let _ = write!(d, "{}{x:.3},{y:.3} ", if k == 0 { 'M' } else { 'L' });
        }
        d.push('Z');
        d
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Ok(h) = hull_2d(points) {
        let _ = writeln!(
            out,
            r##"<path d="{}" fill="none" stroke="#d62728" stroke-width="1" stroke-dasharray="4 3"/>"##,
            path(&mut h.vertices().iter())
        );
    }
    let _ = writeln!(
        out,
        r##"<path d="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
        path(&mut points.iter())
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-family="monospace" font-size="12">{}</text>"#,
        MARGIN - 4.0,
        escape(caption)
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
