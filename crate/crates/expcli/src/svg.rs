//! Minimal SVG line chart for fitness curves.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Plots each named series against its index on a log10 y axis. Values that
/// are not positive are clamped to the smallest positive value present.
pub fn line_chart(title: &str, series: &[(&str, &[f64])]) -> String {
    let positive = series.iter().flat_map(|(_, v)| v.iter().copied()).filter(|v| *v > 0.0 && v.is_finite());
    let (lo, hi) = positive.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let (lo, hi) = if lo.is_finite() { (lo.log10(), hi.log10()) } else { (0.0, 1.0) };
    let span = if hi - lo > 1e-12 { hi - lo } else { 1.0 };
    let len = series.iter().map(|(_, v)| v.len()).max().unwrap_or(0).max(2);

    let x = |i: usize| MARGIN + (WIDTH - 2.0 * MARGIN) * i as f64 / (len - 1) as f64;
    let y = |v: f64| {
        let l = if v > 0.0 && v.is_finite() { v.log10() } else { lo };
        HEIGHT - MARGIN - (HEIGHT - 2.0 * MARGIN) * (l - lo) / span
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        out,
        r#"<path d="M{MARGIN} {MARGIN} V{b} H{r}" fill="none" stroke="black"/>"#,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" font-family="sans-serif" font-size="10">1e{lo:.1}</text>"#,
        HEIGHT - MARGIN + 14.0
    );
    let _ = writeln!(
        out,
        r#"<text x="4" y="{}" font-family="sans-serif" font-size="10">1e{hi:.1}</text>"#,
        MARGIN - 4.0
    );
    for (k, (name, values)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let points: Vec<String> =
            values.iter().enumerate().map(|(i, &v)| format!("{:.2},{:.2}", x(i), y(v))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}" font-family="sans-serif" font-size="12">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            MARGIN + 16.0 * (k as f64 + 1.0),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
