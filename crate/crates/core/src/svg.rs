//! Minimal SVG plot of a sweep: oracle curve, reduced curve and the dashed
//! classical bound.

use std::fmt::Write;

use crate::sweep::SweepPoint;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
pub const Y_RANGE: (f64, f64) = (1.0, 2.9);

pub const ORACLE_COLOR: &str = "#1f77b4";
pub const REDUCED_COLOR: &str = "#ff7f0e";

struct Frame {
    x0: f64,
    x1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let span = if self.x1 > self.x0 { self.x1 - self.x0 } else { 1.0 };
        LEFT + (x - self.x0) / span * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let (lo, hi) = Y_RANGE;
        HEIGHT - BOTTOM - (y - lo) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }
}

fn polyline(out: &mut String, f: &Frame, xs: &[f64], ys: &[f64], color: &str, extra: &str) {
    let pts: Vec<String> = xs.iter().zip(ys).map(|(x, y)| format!("{:.2},{:.2}", f.px(*x), f.py(*y))).collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.8"{extra} clip-path="url(#plot)" points="{}"/>"#,
        pts.join(" ")
    );
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if hi <= lo {
        return vec![lo];
    }
    let raw = (hi - lo) / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Renders the sweep; byte-stable for identical input.
pub fn render_sweep_svg(points: &[SweepPoint], title: &str) -> String {
    let xs: Vec<f64> = points.iter().map(|p| p.sigma_l).collect();
    let x0 = xs.first().copied().unwrap_or(0.0);
    let x1 = xs.last().copied().unwrap_or(1.0);
    let f = Frame { x0, x1 };
    let (pl, pr, pt, pb) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot"><rect x="{pl}" y="{pt}" width="{}" height="{}"/></clipPath></defs>"#,
        pr - pl,
        pb - pt
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let mut axes = format!("M{pl},{pt} L{pl},{pb} L{pr},{pb}");
    for t in nice_ticks(x0, x1) {
        let x = f.px(t);
        let _ = write!(axes, " M{x:.2},{pb} L{x:.2},{}", pb + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{t:.1}</text>"#, pb + 20.0);
    }
    for t in nice_ticks(Y_RANGE.0, Y_RANGE.1) {
        let y = f.py(t);
        let _ = write!(axes, " M{},{y:.2} L{pl},{y:.2}", pl - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{t:.2}</text>"#, pl - 8.0, y + 4.0);
    }
    let _ = writeln!(s, r#"<path d="{axes}" stroke="black" fill="none"/>"#);

    let oracle: Vec<f64> = points.iter().map(|p| p.oracle.s).collect();
    let reduced: Vec<f64> = points.iter().map(|p| p.reduced.s).collect();
    polyline(&mut s, &f, &xs, &oracle, ORACLE_COLOR, "");
    polyline(&mut s, &f, &xs, &reduced, REDUCED_COLOR, "");
    polyline(&mut s, &f, &[x0, x1], &[2.0, 2.0], "#444444", r#" stroke-dasharray="6,4""#);

    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">σ_L (rad)</text>"#, (pl + pr) / 2.0, HEIGHT - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">CHSH S</text>"#,
        (pt + pb) / 2.0,
        (pt + pb) / 2.0
    );
    let legend = [
        (ORACLE_COLOR, "statevector oracle"),
        (REDUCED_COLOR, "reduced-phase S = 2√2·κ·|γ̂|"),
        ("#444444", "classical bound S = 2"),
    ];
    for (i, (color, label)) in legend.iter().enumerate() {
        let y = pt + 18.0 + 18.0 * i as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{y}" fill="{color}" text-anchor="end">{label}</text>"#, pr - 10.0);
    }
    s.push_str("</svg>\n");
    s
}
