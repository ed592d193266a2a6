//! Minimal SVG line chart of a sweep: mean sum-rate per algorithm with
//! +/- one standard-error bars.

use std::fmt::Write as _;

use super::pipeline::Algorithm;
use super::sweep::SweepReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

fn colour(algorithm: Algorithm) -> &'static str {
    match algorithm {
        Algorithm::FourStep => "#1f77b4",
        Algorithm::RandomAllocation => "#d62728",
    }
}

pub fn sweep_svg(report: &SweepReport) -> String {
    let xs = &report.values;
    let (x_lo, x_hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        });
    let y_hi = report
        .points
        .iter()
        .map(|p| p.mean_sum_rate + p.stderr)
        .fold(0.0, f64::max)
        .max(1e-9)
        * 1.1;
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
    let sx = |x: f64| MARGIN + (x - x_lo) / x_span * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / y_hi * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{x0},{y1} L{x0},{y0} L{x1},{y0}" stroke="black" fill="none"/>"#
    );
    for &x in xs {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x}</text>"#,
            sx(x),
            y0 + 18.0
        );
    }
    for tick in 0..=4 {
        let y = y_hi * tick as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{y:.1}</text>"#,
            x0 - 6.0,
            sy(y) + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0,
        report.axis
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{:.1}" transform="rotate(-90 15 {:.1})" text-anchor="middle">sum rate (bit/s/Hz)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (row, algorithm) in [Algorithm::FourStep, Algorithm::RandomAllocation]
        .into_iter()
        .enumerate()
    {
        let c = colour(algorithm);
        let series = report.series(algorithm);
        let path: Vec<String> = series
            .iter()
            .map(|p| format!("{:.1},{:.1}", sx(p.axis_value), sy(p.mean_sum_rate)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" stroke="{c}" fill="none" stroke-width="2"/>"#,
            path.join(" ")
        );
        for p in series {
            let x = sx(p.axis_value);
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="{c}"/><circle cx="{x:.1}" cy="{:.1}" r="3" fill="{c}"/>"#,
                sy(p.mean_sum_rate - p.stderr),
                sy(p.mean_sum_rate + p.stderr),
                sy(p.mean_sum_rate)
            );
        }
        let ly = MARGIN + 16.0 * row as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{c}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{algorithm}</text>"#,
            x1 - 80.0,
            x1 - 60.0,
            x1 - 55.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
