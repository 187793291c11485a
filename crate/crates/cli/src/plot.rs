//! Minimal deterministic SVG line charts.

use std::fmt::Write;

use granfore_core::YearMonth;

use crate::CliError;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const TICKS: usize = 5;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Trace {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }

    /// Values at consecutive x positions starting from `x0`.
    pub fn from_values(label: impl Into<String>, x0: f64, step: f64, values: &[f64]) -> Self {
        let points = values
            .iter()
            .enumerate()
            .map(|(i, &y)| (x0 + step * i as f64, y))
            .collect();
        Self::new(label, points)
    }
}

#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

/// Axis ranges: data extent widened by 5% of the span on each side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    // a flat extent still needs a visible axis
    let span = if span > 0.0 { span } else { lo.abs().max(1.0) };
    (lo - 0.05 * span, hi + 0.05 * span)
}

pub fn plot_bounds(traces: &[Trace]) -> Bounds {
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in traces.iter().flat_map(|t| &t.points) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x_min, x_max) = padded(x0, x1);
    let (y_min, y_max) = padded(y0, y1);
    Bounds {
        x_min,
        x_max,
        y_min,
        y_max,
    }
}

/// Month position on a decimal-year axis.
pub fn month_x(ym: YearMonth) -> f64 {
    ym.year() as f64 + (ym.month() as f64 - 1.0) / 12.0
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64, span: f64) -> String {
    let decimals = (2.0 - span.log10().floor()).clamp(0.0, 6.0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        // avoids "-0.00"
        format!("{:.decimals$}", 0.0)
    } else {
        s
    }
}

pub fn render_plot(traces: &[Trace], spec: &PlotSpec) -> Result<String, CliError> {
    if traces.is_empty() {
        return Err(CliError::Plot("no traces to draw".into()));
    }
    for t in traces {
        if t.points.len() < 2 {
            return Err(CliError::Plot(format!(
                "trace {:?} has fewer than 2 points",
                t.label
            )));
        }
        if t.points
            .iter()
            .any(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(CliError::Plot(format!(
                "trace {:?} has non-finite points",
                t.label
            )));
        }
    }
    let b = plot_bounds(traces);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - b.x_min) / (b.x_max - b.x_min) * pw;
    let sy = |y: f64| TOP + (b.y_max - y) / (b.y_max - b.y_min) * ph;

    let mut out = String::new();
    let w = &mut out;
    // writing into a String cannot fail
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        w,
        r##"<g class="axes" data-x-min="{}" data-x-max="{}" data-y-min="{}" data-y-max="{}" stroke="#333333" fill="none">"##,
        b.x_min, b.x_max, b.y_min, b.y_max
    );
    let _ = writeln!(
        w,
        r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
        TOP + ph,
        LEFT + pw,
        TOP + ph
    );
    let _ = writeln!(
        w,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}"/>"#,
        TOP + ph
    );
    let _ = writeln!(w, "</g>");

    let _ = writeln!(w, r##"<g class="ticks" fill="#333333">"##);
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let xv = b.x_min + f * (b.x_max - b.x_min);
        let yv = b.y_min + f * (b.y_max - b.y_min);
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            w,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#333333"/>"##,
            TOP + ph,
            TOP + ph + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph + 18.0,
            tick_label(xv, b.x_max - b.x_min)
        );
        let _ = writeln!(
            w,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="#333333"/>"##,
            LEFT - 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 8.0,
            py + 4.0,
            tick_label(yv, b.y_max - b.y_min)
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 10.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(&spec.y_label)
    );

    for (i, t) in traces.iter().enumerate() {
        let pts: Vec<String> = t
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            w,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
    }

    let _ = writeln!(w, r#"<g class="legend">"#);
    for (i, t) in traces.iter().enumerate() {
        let y = TOP + 10.0 + 18.0 * i as f64;
        let x = LEFT + pw + 15.0;
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="3"/>"#,
            x + 20.0,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            w,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            x + 26.0,
            y + 4.0,
            escape(&t.label)
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(out)
}
