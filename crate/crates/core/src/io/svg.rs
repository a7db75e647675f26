//! Static SVG plot of alarm traces: `Q_a` runs along the horizontal axis and
//! each trace gets one horizontal band, filled where a safe evaluation exists.

use std::fmt::Write as _;

use crate::alarm::AlarmTrace;

const WIDTH: f64 = 640.0;
const LEFT: f64 = 160.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BAND: f64 = 28.0;
const GAP: f64 = 12.0;
const AXIS: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Maximal runs of consecutive safe slices, as inclusive `Q_a` ranges.
fn safe_runs(trace: &AlarmTrace) -> Vec<(i64, i64)> {
    let mut runs: Vec<(i64, i64)> = Vec::new();
    for s in trace.slices.iter().filter(|s| s.safe_exists) {
        match runs.last_mut() {
            Some(r) if r.1 + 1 == s.q_a => r.1 = s.q_a,
            _ => runs.push((s.q_a, s.q_a)),
        }
    }
    runs
}

pub fn render_traces(traces: &[AlarmTrace]) -> String {
    let q = traces.iter().map(|t| t.q).max().unwrap_or(0).max(1);
    let plot_w = WIDTH - LEFT - RIGHT;
    let x = |q_a: f64| LEFT + plot_w * q_a / q as f64;
    let height = TOP + traces.len() as f64 * (BAND + GAP) + AXIS;
    let axis_y = height - AXIS + 4.0;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<title>Logical alarm traces</title>"#).unwrap();

    for (k, t) in traces.iter().enumerate() {
        let y = TOP + k as f64 * (BAND + GAP);
        let name = escape(&t.series_name());
        writeln!(
            out,
            r#"<g class="series" data-name="{name}" data-triggered="{}">"#,
            t.is_triggered()
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{name}</text>"#,
            LEFT - 8.0,
            y + BAND / 2.0 + 4.0
        )
        .unwrap();
        let (lo, hi) = t.qa_range;
        writeln!(
            out,
            r##"<rect class="domain" x="{:.2}" y="{y}" width="{:.2}" height="{BAND}" fill="#f4f4f4" stroke="#999"/>"##,
            x(lo as f64 - 0.5).max(LEFT),
            x(hi as f64 + 0.5).min(LEFT + plot_w) - x(lo as f64 - 0.5).max(LEFT)
        )
        .unwrap();
        for (a, b) in safe_runs(t) {
            let x0 = x(a as f64 - 0.5).max(LEFT);
            let x1 = x(b as f64 + 0.5).min(LEFT + plot_w);
            writeln!(
                out,
                r##"<rect class="safe" data-from="{a}" data-to="{b}" x="{x0:.2}" y="{y}" width="{:.2}" height="{BAND}" fill="#3a7d44"/>"##,
                x1 - x0
            )
            .unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }

    writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        LEFT + plot_w
    )
    .unwrap();
    let step = tick_step(q);
    let mut tick = 0;
    while tick <= q {
        let tx = x(tick as f64);
        writeln!(
            out,
            r#"<line x1="{tx:.2}" y1="{axis_y}" x2="{tx:.2}" y2="{}" stroke="black"/><text x="{tx:.2}" y="{}" text-anchor="middle">{tick}</text>"#,
            axis_y + 4.0,
            axis_y + 16.0
        )
        .unwrap();
        tick += step;
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">assumed Q_a</text>"#,
        LEFT + plot_w / 2.0,
        axis_y + 32.0
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

fn tick_step(q: i64) -> i64 {
    let raw = (q as f64 / 8.0).max(1.0);
    let mag = 10f64.powi(raw.log10().floor() as i32);
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    step as i64
}
