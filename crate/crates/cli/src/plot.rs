//! SVG trajectory plot.
//!
//! Built by direct string construction against a fixed template so the
//! output bytes are a pure function of the run summary; no plotting
//! dependency gets to inject timestamps or layout jitter.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Context;
use kaltrack_core::sim::RunSummary;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
/// 5% of the viewport on each side.
const MARGIN_X: f64 = 40.0;
const MARGIN_Y: f64 = 30.0;
const TICKS: usize = 5;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    /// Hollow markers for measurements, filled for state series.
    filled: bool,
    points: Vec<(f64, f64)>,
}

struct Frame {
    x_min: f64,
    x_range: f64,
    y_min: f64,
    y_range: f64,
}

impl Frame {
    fn fit(series: &[Series<'_>]) -> Self {
        let mut x_min = f64::INFINITY;
        let mut x_max = f64::NEG_INFINITY;
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for s in series {
            for &(x, y) in &s.points {
                x_min = x_min.min(x);
                x_max = x_max.max(x);
                y_min = y_min.min(y);
                y_max = y_max.max(y);
            }
        }
        // Degenerate spans (single point, or all series coincident on an
        // axis) get a symmetric pad so the affine map stays invertible.
        if x_max - x_min < 1e-12 {
            x_min -= 0.5;
            x_max += 0.5;
        }
        if y_max - y_min < 1e-12 {
            y_min -= 0.5;
            y_max += 0.5;
        }
        Frame {
            x_min,
            x_range: x_max - x_min,
            y_min,
            y_range: y_max - y_min,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_X + (x - self.x_min) / self.x_range * (WIDTH - 2.0 * MARGIN_X)
    }

    /// SVG y grows downward; data y grows upward.
    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_Y - (y - self.y_min) / self.y_range * (HEIGHT - 2.0 * MARGIN_Y)
    }
}

pub fn plot_svg_string(summary: &RunSummary) -> String {
    let series = [
        Series {
            label: "true",
            color: "#2ca02c",
            filled: true,
            points: summary
                .records
                .iter()
                .map(|r| (r.true_state[0], r.true_state[1]))
                .collect(),
        },
        Series {
            label: "measured",
            color: "#d62728",
            filled: false,
            points: summary
                .records
                .iter()
                .map(|r| (r.measurement[0], r.measurement[1]))
                .collect(),
        },
        Series {
            label: "filtered",
            color: "#1f77b4",
            filled: true,
            points: summary
                .records
                .iter()
                .map(|r| (r.posterior_mean[0], r.posterior_mean[1]))
                .collect(),
        },
    ];
    let frame = Frame::fit(&series);

    let mut svg = String::with_capacity(4096);
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\">"
    );
    svg.push_str("<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n");
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_X:.2}\" y=\"{MARGIN_Y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"#333333\"/>",
        WIDTH - 2.0 * MARGIN_X,
        HEIGHT - 2.0 * MARGIN_Y
    );

    write_ticks(&mut svg, &frame);
    for s in &series {
        write_series(&mut svg, &frame, s);
    }
    write_legend(&mut svg, &series);

    svg.push_str("</svg>\n");
    svg
}

fn write_ticks(svg: &mut String, frame: &Frame) {
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let x_val = frame.x_min + f * frame.x_range;
        let y_val = frame.y_min + f * frame.y_range;
        let px = frame.px(x_val);
        let py = frame.py(y_val);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333333\"/>",
            HEIGHT - MARGIN_Y,
            HEIGHT - MARGIN_Y + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{x_val:.2}</text>",
            HEIGHT - MARGIN_Y + 17.0
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#333333\"/>",
            MARGIN_X - 5.0,
            MARGIN_X
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{y_val:.2}</text>",
            MARGIN_X - 8.0,
            py + 4.0
        );
    }
}

fn write_series(svg: &mut String, frame: &Frame, series: &Series<'_>) {
    if series.points.len() >= 2 {
        let mut coords = String::new();
        for &(x, y) in &series.points {
            if !coords.is_empty() {
                coords.push(' ');
            }
            let _ = write!(coords, "{:.2},{:.2}", frame.px(x), frame.py(y));
        }
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{coords}\"/>",
            series.color
        );
    }
    for &(x, y) in &series.points {
        let fill = if series.filled { series.color } else { "none" };
        let _ = writeln!(
            svg,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.50\" fill=\"{fill}\" stroke=\"{}\"/>",
            frame.px(x),
            frame.py(y),
            series.color
        );
    }
}

fn write_legend(svg: &mut String, series: &[Series<'_>]) {
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_Y + 16.0 + i as f64 * 18.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            MARGIN_X + 12.0,
            MARGIN_X + 34.0,
            s.color
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">{}</text>",
            MARGIN_X + 40.0,
            y + 4.0,
            s.label
        );
    }
}

pub fn emit_plot_svg(summary: &RunSummary, path: &Path) -> anyhow::Result<()> {
    std::fs::write(path, plot_svg_string(summary))
        .with_context(|| format!("writing plot SVG to {}", path.display()))
}
