//! Standalone SVG rendering of instances and solutions.
//!
//! Points draw as circles (area proportional to |w|, filled when
//! positive, hollow when negative), realized boxes as stroked `<rect>`
//! elements, active sectors as lightly shaded `<path>` fills, and the
//! frame as `<line>` axes. Element kinds are kept distinct so consumers
//! can count boxes and points structurally. Output is byte-deterministic
//! for fixed inputs.

use crate::model::{Instance, Solution};
use std::io::Write;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 40.0;

fn fmt(v: f64) -> String {
    format!("{v:.3}")
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn of(instance: &Instance, solution: Option<&Solution>) -> Frame {
        let mut xs: Vec<f64> = instance.points().iter().map(|p| p.x).collect();
        let mut ys: Vec<f64> = instance.points().iter().map(|p| p.y).collect();
        if let Some(sol) = solution {
            for b in sol.boxes.iter().filter(|b| !b.empty) {
                xs.extend([b.x_lo, b.x_hi]);
                ys.extend([b.y_lo, b.y_hi]);
            }
        }
        if xs.is_empty() {
            return Frame {
                x_min: 0.0,
                x_max: 1.0,
                y_min: 0.0,
                y_max: 1.0,
            };
        }
        let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for &x in &xs {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
        }
        for &y in &ys {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
        if x_min == x_max {
            x_min -= 1.0;
            x_max += 1.0;
        }
        if y_min == y_max {
            y_min -= 1.0;
            y_max += 1.0;
        }
        Frame {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - 2.0 * MARGIN)
    }

    /// SVG y grows downward; instance y grows upward.
    fn sy(&self, y: f64) -> f64 {
        MARGIN + (self.y_max - y) / (self.y_max - self.y_min) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Renders an instance with an optional solution overlay to SVG text.
pub fn solution_svg(instance: &Instance, solution: &Solution, matrix: &[Vec<f64>]) -> String {
    let frame = Frame::of(instance, Some(solution));
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));

    // Shaded sectors first, under everything else.
    let m = matrix.len();
    if instance.n() > 0
        && solution.line_gaps.len() == m + 1
        && solution.block_boundaries.len() == m + 1
    {
        let max_entry = matrix
            .iter()
            .flatten()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        for (i, row) in matrix.iter().enumerate() {
            for (j, &a) in row.iter().enumerate() {
                if a == 0.0 || max_entry == 0.0 {
                    continue;
                }
                let x0 = frame.sx(instance.x_separator(solution.block_boundaries[j]));
                let x1 = frame.sx(instance.x_separator(solution.block_boundaries[j + 1]));
                let y0 = frame.sy(instance.y_separator(solution.line_gaps[i]));
                let y1 = frame.sy(instance.y_separator(solution.line_gaps[i + 1]));
                let opacity = 0.10 + 0.15 * (a.abs() / max_entry);
                out.push_str(&format!(
                    "  <path d=\"M {x0} {y0} L {x1} {y0} L {x1} {y1} L {x0} {y1} Z\" \
                     fill=\"#f4c542\" fill-opacity=\"{op}\"/>\n",
                    x0 = fmt(x0),
                    x1 = fmt(x1),
                    y0 = fmt(y0),
                    y1 = fmt(y1),
                    op = fmt(opacity),
                ));
            }
        }
    }

    // Axes along the frame edges.
    out.push_str(&format!(
        "  <line x1=\"{m0}\" y1=\"{h}\" x2=\"{w}\" y2=\"{h}\" stroke=\"#444444\" stroke-width=\"1\"/>\n",
        m0 = fmt(MARGIN),
        h = fmt(HEIGHT - MARGIN),
        w = fmt(WIDTH - MARGIN),
    ));
    out.push_str(&format!(
        "  <line x1=\"{m0}\" y1=\"{m1}\" x2=\"{m0}\" y2=\"{h}\" stroke=\"#444444\" stroke-width=\"1\"/>\n",
        m0 = fmt(MARGIN),
        m1 = fmt(MARGIN),
        h = fmt(HEIGHT - MARGIN),
    ));

    // Boxes.
    let colors = ["#d62728", "#2ca02c", "#9467bd", "#8c564b"];
    for (i, b) in solution.boxes.iter().enumerate() {
        if b.empty {
            continue;
        }
        let x = frame.sx(b.x_lo);
        let y = frame.sy(b.y_hi);
        let w = frame.sx(b.x_hi) - x;
        let h = frame.sy(b.y_lo) - y;
        out.push_str(&format!(
            "  <rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" fill=\"none\" \
             stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            x = fmt(x),
            y = fmt(y),
            w = fmt(w.max(0.5)),
            h = fmt(h.max(0.5)),
            color = colors[i % colors.len()],
        ));
    }

    // Points.
    let w_max = instance
        .points()
        .iter()
        .fold(0.0f64, |acc, p| acc.max(p.w.abs()));
    for p in instance.points() {
        let r = if w_max == 0.0 {
            3.0
        } else {
            2.0 + 6.0 * (p.w.abs() / w_max).sqrt()
        };
        let (fill, stroke) = if p.w > 0.0 {
            ("#1f77b4", "none")
        } else {
            ("none", "#1f77b4")
        };
        out.push_str(&format!(
            "  <circle cx=\"{cx}\" cy=\"{cy}\" r=\"{r}\" fill=\"{fill}\" stroke=\"{stroke}\" \
             stroke-width=\"1.2\"/>\n",
            cx = fmt(frame.sx(p.x)),
            cy = fmt(frame.sy(p.y)),
            r = fmt(r),
        ));
    }

    out.push_str("</svg>\n");
    out
}

/// Writes [`solution_svg`] output to `path`.
pub fn render_svg(
    instance: &Instance,
    solution: &Solution,
    matrix: &[Vec<f64>],
    path: &Path,
) -> std::io::Result<()> {
    let text = solution_svg(instance, solution, matrix);
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())
}
