//! Minimal SVG polyline renderer for image curves and envelope plots.
//! Coordinates are formatted at fixed precision so output is deterministic.

use num_complex::Complex64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 20.0;

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Closed image curves `{f(r e^{i theta})}` for a set of radii.
pub fn image_curves(curves: &[(String, Vec<Complex64>)]) -> String {
    let converted: Vec<Curve> = curves
        .iter()
        .map(|(label, pts)| {
            let mut points: Vec<(f64, f64)> = pts.iter().map(|w| (w.re, w.im)).collect();
            if let Some(&first) = points.first() {
                points.push(first); // close the loop
            }
            Curve { label: label.clone(), points }
        })
        .collect();
    render(&converted)
}

/// Envelope curves `psi_lo(r)` and `psi_hi(r)` against `r`.
pub fn envelope_plot(rows: &[(f64, f64, f64)]) -> String {
    let lo = Curve {
        label: "psi_lo".into(),
        points: rows.iter().map(|(r, lo, _)| (*r, *lo)).collect(),
    };
    let hi = Curve {
        label: "psi_hi".into(),
        points: rows.iter().map(|(r, _, hi)| (*r, *hi)).collect(),
    };
    render(&[lo, hi])
}

fn render(curves: &[Curve]) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for c in curves {
        for &(x, y) in &c.points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    if !min_x.is_finite() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    let span_x = (max_x - min_x).max(1e-12);
    let span_y = (max_y - min_y).max(1e-12);
    let scale = ((WIDTH - 2.0 * MARGIN) / span_x).min((HEIGHT - 2.0 * MARGIN) / span_y);
    let to_px = |x: f64, y: f64| {
        (
            MARGIN + (x - min_x) * scale,
            HEIGHT - MARGIN - (y - min_y) * scale, // SVG y axis points down
        )
    };

    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (i, curve) in curves.iter().enumerate() {
        let color = palette[i % palette.len()];
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1\" data-label=\"{}\" points=\"",
            curve.label
        ));
        for (j, &(x, y)) in curve.points.iter().enumerate() {
            let (px, py) = to_px(x, y);
            if j > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{px:.4},{py:.4}"));
        }
        out.push_str("\"/>\n");
    }
    out.push_str("</svg>\n");
    out
}
