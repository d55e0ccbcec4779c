//! Minimal SVG heatmap renderer over the benchmark value matrices.
//!
//! A thin presentation layer over the CSV data: one colored rect per
//! (trajectory, sigma) cell with row/column labels and a small legend.

use crate::bench::Matrix;

/// Five-stop approximation of the viridis colormap.
const STOPS: [(f64, [u8; 3]); 5] = [
    (0.00, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.50, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.00, [253, 231, 37]),
];

fn color(v: f64) -> String {
    let v = v.clamp(0.0, 1.0);
    let mut rgb = STOPS[4].1;
    for w in STOPS.windows(2) {
        let (a, ca) = w[0];
        let (b, cb) = w[1];
        if v <= b {
            let t = if b > a { (v - a) / (b - a) } else { 0.0 };
            rgb = [
                (ca[0] as f64 + t * (cb[0] as f64 - ca[0] as f64)) as u8,
                (ca[1] as f64 + t * (cb[1] as f64 - ca[1] as f64)) as u8,
                (ca[2] as f64 + t * (cb[2] as f64 - ca[2] as f64)) as u8,
            ];
            break;
        }
    }
    format!("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2])
}

/// Render a trajectories-by-sigmas matrix as an SVG heatmap.
pub fn heatmap(values: &Matrix, names: &[String], sigmas: &[f64], title: &str) -> String {
    const CELL: f64 = 42.0;
    const LEFT: f64 = 70.0;
    const TOP: f64 = 40.0;
    let width = LEFT + CELL * values.cols as f64 + 20.0;
    let height = TOP + CELL * values.rows as f64 + 50.0;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"monospace\" font-size=\"11\">\n"
    );
    svg.push_str(&format!(
        "<text x=\"{LEFT}\" y=\"20\" font-size=\"14\">{title}</text>\n"
    ));

    for i in 0..values.rows {
        let y = TOP + i as f64 * CELL;
        svg.push_str(&format!(
            "<text x=\"8\" y=\"{:.1}\">{}</text>\n",
            y + CELL * 0.6,
            names.get(i).map(String::as_str).unwrap_or("?")
        ));
        for j in 0..values.cols {
            let x = LEFT + j as f64 * CELL;
            let v = values.get(i, j);
            svg.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{CELL}\" height=\"{CELL}\" \
                 fill=\"{}\" stroke=\"white\"><title>{}={:.4}</title></rect>\n",
                color(v),
                names.get(i).map(String::as_str).unwrap_or("?"),
                v
            ));
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" fill=\"{}\">{:.2}</text>\n",
                x + CELL / 2.0,
                y + CELL * 0.6,
                if v > 0.6 { "black" } else { "white" },
                v
            ));
        }
    }

    for (j, s) in sigmas.iter().enumerate() {
        let x = LEFT + j as f64 * CELL + CELL / 2.0;
        let y = TOP + values.rows as f64 * CELL + 16.0;
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{y:.1}\" text-anchor=\"middle\">{s:.0e}</text>\n"
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">sigma</text>\n",
        LEFT + values.cols as f64 * CELL / 2.0,
        TOP + values.rows as f64 * CELL + 38.0
    ));
    svg.push_str("</svg>\n");
    svg
}
