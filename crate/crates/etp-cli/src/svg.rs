//! Minimal SVG renderers for the optional `--svg` flag. Presentation only;
//! no acceptance test depends on these bytes.

use ndarray::Array2;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 48.0;

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
        MARGIN,
        xml_escape(title)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn bar_chart(x_label: &str, rows: &[(f64, f64)]) -> String {
    let mut svg = header(x_label);
    if rows.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let max_p = rows.iter().map(|r| r.1).fold(f64::MIN_POSITIVE, f64::max);
    let plot_w = W - 2.0 * MARGIN;
    let plot_h = H - 2.0 * MARGIN;
    let bar_w = (plot_w / rows.len() as f64).min(22.0);
    for (i, (x, p)) in rows.iter().enumerate() {
        let h = (p / max_p) * plot_h;
        let cx = MARGIN + plot_w * (i as f64 + 0.5) / rows.len() as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#b03030\"/>",
            cx - bar_w / 2.0,
            H - MARGIN - h,
            bar_w,
            h
        );
        if rows.len() <= 40 || i % (rows.len() / 20).max(1) == 0 {
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"9\" \
                 text-anchor=\"middle\">{}</text>",
                cx,
                H - MARGIN + 14.0,
                x
            );
        }
    }
    let _ = write!(
        svg,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n</svg>\n",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    );
    svg
}

pub fn line_chart(x_label: &str, y_label: &str, rows: &[(f64, f64)]) -> String {
    let mut svg = header(&format!("{y_label} vs {x_label}"));
    if rows.len() < 2 {
        svg.push_str("</svg>\n");
        return svg;
    }
    let (x_lo, x_hi) = rows
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), r| (lo.min(r.0), hi.max(r.0)));
    let (y_lo, y_hi) = rows
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), r| (lo.min(r.1), hi.max(r.1)));
    let y_span = (y_hi - y_lo).max(1e-12);
    let x_span = (x_hi - x_lo).max(1e-12);
    let mut path = String::new();
    for (i, (x, y)) in rows.iter().enumerate() {
        let px = MARGIN + (W - 2.0 * MARGIN) * (x - x_lo) / x_span;
        let py = H - MARGIN - (H - 2.0 * MARGIN) * (y - y_lo) / y_span;
        let _ = write!(path, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, px, py);
    }
    let _ = write!(
        svg,
        "<path d=\"{}\" fill=\"none\" stroke=\"#2040a0\" stroke-width=\"1.5\"/>\n\
         <text x=\"{:.0}\" y=\"{:.0}\" font-family=\"sans-serif\" font-size=\"10\">{:.4}..{:.4}</text>\n</svg>\n",
        path.trim_end(),
        MARGIN,
        H - 8.0,
        y_lo,
        y_hi
    );
    svg
}

pub fn heatmap(x_label: &str, y_label: &str, p: &Array2<f64>) -> String {
    let mut svg = header(&format!("{y_label} vs {x_label}"));
    let (rows, cols) = p.dim();
    let max_p = p.iter().copied().fold(f64::MIN_POSITIVE, f64::max);
    let cell_w = (W - 2.0 * MARGIN) / cols as f64;
    let cell_h = (H - 2.0 * MARGIN) / rows as f64;
    for ((r, c), v) in p.indexed_iter() {
        if *v <= 0.0 {
            continue;
        }
        let t = (v / max_p).sqrt(); // sqrt to lift small structure
        let red = (255.0 * t) as u8;
        let blue = (255.0 * (1.0 - t)) as u8;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({},40,{})\"/>",
            MARGIN + c as f64 * cell_w,
            H - MARGIN - (r as f64 + 1.0) * cell_h,
            cell_w.max(1.0),
            cell_h.max(1.0),
            red,
            blue
        );
    }
    svg.push_str("</svg>\n");
    svg
}
