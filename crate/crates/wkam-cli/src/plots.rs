//! Minimal self-contained SVG line plots with fixed float formatting, so
//! identical data produces identical bytes.

use std::io::{self, BufWriter, Write};
use std::path::Path;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub struct Series<'a> {
    pub label: &'a str,
    pub points: Vec<(f64, f64)>,
    /// Draw markers instead of a connected polyline.
    pub markers: bool,
}

pub fn write_svg(path: &Path, title: &str, series: &[Series]) -> io::Result<()> {
    let mut f = BufWriter::new(std::fs::File::create(path)?);

    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for s in series {
        for &(x, y) in &s.points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
    }
    if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
        x0 = 0.0;
        x1 = 1.0;
        y0 = 0.0;
        y1 = 1.0;
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = (WIDTH - 2.0 * MARGIN) / (x1 - x0);
    let sy = (HEIGHT - 2.0 * MARGIN) / (y1 - y0);
    let px = |x: f64| MARGIN + (x - x0) * sx;
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) * sy;

    writeln!(
        f,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"monospace\" font-size=\"13\">"
    )?;
    writeln!(
        f,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    )?;
    writeln!(
        f,
        "<text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    )?;

    // axes with 5 ticks each
    writeln!(
        f,
        "<line x1=\"{m:.1}\" y1=\"{b:.1}\" x2=\"{r:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>\
         <line x1=\"{m:.1}\" y1=\"{t:.1}\" x2=\"{m:.1}\" y2=\"{b:.1}\" stroke=\"black\"/>",
        m = MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    )?;
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        writeln!(
            f,
            "<line x1=\"{x:.1}\" y1=\"{b:.1}\" x2=\"{x:.1}\" y2=\"{b2:.1}\" stroke=\"black\"/>\
             <text x=\"{x:.1}\" y=\"{ty:.1}\" text-anchor=\"middle\">{v}</text>",
            x = px(fx),
            b = HEIGHT - MARGIN,
            b2 = HEIGHT - MARGIN + 6.0,
            ty = HEIGHT - MARGIN + 22.0,
            v = fmt_tick(fx)
        )?;
        writeln!(
            f,
            "<line x1=\"{m2:.1}\" y1=\"{y:.1}\" x2=\"{m:.1}\" y2=\"{y:.1}\" stroke=\"black\"/>\
             <text x=\"{tx:.1}\" y=\"{y2:.1}\" text-anchor=\"end\">{v}</text>",
            m = MARGIN,
            m2 = MARGIN - 6.0,
            y = py(fy),
            y2 = py(fy) + 4.0,
            tx = MARGIN - 10.0,
            v = fmt_tick(fy)
        )?;
    }

    for (idx, s) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        if s.markers {
            for &(x, y) in &s.points {
                writeln!(
                    f,
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{color}\" fill-opacity=\"0.6\"/>",
                    px(x),
                    py(y)
                )?;
            }
        } else {
            write!(
                f,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\""
            )?;
            for &(x, y) in &s.points {
                write!(f, "{:.2},{:.2} ", px(x), py(y))?;
            }
            writeln!(f, "\"/>")?;
        }
        writeln!(
            f,
            "<rect x=\"{lx:.1}\" y=\"{ly:.1}\" width=\"12\" height=\"12\" fill=\"{color}\"/>\
             <text x=\"{tx:.1}\" y=\"{ty:.1}\">{label}</text>",
            lx = WIDTH - MARGIN - 170.0,
            ly = MARGIN + 18.0 * idx as f64,
            tx = WIDTH - MARGIN - 152.0,
            ty = MARGIN + 18.0 * idx as f64 + 10.0,
            label = escape(s.label)
        )?;
    }
    writeln!(f, "</svg>")?;
    Ok(())
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 0.01 && v.abs() < 10000.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
