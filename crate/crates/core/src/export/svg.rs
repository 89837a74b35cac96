use std::fmt::Write as _;

use thiserror::Error;

use crate::response::FrequencyResponse;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
/// Magnitudes below peak minus this are clipped at the plot floor.
const DB_RANGE: f64 = 100.0;

#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvgError {
    #[error("nothing to plot")]
    NoResponses,
    #[error("response {0} is empty")]
    EmptyResponse(usize),
    #[error("responses are sampled on different grids")]
    GridMismatch,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Magnitude Bode plot: log-frequency x axis (rad/s), dB y axis.
pub fn emit_bode_svg(curves: &[(&FrequencyResponse, &str)]) -> Result<String, SvgError> {
    let (first, _) = curves.first().ok_or(SvgError::NoResponses)?;
    for (i, (resp, _)) in curves.iter().enumerate() {
        if resp.is_empty() {
            return Err(SvgError::EmptyResponse(i));
        }
        if resp.omegas() != first.omegas() {
            return Err(SvgError::GridMismatch);
        }
    }
    let omegas: Vec<f64> = first
        .omegas()
        .iter()
        .copied()
        .filter(|w| *w > 0.0)
        .collect();
    let (w_lo, w_hi) = match (omegas.first(), omegas.last()) {
        (Some(lo), Some(hi)) if hi > lo => (*lo, *hi),
        (Some(lo), _) => (*lo / 10.0, *lo * 10.0),
        _ => return Err(SvgError::EmptyResponse(0)),
    };
    let peak = curves
        .iter()
        .map(|(r, _)| r.peak_db())
        .fold(f64::NEG_INFINITY, f64::max);
    let step = 10.0;
    let db_hi = (peak / step).ceil() * step;
    let db_lo = db_hi - DB_RANGE;

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (lx_lo, lx_hi) = (w_lo.log10(), w_hi.log10());
    let x = |w: f64| LEFT + (w.log10() - lx_lo) / (lx_hi - lx_lo) * plot_w;
    let y = |db: f64| TOP + (db_hi - db.clamp(db_lo, db_hi)) / (db_hi - db_lo) * plot_h;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}"/></clipPath></defs>"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // vertical decade lines
    let mut decade = lx_lo.floor() as i32;
    while f64::from(decade) <= lx_hi.ceil() {
        for m in 1..10 {
            let w = f64::from(m) * 10f64.powi(decade);
            if w < w_lo * (1.0 - 1e-12) || w > w_hi * (1.0 + 1e-12) {
                continue;
            }
            let px = x(w);
            let stroke = if m == 1 { "#bbbbbb" } else { "#eeeeee" };
            let _ = writeln!(
                out,
                r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="{stroke}"/>"##,
                TOP + plot_h
            );
            if m == 1 {
                let _ = writeln!(
                    out,
                    r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">1e{decade}</text>"#,
                    TOP + plot_h + 16.0
                );
            }
        }
        decade += 1;
    }
    let db_step = nice_step(DB_RANGE);
    let mut db = db_lo;
    while db <= db_hi + 1e-9 {
        let py = y(db);
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{db}</text>"#,
            LEFT - 6.0,
            py + 4.0
        );
        db += db_step;
    }
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">frequency (rad/s)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">magnitude (dB)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for (i, (resp, label)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = resp
            .omegas()
            .iter()
            .zip(&resp.magnitude_db)
            .filter(|(w, m)| **w > 0.0 && m.is_finite())
            .map(|(w, m)| format!("{:.2},{:.2}", x(*w), y(*m)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let lx = LEFT + plot_w - 150.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 20.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 26.0,
            ly + 4.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
