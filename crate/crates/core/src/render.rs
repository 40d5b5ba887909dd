//! Deterministic SVG rendering of certificates.
//!
//! One row per variable over a horizontal `[0, 1)` axis (ticks every 0.2).
//! Cells of the profile are filled with a colour keyed by the index of their
//! height vector among the distinct vectors in left-to-right order, which is
//! the support-point index of the extracted combination. Rectangles are
//! outlined and labelled with their height when it is not 1. A conic part
//! gets a second panel over `[0, L)`.

use std::fmt::Write as _;

use crate::certificate::Certificate;
use crate::error::Result;
use crate::rect::{profile, Base, ProfileCell, RectSet};
use crate::scalar::Scalar;

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

const LEFT: f64 = 90.0;
const AXIS_WIDTH: f64 = 500.0;
const ROW: f64 = 34.0;
const BAR: f64 = 22.0;
const TOP: f64 = 20.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

struct Panel<'a, T> {
    title: &'a str,
    sets: &'a [RectSet<T>],
    base: Base,
    /// Right end of the drawn axis.
    length: f64,
    color_offset: usize,
}

/// Distinct height vectors in order of first appearance.
fn color_keys<T: Scalar>(cells: &[ProfileCell<T>]) -> Vec<Vec<T>> {
    let mut keys: Vec<Vec<T>> = Vec::new();
    for c in cells {
        if !keys.iter().any(|k| k == &c.heights) {
            keys.push(c.heights.clone());
        }
    }
    keys
}

fn draw_panel<T: Scalar>(out: &mut String, names: &[String], panel: &Panel<T>, y0: f64) -> Result<f64> {
    let scale = AXIS_WIDTH / panel.length;
    let x = |t: f64| LEFT + t.min(panel.length) * scale;
    let rows = names.len();
    let axis_y = y0 + 16.0 + rows as f64 * ROW + 6.0;
    let _ = writeln!(
        out,
        r#"<text x="4" y="{}" font-weight="bold">{}</text>"#,
        fmt(y0 + 12.0),
        escape(panel.title)
    );

    let cells = profile(panel.base, panel.sets)?;
    let keys = color_keys(&cells);
    for cell in &cells {
        let start = cell.start.to_f64();
        let end = cell.end.as_ref().map_or(panel.length, Scalar::to_f64);
        if end <= start {
            continue;
        }
        let color = keys
            .iter()
            .position(|k| k == &cell.heights)
            .expect("every cell has a key")
            + panel.color_offset;
        for (row, h) in cell.heights.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let top = y0 + 16.0 + row as f64 * ROW + (ROW - BAR) / 2.0;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}" fill-opacity="0.75"/>"#,
                fmt(x(start)),
                fmt(top),
                fmt(x(end) - x(start)),
                fmt(BAR),
                PALETTE[color % PALETTE.len()]
            );
        }
    }
    for (row, (name, set)) in names.iter().zip(panel.sets).enumerate() {
        let mid = y0 + 16.0 + row as f64 * ROW + ROW / 2.0;
        let top = mid - BAR / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            fmt(LEFT - 8.0),
            fmt(mid),
            escape(name)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#dddddd"/>"##,
            fmt(LEFT),
            fmt(top + BAR),
            fmt(LEFT + AXIS_WIDTH),
            fmt(top + BAR)
        );
        for r in set.rects() {
            let (a, b) = (r.a.to_f64(), r.b.to_f64().min(panel.length));
            let _ = writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333333"/>"##,
                fmt(x(a)),
                fmt(top),
                fmt(x(b) - x(a)),
                fmt(BAR)
            );
            if !r.c.is_one() {
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" text-anchor="middle" dominant-baseline="middle" font-size="11">{}</text>"#,
                    fmt((x(a) + x(b)) / 2.0),
                    fmt(mid),
                    escape(&fmt(r.c.to_f64()))
                );
            }
        }
    }
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>"##,
        fmt(LEFT),
        fmt(axis_y),
        fmt(LEFT + AXIS_WIDTH),
        fmt(axis_y)
    );
    for k in 0..=5 {
        let t = panel.length * k as f64 / 5.0;
        let _ = writeln!(
            out,
            r##"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#000000"/>"##,
            fmt(x(t)),
            fmt(axis_y),
            fmt(axis_y + 5.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="11">{}</text>"#,
            fmt(x(t)),
            fmt(axis_y + 17.0),
            fmt(t)
        );
    }
    Ok(axis_y + 28.0)
}

/// Renders `cert` as a standalone SVG document.
pub fn render_svg<T: Scalar>(cert: &Certificate<T>) -> Result<String> {
    let names = cert.system.names();
    let mut body = String::new();
    let convex = Panel {
        title: "convex part over [0, 1)",
        sets: &cert.convex,
        base: Base::Unit,
        length: 1.0,
        color_offset: 0,
    };
    let mut y = draw_panel(&mut body, &names, &convex, TOP)?;
    if let Some(conic) = &cert.conic {
        let offset = color_keys(&profile(Base::Unit, &cert.convex)?).len();
        let extent = conic.iter().map(|s| s.extent().to_f64()).fold(0.0, f64::max);
        let panel = Panel {
            title: "conic part over [0, L)",
            sets: conic,
            base: Base::Ray,
            length: if extent > 0.0 { extent.ceil() } else { 1.0 },
            color_offset: offset,
        };
        y = draw_panel(&mut body, &names, &panel, y + 10.0)?;
    }
    let width = LEFT + AXIS_WIDTH + 30.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="13">"#,
        w = fmt(width),
        h = fmt(y)
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    out.push_str(&body);
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::{box_a, mccormick};
    use crate::extended::{conv_cone, simplex_b};
    use crate::scalar::{q, qi, Q};

    fn fills(svg: &str) -> Vec<&str> {
        let mut v: Vec<&str> = svg
            .lines()
            .filter_map(|l| l.split("fill=\"").nth(1))
            .map(|r| &r[..7])
            .filter(|c| c.starts_with('#') && *c != "#ffffff")
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn three_rows_three_colors() {
        let cert = mccormick(&[q("0.5"), q("0.7"), q("0.2")]).unwrap();
        let svg = render_svg(&cert).unwrap();
        assert_eq!(fills(&svg).len(), 3);
        for name in ["x", "y", "z"] {
            assert!(svg.contains(&format!(">{name}</text>")));
        }
        assert_eq!(svg, render_svg(&cert).unwrap());
    }

    #[test]
    fn empty_certificate_draws_axis_only() {
        let cert = box_a(&[qi(0), qi(0)]).unwrap();
        let svg = render_svg(&cert).unwrap();
        assert!(fills(&svg).is_empty());
        assert!(svg.contains(">0.2</text>") && svg.contains(">1</text>"));
    }

    #[test]
    fn heights_labelled_and_conic_panel() {
        let svg = render_svg(&simplex_b(&[qi(2), q("0.5")], 4).unwrap()).unwrap();
        assert!(svg.contains(">2</text>"));
        let h: Vec<Q> = vec![qi(1), q("1.5"), q("0.8")];
        let svg = render_svg(&conv_cone(&h, 1).unwrap()).unwrap();
        assert!(svg.contains("conic part"));
    }
}
