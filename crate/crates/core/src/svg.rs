//! SVG 1.1 rendering of a flat layout.

use std::fmt::Write;

use crate::geometry::Rect;
use crate::instance::Instance;

/// Category-20 palette.
const PALETTE: [&str; 20] = [
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c", "#98df8a", "#d62728", "#ff9896",
    "#9467bd", "#c5b0d5", "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f", "#c7c7c7",
    "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Labels {
    None,
    /// The area index.
    #[default]
    Index,
    /// The area index and its target area.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    pub labels: Labels,
    /// Pixel size of the longer container side.
    pub size_px: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            labels: Labels::Index,
            size_px: 800.0,
        }
    }
}

/// Fill color for piece `index`.
pub fn color(index: usize) -> &'static str {
    let h = (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 32;
    PALETTE[(h % PALETTE.len() as u64) as usize]
}

/// One `<rect>` per piece inside a viewBox equal to the container. Layout
/// `y` points up, SVG `y` points down, so pieces are mirrored about the
/// container's horizontal midline.
pub fn render_svg(rects: &[Rect], inst: &Instance, options: &SvgOptions) -> String {
    let c = inst.container();
    let longest = c.width().max(c.height());
    let px = longest / options.size_px;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        c.width() / px,
        c.height() / px,
        c.x(),
        c.y(),
        c.width(),
        c.height()
    );
    for (i, r) in rects.iter().enumerate() {
        let y = c.y() + c.top() - r.top();
        let _ = writeln!(
            out,
            r#"  <rect id="r{i}" x="{}" y="{y}" width="{}" height="{}" fill="{}" stroke="black" stroke-width="{px}"/>"#,
            r.x(),
            r.width(),
            r.height(),
            color(i)
        );
    }
    if options.labels != Labels::None {
        for (i, r) in rects.iter().enumerate() {
            let (cx, cy) = r.center();
            let cy = c.y() + c.top() - cy;
            let text = match options.labels {
                Labels::Full => format!("{i} ({})", inst.areas()[i]),
                _ => i.to_string(),
            };
            let font = 0.25 * r.width().min(r.height());
            let _ = writeln!(
                out,
                r#"  <text x="{cx}" y="{cy}" font-size="{font}" font-family="sans-serif" text-anchor="middle" dominant-baseline="central">{text}</text>"#
            );
        }
    }
    out.push_str("</svg>\n");
    out
}
