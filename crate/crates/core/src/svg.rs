//! SVG drawings of two-dimensional layouts at 20 px per grid unit.

use std::fmt::Write;

use crate::layout::{BoxLayout, Layout2D, Solution};

pub const UNIT: u32 = 20;
const VERTEX_FILL: &str = "#2f3e46";
const EDGE_FILL: &str = "#a8dadc";
const BOX_FILL: &str = "#a8dadc";
const GRID_STROKE: &str = "#dddddd";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SvgOptions {
    pub grid_lines: bool,
}

/// Draws bar layouts and two-dimensional box layouts; other solutions have
/// no drawing.
pub fn render_svg(solution: &Solution, opts: SvgOptions) -> Option<String> {
    match solution {
        Solution::Bars(layout) => Some(render_bars(layout, opts)),
        Solution::Boxes(layout) if layout.boxes.first().is_none_or(|b| b.len() == 2) => {
            Some(render_boxes(layout, opts))
        }
        _ => None,
    }
}

fn header(out: &mut String, cols: u32, rows: u32) {
    let (w, h) = (cols * UNIT, rows * UNIT);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
}

fn grid(out: &mut String, cols: u32, rows: u32) {
    let (w, h) = (cols * UNIT, rows * UNIT);
    let _ = writeln!(out, r#"<g class="grid" stroke="{GRID_STROKE}" stroke-width="1">"#);
    for c in 0..=cols {
        let x = c * UNIT;
        let _ = writeln!(out, r#"<line x1="{x}" y1="0" x2="{x}" y2="{h}"/>"#);
    }
    for r in 0..=rows {
        let y = r * UNIT;
        let _ = writeln!(out, r#"<line x1="0" y1="{y}" x2="{w}" y2="{y}"/>"#);
    }
    out.push_str("</g>\n");
}

/// Vertex bars fill their cells; an edge bar is a narrow strip from the
/// middle of its top row to the middle of its bottom row.
fn render_bars(layout: &Layout2D, opts: SvgOptions) -> String {
    let mut out = String::new();
    header(&mut out, layout.width, layout.height);
    if opts.grid_lines {
        grid(&mut out, layout.width, layout.height);
    }
    for (v, bar) in layout.vertex_bars.iter().enumerate() {
        let x = (bar.cols.0 - 1) * UNIT;
        let y = (bar.row - 1) * UNIT + UNIT / 4;
        let w = (bar.cols.1 - bar.cols.0 + 1) * UNIT;
        let _ = writeln!(
            out,
            r#"<rect class="vertex" data-id="{v}" x="{x}" y="{y}" width="{w}" height="{}" fill="{VERTEX_FILL}"/>"#,
            UNIT / 2
        );
    }
    for (e, bar) in layout.edge_bars.iter().enumerate() {
        let x = (bar.col - 1) * UNIT + UNIT * 3 / 8;
        let y = (bar.rows.0 - 1) * UNIT + UNIT / 2;
        let h = (bar.rows.1 - bar.rows.0) * UNIT;
        let _ = writeln!(
            out,
            r#"<rect class="edge" data-id="{e}" x="{x}" y="{y}" width="{}" height="{h}" fill="{EDGE_FILL}"/>"#,
            UNIT / 4
        );
    }
    out.push_str("</svg>\n");
    out
}

fn render_boxes(layout: &BoxLayout, opts: SvgOptions) -> String {
    let mut out = String::new();
    header(&mut out, layout.side, layout.side);
    if opts.grid_lines {
        grid(&mut out, layout.side, layout.side);
    }
    for (v, bx) in layout.boxes.iter().enumerate() {
        let (rows, cols) = (bx[0], bx[1]);
        let x = (cols.0 - 1) * UNIT;
        let y = (rows.0 - 1) * UNIT;
        let w = (cols.1 - cols.0 + 1) * UNIT;
        let h = (rows.1 - rows.0 + 1) * UNIT;
        let _ = writeln!(
            out,
            r#"<rect class="box" data-id="{v}" x="{x}" y="{y}" width="{w}" height="{h}" fill="{BOX_FILL}" fill-opacity="0.4" stroke="{VERTEX_FILL}"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
