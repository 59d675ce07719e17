//! Static SVG export of a treemap layout.

use std::fmt::Write;

use crate::treemap::{LayoutNode, Rect};

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn write_node(svg: &mut String, node: &LayoutNode, depth: usize) {
    let r = &node.rect;
    let indent = "  ".repeat(depth + 1);
    let _ = writeln!(svg, "{indent}<g id=\"{}\">", escape(&node.id));
    let _ = writeln!(
        svg,
        "{indent}  <rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"{}\" stroke=\"#ffffff\" stroke-width=\"1\"><title>{}</title></rect>",
        r.x,
        r.y,
        r.w,
        r.h,
        node.color,
        escape(&node.label)
    );
    let _ = writeln!(
        svg,
        "{indent}  <text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#000000\">{}</text>",
        r.x + 4.0,
        r.y + 14.0,
        escape(&node.label)
    );
    for child in &node.children {
        write_node(svg, child, depth + 1);
    }
    let _ = writeln!(svg, "{indent}</g>");
}

/// Renders nodes (and their children) as SVG 1.1: one `<rect>` and one
/// `<text>` label per node. Coordinates use three decimals so equal layouts
/// give identical bytes.
pub fn render_svg(nodes: &[LayoutNode], viewport: Rect) -> String {
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.3}\" height=\"{:.3}\" viewBox=\"{:.3} {:.3} {:.3} {:.3}\">",
        viewport.w, viewport.h, viewport.x, viewport.y, viewport.w, viewport.h
    );
    for node in nodes {
        write_node(&mut svg, node, 0);
    }
    svg.push_str("</svg>\n");
    svg
}
