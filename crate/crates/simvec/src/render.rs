//! SimVec back to SVG on the 1000-unit canvas.

use std::fmt::Write;

use simvec_core::color::css_hsl;
use simvec_core::{Element, NPoint, SimVecDoc};

use crate::svg::{escape_attr, escape_text};

fn points(pts: &[NPoint]) -> String {
    pts.iter().map(|p| format!("{},{}", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

/// One SVG node per element, in paint order. Text carries its box in
/// `data-bbox`, so ingesting the output gives the document back.
pub fn render_simvec(doc: &SimVecDoc) -> String {
    let mut out = String::from(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n",
    );
    for e in doc.iter() {
        let color = css_hsl(e.color());
        let _ = match e {
            Element::Text(t) => {
                let size = (t.bbox.height as f64 / 1.2).max(1.0);
                writeln!(
                    out,
                    r##"  <text x="{}" y="{}" font-size="{}" data-bbox="{} {} {} {}" xml:space="preserve" fill="{color}">{}</text>"##,
                    t.bbox.left,
                    t.bbox.top as f64 + size,
                    crate::svg::coord(size),
                    t.bbox.left,
                    t.bbox.top,
                    t.bbox.width,
                    t.bbox.height,
                    escape_text(&t.text)
                )
            }
            Element::Rect(r) => writeln!(
                out,
                r##"  <rect x="{}" y="{}" width="{}" height="{}" fill="{color}"/>"##,
                r.bbox.left, r.bbox.top, r.bbox.width, r.bbox.height
            ),
            Element::Line(l) => writeln!(
                out,
                r##"  <polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"##,
                escape_attr(&points(&l.points))
            ),
            Element::Polygon(p) => writeln!(
                out,
                r##"  <polygon points="{}" fill="{color}" stroke="{color}"/>"##,
                escape_attr(&points(&p.points))
            ),
        };
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{ingest_svg, IngestOptions};
    use simvec_core::parse_simvec;

    #[test]
    fn one_node_per_kind() {
        let d = parse_simvec(
            "{text \"Sales\" [100, 100, 50, 20] hsl (0, 0, 0)}\n{rect [100, 100, 50, 150] hsl (10, 15, 12)}\n{line [(0, 0), (10, 10)] hsl (1, 2, 3)}\n{polygon [(0, 0), (10, 0), (5, 9)] hsl (20, 20, 20)}\n",
        )
        .unwrap();
        let svg = render_simvec(&d);
        for tag in ["<text", "<rect", "<polyline", "<polygon"] {
            assert_eq!(svg.matches(tag).count(), 1, "{tag}");
        }
        assert_eq!(ingest_svg(&svg, &IngestOptions::default()).unwrap().doc, d);
    }

    #[test]
    fn blank_canvas() {
        let svg = render_simvec(&SimVecDoc::default());
        assert!(ingest_svg(&svg, &IngestOptions::default()).unwrap().doc.is_empty());
    }
}
