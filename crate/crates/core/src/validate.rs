//! Canonical range and arity checks.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::doc::{Element, HslQ, NBBox, NPoint, SimVecDoc};
use crate::{CANVAS, COLOR_LEVELS};

/// One broken invariant: element index, field path and the offending value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub field: String,
    pub observed: i64,
}

/// Every violation in `doc`; empty means the document is canonical.
pub fn validate(doc: &SimVecDoc) -> Vec<Violation> {
    let mut out = Vec::new();
    for (index, element) in doc.elements.iter().enumerate() {
        let mut push = |field: String, observed: i64| {
            out.push(Violation { index, field, observed });
        };
        match element {
            Element::Text(t) => {
                if t.text.is_empty() {
                    push("text.len".into(), 0);
                }
                check_bbox(&t.bbox, &mut push);
            }
            Element::Rect(r) => check_bbox(&r.bbox, &mut push),
            Element::Line(l) => {
                if l.points.len() < 2 {
                    push("points.len".into(), l.points.len() as i64);
                }
                check_points(&l.points, &mut push);
            }
            Element::Polygon(p) => {
                if p.points.len() < 3 {
                    push("points.len".into(), p.points.len() as i64);
                }
                check_points(&p.points, &mut push);
            }
        }
        check_color(&element.color(), &mut push);
    }
    out
}

fn in_canvas(v: i32) -> bool {
    (0..=CANVAS).contains(&v)
}

fn check_bbox(b: &NBBox, push: &mut impl FnMut(String, i64)) {
    for (name, v) in [("bbox.left", b.left), ("bbox.top", b.top)] {
        if !in_canvas(v) {
            push(name.into(), v as i64);
        }
    }
    for (name, v) in [("bbox.width", b.width), ("bbox.height", b.height)] {
        if v < 0 {
            push(name.into(), v as i64);
        }
    }
    let right = b.left as i64 + b.width as i64;
    let bottom = b.top as i64 + b.height as i64;
    if in_canvas(b.left) && b.width >= 0 && right > CANVAS as i64 {
        push("bbox.right".into(), right);
    }
    if in_canvas(b.top) && b.height >= 0 && bottom > CANVAS as i64 {
        push("bbox.bottom".into(), bottom);
    }
}

fn check_points(points: &[NPoint], push: &mut impl FnMut(String, i64)) {
    for (i, p) in points.iter().enumerate() {
        if !in_canvas(p.x) {
            push(format!("points[{i}].x"), p.x as i64);
        }
        if !in_canvas(p.y) {
            push(format!("points[{i}].y"), p.y as i64);
        }
    }
}

fn check_color(c: &HslQ, push: &mut impl FnMut(String, i64)) {
    for (name, v) in [("color.h", c.h), ("color.s", c.s), ("color.l", c.l)] {
        if !(0..=COLOR_LEVELS).contains(&v) {
            push(name.into(), v as i64);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_simvec;
    use alloc::vec;

    const TABLE_EXAMPLES: &str = "{text \"Title\" [100, 50, 200, 30] hsl (0, 0, 18)}\n\
        {rect [100, 100, 50, 150] hsl (10, 15, 12)}\n\
        {line [(0, 0), (100, 100)] hsl (0, 0, 5)}\n\
        {polygon [(0, 0), (50, 50), (100, 0)] hsl (5, 10, 15)}\n";

    #[test]
    fn table_examples_are_valid() {
        assert_eq!(validate(&parse_simvec(TABLE_EXAMPLES).unwrap()), vec![]);
    }

    #[test]
    fn rect_left_out_of_range() {
        let doc = parse_simvec("{rect [1200, 0, 10, 10] hsl (0, 0, 0)}").unwrap();
        assert_eq!(
            validate(&doc),
            vec![Violation { index: 0, field: "bbox.left".into(), observed: 1200 }]
        );
    }

    #[test]
    fn text_hue_out_of_range() {
        let doc = parse_simvec("{text \"a\" [0, 0, 10, 10] hsl (25, 0, 0)}").unwrap();
        let v = validate(&doc);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "color.h");
        assert_eq!(v[0].observed, 25);
    }

    #[test]
    fn overflowing_extent_and_negative_size() {
        let doc = parse_simvec(
            "{rect [900, 0, 200, 10] hsl (0, 0, 0)}\n{rect [0, 0, -1, 10] hsl (0, 0, 0)}",
        )
        .unwrap();
        let v = validate(&doc);
        assert_eq!(v[0], Violation { index: 0, field: "bbox.right".into(), observed: 1100 });
        assert_eq!(v[1], Violation { index: 1, field: "bbox.width".into(), observed: -1 });
    }

    #[test]
    fn point_fields_are_indexed() {
        let doc = parse_simvec("{line [(0, 0), (10, -3)] hsl (0, 0, 0)}").unwrap();
        assert_eq!(validate(&doc)[0].field, "points[1].y");
    }
}
