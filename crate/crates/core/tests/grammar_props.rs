mod common;

use proptest::prelude::*;
use simvec_core::{parse_simvec, serialize_simvec, validate, Element, SimVecDoc};

/// Independent token writer that puts arbitrary whitespace between tokens.
fn spaced(doc: &SimVecDoc, gaps: &[&str]) -> String {
    let mut gap = gaps.iter().cycle();
    let mut out = String::new();
    let mut tok = |out: &mut String, t: &str| {
        out.push_str(gap.next().unwrap());
        out.push_str(t);
    };
    for e in doc.iter() {
        tok(&mut out, "{");
        tok(&mut out, e.kind().keyword());
        match e {
            Element::Text(t) => {
                let quoted = format!("\"{}\"", t.text.replace('\\', "\\\\").replace('"', "\\\""));
                tok(&mut out, &quoted);
            }
            _ => {}
        }
        match e {
            Element::Text(simvec_core::TextElement { bbox, .. }) | Element::Rect(simvec_core::RectElement { bbox, .. }) => {
                tok(&mut out, "[");
                for (i, v) in [bbox.left, bbox.top, bbox.width, bbox.height].iter().enumerate() {
                    if i > 0 {
                        tok(&mut out, ",");
                    }
                    tok(&mut out, &v.to_string());
                }
                tok(&mut out, "]");
            }
            Element::Line(simvec_core::LineElement { points, .. })
            | Element::Polygon(simvec_core::PolygonElement { points, .. }) => {
                tok(&mut out, "[");
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        tok(&mut out, ",");
                    }
                    tok(&mut out, "(");
                    tok(&mut out, &p.x.to_string());
                    tok(&mut out, ",");
                    tok(&mut out, &p.y.to_string());
                    tok(&mut out, ")");
                }
                tok(&mut out, "]");
            }
        }
        let c = e.color();
        for t in ["hsl", "(", &c.h.to_string(), ",", &c.s.to_string(), ",", &c.l.to_string(), ")", "}"] {
            tok(&mut out, t);
        }
        tok(&mut out, "\n");
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn generated_docs_validate(d in common::doc(12)) {
        prop_assert!(validate(&d).is_empty());
    }

    #[test]
    fn parse_after_serialize_is_identity(d in common::doc(12)) {
        let text = serialize_simvec(&d).unwrap();
        prop_assert_eq!(parse_simvec(&text).unwrap(), d);
    }

    #[test]
    fn serialize_after_parse_is_identity(d in common::doc(12)) {
        let text = serialize_simvec(&d).unwrap();
        let again = serialize_simvec(&parse_simvec(&text).unwrap()).unwrap();
        prop_assert_eq!(again, text);
    }

    #[test]
    fn whitespace_between_tokens_is_ignored(
        d in common::doc(8),
        gaps in proptest::collection::vec("[ \t\r\n]{0,3}", 1..7),
    ) {
        let gaps: Vec<&str> = gaps.iter().map(String::as_str).collect();
        let text = spaced(&d, &gaps);
        prop_assert_eq!(parse_simvec(&text).unwrap(), d);
    }

    #[test]
    fn canonical_text_shape(d in common::doc(8)) {
        let text = serialize_simvec(&d).unwrap();
        prop_assert_eq!(text.matches("}\n").count() >= d.len(), true);
        if !d.is_empty() {
            prop_assert!(text.ends_with('\n'));
        }
    }
}

#[test]
fn out_of_range_values_are_reported() {
    let mut d = parse_simvec("{rect [100, 100, 50, 150] hsl (10, 15, 12)}\n").unwrap();
    if let Element::Rect(r) = &mut d.elements[0] {
        r.bbox.width = 950;
        r.color.h = 21;
    }
    let v = validate(&d);
    let fields: Vec<&str> = v.iter().map(|v| v.field.as_str()).collect();
    assert_eq!(fields, ["bbox.right", "color.h"]);
    assert_eq!(v[0].observed, 1050);
    assert!(serialize_simvec(&d).is_err());
}
