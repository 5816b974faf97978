#![allow(dead_code)]

use proptest::collection::vec;
use proptest::prelude::*;
use simvec_core::{Element, HslQ, LineElement, NBBox, NPoint, PolygonElement, RectElement, SimVecDoc, TextElement};

pub fn color() -> impl Strategy<Value = HslQ> {
    (0..=20, 0..=20, 0..=20).prop_map(|(h, s, l)| HslQ::new(h, s, l))
}

pub fn point() -> impl Strategy<Value = NPoint> {
    (0..=1000, 0..=1000).prop_map(|(x, y)| NPoint::new(x, y))
}

pub fn bbox() -> impl Strategy<Value = NBBox> {
    (0..=1000i32, 0..=1000i32)
        .prop_flat_map(|(l, t)| (Just(l), Just(t), 0..=1000 - l, 0..=1000 - t))
        .prop_map(|(l, t, w, h)| NBBox::new(l, t, w, h))
}

pub fn label() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 \"\\\\%.,:;()\\[\\]{}éü×−°³-]{1,24}"
}

pub fn text() -> impl Strategy<Value = Element> {
    (label(), bbox(), color()).prop_map(|(text, bbox, color)| Element::Text(TextElement { text, bbox, color }))
}

pub fn rect() -> impl Strategy<Value = Element> {
    (bbox(), color()).prop_map(|(bbox, color)| Element::Rect(RectElement { bbox, color }))
}

pub fn line() -> impl Strategy<Value = Element> {
    (vec(point(), 2..8), color()).prop_map(|(points, color)| Element::Line(LineElement { points, color }))
}

pub fn polygon() -> impl Strategy<Value = Element> {
    (vec(point(), 3..8), color()).prop_map(|(points, color)| Element::Polygon(PolygonElement { points, color }))
}

pub fn element() -> impl Strategy<Value = Element> {
    prop_oneof![text(), rect(), line(), polygon()]
}

pub fn doc(max: usize) -> impl Strategy<Value = SimVecDoc> {
    vec(element(), 0..max).prop_map(SimVecDoc::new)
}

/// At most `per_kind` elements of every kind.
pub fn small_doc(per_kind: usize) -> impl Strategy<Value = SimVecDoc> {
    (
        vec(text(), 0..=per_kind),
        vec(rect(), 0..=per_kind),
        vec(line(), 0..=per_kind),
        vec(polygon(), 0..=per_kind),
    )
        .prop_map(|(a, b, c, d)| SimVecDoc::new(a.into_iter().chain(b).chain(c).chain(d).collect()))
}
