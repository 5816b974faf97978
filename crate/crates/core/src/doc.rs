//! The SimVec data model.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// HSL color with every channel quantized to `0..=20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HslQ {
    pub h: i32,
    pub s: i32,
    pub l: i32,
}

impl HslQ {
    pub const fn new(h: i32, s: i32, l: i32) -> Self {
        Self { h, s, l }
    }

    pub const BLACK: HslQ = HslQ::new(0, 0, 0);
    pub const WHITE: HslQ = HslQ::new(0, 0, 20);

    /// Plain Euclidean distance over the three quantized channels.
    pub fn distance(&self, other: &HslQ) -> f64 {
        let dh = (self.h - other.h) as f64;
        let ds = (self.s - other.s) as f64;
        let dl = (self.l - other.l) as f64;
        crate::math::sqrt(dh * dh + ds * ds + dl * dl)
    }

    /// Same as [`HslQ::distance`] but hue difference taken around the wheel,
    /// where step 20 sits next to step 0.
    pub fn distance_circular(&self, other: &HslQ) -> f64 {
        let raw = (self.h - other.h).abs().min(20);
        let dh = raw.min(20 - raw) as f64;
        let ds = (self.s - other.s) as f64;
        let dl = (self.l - other.l) as f64;
        crate::math::sqrt(dh * dh + ds * ds + dl * dl)
    }
}

/// A point on the normalized canvas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NPoint {
    pub x: i32,
    pub y: i32,
}

impl NPoint {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &NPoint) -> f64 {
        crate::math::hypot((self.x - other.x) as f64, (self.y - other.y) as f64)
    }
}

impl From<(i32, i32)> for NPoint {
    fn from((x, y): (i32, i32)) -> Self {
        Self { x, y }
    }
}

/// Axis-aligned box on the normalized canvas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NBBox {
    pub left: i32,
    pub top: i32,
    pub width: i32,
    pub height: i32,
}

impl NBBox {
    pub const fn new(left: i32, top: i32, width: i32, height: i32) -> Self {
        Self { left, top, width, height }
    }

    pub fn right(&self) -> i32 {
        self.left + self.width
    }

    pub fn bottom(&self) -> i32 {
        self.top + self.height
    }

    pub fn center(&self) -> (f64, f64) {
        (
            self.left as f64 + self.width as f64 / 2.0,
            self.top as f64 + self.height as f64 / 2.0,
        )
    }

    /// Corners clockwise from top-left.
    pub fn corners(&self) -> [NPoint; 4] {
        [
            NPoint::new(self.left, self.top),
            NPoint::new(self.right(), self.top),
            NPoint::new(self.right(), self.bottom()),
            NPoint::new(self.left, self.bottom()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TextElement {
    pub text: String,
    pub bbox: NBBox,
    pub color: HslQ,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectElement {
    pub bbox: NBBox,
    pub color: HslQ,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineElement {
    pub points: Vec<NPoint>,
    pub color: HslQ,
}

/// Closed shape; the first point is not repeated at the end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonElement {
    pub points: Vec<NPoint>,
    pub color: HslQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Text,
    Rect,
    Line,
    Polygon,
}

impl ElementKind {
    pub const ALL: [ElementKind; 4] = [
        ElementKind::Text,
        ElementKind::Rect,
        ElementKind::Line,
        ElementKind::Polygon,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Text => "text",
            ElementKind::Rect => "rect",
            ElementKind::Line => "line",
            ElementKind::Polygon => "polygon",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "text" => Some(ElementKind::Text),
            "rect" => Some(ElementKind::Rect),
            "line" => Some(ElementKind::Line),
            "polygon" => Some(ElementKind::Polygon),
            _ => None,
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Element {
    Text(TextElement),
    Rect(RectElement),
    Line(LineElement),
    Polygon(PolygonElement),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Text(_) => ElementKind::Text,
            Element::Rect(_) => ElementKind::Rect,
            Element::Line(_) => ElementKind::Line,
            Element::Polygon(_) => ElementKind::Polygon,
        }
    }

    pub fn color(&self) -> HslQ {
        match self {
            Element::Text(t) => t.color,
            Element::Rect(r) => r.color,
            Element::Line(l) => l.color,
            Element::Polygon(p) => p.color,
        }
    }

    /// Vertices used for position comparison: rect corners, point lists as-is,
    /// text bbox corners.
    pub fn vertices(&self) -> Vec<NPoint> {
        match self {
            Element::Text(t) => t.bbox.corners().to_vec(),
            Element::Rect(r) => r.bbox.corners().to_vec(),
            Element::Line(l) => l.points.clone(),
            Element::Polygon(p) => p.points.clone(),
        }
    }

    /// Translate every coordinate by `(dx, dy)`.
    pub fn translated(&self, dx: i32, dy: i32) -> Element {
        let shift = |p: &NPoint| NPoint::new(p.x + dx, p.y + dy);
        let shift_box = |b: &NBBox| NBBox::new(b.left + dx, b.top + dy, b.width, b.height);
        match self {
            Element::Text(t) => Element::Text(TextElement {
                text: t.text.clone(),
                bbox: shift_box(&t.bbox),
                color: t.color,
            }),
            Element::Rect(r) => Element::Rect(RectElement {
                bbox: shift_box(&r.bbox),
                color: r.color,
            }),
            Element::Line(l) => Element::Line(LineElement {
                points: l.points.iter().map(shift).collect(),
                color: l.color,
            }),
            Element::Polygon(p) => Element::Polygon(PolygonElement {
                points: p.points.iter().map(shift).collect(),
                color: p.color,
            }),
        }
    }
}

/// An ordered SimVec document. Order is paint order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimVecDoc {
    pub elements: Vec<Element>,
}

impl SimVecDoc {
    pub fn new(elements: Vec<Element>) -> Self {
        Self { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn push(&mut self, element: Element) {
        self.elements.push(element);
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Element> {
        self.elements.iter()
    }

    /// Indices of elements of one kind, in paint order.
    pub fn indices_of(&self, kind: ElementKind) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind() == kind)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn translated(&self, dx: i32, dy: i32) -> SimVecDoc {
        SimVecDoc::new(self.elements.iter().map(|e| e.translated(dx, dy)).collect())
    }
}

impl FromIterator<Element> for SimVecDoc {
    fn from_iter<T: IntoIterator<Item = Element>>(iter: T) -> Self {
        SimVecDoc::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SimVecDoc {
    type Item = &'a Element;
    type IntoIter = core::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}
