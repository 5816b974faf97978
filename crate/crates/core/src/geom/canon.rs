//! Root-space primitives, their transform, and the mapping onto the four
//! SimVec kinds.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::affine::{AffineMatrix, DegenerateTransform};
use super::path::{polygon_area, Pt};
use crate::doc::{
    Element, HslQ, LineElement, NBBox, NPoint, PolygonElement, RectElement, SimVecDoc, TextElement,
};
use crate::math::{cos, round_i32, sin};

/// Vertex count used for circles and ellipses.
pub const CIRCLE_SEGMENTS: usize = 24;

/// Source-unit canvas size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("viewport must be positive, got {width}x{height}")]
pub struct ViewportError {
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    pub fn new(width: f64, height: f64) -> Result<Self, ViewportError> {
        if width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite() {
            Ok(Self { width, height })
        } else {
            Err(ViewportError { width, height })
        }
    }

    /// Source units to normalized units; both axes share it.
    pub fn scale(&self) -> f64 {
        crate::CANVAS as f64 / self.width.max(self.height)
    }

    /// Canvas extent in normalized units.
    pub fn normalized_size(&self) -> (i32, i32) {
        let s = self.scale();
        (round_i32(self.width * s), round_i32(self.height * s))
    }
}

/// Source-unit axis-aligned box.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BBox {
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl BBox {
    pub fn corners(&self) -> [Pt; 4] {
        [
            Pt::new(self.x, self.y),
            Pt::new(self.x + self.width, self.y),
            Pt::new(self.x + self.width, self.y + self.height),
            Pt::new(self.x, self.y + self.height),
        ]
    }

    pub fn from_points(points: &[Pt]) -> BBox {
        let mut min = Pt::new(f64::INFINITY, f64::INFINITY);
        let mut max = Pt::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BBox { x: min.x, y: min.y, width: max.x - min.x, height: max.y - min.y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TextAnchor {
    #[default]
    Start,
    Middle,
    End,
}

/// Layout estimate for text without explicit layout:
/// `(x, y - size, 0.6 * size * len, 1.2 * size)`, shifted by the anchor.
pub fn estimate_text_bbox(x: f64, y: f64, font_size: f64, text: &str, anchor: TextAnchor) -> BBox {
    let width = 0.6 * font_size * text.chars().count() as f64;
    let left = match anchor {
        TextAnchor::Start => x,
        TextAnchor::Middle => x - width / 2.0,
        TextAnchor::End => x - width,
    };
    BBox { x: left, y: y - font_size, width, height: 1.2 * font_size }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Paint {
    None,
    Color(HslQ),
}

impl Paint {
    pub fn color(&self) -> Option<HslQ> {
        match self {
            Paint::None => None,
            Paint::Color(c) => Some(*c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrimitiveKind {
    Rect,
    Path,
    Polygon,
    Polyline,
    Line,
    Circle,
    Ellipse,
    Text,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Rect { x: f64, y: f64, width: f64, height: f64 },
    Points { points: Vec<Pt>, closed: bool },
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
    Text { content: String, bbox: BBox },
}

/// A drawable primitive as found in the source, before canonicalization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPrimitive {
    pub kind: PrimitiveKind,
    pub shape: Shape,
    pub fill: Paint,
    pub stroke: Paint,
}

/// Map a primitive through `m`.
///
/// Rects stay rects only under axis-aligned maps; otherwise they become a
/// closed 4-point polygon. Text boxes are re-boxed around their mapped corners.
pub fn apply_transform(m: &AffineMatrix, prim: &RawPrimitive) -> Result<RawPrimitive, DegenerateTransform> {
    m.check_invertible()?;
    let map = |p: &Pt| {
        let (x, y) = m.apply(p.x, p.y);
        Pt::new(x, y)
    };
    let shape = match &prim.shape {
        Shape::Rect { x, y, width, height } => {
            if m.is_axis_aligned() {
                let (x0, y0) = m.apply(*x, *y);
                let (x1, y1) = m.apply(x + width, y + height);
                Shape::Rect {
                    x: x0.min(x1),
                    y: y0.min(y1),
                    width: (x1 - x0).abs(),
                    height: (y1 - y0).abs(),
                }
            } else {
                let corners = BBox { x: *x, y: *y, width: *width, height: *height }.corners();
                Shape::Points { points: corners.iter().map(map).collect(), closed: true }
            }
        }
        Shape::Points { points, closed } => Shape::Points {
            points: points.iter().map(map).collect(),
            closed: *closed,
        },
        Shape::Ellipse { cx, cy, rx, ry } => {
            if m.is_axis_aligned() {
                let (ncx, ncy) = m.apply(*cx, *cy);
                Shape::Ellipse { cx: ncx, cy: ncy, rx: (m.a * rx).abs(), ry: (m.d * ry).abs() }
            } else {
                Shape::Points {
                    points: ellipse_points(*cx, *cy, *rx, *ry).iter().map(map).collect(),
                    closed: true,
                }
            }
        }
        Shape::Text { content, bbox } => {
            let corners: Vec<Pt> = bbox.corners().iter().map(map).collect();
            Shape::Text { content: content.clone(), bbox: BBox::from_points(&corners) }
        }
    };
    Ok(RawPrimitive { kind: prim.kind, shape, fill: prim.fill, stroke: prim.stroke })
}

/// `CIRCLE_SEGMENTS` vertices starting at angle 0, in increasing angle.
pub fn ellipse_points(cx: f64, cy: f64, rx: f64, ry: f64) -> Vec<Pt> {
    (0..CIRCLE_SEGMENTS)
        .map(|k| {
            let t = core::f64::consts::TAU * k as f64 / CIRCLE_SEGMENTS as f64;
            Pt::new(cx + rx * cos(t), cy + ry * sin(t))
        })
        .collect()
}

pub fn normalize_point(p: Pt, viewport: &Viewport) -> NPoint {
    let s = viewport.scale();
    NPoint::new(round_i32(p.x * s), round_i32(p.y * s))
}

/// Scale by `1000 / max(width, height)` and round to integers.
pub fn normalize_coords(points: &[Pt], viewport: &Viewport) -> Vec<NPoint> {
    points.iter().map(|p| normalize_point(*p, viewport)).collect()
}

/// Normalize a box through its corners, so adjacent boxes share edges.
pub fn normalize_bbox(b: &BBox, viewport: &Viewport) -> NBBox {
    let p0 = normalize_point(Pt::new(b.x, b.y), viewport);
    let p1 = normalize_point(Pt::new(b.x + b.width, b.y + b.height), viewport);
    NBBox::new(p0.x, p0.y, p1.x - p0.x, p1.y - p0.y)
}

/// Intersect with the normalized canvas; `None` when nothing is left.
pub fn clip_bbox(b: NBBox, viewport: &Viewport) -> Option<NBBox> {
    let (w, h) = viewport.normalized_size();
    let left = b.left.clamp(0, w);
    let top = b.top.clamp(0, h);
    let right = b.right().clamp(0, w);
    let bottom = b.bottom().clamp(0, h);
    if right < left || bottom < top || (b.width > 0 && right == left) || (b.height > 0 && bottom == top) {
        return None;
    }
    Some(NBBox::new(left, top, right - left, bottom - top))
}

fn clamp_point(p: NPoint, viewport: &Viewport) -> NPoint {
    let (w, h) = viewport.normalized_size();
    NPoint::new(p.x.clamp(0, w), p.y.clamp(0, h))
}

/// Text element from a source-unit layout box, normalized and clipped.
pub fn text_element(content: &str, bbox: &BBox, color: HslQ, viewport: &Viewport) -> Option<TextElement> {
    let text = content.trim();
    if text.is_empty() {
        return None;
    }
    let bbox = clip_bbox(normalize_bbox(bbox, viewport), viewport)?;
    Some(TextElement { text: String::from(text), bbox, color })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    Invisible,
    ZeroArea,
    EmptyText,
    TooFewPoints,
    OutsideCanvas,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Canonical {
    Element(Element),
    Skip(SkipReason),
}

/// Map a root-space primitive to its SimVec element.
///
/// Fill color wins over stroke; `line` primitives only ever use stroke.
pub fn canonicalize_primitive(prim: &RawPrimitive, viewport: &Viewport) -> Canonical {
    let color = match prim.kind {
        PrimitiveKind::Line => prim.stroke.color(),
        _ => prim.fill.color().or(prim.stroke.color()),
    };
    let Some(color) = color else {
        return Canonical::Skip(SkipReason::Invisible);
    };
    let has_stroke = prim.stroke.color().is_some();

    match &prim.shape {
        Shape::Text { content, bbox } => {
            if content.trim().is_empty() {
                return Canonical::Skip(SkipReason::EmptyText);
            }
            match text_element(content, bbox, color, viewport) {
                Some(t) => Canonical::Element(Element::Text(t)),
                None => Canonical::Skip(SkipReason::OutsideCanvas),
            }
        }
        Shape::Rect { x, y, width, height } => {
            if *width <= 0.0 || *height <= 0.0 {
                return Canonical::Skip(SkipReason::ZeroArea);
            }
            let b = BBox { x: *x, y: *y, width: *width, height: *height };
            match clip_bbox(normalize_bbox(&b, viewport), viewport) {
                Some(bbox) => Canonical::Element(Element::Rect(RectElement { bbox, color })),
                None => Canonical::Skip(SkipReason::OutsideCanvas),
            }
        }
        Shape::Ellipse { cx, cy, rx, ry } => {
            if *rx <= 0.0 || *ry <= 0.0 {
                return Canonical::Skip(SkipReason::ZeroArea);
            }
            closed_points(&ellipse_points(*cx, *cy, *rx, *ry), color, viewport)
        }
        Shape::Points { points, closed: true } => {
            if polygon_area(points) == 0.0 && !has_stroke {
                return Canonical::Skip(SkipReason::ZeroArea);
            }
            closed_points(points, color, viewport)
        }
        Shape::Points { points, closed: false } => {
            let pts = dedup(normalize_coords(points, viewport), viewport);
            if pts.len() < 2 {
                return Canonical::Skip(SkipReason::TooFewPoints);
            }
            Canonical::Element(Element::Line(LineElement { points: pts, color }))
        }
    }
}

fn dedup(points: Vec<NPoint>, viewport: &Viewport) -> Vec<NPoint> {
    let mut out: Vec<NPoint> = Vec::with_capacity(points.len());
    for p in points {
        let p = clamp_point(p, viewport);
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out
}

fn closed_points(points: &[Pt], color: HslQ, viewport: &Viewport) -> Canonical {
    let mut pts = dedup(normalize_coords(points, viewport), viewport);
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    match pts.len() {
        0 | 1 => Canonical::Skip(SkipReason::TooFewPoints),
        2 => Canonical::Element(Element::Line(LineElement { points: pts, color })),
        _ => match axis_aligned_rect(&pts) {
            Some(bbox) => Canonical::Element(Element::Rect(RectElement { bbox, color })),
            None => Canonical::Element(Element::Polygon(PolygonElement { points: pts, color })),
        },
    }
}

/// A closed 4-gon whose edges alternate horizontal/vertical.
pub(crate) fn axis_aligned_rect(pts: &[NPoint]) -> Option<NBBox> {
    if pts.len() != 4 {
        return None;
    }
    let horizontal = |a: &NPoint, b: &NPoint| a.y == b.y && a.x != b.x;
    let vertical = |a: &NPoint, b: &NPoint| a.x == b.x && a.y != b.y;
    let edges: Vec<(NPoint, NPoint)> = (0..4).map(|i| (pts[i], pts[(i + 1) % 4])).collect();
    let h_first = edges.iter().enumerate().all(|(i, (a, b))| {
        if i % 2 == 0 { horizontal(a, b) } else { vertical(a, b) }
    });
    let v_first = edges.iter().enumerate().all(|(i, (a, b))| {
        if i % 2 == 0 { vertical(a, b) } else { horizontal(a, b) }
    });
    if !(h_first || v_first) {
        return None;
    }
    let left = pts.iter().map(|p| p.x).min()?;
    let right = pts.iter().map(|p| p.x).max()?;
    let top = pts.iter().map(|p| p.y).min()?;
    let bottom = pts.iter().map(|p| p.y).max()?;
    Some(NBBox::new(left, top, right - left, bottom - top))
}

/// Primitive that draws `element` on a 1000x1000 canvas: rects filled,
/// lines stroked, polygons filled and stroked in the same color.
pub fn element_primitive(element: &Element) -> RawPrimitive {
    let pts = |v: &[NPoint]| v.iter().map(|p| Pt::new(p.x as f64, p.y as f64)).collect::<Vec<_>>();
    match element {
        Element::Text(t) => RawPrimitive {
            kind: PrimitiveKind::Path,
            shape: Shape::Text {
                content: t.text.clone(),
                bbox: BBox {
                    x: t.bbox.left as f64,
                    y: t.bbox.top as f64,
                    width: t.bbox.width as f64,
                    height: t.bbox.height as f64,
                },
            },
            fill: Paint::Color(t.color),
            stroke: Paint::None,
        },
        Element::Rect(r) => RawPrimitive {
            kind: PrimitiveKind::Rect,
            shape: Shape::Rect {
                x: r.bbox.left as f64,
                y: r.bbox.top as f64,
                width: r.bbox.width as f64,
                height: r.bbox.height as f64,
            },
            fill: Paint::Color(r.color),
            stroke: Paint::None,
        },
        Element::Line(l) => RawPrimitive {
            kind: PrimitiveKind::Polyline,
            shape: Shape::Points { points: pts(&l.points), closed: false },
            fill: Paint::None,
            stroke: Paint::Color(l.color),
        },
        Element::Polygon(p) => RawPrimitive {
            kind: PrimitiveKind::Polygon,
            shape: Shape::Points { points: pts(&p.points), closed: true },
            fill: Paint::Color(p.color),
            stroke: Paint::Color(p.color),
        },
    }
}

/// The document ingest recovers from a drawing of `doc`: collapsed
/// duplicate points, axis-aligned 4-gons as rects, empty shapes dropped,
/// coordinates clipped to the canvas.
pub fn canonicalize_doc(doc: &SimVecDoc) -> SimVecDoc {
    let viewport = Viewport { width: crate::CANVAS as f64, height: crate::CANVAS as f64 };
    doc.iter()
        .filter_map(|e| match canonicalize_primitive(&element_primitive(e), &viewport) {
            Canonical::Element(e) => Some(e),
            Canonical::Skip(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const SQUARE: Viewport = Viewport { width: 1000.0, height: 1000.0 };

    fn filled(kind: PrimitiveKind, shape: Shape) -> RawPrimitive {
        RawPrimitive { kind, shape, fill: Paint::Color(HslQ::BLACK), stroke: Paint::None }
    }

    fn rect(x: f64, y: f64, width: f64, height: f64) -> RawPrimitive {
        filled(PrimitiveKind::Rect, Shape::Rect { x, y, width, height })
    }

    #[test]
    fn normalization_examples() {
        let wide = Viewport::new(2000.0, 1000.0).unwrap();
        assert_eq!(normalize_point(Pt::new(1000.0, 500.0), &wide), NPoint::new(500, 250));
        let small = Viewport::new(400.0, 300.0).unwrap();
        assert_eq!(normalize_point(Pt::new(100.0, 50.0), &small), NPoint::new(250, 125));
        assert_eq!(normalize_point(Pt::new(123.0, 456.0), &SQUARE), NPoint::new(123, 456));
    }

    #[test]
    fn viewport_must_be_positive() {
        assert!(Viewport::new(0.0, 10.0).is_err());
        assert!(Viewport::new(10.0, f64::NAN).is_err());
    }

    #[test]
    fn translate_and_scale_keep_rects() {
        let r = rect(0.0, 0.0, 50.0, 50.0);
        let moved = apply_transform(&AffineMatrix::translate(10.0, 20.0), &r).unwrap();
        assert_eq!(moved.shape, Shape::Rect { x: 10.0, y: 20.0, width: 50.0, height: 50.0 });
        let r = rect(10.0, 10.0, 20.0, 20.0);
        let scaled = apply_transform(&AffineMatrix::scale(2.0, 2.0), &r).unwrap();
        assert_eq!(scaled.shape, Shape::Rect { x: 20.0, y: 20.0, width: 40.0, height: 40.0 });
    }

    #[test]
    fn rotation_turns_rect_into_polygon() {
        // rotate(90): (x, y) -> (-y, x) applied to each corner.
        let r = rect(0.0, 0.0, 10.0, 20.0);
        let rotated = apply_transform(&AffineMatrix::rotate(90.0), &r).unwrap();
        assert_eq!(
            rotated.shape,
            Shape::Points {
                points: vec![
                    Pt::new(0.0, 0.0),
                    Pt::new(0.0, 10.0),
                    Pt::new(-20.0, 10.0),
                    Pt::new(-20.0, 0.0)
                ],
                closed: true
            }
        );
    }

    #[test]
    fn degenerate_transform_rejected() {
        let r = rect(0.0, 0.0, 1.0, 1.0);
        assert!(apply_transform(&AffineMatrix::scale(0.0, 2.0), &r).is_err());
    }

    #[test]
    fn text_box_reboxed_under_rotation() {
        let t = filled(
            PrimitiveKind::Text,
            Shape::Text { content: "ab".into(), bbox: BBox { x: 0.0, y: 0.0, width: 10.0, height: 4.0 } },
        );
        let out = apply_transform(&AffineMatrix::rotate(90.0), &t).unwrap();
        match out.shape {
            Shape::Text { bbox, .. } => assert_eq!(bbox, BBox { x: -4.0, y: 0.0, width: 4.0, height: 10.0 }),
            _ => unreachable!(),
        }
    }

    #[test]
    fn closed_axis_aligned_quad_is_rect() {
        let quad = filled(
            PrimitiveKind::Polygon,
            Shape::Points {
                points: vec![Pt::new(0.0, 0.0), Pt::new(50.0, 0.0), Pt::new(50.0, 100.0), Pt::new(0.0, 100.0)],
                closed: true,
            },
        );
        assert_eq!(
            canonicalize_primitive(&quad, &SQUARE),
            Canonical::Element(Element::Rect(RectElement {
                bbox: NBBox::new(0, 0, 50, 100),
                color: HslQ::BLACK
            }))
        );
    }

    #[test]
    fn two_point_polyline_is_line() {
        let p = RawPrimitive {
            kind: PrimitiveKind::Polyline,
            shape: Shape::Points { points: vec![Pt::new(1.0, 2.0), Pt::new(3.0, 4.0)], closed: false },
            fill: Paint::None,
            stroke: Paint::Color(HslQ::new(0, 0, 5)),
        };
        assert_eq!(
            canonicalize_primitive(&p, &SQUARE),
            Canonical::Element(Element::Line(LineElement {
                points: vec![NPoint::new(1, 2), NPoint::new(3, 4)],
                color: HslQ::new(0, 0, 5)
            }))
        );
    }

    #[test]
    fn circle_becomes_24_gon() {
        let c = filled(PrimitiveKind::Circle, Shape::Ellipse { cx: 50.0, cy: 50.0, rx: 10.0, ry: 10.0 });
        let Canonical::Element(Element::Polygon(poly)) = canonicalize_primitive(&c, &SQUARE) else {
            panic!("expected polygon");
        };
        assert_eq!(poly.points.len(), CIRCLE_SEGMENTS);
        for p in &poly.points {
            let r = crate::math::hypot(p.x as f64 - 50.0, p.y as f64 - 50.0);
            // Integer rounding moves a vertex by at most sqrt(0.5).
            assert!((r - 10.0).abs() <= core::f64::consts::FRAC_1_SQRT_2, "{r}");
        }
    }

    #[test]
    fn invisible_and_degenerate_are_skipped() {
        let mut r = rect(0.0, 0.0, 10.0, 10.0);
        r.fill = Paint::None;
        assert_eq!(canonicalize_primitive(&r, &SQUARE), Canonical::Skip(SkipReason::Invisible));
        assert_eq!(
            canonicalize_primitive(&rect(0.0, 0.0, 0.0, 10.0), &SQUARE),
            Canonical::Skip(SkipReason::ZeroArea)
        );
        assert_eq!(
            canonicalize_primitive(&rect(2000.0, 0.0, 10.0, 10.0), &SQUARE),
            Canonical::Skip(SkipReason::OutsideCanvas)
        );
    }

    #[test]
    fn line_kind_ignores_fill() {
        let p = RawPrimitive {
            kind: PrimitiveKind::Line,
            shape: Shape::Points { points: vec![Pt::new(0.0, 0.0), Pt::new(9.0, 0.0)], closed: false },
            fill: Paint::Color(HslQ::BLACK),
            stroke: Paint::Color(HslQ::new(0, 0, 12)),
        };
        let Canonical::Element(e) = canonicalize_primitive(&p, &SQUARE) else { panic!() };
        assert_eq!(e.color(), HslQ::new(0, 0, 12));
    }

    #[test]
    fn partially_outside_rect_is_clipped() {
        let Canonical::Element(Element::Rect(r)) = canonicalize_primitive(&rect(-10.0, 990.0, 30.0, 30.0), &SQUARE)
        else {
            panic!()
        };
        assert_eq!(r.bbox, NBBox::new(0, 990, 20, 10));
    }

    #[test]
    fn text_estimate_anchors() {
        let b = estimate_text_bbox(100.0, 50.0, 10.0, "abcd", TextAnchor::Start);
        assert_eq!(b, BBox { x: 100.0, y: 40.0, width: 24.0, height: 12.0 });
        assert_eq!(estimate_text_bbox(100.0, 50.0, 10.0, "abcd", TextAnchor::Middle).x, 88.0);
        assert_eq!(estimate_text_bbox(100.0, 50.0, 10.0, "abcd", TextAnchor::End).x, 76.0);
    }

    #[test]
    fn canonical_docs_are_fixed_points() {
        let doc = crate::parse_simvec(
            "{text \"Title\" [10, 10, 200, 30] hsl (0, 0, 4)}\n\
             {rect [100, 100, 50, 150] hsl (10, 15, 12)}\n\
             {line [(10, 10), (50, 80), (90, 10)] hsl (3, 3, 3)}\n\
             {polygon [(300, 300), (400, 300), (350, 390)] hsl (5, 5, 5)}\n",
        )
        .unwrap();
        assert_eq!(canonicalize_doc(&doc), doc);
    }

    #[test]
    fn canonicalize_doc_normalizes() {
        let doc = crate::parse_simvec(
            "{polygon [(0, 0), (10, 0), (10, 10), (0, 10), (0, 0)] hsl (1, 1, 1)}\n\
             {line [(5, 5), (5, 5), (9, 9)] hsl (1, 1, 1)}\n\
             {rect [900, 900, 200, 50] hsl (1, 1, 1)}\n\
             {rect [1, 1, 0, 5] hsl (1, 1, 1)}\n\
             {text \"  \" [1, 1, 5, 5] hsl (1, 1, 1)}\n",
        )
        .unwrap();
        let out = crate::grammar::serialize_unchecked(&canonicalize_doc(&doc));
        assert_eq!(
            out,
            "{rect [0, 0, 10, 10] hsl (1, 1, 1)}\n{line [(5, 5), (9, 9)] hsl (1, 1, 1)}\n{rect [900, 900, 100, 50] hsl (1, 1, 1)}\n"
        );
    }
}
