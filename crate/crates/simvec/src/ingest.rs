//! SVG to SimVec: flatten groups and transforms, canonicalize primitives,
//! normalize coordinates and quantize colors.

use roxmltree::Node;
use serde::{Deserialize, Serialize};
use simvec_core::geom::{
    apply_transform, canonicalize_primitive, flatten_path, AffineMatrix, Canonical, Paint, PrimitiveKind,
    RawPrimitive, Shape, SkipReason,
};
use simvec_core::SimVecDoc;
use thiserror::Error;

use crate::svg::{self, Context, LocalShape, Style, StyleNotes, SvgError, SVG_NS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestOptions {
    /// Unsupported content is an error instead of a warning.
    pub strict: bool,
    /// Curve flattening tolerance, normalized units.
    pub tolerance: f64,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions { strict: false, tolerance: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WarningKind {
    Skip,
    Unsupported,
    Style,
    Path,
    Transform,
}

/// One structured diagnostic: what happened to which source element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub kind: WarningKind,
    /// Document-order index among all elements.
    pub element: usize,
    pub tag: String,
    pub reason: String,
}

impl Warning {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("warning serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error(transparent)]
    Svg(#[from] SvgError),
    #[error("element {element} <{tag}>: {reason}")]
    Unsupported { element: usize, tag: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ingested {
    pub doc: SimVecDoc,
    pub warnings: Vec<Warning>,
}

pub fn ingest_svg(svg: &str, options: &IngestOptions) -> Result<Ingested, IngestError> {
    let doc = svg::parse_document(svg)?;
    let root = doc.root_element();
    let (viewport, base) = svg::frame(root)?;
    let ctx = Context::new(&doc, viewport);
    let mut w = Walker { ctx: &ctx, options, out: Ingested::default() };
    let mut notes = StyleNotes::default();
    let style = Style::default().child(root, &ctx, &mut notes);
    w.notes(root, notes)?;
    w.children(root, base, &style, 0)?;
    Ok(w.out)
}

struct Walker<'c, 'a, 'i> {
    ctx: &'c Context<'a, 'i>,
    options: &'c IngestOptions,
    out: Ingested,
}

impl Walker<'_, '_, '_> {
    fn warn(&mut self, node: Node, kind: WarningKind, reason: impl Into<String>) -> Result<(), IngestError> {
        let element = self.ctx.element_index(node);
        let tag = node.tag_name().name().to_string();
        let reason = reason.into();
        let fatal = self.options.strict && matches!(kind, WarningKind::Unsupported | WarningKind::Path | WarningKind::Transform);
        if fatal {
            return Err(IngestError::Unsupported { element, tag, reason });
        }
        self.out.warnings.push(Warning { kind, element, tag, reason });
        Ok(())
    }

    fn notes(&mut self, node: Node, notes: StyleNotes) -> Result<(), IngestError> {
        for n in notes.0 {
            self.warn(node, WarningKind::Style, n)?;
        }
        Ok(())
    }

    fn children(&mut self, node: Node, ctm: AffineMatrix, style: &Style, uses: u32) -> Result<(), IngestError> {
        for child in node.children().filter(Node::is_element) {
            self.element(child, ctm, style, uses)?;
        }
        Ok(())
    }

    fn element(&mut self, node: Node, parent_ctm: AffineMatrix, parent: &Style, uses: u32) -> Result<(), IngestError> {
        if node.tag_name().namespace() != Some(SVG_NS) {
            return Ok(());
        }
        let name = node.tag_name().name();
        if svg::is_nonrendering(name) || svg::prop(node, "display") == Some("none") {
            return Ok(());
        }
        let mut notes = StyleNotes::default();
        let style = parent.child(node, self.ctx, &mut notes);
        self.notes(node, notes)?;

        let mut ctm = parent_ctm;
        if node.has_attribute("transform") {
            match svg::transform_of(node) {
                Some(m) => ctm = parent_ctm * m,
                None => self.warn(node, WarningKind::Transform, "unreadable transform ignored")?,
            }
        }
        if ctm.check_invertible().is_err() {
            return self.warn(node, WarningKind::Transform, "degenerate transform; subtree skipped");
        }

        if svg::is_container(name) {
            if name == "svg" && node.parent_element().is_some() {
                let x = node.attribute("x").and_then(|v| svg::length(v, style.font_size, 0.0)).unwrap_or(0.0);
                let y = node.attribute("y").and_then(|v| svg::length(v, style.font_size, 0.0)).unwrap_or(0.0);
                ctm = ctm * AffineMatrix::translate(x, y);
            }
            return self.children(node, ctm, &style, uses);
        }
        if name == "use" {
            return self.use_element(node, ctm, &style, uses);
        }
        let Some(shape) = svg::local_shape(node, &style, &self.ctx.viewport) else {
            return self.warn(node, WarningKind::Unsupported, format!("<{name}> is not supported"));
        };
        if !style.visible {
            return Ok(());
        }
        self.shape(node, shape, &style, ctm)
    }

    fn use_element(&mut self, node: Node, ctm: AffineMatrix, style: &Style, uses: u32) -> Result<(), IngestError> {
        if uses > 0 {
            return self.warn(node, WarningKind::Unsupported, "nested <use> is not expanded");
        }
        let Some(target) = svg::href(node).and_then(|h| self.ctx.lookup(h)) else {
            return self.warn(node, WarningKind::Skip, "unresolved reference");
        };
        let x = node.attribute("x").and_then(|v| svg::length(v, style.font_size, 0.0)).unwrap_or(0.0);
        let y = node.attribute("y").and_then(|v| svg::length(v, style.font_size, 0.0)).unwrap_or(0.0);
        let ctm = ctm * AffineMatrix::translate(x, y);
        if target.tag_name().name() == "symbol" {
            self.children(target, ctm, style, uses + 1)
        } else {
            self.element(target, ctm, style, uses + 1)
        }
    }

    fn shape(&mut self, node: Node, shape: LocalShape, style: &Style, ctm: AffineMatrix) -> Result<(), IngestError> {
        let kind = match node.tag_name().name() {
            "rect" => PrimitiveKind::Rect,
            "circle" => PrimitiveKind::Circle,
            "ellipse" => PrimitiveKind::Ellipse,
            "line" => PrimitiveKind::Line,
            "polyline" => PrimitiveKind::Polyline,
            "polygon" => PrimitiveKind::Polygon,
            "text" => PrimitiveKind::Text,
            _ => PrimitiveKind::Path,
        };
        let (fill, stroke) = (style.fill, style.stroke);
        let prim = |shape| RawPrimitive { kind, shape, fill, stroke };
        let prims = match shape {
            LocalShape::Rect { x, y, width, height } => vec![prim(Shape::Rect { x, y, width, height })],
            LocalShape::Ellipse { cx, cy, rx, ry } => vec![prim(Shape::Ellipse { cx, cy, rx, ry })],
            LocalShape::Points { points, closed } => vec![prim(Shape::Points { points, closed })],
            LocalShape::Text { content, bbox } => vec![prim(Shape::Text { content, bbox })],
            LocalShape::Path { commands, error } => {
                if let Some(e) = error {
                    self.warn(node, WarningKind::Path, format!("path data truncated: {e}"))?;
                }
                let tolerance = self.options.tolerance / (self.ctx.viewport.scale() * ctm.max_scale());
                let flat = match flatten_path(&commands, tolerance, self.options.strict) {
                    Ok(f) => f,
                    Err(e) => return self.warn(node, WarningKind::Path, e.to_string()),
                };
                for w in flat.warnings {
                    self.warn(node, WarningKind::Path, w)?;
                }
                flat.polylines
                    .into_iter()
                    .map(|p| prim(Shape::Points { points: p.points, closed: p.closed }))
                    .collect()
            }
        };
        if prims.is_empty() {
            return self.warn(node, WarningKind::Skip, skip_reason(SkipReason::TooFewPoints));
        }
        for p in prims {
            if matches!((p.fill, p.stroke), (Paint::None, Paint::None)) {
                self.warn(node, WarningKind::Skip, skip_reason(SkipReason::Invisible))?;
                continue;
            }
            let root = apply_transform(&ctm, &p).expect("checked invertible");
            match canonicalize_primitive(&root, &self.ctx.viewport) {
                Canonical::Element(e) => self.out.doc.push(e),
                Canonical::Skip(r) => self.warn(node, WarningKind::Skip, skip_reason(r))?,
            }
        }
        Ok(())
    }
}

fn skip_reason(r: SkipReason) -> &'static str {
    match r {
        SkipReason::Invisible => "invisible",
        SkipReason::ZeroArea => "zero area",
        SkipReason::EmptyText => "empty text",
        SkipReason::TooFewPoints => "too few points",
        SkipReason::OutsideCanvas => "outside canvas",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use simvec_core::{serialize_simvec, Element};

    fn ingest(s: &str) -> SimVecDoc {
        ingest_svg(s, &IngestOptions::default()).unwrap().doc
    }

    fn text(d: &SimVecDoc) -> String {
        serialize_simvec(d).unwrap()
    }

    #[test]
    fn full_viewport_rect() {
        let d = ingest(r##"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="500"><rect width="800" height="500" fill="black"/></svg>"##);
        assert_eq!(text(&d), "{rect [0, 0, 1000, 625] hsl (0, 0, 0)}\n");
    }

    #[test]
    fn group_translation() {
        let d = ingest(r##"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000"><g transform="translate(10,20)"><rect width="50" height="50" fill="#000"/></g></svg>"##);
        assert_eq!(text(&d), "{rect [10, 20, 50, 50] hsl (0, 0, 0)}\n");
    }

    #[test]
    fn circle_becomes_24_gon() {
        let d = ingest(r##"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000"><circle cx="500" cy="500" r="100" fill="red"/></svg>"##);
        match &d.elements[0] {
            Element::Polygon(p) => {
                assert_eq!(p.points.len(), 24);
                for v in &p.points {
                    let r = ((v.x - 500) as f64).hypot((v.y - 500) as f64);
                    assert!((r - 100.0).abs() <= 1.0);
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invisible_and_hidden_are_dropped() {
        let r = ingest_svg(
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">
                 <rect width="10" height="10" fill="none"/>
                 <rect width="10" height="10" fill="red" display="none"/>
                 <g visibility="hidden"><rect width="10" height="10" fill="red"/></g>
                 <rect width="0" height="10" fill="red"/>
               </svg>"##,
            &IngestOptions::default(),
        )
        .unwrap();
        assert!(r.doc.is_empty());
        assert_eq!(r.warnings.len(), 2);
        assert!(r.warnings[0].to_json_line().contains("\"kind\":\"skip\""));
    }

    #[test]
    fn gradients_use_first_stop() {
        let d = ingest(
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100">
                 <defs><linearGradient id="g"><stop offset="0" stop-color="#ff0000"/><stop offset="1" stop-color="blue"/></linearGradient>
                 <linearGradient id="h" href="#g"/></defs>
                 <rect width="10" height="10" fill="url(#h)"/>
               </svg>"##,
        );
        assert_eq!(d.elements[0].color(), simvec_core::HslQ::new(0, 20, 10));
    }

    #[test]
    fn use_expands_one_level() {
        let d = ingest(
            r##"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" width="100" height="100">
                 <defs><rect id="r" width="10" height="10" fill="red"/></defs>
                 <use xlink:href="#r" x="20" y="30"/>
               </svg>"##,
        );
        assert_eq!(text(&d), "{rect [200, 300, 100, 100] hsl (0, 20, 10)}\n");
    }

    #[test]
    fn strict_rejects_unsupported() {
        let s = r##"<svg xmlns="http://www.w3.org/2000/svg" width="100" height="100"><image href="x.png" width="10" height="10"/><path d="M0 0 A 5 5 0 0 1 10 10" stroke="red"/></svg>"##;
        let lax = ingest_svg(s, &IngestOptions::default()).unwrap();
        assert_eq!(lax.doc.len(), 1);
        assert_eq!(lax.warnings.iter().filter(|w| w.kind == WarningKind::Unsupported).count(), 1);
        assert!(lax.warnings.iter().any(|w| w.kind == WarningKind::Path));
        let strict = ingest_svg(s, &IngestOptions { strict: true, ..Default::default() });
        assert!(matches!(strict, Err(IngestError::Unsupported { element: 1, .. })));
    }

    #[test]
    fn viewport_errors() {
        assert!(matches!(ingest_svg("<svg", &IngestOptions::default()), Err(IngestError::Svg(SvgError::Xml(_)))));
        assert!(matches!(
            ingest_svg(r##"<svg xmlns="http://www.w3.org/2000/svg"/>"##, &IngestOptions::default()),
            Err(IngestError::Svg(SvgError::Viewport))
        ));
        assert!(matches!(ingest_svg("<html/>", &IngestOptions::default()), Err(IngestError::Svg(SvgError::NotSvg(_)))));
        let empty = ingest(r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 10 10"/>"##);
        assert!(empty.is_empty());
    }

    #[test]
    fn text_estimate_and_data_bbox() {
        let d = ingest(
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000">
                 <text x="100" y="120" font-size="20" fill="black">  Sales
                 2020 </text>
                 <text data-bbox="10 20 30 40" fill="black">x</text>
               </svg>"##,
        );
        assert_eq!(
            text(&d),
            "{text \"Sales 2020\" [100, 100, 120, 24] hsl (0, 0, 0)}\n{text \"x\" [10, 20, 30, 40] hsl (0, 0, 0)}\n"
        );
    }
}
