//! Shared SVG tree walking: viewport, inherited paint and geometry of the
//! basic shapes in their local coordinate system.

use std::collections::HashMap;
use std::str::FromStr;

use roxmltree::{Document, Node, NodeId};
use simvec_core::color::{quantize_lenient, quantize_rgb};
use simvec_core::geom::{AffineMatrix, BBox, Paint, PathCommand, Pt, TextAnchor, Viewport};
use simvec_core::HslQ;
use thiserror::Error;

pub const SVG_NS: &str = "http://www.w3.org/2000/svg";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SvgError {
    #[error("malformed markup: {0}")]
    Xml(String),
    #[error("root element is <{0}>, not <svg>")]
    NotSvg(String),
    #[error("no usable viewport (need width/height or viewBox)")]
    Viewport,
}

pub fn parse_document(svg: &str) -> Result<Document<'_>, SvgError> {
    let opts = roxmltree::ParsingOptions { allow_dtd: true, ..Default::default() };
    let doc = Document::parse_with_options(svg, opts).map_err(|e| SvgError::Xml(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(SvgError::NotSvg(root.tag_name().name().to_string()));
    }
    Ok(doc)
}

/// Source frame of the document: the viewBox when present, else width and
/// height. The matrix moves the viewBox origin to (0, 0).
pub fn frame(root: Node) -> Result<(Viewport, AffineMatrix), SvgError> {
    if let Some(vb) = root.attribute("viewBox").and_then(|v| svgtypes::ViewBox::from_str(v).ok()) {
        let vp = Viewport::new(vb.w, vb.h).map_err(|_| SvgError::Viewport)?;
        return Ok((vp, AffineMatrix::translate(-vb.x, -vb.y)));
    }
    let dim = |name| root.attribute(name).and_then(|v| length(v, 16.0, 0.0));
    match (dim("width"), dim("height")) {
        (Some(w), Some(h)) => Ok((Viewport::new(w, h).map_err(|_| SvgError::Viewport)?, AffineMatrix::IDENTITY)),
        _ => Err(SvgError::Viewport),
    }
}

/// Absolute length in user units. `%` resolves against `reference`.
pub fn length(value: &str, font_size: f64, reference: f64) -> Option<f64> {
    use svgtypes::LengthUnit as U;
    let l = svgtypes::Length::from_str(value.trim()).ok()?;
    let n = l.number;
    let v = match l.unit {
        U::None | U::Px => n,
        U::Em => n * font_size,
        U::Ex => n * font_size / 2.0,
        U::In => n * 96.0,
        U::Cm => n * 96.0 / 2.54,
        U::Mm => n * 96.0 / 25.4,
        U::Pt => n * 4.0 / 3.0,
        U::Pc => n * 16.0,
        U::Percent => n * reference / 100.0,
    };
    v.is_finite().then_some(v)
}

/// First number of a coordinate list such as text `x="10 20"`.
pub fn first_length(value: &str, font_size: f64, reference: f64) -> Option<f64> {
    let first = value.split(|c: char| c == ',' || c.is_whitespace()).find(|s| !s.is_empty())?;
    length(first, font_size, reference)
}

/// Property value: a `style` declaration wins over the presentation attribute.
pub fn prop<'a>(node: Node<'a, '_>, name: &str) -> Option<&'a str> {
    if let Some(style) = node.attribute("style") {
        for decl in style.split(';') {
            if let Some((k, v)) = decl.split_once(':') {
                if k.trim() == name {
                    return Some(v.trim());
                }
            }
        }
    }
    node.attribute(name).map(str::trim)
}

pub fn transform_of(node: Node) -> Option<AffineMatrix> {
    let t = svgtypes::Transform::from_str(node.attribute("transform")?).ok()?;
    Some(AffineMatrix::new(t.a, t.b, t.c, t.d, t.e, t.f))
}

/// Color as the quantized bucket; `hsl()` is read directly so quantized
/// values written as `hsl()` come back unchanged. `None` is transparent.
pub fn parse_color(value: &str) -> Option<Option<HslQ>> {
    let v = value.trim();
    let lower = v.to_ascii_lowercase();
    if let Some(body) = lower.strip_prefix("hsla(").or_else(|| lower.strip_prefix("hsl(")) {
        let body = body.strip_suffix(')')?;
        let parts: Vec<&str> = body.split([',', ' ', '/']).filter(|s| !s.is_empty()).collect();
        if parts.len() < 3 {
            return None;
        }
        let num = |s: &str| s.trim_end_matches('%').trim_end_matches("deg").parse::<f64>().ok();
        if let Some(a) = parts.get(3).and_then(|a| num(a)) {
            let alpha = if parts[3].ends_with('%') { a / 100.0 } else { a };
            if alpha <= 0.0 {
                return Some(None);
            }
        }
        let h = num(parts[0])?.rem_euclid(360.0);
        return Some(Some(quantize_lenient(h, num(parts[1])?, num(parts[2])?)));
    }
    let c = svgtypes::Color::from_str(v).ok()?;
    if c.alpha == 0 {
        return Some(None);
    }
    Some(Some(quantize_rgb(c.red, c.green, c.blue)))
}

/// Lookups shared by a whole document walk.
pub struct Context<'a, 'input> {
    pub doc: &'a Document<'input>,
    pub ids: HashMap<&'a str, Node<'a, 'input>>,
    pub index: HashMap<NodeId, usize>,
    pub viewport: Viewport,
}

impl<'a, 'input> Context<'a, 'input> {
    pub fn new(doc: &'a Document<'input>, viewport: Viewport) -> Self {
        let mut ids = HashMap::new();
        let mut index = HashMap::new();
        for (i, n) in doc.descendants().filter(Node::is_element).enumerate() {
            index.insert(n.id(), i);
            if let Some(id) = n.attribute("id") {
                ids.entry(id).or_insert(n);
            }
        }
        Context { doc, ids, index, viewport }
    }

    pub fn element_index(&self, node: Node) -> usize {
        self.index.get(&node.id()).copied().unwrap_or(0)
    }

    /// Target of `#id` references (`href`, `xlink:href`, `url(#id)`).
    pub fn lookup(&self, reference: &str) -> Option<Node<'a, 'input>> {
        let r = reference.trim();
        let r = r.strip_prefix("url(").map_or(r, |s| s.trim_end_matches(')').trim());
        let r = r.trim_matches(|c| c == '"' || c == '\'');
        self.ids.get(r.strip_prefix('#')?).copied()
    }
}

pub fn href<'a>(node: Node<'a, '_>) -> Option<&'a str> {
    node.attribute("href").or_else(|| node.attribute(("http://www.w3.org/1999/xlink", "href")))
}

/// Inherited presentation state.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub fill: Paint,
    pub stroke: Paint,
    pub color: Paint,
    pub stroke_width: f64,
    pub font_size: f64,
    pub font_family: Option<String>,
    pub anchor: TextAnchor,
    pub visible: bool,
    pub preserve_space: bool,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            fill: Paint::Color(HslQ::new(0, 0, 0)),
            stroke: Paint::None,
            color: Paint::Color(HslQ::new(0, 0, 0)),
            stroke_width: 1.0,
            font_size: 16.0,
            font_family: None,
            anchor: TextAnchor::Start,
            visible: true,
            preserve_space: false,
        }
    }
}

/// Problems met while resolving one element's style.
#[derive(Debug, Default)]
pub struct StyleNotes(pub Vec<String>);

impl Style {
    /// Style of `node` given its parent's.
    pub fn child(&self, node: Node, ctx: &Context, notes: &mut StyleNotes) -> Style {
        let mut s = self.clone();
        if let Some(v) = prop(node, "color") {
            if v != "inherit" {
                match parse_color(v) {
                    Some(c) => s.color = c.map_or(Paint::None, Paint::Color),
                    None => notes.0.push(format!("unreadable color `{v}`")),
                }
            }
        }
        if let Some(v) = prop(node, "fill") {
            s.fill = resolve_paint(v, &s, self.fill, ctx, notes);
        }
        if let Some(v) = prop(node, "stroke") {
            s.stroke = resolve_paint(v, &s, self.stroke, ctx, notes);
        }
        if let Some(w) = prop(node, "stroke-width").and_then(|v| length(v, s.font_size, 0.0)) {
            s.stroke_width = w;
        }
        if let Some(v) = prop(node, "font-size") {
            if let Some(size) = length(v, self.font_size, self.font_size) {
                s.font_size = size;
            }
        }
        if let Some(v) = prop(node, "font-family") {
            if v != "inherit" {
                s.font_family = Some(v.to_string());
            }
        }
        match prop(node, "text-anchor") {
            Some("middle") => s.anchor = TextAnchor::Middle,
            Some("end") => s.anchor = TextAnchor::End,
            Some("start") => s.anchor = TextAnchor::Start,
            _ => {}
        }
        match prop(node, "visibility") {
            Some("hidden") | Some("collapse") => s.visible = false,
            Some("visible") => s.visible = true,
            _ => {}
        }
        match node.attribute(("http://www.w3.org/XML/1998/namespace", "space")) {
            Some("preserve") => s.preserve_space = true,
            Some("default") => s.preserve_space = false,
            _ => {}
        }
        s
    }
}

fn resolve_paint(value: &str, s: &Style, parent: Paint, ctx: &Context, notes: &mut StyleNotes) -> Paint {
    let v = value.trim();
    match v {
        "none" => return Paint::None,
        "inherit" => return parent,
        "currentColor" | "currentcolor" => return s.color,
        _ => {}
    }
    if v.starts_with("url(") {
        let (reference, fallback) = match v.find(')') {
            Some(end) => (&v[..=end], v[end + 1..].trim()),
            None => (v, ""),
        };
        if let Some(target) = ctx.lookup(reference) {
            if let Some(c) = first_stop(target, ctx, 1) {
                return c;
            }
            notes.0.push(format!("paint server `{reference}` has no stop color"));
        } else {
            notes.0.push(format!("unresolved paint `{reference}`"));
        }
        return match parse_color(fallback) {
            Some(c) => c.map_or(Paint::None, Paint::Color),
            None => Paint::None,
        };
    }
    match parse_color(v) {
        Some(c) => c.map_or(Paint::None, Paint::Color),
        None => {
            notes.0.push(format!("unreadable paint `{v}`"));
            parent
        }
    }
}

/// First stop color of a gradient, following one `href` hop.
fn first_stop(node: Node, ctx: &Context, hops: u32) -> Option<Paint> {
    let name = node.tag_name().name();
    if name != "linearGradient" && name != "radialGradient" {
        return None;
    }
    if let Some(stop) = node.children().find(|c| c.is_element() && c.tag_name().name() == "stop") {
        let v = prop(stop, "stop-color").unwrap_or("black");
        return parse_color(v).map(|c| c.map_or(Paint::None, Paint::Color));
    }
    if hops > 0 {
        return first_stop(ctx.lookup(href(node)?)?, ctx, hops - 1);
    }
    None
}

/// Geometry of a basic shape in its own user space.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalShape {
    Rect { x: f64, y: f64, width: f64, height: f64 },
    Ellipse { cx: f64, cy: f64, rx: f64, ry: f64 },
    Points { points: Vec<Pt>, closed: bool },
    Path { commands: Vec<PathCommand>, error: Option<String> },
    Text { content: String, bbox: BBox },
}

fn num_attr(node: Node, name: &str, s: &Style, reference: f64) -> f64 {
    node.attribute(name).and_then(|v| length(v, s.font_size, reference)).unwrap_or(0.0)
}

pub fn parse_points(value: &str) -> Vec<Pt> {
    svgtypes::PointsParser::from(value).map(|(x, y)| Pt::new(x, y)).collect()
}

pub fn parse_path(d: &str) -> (Vec<PathCommand>, Option<String>) {
    use svgtypes::PathSegment as S;
    let mut out = Vec::new();
    for seg in svgtypes::PathParser::from(d) {
        let seg = match seg {
            Ok(s) => s,
            Err(e) => return (out, Some(e.to_string())),
        };
        out.push(match seg {
            S::MoveTo { abs, x, y } => PathCommand::MoveTo { rel: !abs, x, y },
            S::LineTo { abs, x, y } => PathCommand::LineTo { rel: !abs, x, y },
            S::HorizontalLineTo { abs, x } => PathCommand::HorizontalTo { rel: !abs, x },
            S::VerticalLineTo { abs, y } => PathCommand::VerticalTo { rel: !abs, y },
            S::CurveTo { abs, x1, y1, x2, y2, x, y } => PathCommand::CubicTo { rel: !abs, x1, y1, x2, y2, x, y },
            S::SmoothCurveTo { abs, x2, y2, x, y } => PathCommand::SmoothCubicTo { rel: !abs, x2, y2, x, y },
            S::Quadratic { abs, x1, y1, x, y } => PathCommand::QuadTo { rel: !abs, x1, y1, x, y },
            S::SmoothQuadratic { abs, x, y } => PathCommand::SmoothQuadTo { rel: !abs, x, y },
            S::EllipticalArc { abs, x, y, .. } => PathCommand::ArcTo { rel: !abs, x, y },
            S::ClosePath { .. } => PathCommand::ClosePath,
        });
    }
    (out, None)
}

/// Text content with `xml:space` handling applied.
pub fn text_content(node: Node, preserve: bool) -> String {
    let raw: String = node.descendants().filter(Node::is_text).filter_map(|n| n.text()).collect();
    if preserve {
        return raw;
    }
    let mut out = String::with_capacity(raw.len());
    for word in raw.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

/// `data-bbox="left top width height"`.
pub fn data_bbox(node: Node) -> Option<BBox> {
    let v: Vec<f64> = node
        .attribute("data-bbox")?
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().ok())
        .collect::<Option<_>>()?;
    match v[..] {
        [x, y, width, height] => Some(BBox { x, y, width, height }),
        _ => None,
    }
}

/// Local geometry of a drawable element; `None` for anything else.
pub fn local_shape(node: Node, s: &Style, vp: &Viewport) -> Option<LocalShape> {
    let (w, h) = (vp.width, vp.height);
    match node.tag_name().name() {
        "rect" => Some(LocalShape::Rect {
            x: num_attr(node, "x", s, w),
            y: num_attr(node, "y", s, h),
            width: num_attr(node, "width", s, w),
            height: num_attr(node, "height", s, h),
        }),
        "circle" => {
            let r = num_attr(node, "r", s, w.max(h));
            Some(LocalShape::Ellipse { cx: num_attr(node, "cx", s, w), cy: num_attr(node, "cy", s, h), rx: r, ry: r })
        }
        "ellipse" => Some(LocalShape::Ellipse {
            cx: num_attr(node, "cx", s, w),
            cy: num_attr(node, "cy", s, h),
            rx: num_attr(node, "rx", s, w),
            ry: num_attr(node, "ry", s, h),
        }),
        "line" => Some(LocalShape::Points {
            points: vec![
                Pt::new(num_attr(node, "x1", s, w), num_attr(node, "y1", s, h)),
                Pt::new(num_attr(node, "x2", s, w), num_attr(node, "y2", s, h)),
            ],
            closed: false,
        }),
        "polyline" | "polygon" => Some(LocalShape::Points {
            points: parse_points(node.attribute("points").unwrap_or("")),
            closed: node.tag_name().name() == "polygon",
        }),
        "path" => {
            let (commands, error) = parse_path(node.attribute("d").unwrap_or(""));
            Some(LocalShape::Path { commands, error })
        }
        "text" => {
            let content = text_content(node, s.preserve_space);
            let bbox = data_bbox(node).unwrap_or_else(|| {
                let x = node.attribute("x").and_then(|v| first_length(v, s.font_size, w)).unwrap_or(0.0);
                let y = node.attribute("y").and_then(|v| first_length(v, s.font_size, h)).unwrap_or(0.0);
                simvec_core::geom::estimate_text_bbox(x, y, s.font_size, &content, s.anchor)
            });
            Some(LocalShape::Text { content, bbox })
        }
        _ => None,
    }
}

/// Element names that group children.
pub fn is_container(name: &str) -> bool {
    matches!(name, "svg" | "g" | "a" | "switch")
}

/// Element names never drawn directly.
pub fn is_nonrendering(name: &str) -> bool {
    matches!(
        name,
        "defs"
            | "symbol"
            | "clipPath"
            | "mask"
            | "marker"
            | "pattern"
            | "linearGradient"
            | "radialGradient"
            | "stop"
            | "filter"
            | "style"
            | "script"
            | "title"
            | "desc"
            | "metadata"
            | "tspan"
            | "animate"
            | "animateTransform"
            | "animateMotion"
            | "set"
    ) || name.starts_with("fe")
}

/// Byte index just past the start tag of `node`.
pub fn start_tag_end(source: &str, node: Node) -> usize {
    let bytes = source.as_bytes();
    let mut quote = None;
    let mut i = node.range().start;
    while i < bytes.len() {
        let b = bytes[i];
        match quote {
            Some(q) if b == q => quote = None,
            Some(_) => {}
            None if b == b'"' || b == b'\'' => quote = Some(b),
            None if b == b'>' => return i + 1,
            None => {}
        }
        i += 1;
    }
    bytes.len()
}

pub fn escape_attr(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('"', "&quot;")
}

pub fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Source-unit coordinate with up to three decimals.
pub fn coord(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Replace byte ranges of `source`; ranges must not overlap.
pub fn splice(source: &str, mut edits: Vec<(std::ops::Range<usize>, String)>) -> String {
    edits.sort_by_key(|(r, _)| (r.start, r.end));
    let mut out = String::with_capacity(source.len());
    let mut at = 0;
    for (r, text) in edits {
        out.push_str(&source[at..r.start]);
        out.push_str(&text);
        at = r.end;
    }
    out.push_str(&source[at..]);
    out
}
