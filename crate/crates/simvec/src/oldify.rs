//! Historical-style rewriting of SVG text: jittered strokes, substituted
//! fonts and a tinted, speckled paper background.
//!
//! Every pass edits the source in place, so untouched markup stays
//! byte-identical.

use std::ops::Range;
use std::str::FromStr;

use roxmltree::Node;
use simvec_core::antiqua::{jitter_polyline, speckles, thickness_factor, tint, AntiquaParams, ParamsError};
use simvec_core::geom::{flatten_path, AffineMatrix, Paint, Pt};
use simvec_core::seed;
use thiserror::Error;

use crate::svg::{self, coord, escape_attr, Context, LocalShape, Style, StyleNotes, SvgError, SVG_NS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OldifyError {
    #[error(transparent)]
    Svg(#[from] SvgError),
    #[error(transparent)]
    Params(#[from] ParamsError),
}

type Edit = (Range<usize>, String);

/// Visit drawable elements with their CTM and style, skipping `use` targets.
fn visit<'a, 'i>(ctx: &Context<'a, 'i>, node: Node<'a, 'i>, ctm: AffineMatrix, style: &Style, f: &mut dyn FnMut(Node<'a, 'i>, AffineMatrix, &Style)) {
    for child in node.children().filter(Node::is_element) {
        if child.tag_name().namespace() != Some(SVG_NS) {
            continue;
        }
        let name = child.tag_name().name();
        if svg::is_nonrendering(name) || svg::prop(child, "display") == Some("none") {
            continue;
        }
        let s = style.child(child, ctx, &mut StyleNotes::default());
        let m = match svg::transform_of(child) {
            Some(t) => ctm * t,
            None => ctm,
        };
        if svg::is_container(name) {
            visit(ctx, child, m, &s, f);
        } else {
            f(child, m, &s);
        }
    }
}

fn with_tree<T>(svg_text: &str, f: impl FnOnce(&Context, Node, AffineMatrix, &Style) -> T) -> Result<T, SvgError> {
    let doc = svg::parse_document(svg_text)?;
    let root = doc.root_element();
    let (viewport, base) = svg::frame(root)?;
    let ctx = Context::new(&doc, viewport);
    let style = Style::default().child(root, &ctx, &mut StyleNotes::default());
    Ok(f(&ctx, root, base, &style))
}

const GEOMETRY_ATTRS: &[&str] = &["x", "y", "width", "height", "rx", "ry", "x1", "y1", "x2", "y2", "points", "d"];

/// Stroke-only shapes get jittered outlines and modulated stroke width.
/// Filled shapes, text and curves inside `use` targets are left alone.
pub fn jitter_strokes(svg_text: &str, params: &AntiquaParams) -> Result<String, OldifyError> {
    params.validate()?;
    if params.jitter_amplitude == 0.0 && params.thickness_variation == 0.0 {
        return Ok(svg_text.to_string());
    }
    let base_seed = seed::derive(params.seed, "jitter");
    let edits = with_tree(svg_text, |ctx, root, base, style| {
        let mut edits: Vec<Edit> = Vec::new();
        visit(ctx, root, base, style, &mut |node, ctm, s| {
            if s.fill != Paint::None || s.stroke == Paint::None || !s.visible {
                return;
            }
            let rings = match svg::local_shape(node, s, &ctx.viewport) {
                Some(LocalShape::Points { points, closed }) if points.len() >= 2 => vec![(points, closed)],
                Some(LocalShape::Rect { x, y, width, height }) if width > 0.0 && height > 0.0 => vec![(
                    vec![Pt::new(x, y), Pt::new(x + width, y), Pt::new(x + width, y + height), Pt::new(x, y + height)],
                    true,
                )],
                Some(LocalShape::Path { commands, .. }) => {
                    let tol = 0.5 / (ctx.viewport.scale() * ctm.max_scale());
                    match flatten_path(&commands, tol, false) {
                        Ok(f) => f.polylines.into_iter().map(|p| (p.points, p.closed)).collect(),
                        Err(_) => return,
                    }
                }
                _ => return,
            };
            if rings.is_empty() {
                return;
            }
            let index = ctx.element_index(node) as u64;
            let mut rng = seed::rng(seed::stable_hash(base_seed, index));
            let to_local = 1.0 / (ctx.viewport.scale() * ctm.max_scale());
            let amp = params.jitter_amplitude * to_local;
            let seg = params.segment_length * to_local;
            let mut d = String::new();
            for (points, closed) in &rings {
                let out = jitter_polyline(points, *closed, amp, seg, &mut rng);
                for (i, p) in out.iter().enumerate() {
                    d.push_str(if i == 0 { "M" } else { "L" });
                    d.push_str(&format!("{},{}", coord(p.x), coord(p.y)));
                }
                if *closed {
                    d.push('Z');
                }
            }
            let width = s.stroke_width * thickness_factor(&mut rng, params.thickness_variation);
            let mut tag = format!("<path d=\"{d}\"");
            for a in node.attributes() {
                if a.namespace().is_none() && (GEOMETRY_ATTRS.contains(&a.name()) || a.name() == "stroke-width") {
                    continue;
                }
                tag.push(' ');
                tag.push_str(&svg_text[a.range()]);
            }
            if params.thickness_variation > 0.0 || node.has_attribute("stroke-width") {
                tag.push_str(&format!(" stroke-width=\"{}\"", coord(width)));
            }
            tag.push_str("/>");
            edits.push((node.range(), tag));
        });
        edits
    })?;
    Ok(svg::splice(svg_text, edits))
}

/// Set the font family of every text element to `font_name`.
pub fn substitute_fonts(svg_text: &str, font_name: &str) -> Result<String, OldifyError> {
    if font_name.trim().is_empty() {
        return Err(ParamsError::EmptyFont.into());
    }
    let edits = with_tree(svg_text, |ctx, root, base, style| {
        let mut edits: Vec<Edit> = Vec::new();
        visit(ctx, root, base, style, &mut |node, _, s| {
            if node.tag_name().name() != "text" || s.font_family.as_deref() == Some(font_name) {
                return;
            }
            let value = escape_attr(font_name);
            let in_style = node.attribute("style").is_some_and(|st| st.contains("font-family"));
            if in_style {
                let a = node.attribute_node("style").expect("checked");
                let rewritten: Vec<String> = a
                    .value()
                    .split(';')
                    .filter(|d| !d.trim().is_empty())
                    .map(|d| match d.split_once(':') {
                        Some((k, _)) if k.trim() == "font-family" => format!("font-family: {font_name}"),
                        _ => d.trim().to_string(),
                    })
                    .collect();
                edits.push((a.range_value(), escape_attr(&rewritten.join("; "))));
            } else if let Some(a) = node.attribute_node("font-family") {
                edits.push((a.range_value(), value));
            } else {
                let at = node.range().start + "<text".len();
                edits.push((at..at, format!(" font-family=\"{value}\"")));
            }
        });
        edits
    })?;
    Ok(svg::splice(svg_text, edits))
}

fn rgb_hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// The full-canvas background rect: `#background`, or a first-child rect
/// at the origin covering the viewport.
fn background<'a, 'i>(ctx: &Context<'a, 'i>, root: Node<'a, 'i>) -> Option<Node<'a, 'i>> {
    if let Some(n) = ctx.ids.get("background") {
        if n.tag_name().name() == "rect" {
            return Some(*n);
        }
    }
    let first = root.first_element_child()?;
    let vp = ctx.viewport;
    match svg::local_shape(first, &Style::default(), &vp) {
        Some(LocalShape::Rect { x, y, width, height })
            if x == 0.0 && y == 0.0 && width >= vp.width && height >= vp.height && !first.has_attribute("transform") =>
        {
            Some(first)
        }
        _ => None,
    }
}

/// Tint the background toward parchment and scatter speckles above it.
pub fn apply_paper_texture(svg_text: &str, params: &AntiquaParams) -> Result<String, OldifyError> {
    params.validate()?;
    let edits = with_tree(svg_text, |ctx, root, base, _| {
        let vp = ctx.viewport;
        let (nw, nh) = vp.normalized_size();
        let dots = speckles(params, nw as f64, nh as f64);
        let bg = background(ctx, root);
        if params.tint_strength == 0.0 && dots.is_empty() {
            return Vec::new();
        }
        let to_src = 1.0 / vp.scale();
        let (ox, oy) = (-base.e, -base.f);
        let mut layer = String::new();
        for s in &dots {
            layer.push_str(&format!(
                "<circle class=\"speckle\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"{}\"/>",
                coord(ox + s.x * to_src),
                coord(oy + s.y * to_src),
                coord(s.radius * to_src),
                rgb_hex(s.rgb),
                coord(s.opacity)
            ));
        }
        let mut edits: Vec<Edit> = Vec::new();
        match bg {
            Some(node) => {
                let fill = svg::prop(node, "fill").unwrap_or("black");
                let rgb = svgtypes::Color::from_str(fill).map(|c| (c.red, c.green, c.blue)).unwrap_or((255, 255, 255));
                let tinted = rgb_hex(tint(rgb, params.tint_strength));
                if params.tint_strength > 0.0 {
                    match node.attribute_node("fill") {
                        Some(a) if node.attribute("style").is_none_or(|st| !st.contains("fill")) => {
                            edits.push((a.range_value(), tinted))
                        }
                        _ => {
                            let at = node.range().start + "<rect".len();
                            edits.push((at..at, format!(" style=\"fill: {tinted}\"")));
                            if let Some(a) = node.attribute_node("style") {
                                edits.push((a.range(), String::new()));
                            }
                        }
                    }
                }
                let end = node.range().end;
                edits.push((end..end, layer));
            }
            None => {
                let paper = rgb_hex(tint((255, 255, 255), params.tint_strength));
                let at = svg::start_tag_end(svg_text, root);
                let rect = format!(
                    "<rect class=\"paper\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{paper}\"/>",
                    coord(ox),
                    coord(oy),
                    coord(vp.width),
                    coord(vp.height)
                );
                edits.push((at..at, rect + &layer));
            }
        }
        edits
    })?;
    Ok(svg::splice(svg_text, edits))
}

/// Jitter, then fonts, then paper texture.
pub fn oldify(svg_text: &str, params: &AntiquaParams) -> Result<String, OldifyError> {
    params.validate()?;
    let mut out = jitter_strokes(svg_text, params)?;
    if let Some(font) = &params.font_name {
        out = substitute_fonts(&out, font)?;
    }
    apply_paper_texture(&out, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r##"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000">
<rect id="background" width="1000" height="1000" fill="#ffffff"></rect>
<g fill="none" font-family="sans-serif">
<line x1="0" y1="500" x2="200" y2="500" stroke="#333333"></line>
<rect x="10" y="10" width="40" height="40" fill="#ff0000"></rect>
<text x="5" y="5" fill="#000">A</text>
<text x="5" y="50" fill="#000" font-family="serif">B</text>
</g>
</svg>
"##;

    #[test]
    fn zero_params_are_identity() {
        let p = AntiquaParams::identity();
        assert_eq!(oldify(DOC, &p).unwrap(), DOC);
        assert_eq!(substitute_fonts(DOC, "sans-serif").unwrap().matches("font-family").count(), 2);
    }

    #[test]
    fn jitter_line_of_200() {
        let p = AntiquaParams { jitter_amplitude: 3.0, segment_length: 20.0, seed: 4, ..AntiquaParams::identity() };
        let out = jitter_strokes(DOC, &p).unwrap();
        assert_eq!(out, jitter_strokes(DOC, &p).unwrap());
        let path = out.lines().find(|l| l.starts_with("<path")).unwrap();
        assert!(path.starts_with("<path d=\"M0,500L"));
        assert!(path.contains("stroke=\"#333333\""));
        assert_eq!(path.matches('L').count(), 10);
        assert!(path.contains("L200,500\""));
        assert!(out.contains(r##"<rect x="10" y="10" width="40" height="40" fill="#ff0000"></rect>"##));
    }

    #[test]
    fn fonts_replaced_on_every_text() {
        let out = substitute_fonts(DOC, "IM Fell English").unwrap();
        assert_eq!(out.matches("font-family=\"IM Fell English\"").count(), 2);
        assert!(substitute_fonts(DOC, "").is_err());
    }

    #[test]
    fn texture_tints_and_speckles() {
        let p = AntiquaParams { tint_strength: 1.0, speckle_density: 40.0, seed: 1, ..AntiquaParams::identity() };
        let out = apply_paper_texture(DOC, &p).unwrap();
        assert!(out.contains(r##"fill="#f4e8c8""##));
        assert_eq!(out.matches("class=\"speckle\"").count(), 40);
        let bg = out.find("id=\"background\"").unwrap();
        assert!(out.find("speckle").unwrap() > bg);
        assert!(out.find("speckle").unwrap() < out.find("<g").unwrap());
    }

    #[test]
    fn texture_without_background_inserts_paper() {
        let doc = r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 200 100"><circle cx="5" cy="5" r="2"/></svg>"##;
        let p = AntiquaParams { tint_strength: 0.5, ..AntiquaParams::identity() };
        let out = apply_paper_texture(doc, &p).unwrap();
        assert!(out.starts_with(r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 200 100"><rect class="paper""##));
    }
}
