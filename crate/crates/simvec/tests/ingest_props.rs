mod common;

use proptest::prelude::*;
use simvec::simvec_core::chart::{CorpusPlan, Mix};
use simvec::simvec_core::{canonicalize_doc, serialize_simvec, SimVecDoc};
use simvec::{ingest_svg, render_simvec, IngestOptions};

fn ingest(svg: &str) -> SimVecDoc {
    ingest_svg(svg, &IngestOptions::default()).unwrap().doc
}

fn svg(body: &str) -> String {
    format!(r#"<svg xmlns="http://www.w3.org/2000/svg" width="1000" height="1000">{body}</svg>"#)
}

#[derive(Debug, Clone)]
struct Box4 {
    x: i32,
    y: i32,
    w: i32,
    h: i32,
    rgb: (u8, u8, u8),
}

fn box4() -> impl Strategy<Value = Box4> {
    (0..900i32, 0..900i32, 1..100i32, 1..100i32, any::<(u8, u8, u8)>())
        .prop_map(|(x, y, w, h, rgb)| Box4 { x, y, w, h, rgb })
}

fn hex((r, g, b): (u8, u8, u8)) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn rect(b: &Box4, extra: &str) -> String {
    format!(r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"{extra}/>"#, b.x, b.y, b.w, b.h, hex(b.rgb))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn render_then_ingest_is_canonical(d in common::doc(24)) {
        let back = ingest(&render_simvec(&d));
        prop_assert_eq!(serialize_simvec(&back).unwrap(), serialize_simvec(&canonicalize_doc(&d)).unwrap());
    }

    #[test]
    fn canonical_docs_survive_unchanged(d in common::doc(24)) {
        let c = canonicalize_doc(&d);
        prop_assert_eq!(ingest(&render_simvec(&c)), c);
    }

    #[test]
    fn empty_groups_do_not_matter(boxes in proptest::collection::vec(box4(), 1..6), depth in 1usize..5) {
        let flat: String = boxes.iter().map(|b| rect(b, "")).collect();
        let nested = format!("{}{flat}{}", "<g>".repeat(depth), "</g>".repeat(depth));
        prop_assert_eq!(ingest(&svg(&flat)), ingest(&svg(&nested)));
    }

    #[test]
    fn translation_distributes(b in box4(), dx in -50i32..50, dy in -50i32..50) {
        let moved = Box4 { x: b.x + dx, y: b.y + dy, ..b.clone() };
        let grouped = format!(r#"<g transform="translate({dx},{dy})">{}</g>"#, rect(&b, ""));
        prop_assert_eq!(ingest(&svg(&grouped)), ingest(&svg(&rect(&moved, ""))));
        let own = rect(&b, &format!(r#" transform="translate({dx} {dy})""#));
        prop_assert_eq!(ingest(&svg(&own)), ingest(&svg(&rect(&moved, ""))));
    }

    #[test]
    fn nested_transforms_compose(b in box4(), dx in -50i32..50, dy in -50i32..50, s in 1i32..4) {
        let inner = rect(&Box4 { x: b.x / s, y: b.y / s, w: b.w, h: b.h, ..b.clone() }, "");
        let nested = format!(r#"<g transform="translate({dx},{dy})"><g transform="scale({s})">{inner}</g></g>"#);
        let combined = format!(r#"<g transform="translate({dx},{dy}) scale({s})">{inner}</g>"#);
        let matrix = format!(r#"<g transform="matrix({s},0,0,{s},{dx},{dy})">{inner}</g>"#);
        let a = ingest(&svg(&nested));
        prop_assert_eq!(&a, &ingest(&svg(&combined)));
        prop_assert_eq!(&a, &ingest(&svg(&matrix)));
    }

    #[test]
    fn color_encodings_agree(b in box4()) {
        let (r, g, bl) = b.rgb;
        let base = ingest(&svg(&rect(&b, "")));
        let geometry = format!(r#"x="{}" y="{}" width="{}" height="{}""#, b.x, b.y, b.w, b.h);
        let forms = [
            format!(r#"<rect {geometry} fill="rgb({r},{g},{bl})"/>"#),
            format!(r#"<rect {geometry} fill="{}"/>"#, hex(b.rgb).to_uppercase()),
            format!(r#"<rect {geometry} style="fill: {}"/>"#, hex(b.rgb)),
            format!(r#"<rect {geometry} fill="black" style="fill:{}"/>"#, hex(b.rgb)),
            format!(r#"<g fill="{}"><rect {geometry}/></g>"#, hex(b.rgb)),
        ];
        for f in &forms {
            prop_assert_eq!(&ingest(&svg(f)), &base, "{}", f);
        }
    }

    #[test]
    fn shape_encodings_agree(b in box4()) {
        let base = ingest(&svg(&rect(&b, "")));
        let fill = hex(b.rgb);
        let (x0, y0, x1, y1) = (b.x, b.y, b.x + b.w, b.y + b.h);
        let forms = [
            format!(r#"<path d="M{x0},{y0}h{}v{}h-{}Z" fill="{fill}"/>"#, b.w, b.h, b.w),
            format!(r#"<path d="M {x0} {y0} L {x1} {y0} L {x1} {y1} L {x0} {y1} z" fill="{fill}"/>"#),
            format!(r#"<polygon points="{x0},{y0} {x1},{y0} {x1},{y1} {x0},{y1}" fill="{fill}"/>"#),
        ];
        for f in &forms {
            prop_assert_eq!(&ingest(&svg(f)), &base, "{}", f);
        }
    }

    #[test]
    fn styling_metadata_is_dropped(b in box4()) {
        let base = ingest(&svg(&rect(&b, "")));
        let decorated = format!(
            r#"<defs><filter id="shadow"><feGaussianBlur stdDeviation="2"/></filter></defs><g class="mark" font-family="serif" stroke-miterlimit="10">{}</g>"#,
            rect(&b, r#" id="bar" class="x" filter="url(#shadow)" shape-rendering="crispEdges" aria-label="a bar""#)
        );
        prop_assert_eq!(ingest(&svg(&decorated)), base);
    }
}

#[test]
fn viewbox_matches_plain_size() {
    let a = ingest(r#"<svg xmlns="http://www.w3.org/2000/svg" width="400" height="200"><rect x="40" y="20" width="80" height="40" fill="red"/></svg>"#);
    let b = ingest(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="100 100 400 200"><rect x="140" y="120" width="80" height="40" fill="red"/></svg>"#);
    assert_eq!(a, b);
    assert_eq!(serialize_simvec(&a).unwrap(), "{rect [100, 50, 200, 100] hsl (0, 20, 10)}\n");
}

#[test]
fn corpus_charts_ingest_to_their_simvec() {
    let plan = CorpusPlan::new(24, Mix { bar: 1.0, line: 1.0, area: 1.0 }, 99).unwrap();
    for i in 0..24 {
        let item = plan.item(i).unwrap();
        let got = ingest_svg(&item.chart.svg, &IngestOptions { strict: true, ..Default::default() }).unwrap();
        assert_eq!(got.doc, item.chart.simvec, "chart {i}");
    }
}
