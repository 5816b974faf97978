//! Bar, line and area charts as SVG plus the matching SimVec and metadata.
//!
//! Geometry is laid out on the integer normalized grid and written to the
//! SVG in source units, so canonicalizing the SVG lands back on the same
//! integers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::data::{capitalize, DataSpec, DataTable, TableError, ValueMode};
use super::scale::{make_scale, AxisScale, Orientation, ScaleError};
use crate::color::hex;
use crate::doc::{Element, HslQ, NBBox, NPoint, SimVecDoc};
use crate::geom::{
    canonicalize_primitive, estimate_text_bbox, Canonical, Paint, PrimitiveKind, Pt, RawPrimitive,
    Shape, TextAnchor, Viewport,
};
use crate::math::{floor, log10, pow, round, round_i32};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartType {
    GroupedBar,
    StackedBar,
    Line,
    StackedArea,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartFamily {
    Bar,
    Line,
    Area,
}

impl ChartType {
    pub fn family(self) -> ChartFamily {
        match self {
            ChartType::GroupedBar | ChartType::StackedBar => ChartFamily::Bar,
            ChartType::Line => ChartFamily::Line,
            ChartType::StackedArea => ChartFamily::Area,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ChartType::GroupedBar => "grouped-bar",
            ChartType::StackedBar => "stacked-bar",
            ChartType::Line => "line",
            ChartType::StackedArea => "stacked-area",
        }
    }

    pub fn is_stacked(self) -> bool {
        matches!(self, ChartType::StackedBar | ChartType::StackedArea)
    }
}

impl ChartFamily {
    pub const ALL: [ChartFamily; 3] = [ChartFamily::Bar, ChartFamily::Line, ChartFamily::Area];

    pub fn name(self) -> &'static str {
        match self {
            ChartFamily::Bar => "bar",
            ChartFamily::Line => "line",
            ChartFamily::Area => "area",
        }
    }
}

/// Chart layout; sizes and positions in normalized units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layout {
    /// Source viewport.
    pub width: f64,
    pub height: f64,
    pub plot_left: i32,
    pub plot_right: i32,
    pub plot_top: i32,
    pub plot_bottom: i32,
    pub legend_left: i32,
    pub title_size: i32,
    pub label_size: i32,
    pub axis_title_size: i32,
    /// Intervals between y ticks.
    pub y_intervals: u32,
}

impl Default for Layout {
    fn default() -> Self {
        Layout {
            width: 800.0,
            height: 500.0,
            plot_left: 110,
            plot_right: 740,
            plot_top: 90,
            plot_bottom: 540,
            legend_left: 770,
            title_size: 24,
            label_size: 14,
            axis_title_size: 15,
            y_intervals: 4,
        }
    }
}

impl Layout {
    pub fn viewport(&self) -> Viewport {
        Viewport { width: self.width, height: self.height }
    }

    fn check(&self) -> Result<Viewport, RenderError> {
        let viewport = Viewport::new(self.width, self.height).map_err(|_| RenderError::Layout("viewport"))?;
        let (w, h) = viewport.normalized_size();
        if !(0 <= self.plot_left && self.plot_left < self.plot_right && self.plot_right <= w) {
            return Err(RenderError::Layout("plot x range"));
        }
        if !(0 <= self.plot_top && self.plot_top < self.plot_bottom && self.plot_bottom <= h) {
            return Err(RenderError::Layout("plot y range"));
        }
        if self.y_intervals == 0 {
            return Err(RenderError::Layout("y intervals"));
        }
        Ok(viewport)
    }
}

/// Normalized geometry of one data mark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum MarkGeometry {
    Bar { bbox: NBBox },
    Vertex { point: NPoint },
    Band { x: i32, upper: i32, lower: i32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkBinding {
    pub category: String,
    pub time: String,
    pub value: f64,
    /// SVG `id` of the drawn mark (the polyline or band for line and area).
    pub svg_id: String,
    /// Index into the chart's SimVec; `None` when the mark was skipped.
    pub element: Option<usize>,
    pub geometry: MarkGeometry,
    /// Pixel length read off the geometry along the value axis.
    pub pixel_extent: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartMeta {
    pub chart_type: ChartType,
    pub spec: DataSpec,
    pub table: DataTable,
    pub layout: Layout,
    pub x_scale: AxisScale,
    pub y_scale: AxisScale,
    pub style_seed: u64,
    /// Series colors in category order.
    pub palette: Vec<HslQ>,
    pub bindings: Vec<MarkBinding>,
}

impl ChartMeta {
    pub fn binding(&self, category: &str, time: &str) -> Option<&MarkBinding> {
        self.bindings.iter().find(|b| b.category == category && b.time == time)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedChart {
    pub svg: String,
    pub meta: ChartMeta,
    pub simvec: SimVecDoc,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("{0:?} needs percent-stacked values")]
    NeedsShares(ChartType),
    #[error("table mode does not match the spec")]
    ModeMismatch,
    #[error("invalid table: {0}")]
    Table(#[from] TableError),
    #[error("invalid layout: {0}")]
    Layout(&'static str),
    #[error("{0}")]
    Scale(#[from] ScaleError),
    #[error("more series than palette colors ({0})")]
    TooManySeries(usize),
}

/// Categorical colors, all on the quantized grid.
pub const PALETTE: [HslQ; 12] = [
    HslQ::new(12, 10, 9),
    HslQ::new(2, 18, 10),
    HslQ::new(0, 14, 10),
    HslQ::new(9, 8, 8),
    HslQ::new(6, 10, 8),
    HslQ::new(3, 16, 11),
    HslQ::new(15, 8, 11),
    HslQ::new(19, 12, 13),
    HslQ::new(1, 8, 7),
    HslQ::new(17, 10, 9),
    HslQ::new(11, 12, 11),
    HslQ::new(7, 10, 6),
];

const BACKGROUND: HslQ = HslQ::WHITE;
const INK: HslQ = HslQ::new(0, 0, 4);
const LABEL: HslQ = HslQ::new(0, 0, 6);
const AXIS: HslQ = HslQ::new(0, 0, 10);
const GRID: HslQ = HslQ::new(0, 0, 18);

/// Render with the default layout.
pub fn render_chart(
    spec: &DataSpec,
    table: &DataTable,
    chart_type: ChartType,
    style_seed: u64,
) -> Result<RenderedChart, RenderError> {
    render_chart_with(spec, table, chart_type, style_seed, &Layout::default())
}

pub fn render_chart_with(
    spec: &DataSpec,
    table: &DataTable,
    chart_type: ChartType,
    style_seed: u64,
    layout: &Layout,
) -> Result<RenderedChart, RenderError> {
    table.check()?;
    if table.mode != spec.quantitative.mode {
        return Err(RenderError::ModeMismatch);
    }
    if chart_type == ChartType::StackedArea && table.mode != ValueMode::PercentStacked {
        return Err(RenderError::NeedsShares(chart_type));
    }
    let viewport = layout.check()?;
    let n_cats = table.categories.len();
    if n_cats > PALETTE.len() {
        return Err(RenderError::TooManySeries(n_cats));
    }

    let mut rng = seed::rng(seed::derive(style_seed, "style"));
    let mut palette = PALETTE.to_vec();
    palette.shuffle(&mut rng);
    palette.truncate(n_cats);
    let line_width = if rng.random_bool(0.5) { 2.0 } else { 3.0 };

    let n_times = table.times.len();
    let (y_max, step) = match table.mode {
        ValueMode::PercentStacked => (100.0, 100.0 / layout.y_intervals as f64),
        ValueMode::Absolute => {
            let top = if chart_type.is_stacked() {
                (0..n_times).map(|t| table.column_sum(t)).fold(0.0, f64::max)
            } else {
                table.max_value()
            };
            nice_max(top, layout.y_intervals)
        }
    };
    let y_scale = make_scale(
        0.0,
        y_max,
        layout.plot_top as f64,
        layout.plot_bottom as f64,
        Orientation::Y,
        true,
    )?;
    let x_scale = match chart_type.family() {
        ChartFamily::Bar => make_scale(
            -0.5,
            n_times as f64 - 0.5,
            layout.plot_left as f64,
            layout.plot_right as f64,
            Orientation::X,
            false,
        )?,
        _ => {
            let pad = (layout.plot_right - layout.plot_left) as f64 / (2.0 * n_times as f64);
            make_scale(
                0.0,
                (n_times - 1) as f64,
                layout.plot_left as f64 + pad,
                layout.plot_right as f64 - pad,
                Orientation::X,
                false,
            )?
        }
    };

    let mut b = Builder::new(viewport, layout);
    let plot_origin = NPoint::new(layout.plot_left, layout.plot_top);
    let baseline = layout.plot_bottom;
    let ypx = |v: f64| round_i32(y_scale.apply(v));
    let xpx = |i: usize| round_i32(x_scale.apply(i as f64));

    b.background();
    b.root(plot_origin);
    b.frame(NPoint::new(layout.plot_right, layout.plot_bottom));

    // Grid.
    let ticks: Vec<f64> = (0..=layout.y_intervals).map(|k| k as f64 * step).collect();
    b.open_group(r#" class="mark-group role-axis" aria-hidden="true""#, plot_origin);
    b.open_part("mark-rule role-axis-grid");
    for &t in &ticks[1..] {
        let y = ypx(t);
        b.rule(NPoint::new(layout.plot_left, y), NPoint::new(layout.plot_right, y), GRID, 1.0);
    }
    b.close();
    b.close_group();

    // Y axis.
    let value_label = spec.value_label();
    let y_aria = format!(
        "Y-axis titled '{}' for a linear scale with values from 0 to {}",
        value_label,
        format_tick(y_max)
    );
    b.open_group(&axis_attrs(&y_aria), plot_origin);
    b.open_part("mark-rule role-axis-tick");
    for &t in &ticks {
        let y = ypx(t);
        b.rule(NPoint::new(layout.plot_left - 6, y), NPoint::new(layout.plot_left, y), AXIS, 1.0);
    }
    b.close();
    b.open_part("mark-text role-axis-label");
    for &t in &ticks {
        let y = ypx(t);
        b.text(layout.plot_left - 10, y + 5, layout.label_size - 1, TextAnchor::End, &format_tick(t), LABEL, false);
    }
    b.close();
    b.open_part("mark-rule role-axis-domain");
    b.rule(
        NPoint::new(layout.plot_left, layout.plot_top),
        NPoint::new(layout.plot_left, layout.plot_bottom),
        AXIS,
        1.0,
    );
    b.close();
    b.open_part("mark-text role-axis-title");
    b.text(
        layout.plot_left,
        layout.plot_top - 16,
        layout.axis_title_size,
        TextAnchor::Start,
        &value_label,
        INK,
        true,
    );
    b.close();
    b.close_group();

    // X axis.
    let x_aria = format!(
        "X-axis titled '{}' for a discrete scale with {} values: {}",
        capitalize(&spec.temporal.name),
        n_times,
        table.times.join(", ")
    );
    b.open_group(&axis_attrs(&x_aria), NPoint::new(layout.plot_left, layout.plot_bottom));
    b.open_part("mark-rule role-axis-tick");
    for i in 0..n_times {
        let x = xpx(i);
        b.rule(NPoint::new(x, baseline), NPoint::new(x, baseline + 6), AXIS, 1.0);
    }
    b.close();
    b.open_part("mark-text role-axis-label");
    for (i, time) in table.times.iter().enumerate() {
        b.text(xpx(i), baseline + 24, layout.label_size, TextAnchor::Middle, time, LABEL, false);
    }
    b.close();
    b.open_part("mark-rule role-axis-domain");
    b.rule(NPoint::new(layout.plot_left, baseline), NPoint::new(layout.plot_right, baseline), AXIS, 1.0);
    b.close();
    b.open_part("mark-text role-axis-title");
    b.text(
        (layout.plot_left + layout.plot_right) / 2,
        baseline + 58,
        layout.axis_title_size,
        TextAnchor::Middle,
        &capitalize(&spec.temporal.name),
        INK,
        true,
    );
    b.close();
    b.close_group();

    // Marks.
    let mut bindings = Vec::with_capacity(n_cats * n_times);
    let (class, container) = match chart_type.family() {
        ChartFamily::Bar => ("mark-rect role-mark marks", "rect mark container"),
        ChartFamily::Line => ("mark-line role-mark marks", "line mark container"),
        ChartFamily::Area => ("mark-area role-mark marks", "area mark container"),
    };
    let marks = format!(r#" class="{class}" role="graphics-object" aria-roledescription="{container}""#);
    let plot_corner = NPoint::new(layout.plot_right, layout.plot_bottom);
    let pathgroup = r#" class="mark-group role-scope pathgroup" role="graphics-object" aria-roledescription="group mark container""#;
    if chart_type.family() == ChartFamily::Bar {
        b.open_raw(&marks);
    }
    let aria = |c: usize, t: usize| {
        format!(
            "{}: {}; {}: {}; {}: {}",
            spec.temporal.name,
            table.times[t],
            spec.categorical.name,
            table.categories[c],
            spec.quantitative.name,
            format_value(table.value(c, t))
        )
    };
    let bind = |c: usize, t: usize, svg_id: String, element, geometry, pixel_extent| MarkBinding {
        category: table.categories[c].clone(),
        time: table.times[t].clone(),
        value: table.value(c, t),
        svg_id,
        element,
        geometry,
        pixel_extent,
    };
    match chart_type {
        ChartType::GroupedBar => {
            let band = (layout.plot_right - layout.plot_left) as f64 / n_times as f64;
            let bar = 0.8 * band / n_cats as f64;
            for t in 0..n_times {
                for c in 0..n_cats {
                    let x0 = layout.plot_left as f64 + t as f64 * band + 0.1 * band;
                    let left = round_i32(x0 + c as f64 * bar);
                    let right = round_i32(x0 + (c + 1) as f64 * bar);
                    let top = ypx(table.value(c, t));
                    let bbox = NBBox::new(left, top, right - left, baseline - top);
                    let id = format!("bar-{c}-{t}");
                    let element = b.bar(&id, bbox, palette[c], &aria(c, t));
                    bindings.push(bind(c, t, id, element, MarkGeometry::Bar { bbox }, bbox.height));
                }
            }
        }
        ChartType::StackedBar => {
            let band = (layout.plot_right - layout.plot_left) as f64 / n_times as f64;
            for t in 0..n_times {
                let left = round_i32(layout.plot_left as f64 + t as f64 * band + 0.2 * band);
                let right = round_i32(layout.plot_left as f64 + (t + 1) as f64 * band - 0.2 * band);
                let mut acc = 0.0;
                for c in 0..n_cats {
                    let lower = ypx(acc);
                    acc += table.value(c, t);
                    let upper = ypx(acc);
                    let bbox = NBBox::new(left, upper, right - left, lower - upper);
                    let id = format!("bar-{c}-{t}");
                    let element = b.bar(&id, bbox, palette[c], &aria(c, t));
                    bindings.push(bind(c, t, id, element, MarkGeometry::Bar { bbox }, bbox.height));
                }
            }
        }
        ChartType::Line => {
            for c in 0..n_cats {
                let points: Vec<NPoint> = (0..n_times).map(|t| NPoint::new(xpx(t), ypx(table.value(c, t)))).collect();
                let id = format!("line-{c}");
                let label = format!("{}: {}", spec.categorical.name, table.categories[c]);
                b.open_scope(pathgroup, plot_origin, plot_corner);
                b.open_raw(&marks);
                let element = b.polyline(&id, &points, palette[c], line_width, &label);
                b.close();
                b.close_group();
                for (t, p) in points.iter().enumerate() {
                    bindings.push(bind(c, t, id.clone(), element, MarkGeometry::Vertex { point: *p }, baseline - p.y));
                }
            }
        }
        ChartType::StackedArea => {
            let mut lower: Vec<f64> = vec![0.0; n_times];
            for c in 0..n_cats {
                let upper: Vec<f64> = (0..n_times).map(|t| lower[t] + table.value(c, t)).collect();
                let mut ring: Vec<NPoint> = (0..n_times).map(|t| NPoint::new(xpx(t), ypx(upper[t]))).collect();
                ring.extend((0..n_times).rev().map(|t| NPoint::new(xpx(t), ypx(lower[t]))));
                let id = format!("area-{c}");
                let label = format!("{}: {}", spec.categorical.name, table.categories[c]);
                b.open_scope(pathgroup, plot_origin, plot_corner);
                b.open_raw(&marks);
                let element = b.area(&id, &ring, palette[c], &label);
                b.close();
                b.close_group();
                for t in 0..n_times {
                    let (u, l) = (ypx(upper[t]), ypx(lower[t]));
                    let geometry = MarkGeometry::Band { x: xpx(t), upper: u, lower: l };
                    bindings.push(bind(c, t, id.clone(), element, geometry, l - u));
                }
                lower = upper;
            }
        }
    }
    if chart_type.family() == ChartFamily::Bar {
        b.close();
    }

    // Legend.
    let legend_title = capitalize(&spec.categorical.name);
    let legend_aria = format!("Symbol legend titled '{}' for fill color with {} values", legend_title, n_cats);
    b.open_group(
        &format!(
            r#" class="mark-group role-legend" role="graphics-symbol" aria-roledescription="legend" aria-label="{}""#,
            escape_xml(&legend_aria)
        ),
        NPoint::new(layout.legend_left, layout.plot_top),
    );
    b.open_group(r#" class="mark-group role-legend-entry""#, NPoint::new(layout.legend_left, layout.plot_top + 26));
    for (c, name) in table.categories.iter().enumerate() {
        let y = layout.plot_top + 26 + 26 * c as i32;
        b.open_group(
            r#" class="mark-group role-scope" role="graphics-object" aria-roledescription="group mark container""#,
            NPoint::new(layout.legend_left, y),
        );
        b.open_part("mark-symbol role-legend-symbol");
        b.swatch(NBBox::new(layout.legend_left, y, 16, 16), palette[c]);
        b.close();
        b.open_part("mark-text role-legend-label");
        b.text(layout.legend_left + 24, y + 13, layout.label_size, TextAnchor::Start, name, LABEL, false);
        b.close();
        b.close_group();
    }
    b.close_group();
    b.open_part("mark-text role-legend-title");
    b.text(layout.legend_left, layout.plot_top + 14, layout.label_size, TextAnchor::Start, &legend_title, INK, true);
    b.close();
    b.close_group();

    // Title.
    let title = format!(
        "{} by {}, {}-{}",
        spec.topic,
        spec.categorical.name,
        table.times[0],
        table.times[n_times - 1]
    );
    b.open_group(r#" class="mark-group role-title""#, NPoint::new(layout.plot_left, layout.plot_top - 46));
    b.open_raw(&format!(
        r#" class="mark-text role-title-text" role="graphics-symbol" aria-roledescription="title" aria-label="Title text '{}'" pointer-events="none""#,
        escape_xml(&title)
    ));
    b.text(layout.plot_left, layout.plot_top - 46, layout.title_size, TextAnchor::Start, &title, INK, true);
    b.close();
    b.close_group();
    b.close_frame();
    b.close();

    let (svg, simvec) = b.finish();
    let meta = ChartMeta {
        chart_type,
        spec: spec.clone(),
        table: table.clone(),
        layout: layout.clone(),
        x_scale,
        y_scale,
        style_seed,
        palette,
        bindings,
    };
    Ok(RenderedChart { svg, meta, simvec })
}

/// Smallest `intervals * step` at or above `top`, with step in 1/2/2.5/5 x 10^k.
pub fn nice_max(top: f64, intervals: u32) -> (f64, f64) {
    let top = if top > 0.0 { top } else { 1.0 };
    let raw = top / intervals as f64;
    let mag = pow(10.0, floor(log10(raw)));
    for f in [1.0, 2.0, 2.5, 5.0, 10.0] {
        let step = f * mag;
        if step * intervals as f64 >= top {
            return (step * intervals as f64, step);
        }
    }
    (10.0 * mag * intervals as f64, 10.0 * mag)
}

/// Axis tick text: thousands separators, at most 2 decimals.
pub fn format_tick(v: f64) -> String {
    let cents = round(v * 100.0) as i64;
    let whole = (cents / 100).abs();
    let frac = (cents % 100).abs();
    let mut digits = whole.to_string();
    let mut grouped = String::new();
    while digits.len() > 3 {
        let tail = digits.split_off(digits.len() - 3);
        grouped = format!(",{tail}{grouped}");
    }
    let mut out = format!("{}{digits}{grouped}", if cents < 0 { "-" } else { "" });
    if frac != 0 {
        let f = format!("{frac:02}");
        out.push('.');
        out.push_str(f.trim_end_matches('0'));
    }
    out
}

/// Data values without trailing zeros, e.g. `35.1`, `12`.
pub fn format_value(v: f64) -> String {
    trim_number(format!("{:.2}", v))
}

fn trim_number(s: String) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s
    }
}

/// Source-unit coordinate text.
fn coord(v: f64) -> String {
    trim_number(format!("{:.3}", v))
}

pub(crate) fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes SVG in group-local source units and canonicalizes the same
/// primitive in root space.
struct Builder {
    svg: String,
    origins: Vec<NPoint>,
    doc: SimVecDoc,
    viewport: Viewport,
    unit: f64,
}

impl Builder {
    fn new(viewport: Viewport, layout: &Layout) -> Self {
        let mut svg = String::new();
        let (w, h) = (coord(layout.width), coord(layout.height));
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" class="marks" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        Builder { svg, origins: vec![NPoint::new(0, 0)], doc: SimVecDoc::default(), viewport, unit: 1.0 / viewport.scale() }
    }

    fn src(&self, n: i32) -> f64 {
        n as f64 * self.unit
    }

    fn local(&self, p: NPoint) -> (String, String) {
        let o = self.origins.last().copied().unwrap_or(NPoint::new(0, 0));
        (coord((p.x - o.x) as f64 * self.unit), coord((p.y - o.y) as f64 * self.unit))
    }

    fn indent(&mut self) {
        for _ in 0..self.origins.len() {
            self.svg.push_str("  ");
        }
    }

    fn emit(&mut self, prim: RawPrimitive) -> Option<usize> {
        match canonicalize_primitive(&prim, &self.viewport) {
            Canonical::Element(e) => {
                self.doc.push(e);
                Some(self.doc.len() - 1)
            }
            Canonical::Skip(_) => None,
        }
    }

    fn pts(&self, points: &[NPoint]) -> Vec<Pt> {
        points.iter().map(|p| Pt::new(self.src(p.x), self.src(p.y))).collect()
    }

    fn background(&mut self) {
        let (w, h) = (coord(self.viewport.width), coord(self.viewport.height));
        let fill = hex(BACKGROUND);
        let _ = writeln!(self.svg, r#"<rect id="background" width="{w}" height="{h}" fill="{fill}"></rect>"#);
        self.emit(RawPrimitive {
            kind: PrimitiveKind::Rect,
            shape: Shape::Rect { x: 0.0, y: 0.0, width: self.viewport.width, height: self.viewport.height },
            fill: Paint::Color(BACKGROUND),
            stroke: Paint::None,
        });
    }

    fn current(&self) -> NPoint {
        self.origins.last().copied().unwrap_or(NPoint::new(0, 0))
    }

    /// `<g>` with the given attributes and no transform.
    fn open_raw(&mut self, attrs: &str) {
        self.indent();
        let _ = writeln!(self.svg, "<g{attrs}>");
        self.origins.push(self.current());
    }

    fn open_at(&mut self, attrs: &str, origin: NPoint) {
        let (tx, ty) = self.local(origin);
        self.indent();
        let _ = writeln!(self.svg, r#"<g{attrs} transform="translate({tx},{ty})">"#);
        self.origins.push(origin);
    }

    fn close(&mut self) {
        self.origins.pop();
        self.indent();
        self.svg.push_str("</g>\n");
    }

    fn root(&mut self, origin: NPoint) {
        self.open_at(r#" fill="none" stroke-miterlimit="10""#, origin);
    }

    fn frame(&mut self, corner: NPoint) {
        let o = self.current();
        let w = coord((corner.x - o.x) as f64 * self.unit);
        let h = coord((corner.y - o.y) as f64 * self.unit);
        self.open_raw(r#" class="mark-group role-frame root" role="graphics-object" aria-roledescription="group mark container""#);
        self.open_at("", o);
        self.indent();
        let _ = writeln!(self.svg, r#"<path class="background" aria-hidden="true" d="M0,0h{w}v{h}h-{w}Z"></path>"#);
        self.open_raw("");
    }

    fn close_frame(&mut self) {
        self.close();
        self.indent();
        self.svg.push_str("<path class=\"foreground\" aria-hidden=\"true\" d=\"\" display=\"none\"></path>\n");
        self.close();
        self.close();
    }

    /// A scenegraph group: outer `<g>`, translated item, empty background,
    /// then the content group.
    fn open_group(&mut self, attrs: &str, origin: NPoint) {
        self.open_scope(attrs, origin, origin);
    }

    /// Like `open_group` with a background sized to `corner`.
    fn open_scope(&mut self, attrs: &str, origin: NPoint, corner: NPoint) {
        self.open_raw(attrs);
        self.open_at("", origin);
        let d = if corner == origin {
            "M0,0h0v0h0Z".to_string()
        } else {
            let (w, h) = self.local(corner);
            format!("M0,0h{w}v{h}h-{w}Z")
        };
        self.indent();
        let _ = writeln!(self.svg, r#"<path class="background" aria-hidden="true" d="{d}" pointer-events="none"></path>"#);
        self.open_raw("");
    }

    fn close_group(&mut self) {
        self.close();
        self.indent();
        self.svg.push_str(
            "<path class=\"foreground\" aria-hidden=\"true\" d=\"\" pointer-events=\"none\" display=\"none\"></path>\n",
        );
        self.close();
        self.close();
    }

    fn open_part(&mut self, class: &str) {
        self.open_raw(&format!(r#" class="{class}" pointer-events="none""#));
    }

    fn rule(&mut self, a: NPoint, b: NPoint, color: HslQ, width: f64) {
        let (ax, ay) = self.local(a);
        let dx = coord((b.x - a.x) as f64 * self.unit);
        let dy = coord((b.y - a.y) as f64 * self.unit);
        self.indent();
        let _ = writeln!(
            self.svg,
            r#"<line transform="translate({ax},{ay})" x2="{dx}" y2="{dy}" stroke="{}" stroke-width="{}" opacity="1"></line>"#,
            hex(color),
            coord(width)
        );
        let points = self.pts(&[a, b]);
        self.emit(RawPrimitive {
            kind: PrimitiveKind::Line,
            shape: Shape::Points { points, closed: false },
            fill: Paint::None,
            stroke: Paint::Color(color),
        });
    }

    #[allow(clippy::too_many_arguments)]
    fn text(&mut self, x: i32, y: i32, size: i32, anchor: TextAnchor, content: &str, color: HslQ, bold: bool) {
        let (lx, ly) = self.local(NPoint::new(x, y));
        let size_src = size as f64 * self.unit;
        let anchor_attr = match anchor {
            TextAnchor::Start => "start",
            TextAnchor::Middle => "middle",
            TextAnchor::End => "end",
        };
        self.indent();
        let _ = write!(self.svg, r#"<text text-anchor="{anchor_attr}" transform="translate({lx},{ly})" font-family="sans-serif" font-size="{}px""#, coord(size_src));
        if bold {
            self.svg.push_str(r#" font-weight="bold""#);
        }
        let _ = writeln!(self.svg, r#" fill="{}" opacity="1">{}</text>"#, hex(color), escape_xml(content));
        let bbox = estimate_text_bbox(self.src(x), self.src(y), size_src, content, anchor);
        self.emit(RawPrimitive {
            kind: PrimitiveKind::Path,
            shape: Shape::Text { content: content.to_string(), bbox },
            fill: Paint::Color(color),
            stroke: Paint::None,
        });
    }

    fn rect_path(&mut self, id: Option<&str>, bbox: NBBox, color: HslQ, aria: Option<&str>, extra: &str) -> Option<usize> {
        let (x, y) = self.local(NPoint::new(bbox.left, bbox.top));
        let w = coord(bbox.width as f64 * self.unit);
        let h = coord(bbox.height as f64 * self.unit);
        self.indent();
        self.svg.push_str("<path");
        if let Some(id) = id {
            let _ = write!(self.svg, r#" id="{id}""#);
        }
        if let Some(label) = aria {
            let _ = write!(
                self.svg,
                r#" aria-label="{}" role="graphics-symbol" aria-roledescription="bar""#,
                escape_xml(label)
            );
        }
        let _ = writeln!(self.svg, r#" d="M{x},{y}h{w}v{h}h-{w}Z" fill="{}"{extra}></path>"#, hex(color));
        let points = self.pts(&bbox.corners());
        self.emit(RawPrimitive {
            kind: PrimitiveKind::Path,
            shape: Shape::Points { points, closed: true },
            fill: Paint::Color(color),
            stroke: Paint::None,
        })
    }

    fn bar(&mut self, id: &str, bbox: NBBox, color: HslQ, aria: &str) -> Option<usize> {
        self.rect_path(Some(id), bbox, color, Some(aria), "")
    }

    fn swatch(&mut self, bbox: NBBox, color: HslQ) {
        self.rect_path(None, bbox, color, None, r#" stroke-width="1.5" opacity="1""#);
    }

    fn path_data(&self, points: &[NPoint], close: bool) -> String {
        let mut d = String::new();
        for (i, p) in points.iter().enumerate() {
            let (x, y) = self.local(*p);
            let _ = write!(d, "{}{x},{y}", if i == 0 { 'M' } else { 'L' });
        }
        if close {
            d.push('Z');
        }
        d
    }

    fn polyline(&mut self, id: &str, points: &[NPoint], color: HslQ, width: f64, aria: &str) -> Option<usize> {
        let d = self.path_data(points, false);
        self.indent();
        let _ = writeln!(
            self.svg,
            r#"<path id="{id}" aria-label="{}" role="graphics-symbol" aria-roledescription="line mark" d="{d}" stroke="{}" stroke-width="{}"></path>"#,
            escape_xml(aria),
            hex(color),
            coord(width * self.unit)
        );
        let points = self.pts(points);
        self.emit(RawPrimitive {
            kind: PrimitiveKind::Path,
            shape: Shape::Points { points, closed: false },
            fill: Paint::None,
            stroke: Paint::Color(color),
        })
    }

    fn area(&mut self, id: &str, ring: &[NPoint], color: HslQ, aria: &str) -> Option<usize> {
        let d = self.path_data(ring, true);
        self.indent();
        let _ = writeln!(
            self.svg,
            r#"<path id="{id}" aria-label="{}" role="graphics-symbol" aria-roledescription="area mark" d="{d}" fill="{}"></path>"#,
            escape_xml(aria),
            hex(color)
        );
        let points = self.pts(ring);
        self.emit(RawPrimitive {
            kind: PrimitiveKind::Path,
            shape: Shape::Points { points, closed: true },
            fill: Paint::Color(color),
            stroke: Paint::None,
        })
    }

    fn finish(mut self) -> (String, SimVecDoc) {
        self.svg.push_str("</svg>\n");
        (self.svg, self.doc)
    }
}

fn axis_attrs(label: &str) -> String {
    format!(
        r#" class="mark-group role-axis" role="graphics-symbol" aria-roledescription="axis" aria-label="{}""#,
        escape_xml(label)
    )
}

/// Every element that belongs to a data mark.
pub fn mark_elements(meta: &ChartMeta) -> Vec<usize> {
    let mut out: Vec<usize> = meta.bindings.iter().filter_map(|b| b.element).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Element at `index` if it exists; convenience for metadata lookups.
pub fn bound_element<'a>(doc: &'a SimVecDoc, binding: &MarkBinding) -> Option<&'a Element> {
    binding.element.and_then(|i| doc.elements.get(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::data::{synth_spec, synth_spec_constrained, synth_table};
    use crate::color::{hex, quantize_rgb};
    use crate::validate::validate;

    fn parse_hex(s: &str) -> (u8, u8, u8) {
        let v = u32::from_str_radix(&s[1..], 16).unwrap();
        ((v >> 16) as u8, (v >> 8) as u8, v as u8)
    }

    #[test]
    fn fixed_colors_survive_hex() {
        for c in PALETTE.iter().chain([BACKGROUND, INK, LABEL, AXIS, GRID].iter()) {
            let (r, g, b) = parse_hex(&hex(*c));
            assert_eq!(quantize_rgb(r, g, b), *c, "{c:?}");
        }
    }

    #[test]
    fn palette_colors_are_distinct() {
        for (i, a) in PALETTE.iter().enumerate() {
            for b in &PALETTE[i + 1..] {
                assert!(a.distance(b) >= 2.0, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn nice_maxima() {
        assert_eq!(nice_max(87.0, 4), (100.0, 25.0));
        assert_eq!(nice_max(400.0, 4), (400.0, 100.0));
        assert_eq!(nice_max(401.0, 4), (800.0, 200.0));
        assert_eq!(nice_max(3.3, 4), (4.0, 1.0));
        for top in [0.7, 13.0, 99.9, 1234.0, 6999.0] {
            let (m, s) = nice_max(top, 4);
            assert!(m >= top);
            assert!(m < 2.6 * top);
            assert_eq!(m, 4.0 * s);
        }
    }

    #[test]
    fn tick_format() {
        assert_eq!(format_tick(0.0), "0");
        assert_eq!(format_tick(2500.0), "2,500");
        assert_eq!(format_tick(1_250_000.0), "1,250,000");
        assert_eq!(format_tick(2.5), "2.5");
        assert_eq!(format_tick(0.25), "0.25");
        assert_eq!(format_value(35.10), "35.1");
        assert_eq!(format_value(12.0), "12");
    }

    fn all_types() -> [ChartType; 4] {
        [ChartType::GroupedBar, ChartType::StackedBar, ChartType::Line, ChartType::StackedArea]
    }

    #[test]
    fn renders_valid_documents() {
        for s in 0..60u64 {
            for ty in all_types() {
                let spec = synth_spec_constrained(s, ty == ChartType::StackedArea);
                let table = synth_table(&spec, s);
                let chart = render_chart(&spec, &table, ty, s).unwrap();
                assert!(validate(&chart.simvec).is_empty());
                assert_eq!(chart.meta.bindings.len(), table.rows.len());
                assert!(chart.svg.contains(r#"id="background""#));
                for bnd in &chart.meta.bindings {
                    let exact = chart.meta.y_scale.extent_of(bnd.value);
                    assert!((bnd.pixel_extent as f64 - exact).abs() <= 1.0, "{ty:?} {bnd:?}");
                    let e = bound_element(&chart.simvec, bnd).expect("mark present");
                    assert_eq!(e.color(), chart.meta.palette[table.category_index(&bnd.category).unwrap()]);
                }
            }
        }
    }

    #[test]
    fn bars_are_rects_in_the_simvec() {
        let spec = synth_spec_constrained(9, false);
        let table = synth_table(&spec, 9);
        let chart = render_chart(&spec, &table, ChartType::GroupedBar, 1).unwrap();
        for bnd in &chart.meta.bindings {
            let MarkGeometry::Bar { bbox } = bnd.geometry else { panic!() };
            match bound_element(&chart.simvec, bnd) {
                Some(Element::Rect(r)) => assert_eq!(r.bbox, bbox),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn area_needs_shares() {
        let mut spec = synth_spec(4);
        spec.quantitative.mode = ValueMode::Absolute;
        spec.quantitative.min = 1.0;
        spec.quantitative.max = 10.0;
        let table = synth_table(&spec, 4);
        assert_eq!(
            render_chart(&spec, &table, ChartType::StackedArea, 0),
            Err(RenderError::NeedsShares(ChartType::StackedArea))
        );
    }

    #[test]
    fn custom_layout_scale() {
        let spec = synth_spec_constrained(5, true);
        let table = synth_table(&spec, 5);
        let layout = Layout { plot_top: 50, plot_bottom: 450, ..Layout::default() };
        let chart = render_chart_with(&spec, &table, ChartType::StackedBar, 2, &layout).unwrap();
        assert_eq!(chart.meta.y_scale.pixel_min, 50.0);
        assert_eq!(chart.meta.y_scale.pixel_max, 450.0);
        assert_eq!(chart.meta.y_scale.data_span(), 100.0);
    }

    #[test]
    fn deterministic() {
        let spec = synth_spec(77);
        let table = synth_table(&spec, 77);
        let a = render_chart(&spec, &table, ChartType::Line, 3).unwrap();
        let b = render_chart(&spec, &table, ChartType::Line, 3).unwrap();
        assert_eq!(a, b);
    }
}
