//! Reconstruction quality between a predicted and a ground-truth SimVec.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::assign::assign;
use super::text::similarity;
use crate::doc::{Element, ElementKind, HslQ, NPoint, SimVecDoc};
use crate::math::{hypot, sqrt};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalOptions {
    /// A matched text counts as recovered when its similarity exceeds this.
    pub hit_threshold: f64,
    /// Take hue differences around the wheel.
    pub circular_hue: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { hit_threshold: 0.5, circular_hue: false }
    }
}

/// One kind's matching, in document indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindAssignment {
    pub kind: ElementKind,
    /// `(pred, gt)` pairs.
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_pred: Vec<usize>,
    pub unmatched_gt: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementAssignment {
    pub kinds: Vec<KindAssignment>,
}

impl ElementAssignment {
    pub fn kind(&self, kind: ElementKind) -> &KindAssignment {
        self.kinds.iter().find(|k| k.kind == kind).expect("every kind is present")
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.kinds.iter().flat_map(|k| k.pairs.iter().copied())
    }
}

fn color_distance(a: &HslQ, b: &HslQ, options: &EvalOptions) -> f64 {
    if options.circular_hue {
        a.distance_circular(b)
    } else {
        a.distance(b)
    }
}

/// Center of a text/rect bbox, or the vertex centroid otherwise.
pub fn representative_point(e: &Element) -> (f64, f64) {
    match e {
        Element::Text(t) => t.bbox.center(),
        Element::Rect(r) => r.bbox.center(),
        Element::Line(l) => centroid(&l.points),
        Element::Polygon(p) => centroid(&p.points),
    }
}

fn centroid(points: &[NPoint]) -> (f64, f64) {
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.x as f64).sum();
    let sy: f64 = points.iter().map(|p| p.y as f64).sum();
    (sx / n, sy / n)
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    hypot(a.0 - b.0, a.1 - b.1)
}

/// Matching cost of a same-kind pair.
pub fn pair_cost(pred: &Element, gt: &Element, options: &EvalOptions) -> f64 {
    let d = dist(representative_point(pred), representative_point(gt)) / 1000.0;
    match (pred, gt) {
        (Element::Text(a), Element::Text(b)) => (1.0 - similarity(&a.text, &b.text)) + d,
        _ => d + color_distance(&pred.color(), &gt.color(), options) / (20.0 * sqrt(3.0)),
    }
}

pub fn match_elements(pred: &SimVecDoc, gt: &SimVecDoc) -> ElementAssignment {
    match_elements_with(pred, gt, &EvalOptions::default())
}

pub fn match_elements_with(pred: &SimVecDoc, gt: &SimVecDoc, options: &EvalOptions) -> ElementAssignment {
    let kinds = ElementKind::ALL
        .iter()
        .map(|&kind| {
            let p = pred.indices_of(kind);
            let g = gt.indices_of(kind);
            let cost: Vec<Vec<f64>> = p
                .iter()
                .map(|&i| g.iter().map(|&j| pair_cost(&pred.elements[i], &gt.elements[j], options)).collect())
                .collect();
            let a = assign(&cost);
            let mut pairs = Vec::new();
            let mut unmatched_pred = Vec::new();
            let mut gt_used = alloc::vec![false; g.len()];
            for (row, col) in a.iter().enumerate() {
                match col {
                    Some(c) => {
                        pairs.push((p[row], g[*c]));
                        gt_used[*c] = true;
                    }
                    None => unmatched_pred.push(p[row]),
                }
            }
            let unmatched_gt = g.iter().zip(&gt_used).filter(|(_, u)| !**u).map(|(j, _)| *j).collect();
            KindAssignment { kind, pairs, unmatched_pred, unmatched_gt }
        })
        .collect();
    ElementAssignment { kinds }
}

/// Mean that is exact when every value is the same.
fn mean(values: &[f64]) -> Option<f64> {
    let first = *values.first()?;
    if values.iter().all(|v| *v == first) {
        return Some(first);
    }
    Some(values.iter().sum::<f64>() / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextMetrics {
    pub hit_rate: f64,
    /// Absent when no text was matched.
    pub similarity: Option<f64>,
    pub center_distance: Option<f64>,
}

/// `None` when the ground truth has no text.
pub fn text_metrics(
    assignment: &ElementAssignment,
    pred: &SimVecDoc,
    gt: &SimVecDoc,
    options: &EvalOptions,
) -> Option<TextMetrics> {
    let total = gt.indices_of(ElementKind::Text).len();
    if total == 0 {
        return None;
    }
    let mut sims = Vec::new();
    let mut centers = Vec::new();
    for &(p, g) in &assignment.kind(ElementKind::Text).pairs {
        let (Element::Text(a), Element::Text(b)) = (&pred.elements[p], &gt.elements[g]) else {
            continue;
        };
        sims.push(similarity(&a.text, &b.text));
        centers.push(dist(a.bbox.center(), b.bbox.center()));
    }
    let hits = sims.iter().filter(|s| **s > options.hit_threshold).count();
    Some(TextMetrics {
        hit_rate: hits as f64 / total as f64,
        similarity: mean(&sims),
        center_distance: mean(&centers),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementMetrics {
    pub color_distance: f64,
    pub position_distance: f64,
}

/// Mean distance between corresponding vertices.
pub fn position_distance(pred: &Element, gt: &Element) -> f64 {
    match (pred, gt) {
        (Element::Rect(a), Element::Rect(b)) => {
            let d: Vec<f64> = a.bbox.corners().iter().zip(b.bbox.corners().iter()).map(|(p, q)| p.distance(q)).collect();
            mean(&d).unwrap_or(0.0)
        }
        (Element::Text(a), Element::Text(b)) => dist(a.bbox.center(), b.bbox.center()),
        _ => {
            let closed = matches!(gt, Element::Polygon(_));
            let a = to_f64(&pred.vertices());
            let b = to_f64(&gt.vertices());
            let (a, b) = match a.len().cmp(&b.len()) {
                core::cmp::Ordering::Greater => (resample(&a, b.len(), closed), b),
                core::cmp::Ordering::Less => {
                    let n = a.len();
                    (a, resample(&b, n, closed))
                }
                core::cmp::Ordering::Equal => (a, b),
            };
            let d: Vec<f64> = a.iter().zip(&b).map(|(p, q)| dist(*p, *q)).collect();
            mean(&d).unwrap_or(0.0)
        }
    }
}

fn to_f64(points: &[NPoint]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.x as f64, p.y as f64)).collect()
}

/// `m` points spaced uniformly by arc length; closed rings include the
/// closing edge and do not repeat the start.
pub fn resample(points: &[(f64, f64)], m: usize, closed: bool) -> Vec<(f64, f64)> {
    if points.is_empty() || m == 0 {
        return Vec::new();
    }
    let mut path: Vec<(f64, f64)> = points.to_vec();
    if closed {
        path.push(points[0]);
    }
    let seg: Vec<f64> = path.windows(2).map(|w| dist(w[0], w[1])).collect();
    let total: f64 = seg.iter().sum();
    if total == 0.0 || m == 1 {
        return alloc::vec![points[0]; m];
    }
    let step = if closed { total / m as f64 } else { total / (m - 1) as f64 };
    let mut out = Vec::with_capacity(m);
    let (mut i, mut walked) = (0usize, 0.0);
    for k in 0..m {
        let target = if !closed && k == m - 1 { total } else { k as f64 * step };
        while i < seg.len() - 1 && walked + seg[i] < target {
            walked += seg[i];
            i += 1;
        }
        let t = if seg[i] > 0.0 { ((target - walked) / seg[i]).clamp(0.0, 1.0) } else { 0.0 };
        let (a, b) = (path[i], path[i + 1]);
        out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
    }
    out
}

/// `None` when no rect, line or polygon was matched.
pub fn element_metrics(
    assignment: &ElementAssignment,
    pred: &SimVecDoc,
    gt: &SimVecDoc,
    options: &EvalOptions,
) -> Option<ElementMetrics> {
    let (colors, positions) = geometric_pairs(assignment, pred, gt, options, None);
    Some(ElementMetrics { color_distance: mean(&colors)?, position_distance: mean(&positions)? })
}

fn geometric_pairs(
    assignment: &ElementAssignment,
    pred: &SimVecDoc,
    gt: &SimVecDoc,
    options: &EvalOptions,
    only: Option<ElementKind>,
) -> (Vec<f64>, Vec<f64>) {
    let mut colors = Vec::new();
    let mut positions = Vec::new();
    for k in &assignment.kinds {
        if k.kind == ElementKind::Text || only.is_some_and(|o| o != k.kind) {
            continue;
        }
        for &(p, g) in &k.pairs {
            let (a, b) = (&pred.elements[p], &gt.elements[g]);
            colors.push(color_distance(&a.color(), &b.color(), options));
            positions.push(position_distance(a, b));
        }
    }
    (colors, positions)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindReport {
    pub kind: ElementKind,
    pub gt_count: usize,
    pub pred_count: usize,
    pub matched: usize,
    pub color_distance: Option<f64>,
    pub position_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconReport {
    pub text_hit_rate: Option<f64>,
    pub text_similarity: Option<f64>,
    pub text_center_distance: Option<f64>,
    pub element_color_distance: Option<f64>,
    pub element_position_distance: Option<f64>,
    pub per_kind: Vec<KindReport>,
}

pub fn evaluate_reconstruction(pred: &SimVecDoc, gt: &SimVecDoc) -> ReconReport {
    evaluate_reconstruction_with(pred, gt, &EvalOptions::default())
}

pub fn evaluate_reconstruction_with(pred: &SimVecDoc, gt: &SimVecDoc, options: &EvalOptions) -> ReconReport {
    let assignment = match_elements_with(pred, gt, options);
    let text = text_metrics(&assignment, pred, gt, options);
    let elements = element_metrics(&assignment, pred, gt, options);
    let per_kind = ElementKind::ALL
        .iter()
        .map(|&kind| {
            let (colors, positions) = geometric_pairs(&assignment, pred, gt, options, Some(kind));
            let k = assignment.kind(kind);
            KindReport {
                kind,
                gt_count: gt.indices_of(kind).len(),
                pred_count: pred.indices_of(kind).len(),
                matched: k.pairs.len(),
                color_distance: mean(&colors),
                position_distance: mean(&positions),
            }
        })
        .collect();
    ReconReport {
        text_hit_rate: text.map(|t| t.hit_rate),
        text_similarity: text.and_then(|t| t.similarity),
        text_center_distance: text.and_then(|t| t.center_distance),
        element_color_distance: elements.map(|e| e.color_distance),
        element_position_distance: elements.map(|e| e.position_distance),
        per_kind,
    }
}

/// Unweighted per-group means; absent values are left out of their mean.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReconSummary {
    pub charts: usize,
    pub text_hit_rate: Option<f64>,
    pub text_similarity: Option<f64>,
    pub text_center_distance: Option<f64>,
    pub element_color_distance: Option<f64>,
    pub element_position_distance: Option<f64>,
}

fn summarize(reports: &[&ReconReport]) -> ReconSummary {
    let field = |f: fn(&ReconReport) -> Option<f64>| {
        let v: Vec<f64> = reports.iter().filter_map(|r| f(r)).collect();
        mean(&v)
    };
    ReconSummary {
        charts: reports.len(),
        text_hit_rate: field(|r| r.text_hit_rate),
        text_similarity: field(|r| r.text_similarity),
        text_center_distance: field(|r| r.text_center_distance),
        element_color_distance: field(|r| r.element_color_distance),
        element_position_distance: field(|r| r.element_position_distance),
    }
}

/// Per-group summaries plus an `overall` entry across every report.
pub fn aggregate_reports<'a>(
    reports: impl IntoIterator<Item = (&'a str, &'a ReconReport)>,
) -> BTreeMap<String, ReconSummary> {
    let mut groups: BTreeMap<String, Vec<&ReconReport>> = BTreeMap::new();
    let mut all = Vec::new();
    for (group, report) in reports {
        groups.entry(String::from(group)).or_default().push(report);
        all.push(report);
    }
    let mut out: BTreeMap<String, ReconSummary> =
        groups.iter().map(|(g, rs)| (g.clone(), summarize(rs))).collect();
    out.insert(String::from("overall"), summarize(&all));
    out
}
