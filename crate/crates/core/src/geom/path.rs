//! Path command flattening with adaptive Bézier subdivision.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::hypot;

/// A point in source units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn lerp(self, other: Pt, t: f64) -> Pt {
        Pt::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    pub fn distance(self, other: Pt) -> f64 {
        hypot(self.x - other.x, self.y - other.y)
    }
}

/// One path-data command. `rel` marks the lowercase (relative) form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathCommand {
    MoveTo { rel: bool, x: f64, y: f64 },
    LineTo { rel: bool, x: f64, y: f64 },
    HorizontalTo { rel: bool, x: f64 },
    VerticalTo { rel: bool, y: f64 },
    CubicTo { rel: bool, x1: f64, y1: f64, x2: f64, y2: f64, x: f64, y: f64 },
    SmoothCubicTo { rel: bool, x2: f64, y2: f64, x: f64, y: f64 },
    QuadTo { rel: bool, x1: f64, y1: f64, x: f64, y: f64 },
    SmoothQuadTo { rel: bool, x: f64, y: f64 },
    /// Elliptical arc; only its endpoint is honoured.
    ArcTo { rel: bool, x: f64, y: f64 },
    ClosePath,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Polyline {
    pub points: Vec<Pt>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Flattened {
    pub polylines: Vec<Polyline>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PathError {
    #[error("unsupported path command `{0}`")]
    Unsupported(char),
    #[error("path must start with a moveto command")]
    MissingMoveTo,
}

const MAX_DEPTH: u32 = 16;

/// Flatten path commands into polylines, one per subpath.
///
/// Curves are split at `t = 0.5` until an upper bound on the chord deviation
/// drops to `tolerance`. Arcs are replaced by their chord (or rejected when
/// `strict`).
pub fn flatten_path(
    commands: &[PathCommand],
    tolerance: f64,
    strict: bool,
) -> Result<Flattened, PathError> {
    let tolerance = if tolerance > 0.0 { tolerance } else { 1e-3 };
    let mut out = Flattened::default();
    let mut current: Option<Polyline> = None;
    let mut pen = Pt::default();
    let mut start = Pt::default();
    // Reflection sources for S/T.
    let mut last_cubic_ctrl: Option<Pt> = None;
    let mut last_quad_ctrl: Option<Pt> = None;

    let finish = |poly: Option<Polyline>, out: &mut Flattened| {
        if let Some(p) = poly {
            if p.points.len() >= 2 {
                out.polylines.push(p);
            }
        }
    };

    let mut seen_move = false;

    for cmd in commands {
        let base = pen;
        let abs = move |rel: bool, x: f64, y: f64| {
            if rel {
                Pt::new(base.x + x, base.y + y)
            } else {
                Pt::new(x, y)
            }
        };
        let mut cubic_ctrl = None;
        let mut quad_ctrl = None;
        match *cmd {
            PathCommand::MoveTo { rel, x, y } => {
                finish(current.take(), &mut out);
                seen_move = true;
                pen = abs(rel, x, y);
                start = pen;
                current = Some(Polyline { points: alloc::vec![pen], closed: false });
            }
            PathCommand::ClosePath => {
                if let Some(mut poly) = current.take() {
                    poly.closed = true;
                    finish(Some(poly), &mut out);
                }
                pen = start;
            }
            _ => {
                let poly = match current.as_mut() {
                    Some(p) => p,
                    None => {
                        if !seen_move {
                            return Err(PathError::MissingMoveTo);
                        }
                        // Drawing after Z restarts at the subpath start.
                        current = Some(Polyline { points: alloc::vec![start], closed: false });
                        current.as_mut().unwrap()
                    }
                };
                match *cmd {
                    PathCommand::LineTo { rel, x, y } => {
                        pen = abs(rel, x, y);
                        poly.points.push(pen);
                    }
                    PathCommand::HorizontalTo { rel, x } => {
                        pen = Pt::new(if rel { pen.x + x } else { x }, pen.y);
                        poly.points.push(pen);
                    }
                    PathCommand::VerticalTo { rel, y } => {
                        pen = Pt::new(pen.x, if rel { pen.y + y } else { y });
                        poly.points.push(pen);
                    }
                    PathCommand::CubicTo { rel, x1, y1, x2, y2, x, y } => {
                        let c1 = abs(rel, x1, y1);
                        let c2 = abs(rel, x2, y2);
                        let end = abs(rel, x, y);
                        flatten_cubic(pen, c1, c2, end, tolerance, 0, &mut poly.points);
                        cubic_ctrl = Some(c2);
                        pen = end;
                    }
                    PathCommand::SmoothCubicTo { rel, x2, y2, x, y } => {
                        let c1 = reflect(last_cubic_ctrl, pen);
                        let c2 = abs(rel, x2, y2);
                        let end = abs(rel, x, y);
                        flatten_cubic(pen, c1, c2, end, tolerance, 0, &mut poly.points);
                        cubic_ctrl = Some(c2);
                        pen = end;
                    }
                    PathCommand::QuadTo { rel, x1, y1, x, y } => {
                        let c = abs(rel, x1, y1);
                        let end = abs(rel, x, y);
                        flatten_quad(pen, c, end, tolerance, 0, &mut poly.points);
                        quad_ctrl = Some(c);
                        pen = end;
                    }
                    PathCommand::SmoothQuadTo { rel, x, y } => {
                        let c = reflect(last_quad_ctrl, pen);
                        let end = abs(rel, x, y);
                        flatten_quad(pen, c, end, tolerance, 0, &mut poly.points);
                        quad_ctrl = Some(c);
                        pen = end;
                    }
                    PathCommand::ArcTo { rel, x, y } => {
                        if strict {
                            return Err(PathError::Unsupported(if rel { 'a' } else { 'A' }));
                        }
                        out.warnings
                            .push(String::from("elliptical arc approximated by its chord"));
                        pen = abs(rel, x, y);
                        poly.points.push(pen);
                    }
                    PathCommand::MoveTo { .. } | PathCommand::ClosePath => unreachable!(),
                }
            }
        }
        last_cubic_ctrl = cubic_ctrl;
        last_quad_ctrl = quad_ctrl;
    }
    finish(current.take(), &mut out);
    Ok(out)
}

fn reflect(ctrl: Option<Pt>, pen: Pt) -> Pt {
    match ctrl {
        Some(c) => Pt::new(2.0 * pen.x - c.x, 2.0 * pen.y - c.y),
        None => pen,
    }
}

/// Distance from `p` to segment `a`-`b`.
fn segment_distance(p: Pt, a: Pt, b: Pt) -> f64 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Pt::new(a.x + t * dx, a.y + t * dy))
}

fn flatten_cubic(p0: Pt, p1: Pt, p2: Pt, p3: Pt, tol: f64, depth: u32, out: &mut Vec<Pt>) {
    // The Bernstein weights on the inner control points sum to at most 3/4.
    let bound = 0.75 * segment_distance(p1, p0, p3).max(segment_distance(p2, p0, p3));
    if bound <= tol || depth >= MAX_DEPTH {
        out.push(p3);
        return;
    }
    let p01 = p0.lerp(p1, 0.5);
    let p12 = p1.lerp(p2, 0.5);
    let p23 = p2.lerp(p3, 0.5);
    let p012 = p01.lerp(p12, 0.5);
    let p123 = p12.lerp(p23, 0.5);
    let mid = p012.lerp(p123, 0.5);
    flatten_cubic(p0, p01, p012, mid, tol, depth + 1, out);
    flatten_cubic(mid, p123, p23, p3, tol, depth + 1, out);
}

fn flatten_quad(p0: Pt, p1: Pt, p2: Pt, tol: f64, depth: u32, out: &mut Vec<Pt>) {
    // A quadratic strays at most half its control distance from the chord.
    let bound = 0.5 * segment_distance(p1, p0, p2);
    if bound <= tol || depth >= MAX_DEPTH {
        out.push(p2);
        return;
    }
    let p01 = p0.lerp(p1, 0.5);
    let p12 = p1.lerp(p2, 0.5);
    let mid = p01.lerp(p12, 0.5);
    flatten_quad(p0, p01, mid, tol, depth + 1, out);
    flatten_quad(mid, p12, p2, tol, depth + 1, out);
}

/// Polygon area by the shoelace formula (absolute value).
pub(crate) fn polygon_area(points: &[Pt]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..points.len() {
        let a = points[i];
        let b = points[(i + 1) % points.len()];
        acc += a.x * b.y - b.x * a.y;
    }
    (acc / 2.0).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use PathCommand::*;

    fn m(x: f64, y: f64) -> PathCommand {
        MoveTo { rel: false, x, y }
    }
    fn l(x: f64, y: f64) -> PathCommand {
        LineTo { rel: false, x, y }
    }

    #[test]
    fn straight_lines_pass_through() {
        let f = flatten_path(&[m(0.0, 0.0), l(10.0, 0.0), l(10.0, 10.0)], 0.5, false).unwrap();
        assert_eq!(
            f.polylines,
            vec![Polyline {
                points: vec![Pt::new(0.0, 0.0), Pt::new(10.0, 0.0), Pt::new(10.0, 10.0)],
                closed: false
            }]
        );
    }

    #[test]
    fn close_path_tags_closed() {
        let f = flatten_path(&[m(0.0, 0.0), l(10.0, 0.0), ClosePath], 0.5, false).unwrap();
        assert_eq!(f.polylines.len(), 1);
        assert!(f.polylines[0].closed);
    }

    #[test]
    fn relative_and_axis_commands() {
        let cmds = [
            MoveTo { rel: false, x: 5.0, y: 5.0 },
            HorizontalTo { rel: true, x: 10.0 },
            VerticalTo { rel: true, y: 20.0 },
            HorizontalTo { rel: true, x: -10.0 },
            ClosePath,
        ];
        let f = flatten_path(&cmds, 0.5, false).unwrap();
        assert_eq!(
            f.polylines[0].points,
            vec![Pt::new(5.0, 5.0), Pt::new(15.0, 5.0), Pt::new(15.0, 25.0), Pt::new(5.0, 25.0)]
        );
    }

    #[test]
    fn subpaths_split_and_restart_after_close() {
        let cmds = [m(0.0, 0.0), l(1.0, 0.0), l(1.0, 1.0), ClosePath, l(5.0, 5.0)];
        let f = flatten_path(&cmds, 0.5, false).unwrap();
        assert_eq!(f.polylines.len(), 2);
        assert_eq!(f.polylines[1].points, vec![Pt::new(0.0, 0.0), Pt::new(5.0, 5.0)]);
    }

    #[test]
    fn arcs_warn_or_fail() {
        let cmds = [m(0.0, 0.0), ArcTo { rel: false, x: 10.0, y: 0.0 }];
        let f = flatten_path(&cmds, 0.5, false).unwrap();
        assert_eq!(f.polylines[0].points.last(), Some(&Pt::new(10.0, 0.0)));
        assert_eq!(f.warnings.len(), 1);
        assert_eq!(flatten_path(&cmds, 0.5, true), Err(PathError::Unsupported('A')));
    }

    #[test]
    fn must_start_with_move() {
        assert_eq!(flatten_path(&[l(1.0, 1.0)], 0.5, false), Err(PathError::MissingMoveTo));
    }

    #[test]
    fn tighter_tolerance_adds_vertices() {
        let curve = [
            m(0.0, 0.0),
            CubicTo { rel: false, x1: 0.0, y1: 100.0, x2: 100.0, y2: 100.0, x: 100.0, y: 0.0 },
        ];
        let coarse = flatten_path(&curve, 5.0, false).unwrap().polylines[0].points.len();
        let fine = flatten_path(&curve, 0.1, false).unwrap().polylines[0].points.len();
        assert!(fine > coarse, "{fine} <= {coarse}");
    }

    #[test]
    fn shoelace() {
        let sq = [Pt::new(0.0, 0.0), Pt::new(2.0, 0.0), Pt::new(2.0, 3.0), Pt::new(0.0, 3.0)];
        assert_eq!(polygon_area(&sq), 6.0);
    }
}
