use core::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::{cos, fmod, sin, sqrt};

/// 2x3 affine map: `x' = a*x + c*y + e`, `y' = b*x + d*y + f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("degenerate transform (determinant {determinant})")]
pub struct DegenerateTransform {
    pub determinant: f64,
}

impl Default for AffineMatrix {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl AffineMatrix {
    pub const IDENTITY: AffineMatrix = AffineMatrix::new(1.0, 0.0, 0.0, 1.0, 0.0, 0.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Self {
        Self { a, b, c, d, e, f }
    }

    pub const fn translate(tx: f64, ty: f64) -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0, tx, ty)
    }

    pub const fn scale(sx: f64, sy: f64) -> Self {
        Self::new(sx, 0.0, 0.0, sy, 0.0, 0.0)
    }

    /// Counter-clockwise in math orientation, i.e. clockwise on a y-down canvas.
    /// Quarter turns are exact.
    pub fn rotate(degrees: f64) -> Self {
        let mut turn = fmod(degrees, 360.0);
        if turn < 0.0 {
            turn += 360.0;
        }
        let (s, c) = match turn {
            r if r == 0.0 => (0.0, 1.0),
            r if r == 90.0 => (1.0, 0.0),
            r if r == 180.0 => (0.0, -1.0),
            r if r == 270.0 => (-1.0, 0.0),
            _ => {
                let rad = degrees.to_radians();
                (sin(rad), cos(rad))
            }
        };
        Self::new(c, s, -s, c, 0.0, 0.0)
    }

    pub fn rotate_about(degrees: f64, cx: f64, cy: f64) -> Self {
        Self::translate(cx, cy) * Self::rotate(degrees) * Self::translate(-cx, -cy)
    }

    pub fn skew_x(degrees: f64) -> Self {
        let rad = degrees.to_radians();
        Self::new(1.0, 0.0, sin(rad) / cos(rad), 1.0, 0.0, 0.0)
    }

    pub fn skew_y(degrees: f64) -> Self {
        let rad = degrees.to_radians();
        Self::new(1.0, sin(rad) / cos(rad), 0.0, 1.0, 0.0, 0.0)
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.a * x + self.c * y + self.e,
            self.b * x + self.d * y + self.f,
        )
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn check_invertible(&self) -> Result<(), DegenerateTransform> {
        let det = self.determinant();
        if det == 0.0 || !det.is_finite() {
            Err(DegenerateTransform { determinant: det })
        } else {
            Ok(())
        }
    }

    /// No rotation or skew: rects stay rects.
    pub fn is_axis_aligned(&self) -> bool {
        self.b == 0.0 && self.c == 0.0
    }

    /// Largest stretch factor, used to convert tolerances between frames.
    pub fn max_scale(&self) -> f64 {
        let col1 = sqrt(self.a * self.a + self.b * self.b);
        let col2 = sqrt(self.c * self.c + self.d * self.d);
        col1.max(col2)
    }
}

impl Mul for AffineMatrix {
    type Output = AffineMatrix;

    /// `(self * rhs)(p) == self(rhs(p))`.
    fn mul(self, rhs: AffineMatrix) -> AffineMatrix {
        AffineMatrix {
            a: self.a * rhs.a + self.c * rhs.b,
            b: self.b * rhs.a + self.d * rhs.b,
            c: self.a * rhs.c + self.c * rhs.d,
            d: self.b * rhs.c + self.d * rhs.d,
            e: self.a * rhs.e + self.c * rhs.f + self.e,
            f: self.b * rhs.e + self.d * rhs.f + self.f,
        }
    }
}

/// Compose a transform stack, outermost group first. Empty stack is identity.
pub fn compose_transforms(stack: &[AffineMatrix]) -> AffineMatrix {
    stack
        .iter()
        .fold(AffineMatrix::IDENTITY, |acc, m| acc * *m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_stack_is_identity() {
        assert_eq!(compose_transforms(&[]), AffineMatrix::IDENTITY);
    }

    #[test]
    fn translations_add() {
        let m = compose_transforms(&[
            AffineMatrix::translate(10.0, 0.0),
            AffineMatrix::translate(0.0, 5.0),
        ]);
        assert_eq!(m, AffineMatrix::translate(10.0, 5.0));
    }

    #[test]
    fn outer_scale_inner_translate() {
        // Hand multiplication: scale(2) * translate(3,0) = [2 0 0 2 6 0].
        let m = compose_transforms(&[
            AffineMatrix::scale(2.0, 2.0),
            AffineMatrix::translate(3.0, 0.0),
        ]);
        assert_eq!(m, AffineMatrix::new(2.0, 0.0, 0.0, 2.0, 6.0, 0.0));
        assert_eq!(m.apply(1.0, 1.0), (8.0, 2.0));
    }

    #[test]
    fn quarter_turns_are_exact() {
        let r = AffineMatrix::rotate(90.0);
        assert_eq!(r.apply(1.0, 0.0), (0.0, 1.0));
        assert!(!r.is_axis_aligned());
        assert_eq!(AffineMatrix::rotate(-90.0), AffineMatrix::rotate(270.0));
    }

    #[test]
    fn degenerate_detection() {
        assert!(AffineMatrix::scale(0.0, 1.0).check_invertible().is_err());
        assert!(AffineMatrix::rotate(30.0).check_invertible().is_ok());
    }

    #[test]
    fn rotate_about_keeps_center() {
        let m = AffineMatrix::rotate_about(90.0, 5.0, 5.0);
        assert_eq!(m.apply(5.0, 5.0), (5.0, 5.0));
    }
}
