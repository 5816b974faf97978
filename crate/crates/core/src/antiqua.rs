//! Numeric side of historical-style restyling: stroke jitter, speckles and
//! parchment tint. SVG rewriting lives in the `simvec` crate.

use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Pt;
use crate::math::{hypot, round};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntiquaParams {
    /// Std of the perpendicular jitter, normalized units.
    pub jitter_amplitude: f64,
    /// Target spacing of jitter vertices, normalized units.
    pub segment_length: f64,
    /// Stroke width factor drawn from `1 ± thickness_variation`.
    pub thickness_variation: f64,
    /// Blend of the background toward parchment, `0..=1`.
    pub tint_strength: f64,
    /// Speckles per 10^6 normalized square units.
    pub speckle_density: f64,
    /// Replacement font family; `None` keeps the original fonts.
    pub font_name: Option<String>,
    pub seed: u64,
}

impl Default for AntiquaParams {
    fn default() -> Self {
        AntiquaParams::identity()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("{0} must be finite and non-negative")]
    Negative(&'static str),
    #[error("tint strength must lie in [0, 1], got {0}")]
    Tint(f64),
    #[error("font name must not be empty")]
    EmptyFont,
}

impl AntiquaParams {
    /// Changes nothing.
    pub fn identity() -> Self {
        AntiquaParams {
            jitter_amplitude: 0.0,
            segment_length: 20.0,
            thickness_variation: 0.0,
            tint_strength: 0.0,
            speckle_density: 0.0,
            font_name: None,
            seed: 0,
        }
    }

    /// Default historical look.
    pub fn historical(seed: u64) -> Self {
        AntiquaParams {
            jitter_amplitude: 1.5,
            segment_length: 20.0,
            thickness_variation: 0.3,
            tint_strength: 0.7,
            speckle_density: 40.0,
            font_name: Some(String::from("IM Fell English")),
            seed,
        }
    }

    /// Named preset: `historical`, `faded` or `none`.
    pub fn preset(name: &str, seed: u64) -> Option<Self> {
        match name {
            "historical" => Some(Self::historical(seed)),
            "faded" => Some(AntiquaParams {
                jitter_amplitude: 1.0,
                tint_strength: 0.4,
                speckle_density: 15.0,
                font_name: Some(String::from("Special Elite")),
                ..Self::historical(seed)
            }),
            "none" => Some(AntiquaParams { seed, ..Self::identity() }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        for (name, v) in [
            ("jitter amplitude", self.jitter_amplitude),
            ("segment length", self.segment_length),
            ("thickness variation", self.thickness_variation),
            ("speckle density", self.speckle_density),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ParamsError::Negative(name));
            }
        }
        if !(0.0..=1.0).contains(&self.tint_strength) {
            return Err(ParamsError::Tint(self.tint_strength));
        }
        if self.font_name.as_deref() == Some("") {
            return Err(ParamsError::EmptyFont);
        }
        Ok(())
    }
}

/// Gaussian with std `sigma`, redrawn until within `2 * sigma`.
pub fn truncated_normal<R: Rng>(rng: &mut R, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return 0.0;
    }
    let normal = Normal::new(0.0, sigma).expect("sigma is positive and finite");
    loop {
        let x: f64 = normal.sample(rng);
        if x.abs() <= 2.0 * sigma {
            return x;
        }
    }
}

/// Subdivide each edge into `max(1, round(len / segment_length))` pieces and
/// push interior vertices off the edge by truncated Gaussian noise.
///
/// Input vertices are kept exactly. `closed` also treats the closing edge;
/// the start vertex is not repeated at the end.
pub fn jitter_polyline<R: Rng>(
    points: &[Pt],
    closed: bool,
    amplitude: f64,
    segment_length: f64,
    rng: &mut R,
) -> Vec<Pt> {
    if amplitude <= 0.0 || segment_length <= 0.0 || points.len() < 2 {
        return points.to_vec();
    }
    let edges = if closed { points.len() } else { points.len() - 1 };
    let mut out = Vec::with_capacity(points.len() * 2);
    for i in 0..edges {
        let a = points[i];
        let b = points[(i + 1) % points.len()];
        out.push(a);
        let len = hypot(b.x - a.x, b.y - a.y);
        if len == 0.0 {
            continue;
        }
        let n = (round(len / segment_length) as usize).max(1);
        let (nx, ny) = (-(b.y - a.y) / len, (b.x - a.x) / len);
        for k in 1..n {
            let t = k as f64 / n as f64;
            let d = truncated_normal(rng, amplitude);
            out.push(Pt::new(a.x + (b.x - a.x) * t + nx * d, a.y + (b.y - a.y) * t + ny * d));
        }
    }
    if !closed {
        out.push(points[points.len() - 1]);
    }
    out
}

/// Stroke width factor in `[1 - variation, 1 + variation]`.
pub fn thickness_factor<R: Rng>(rng: &mut R, variation: f64) -> f64 {
    if variation <= 0.0 {
        return 1.0;
    }
    1.0 + rng.random_range(-variation..=variation)
}

/// Parchment color the background is tinted toward.
pub const PARCHMENT: (u8, u8, u8) = (0xf4, 0xe8, 0xc8);

/// Per-channel RGB blend toward [`PARCHMENT`].
pub fn tint(base: (u8, u8, u8), strength: f64) -> (u8, u8, u8) {
    let s = strength.clamp(0.0, 1.0);
    let mix = |c: u8, p: u8| round(c as f64 + (p as f64 - c as f64) * s) as u8;
    (mix(base.0, PARCHMENT.0), mix(base.1, PARCHMENT.1), mix(base.2, PARCHMENT.2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Speckle {
    /// Center and radius, normalized units.
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub rgb: (u8, u8, u8),
    pub opacity: f64,
}

/// `round(density * area / 10^6)`, area in normalized square units.
pub fn speckle_count(density: f64, area: f64) -> usize {
    if density <= 0.0 || area <= 0.0 {
        return 0;
    }
    round(density * area / 1e6) as usize
}

/// Seeded speckles over a `width x height` normalized canvas.
pub fn speckles(params: &AntiquaParams, width: f64, height: f64) -> Vec<Speckle> {
    let n = speckle_count(params.speckle_density, width * height);
    let mut rng = seed::rng(seed::derive(params.seed, "speckle"));
    (0..n)
        .map(|_| {
            let shade = rng.random_range(0x60..=0x90u8);
            Speckle {
                x: rng.random_range(0.0..width),
                y: rng.random_range(0.0..height),
                radius: rng.random_range(1.0..3.0),
                rgb: (shade, shade - 0x18, shade - 0x38),
                opacity: rng.random_range(0.08..0.25),
            }
        })
        .collect()
}
