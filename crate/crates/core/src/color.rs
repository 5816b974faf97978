//! HSL quantization and RGB conversions.

use alloc::string::String;
use core::fmt::Write;

use thiserror::Error;

use crate::doc::HslQ;
use crate::math::{fmod, round};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ColorRangeError {
    #[error("hue {0} outside [0, 360]")]
    Hue(f64),
    #[error("saturation {0} outside [0, 100]")]
    Saturation(f64),
    #[error("lightness {0} outside [0, 100]")]
    Lightness(f64),
}

const HUE_STEP: f64 = 360.0 / 20.0;
const PCT_STEP: f64 = 100.0 / 20.0;

/// Hue returned for bucket 20: the centre of its input interval `[351, 360)`.
/// Hue 360 itself folds onto bucket 0.
const TOP_HUE: f64 = 355.5;

/// Quantize degrees/percentages onto the `0..=20` grid.
pub fn quantize_color(h: f64, s: f64, l: f64) -> Result<HslQ, ColorRangeError> {
    if !(0.0..=360.0).contains(&h) {
        return Err(ColorRangeError::Hue(h));
    }
    if !(0.0..=100.0).contains(&s) {
        return Err(ColorRangeError::Saturation(s));
    }
    if !(0.0..=100.0).contains(&l) {
        return Err(ColorRangeError::Lightness(l));
    }
    Ok(quantize_unchecked(h, s, l))
}

/// Quantize after wrapping the hue into `[0, 360)` and clamping s/l.
pub fn quantize_lenient(h: f64, s: f64, l: f64) -> HslQ {
    let mut h = fmod(h, 360.0);
    if h < 0.0 {
        h += 360.0;
    }
    quantize_unchecked(h, s.clamp(0.0, 100.0), l.clamp(0.0, 100.0))
}

fn quantize_unchecked(h: f64, s: f64, l: f64) -> HslQ {
    let h = if h >= 360.0 { 0.0 } else { h };
    HslQ::new(
        round(h / HUE_STEP) as i32,
        round(s / PCT_STEP) as i32,
        round(l / PCT_STEP) as i32,
    )
}

/// Representative `(degrees, percent, percent)` for a quantized color.
pub fn dequantize_color(q: HslQ) -> (f64, f64, f64) {
    let h = if q.h >= 20 { TOP_HUE } else { q.h as f64 * HUE_STEP };
    (h, q.s as f64 * PCT_STEP, q.l as f64 * PCT_STEP)
}

/// RGB channels in `0..=255` to `(degrees, percent, percent)`.
pub fn rgb_to_hsl(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let r = r as f64 / 255.0;
    let g = g as f64 / 255.0;
    let b = b as f64 / 255.0;
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let l = (max + min) / 2.0;
    if max == min {
        return (0.0, 0.0, l * 100.0);
    }
    let d = max - min;
    let s = if l > 0.5 { d / (2.0 - max - min) } else { d / (max + min) };
    let h = if max == r {
        (g - b) / d + if g < b { 6.0 } else { 0.0 }
    } else if max == g {
        (b - r) / d + 2.0
    } else {
        (r - g) / d + 4.0
    };
    (h * 60.0, s * 100.0, l * 100.0)
}

/// `(degrees, percent, percent)` to 8-bit RGB.
pub fn hsl_to_rgb(h: f64, s: f64, l: f64) -> (u8, u8, u8) {
    let s = s / 100.0;
    let l = l / 100.0;
    if s == 0.0 {
        let v = to_u8(l);
        return (v, v, v);
    }
    let q = if l < 0.5 { l * (1.0 + s) } else { l + s - l * s };
    let p = 2.0 * l - q;
    let h = h / 360.0;
    (
        to_u8(hue_channel(p, q, h + 1.0 / 3.0)),
        to_u8(hue_channel(p, q, h)),
        to_u8(hue_channel(p, q, h - 1.0 / 3.0)),
    )
}

fn hue_channel(p: f64, q: f64, mut t: f64) -> f64 {
    if t < 0.0 {
        t += 1.0;
    }
    if t > 1.0 {
        t -= 1.0;
    }
    if t < 1.0 / 6.0 {
        p + (q - p) * 6.0 * t
    } else if t < 0.5 {
        q
    } else if t < 2.0 / 3.0 {
        p + (q - p) * (2.0 / 3.0 - t) * 6.0
    } else {
        p
    }
}

fn to_u8(v: f64) -> u8 {
    round(v.clamp(0.0, 1.0) * 255.0) as u8
}

pub fn quantize_rgb(r: u8, g: u8, b: u8) -> HslQ {
    let (h, s, l) = rgb_to_hsl(r, g, b);
    quantize_lenient(h, s, l)
}

/// `#rrggbb` for the representative of `q`.
pub fn hex(q: HslQ) -> String {
    let (h, s, l) = dequantize_color(q);
    let (r, g, b) = hsl_to_rgb(h, s, l);
    let mut out = String::with_capacity(7);
    let _ = write!(out, "#{r:02x}{g:02x}{b:02x}");
    out
}

/// CSS `hsl()` notation with the exact representative values.
pub fn css_hsl(q: HslQ) -> String {
    let (h, s, l) = dequantize_color(q);
    let mut out = String::new();
    let _ = write!(out, "hsl({h}, {s}%, {l}%)");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        assert_eq!(quantize_color(0.0, 0.0, 100.0).unwrap(), HslQ::new(0, 0, 20));
        assert_eq!(quantize_color(0.0, 0.0, 0.0).unwrap(), HslQ::new(0, 0, 0));
        assert_eq!(quantize_color(0.0, 100.0, 50.0).unwrap(), HslQ::new(0, 20, 10));
    }

    #[test]
    fn hue_360_folds_to_zero() {
        assert_eq!(quantize_color(360.0, 50.0, 50.0).unwrap().h, 0);
        assert_eq!(quantize_color(355.0, 50.0, 50.0).unwrap().h, 20);
        assert_eq!(quantize_color(350.0, 50.0, 50.0).unwrap().h, 19);
    }

    #[test]
    fn half_away_from_zero() {
        // 9 degrees is exactly half a hue step, 2.5% half a percent step.
        assert_eq!(quantize_color(9.0, 2.5, 7.5).unwrap(), HslQ::new(1, 1, 2));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(quantize_color(361.0, 0.0, 0.0), Err(ColorRangeError::Hue(_))));
        assert!(matches!(quantize_color(0.0, -1.0, 0.0), Err(ColorRangeError::Saturation(_))));
        assert!(matches!(quantize_color(0.0, 0.0, 100.5), Err(ColorRangeError::Lightness(_))));
    }

    #[test]
    fn grid_is_fixed_point_of_dequantize() {
        for h in 0..=20 {
            for s in 0..=20 {
                for l in 0..=20 {
                    let q = HslQ::new(h, s, l);
                    let (dh, ds, dl) = dequantize_color(q);
                    assert_eq!(quantize_color(dh, ds, dl).unwrap(), q);
                }
            }
        }
    }

    #[test]
    fn rgb_conversions() {
        assert_eq!(rgb_to_hsl(255, 0, 0), (0.0, 100.0, 50.0));
        assert_eq!(hsl_to_rgb(120.0, 100.0, 50.0), (0, 255, 0));
        assert_eq!(hsl_to_rgb(0.0, 0.0, 100.0), (255, 255, 255));
        assert_eq!(hex(HslQ::new(0, 20, 10)), "#ff0000");
        assert_eq!(css_hsl(HslQ::new(10, 15, 12)), "hsl(180, 75%, 60%)");
    }
}
