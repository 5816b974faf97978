use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    X,
    Y,
}

/// Linear map between a pixel interval and a data interval.
///
/// When `inverted`, `data_min` lands on `pixel_max` (y axes on a y-down canvas).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisScale {
    pub pixel_min: f64,
    pub pixel_max: f64,
    pub data_min: f64,
    pub data_max: f64,
    pub orientation: Orientation,
    pub inverted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ScaleError {
    #[error("pixel range [{0}, {1}] is empty")]
    Pixels(f64, f64),
    #[error("data range [{0}, {1}] is empty")]
    Data(f64, f64),
}

pub fn make_scale(
    data_min: f64,
    data_max: f64,
    pixel_min: f64,
    pixel_max: f64,
    orientation: Orientation,
    inverted: bool,
) -> Result<AxisScale, ScaleError> {
    if !(pixel_min < pixel_max) {
        return Err(ScaleError::Pixels(pixel_min, pixel_max));
    }
    if !(data_min < data_max) {
        return Err(ScaleError::Data(data_min, data_max));
    }
    Ok(AxisScale { pixel_min, pixel_max, data_min, data_max, orientation, inverted })
}

impl AxisScale {
    pub fn pixel_span(&self) -> f64 {
        self.pixel_max - self.pixel_min
    }

    pub fn data_span(&self) -> f64 {
        self.data_max - self.data_min
    }

    pub fn apply(&self, value: f64) -> f64 {
        let t = (value - self.data_min) / self.data_span();
        if self.inverted {
            self.pixel_max - t * self.pixel_span()
        } else {
            self.pixel_min + t * self.pixel_span()
        }
    }

    pub fn invert(&self, pixel: f64) -> f64 {
        let t = if self.inverted {
            (self.pixel_max - pixel) / self.pixel_span()
        } else {
            (pixel - self.pixel_min) / self.pixel_span()
        };
        self.data_min + t * self.data_span()
    }

    /// Pixel length covering `extent` data units.
    pub fn extent_of(&self, extent: f64) -> f64 {
        extent / self.data_span() * self.pixel_span()
    }

    /// Data length covered by `pixels`.
    pub fn value_of_extent(&self, pixels: f64) -> f64 {
        pixels / self.pixel_span() * self.data_span()
    }

    /// Pixel position of `data_min`, where extents are measured from.
    pub fn baseline(&self) -> f64 {
        if self.inverted {
            self.pixel_max
        } else {
            self.pixel_min
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cot_scale() -> AxisScale {
        make_scale(0.0, 100.0, 50.0, 450.0, Orientation::Y, true).unwrap()
    }

    #[test]
    fn height_140_over_50_to_450_is_35_percent() {
        let s = cot_scale();
        assert_eq!(s.value_of_extent(140.0), 35.0);
        assert_eq!(s.baseline() - s.apply(35.0), 140.0);
    }

    #[test]
    fn endpoints() {
        let s = cot_scale();
        assert_eq!(s.apply(0.0), 450.0);
        assert_eq!(s.apply(100.0), 50.0);
        let up = make_scale(0.0, 10.0, 0.0, 100.0, Orientation::X, false).unwrap();
        assert_eq!(up.apply(0.0), 0.0);
    }

    #[test]
    fn invert_round_trips() {
        let s = make_scale(-3.0, 17.5, 12.0, 431.0, Orientation::Y, true).unwrap();
        let mut v = -3.0;
        for _ in 0..100 {
            v += 0.2037;
            assert!((s.invert(s.apply(v)) - v).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_ranges() {
        assert!(matches!(make_scale(1.0, 1.0, 0.0, 10.0, Orientation::X, false), Err(ScaleError::Data(..))));
        assert!(matches!(make_scale(0.0, 1.0, 10.0, 10.0, Orientation::X, false), Err(ScaleError::Pixels(..))));
    }
}
