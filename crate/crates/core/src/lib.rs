//! SimVec: a simplified vector format for charts.
//!
//! A SimVec document is a flat, paint-ordered list of four element kinds
//! (`text`, `rect`, `line`, `polygon`) whose coordinates live on a 1000-unit
//! canvas and whose colors are HSL quantized to 21 levels per channel.
//!
//! This crate is `no_std` (it needs `alloc`) and holds everything that does
//! not touch the file system or an XML parser:
//!
//! - [`doc`], [`grammar`], [`validate`], [`color`], [`tokens`]: the data model,
//!   its canonical text form, range checking, color quantization and the
//!   token counter used for compactness reports.
//! - [`geom`]: affine flattening, Bézier flattening and canonicalization of
//!   raw vector primitives into SimVec elements.
//! - [`chart`]: synthetic data, axis scales and bar/line/area chart rendering
//!   with ground-truth metadata.
//! - [`qa`]: question/answer generation with chain-of-thought traces and
//!   final-answer extraction.
//! - [`antiqua`]: the numeric side of historical-style restyling.
//! - [`eval`]: reconstruction metrics and thresholded QA scoring.

#![no_std]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod antiqua;
pub mod chart;
pub mod color;
pub mod doc;
pub mod eval;
pub mod geom;
pub mod grammar;
pub mod qa;
pub mod seed;
pub mod tokens;
pub mod validate;

mod math;

pub use color::{dequantize_color, quantize_color};
pub use doc::{
    Element, ElementKind, HslQ, LineElement, NBBox, NPoint, PolygonElement, RectElement,
    SimVecDoc, TextElement,
};
pub use geom::canonicalize_doc;
pub use grammar::{parse_simvec, serialize_simvec, ParseError};
pub use tokens::count_tokens;
pub use validate::{validate, Violation};

/// Side length of the normalized canvas.
pub const CANVAS: i32 = 1000;

/// Largest quantized color channel value.
pub const COLOR_LEVELS: i32 = 20;
