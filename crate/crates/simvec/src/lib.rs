//! SVG ingest, historical restyling and the dataset pipeline for SimVec.
//!
//! The format itself, chart synthesis, QA generation and the metrics live in
//! [`simvec_core`]. This crate adds everything that parses XML or touches the
//! file system.

pub mod adapters;
pub mod config;
pub mod ingest;
pub mod manifest;
pub mod oldify;
pub mod pipeline;
pub mod render;
pub mod report;
pub mod svg;

pub use ingest::{ingest_svg, IngestError, IngestOptions, Ingested, Warning};
pub use oldify::{apply_paper_texture, jitter_strokes, oldify, substitute_fonts, OldifyError};
pub use render::render_simvec;
pub use simvec_core;
