//! Flattening raw vector primitives into SimVec elements.
//!
//! The XML side (walking an SVG tree, resolving inherited paint) lives in the
//! std companion crate; everything here is pure geometry on `f64` source
//! units plus the final integer normalization.

mod affine;
mod canon;
mod path;

pub use affine::{compose_transforms, AffineMatrix, DegenerateTransform};
pub use canon::{
    apply_transform, canonicalize_doc, canonicalize_primitive, element_primitive, clip_bbox, ellipse_points, estimate_text_bbox,
    normalize_bbox, normalize_coords, normalize_point, text_element, BBox, Canonical, Paint,
    PrimitiveKind, RawPrimitive, Shape, SkipReason, TextAnchor, Viewport, ViewportError,
    CIRCLE_SEGMENTS,
};
pub use path::{flatten_path, Flattened, PathCommand, PathError, Polyline, Pt};
