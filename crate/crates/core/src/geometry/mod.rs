//! Source estimation from a segmentation mask and a monocular depth map.
//!
//! Regions are 4-connected components of each positive mask label. Each
//! component is traced into a closed boundary contour, enclosed by its convex
//! hull and its axis-aligned bounding box, assigned the median depth inside
//! the box, and finally mapped into room coordinates around the listener.

mod contour;
mod hull;
mod placement;
mod regions;
mod types;

pub use contour::{extract_contours, label_components, trace_component, Component, Components};
pub use hull::{aabb, min_bounding_polygon};
pub use placement::{map_centroid, map_to_room, sample_depth, DepthAxis, MappingConfig};
pub use regions::{detect_regions, Region, DEFAULT_MIN_AREA_FRAC};
pub use types::{BoundingBox, BoundingPolygon, Contour, DepthMap, Mask, Point};
