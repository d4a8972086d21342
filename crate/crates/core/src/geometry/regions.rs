use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::contour::{label_components, trace_component};
use super::hull::{aabb, min_bounding_polygon};
use super::placement::sample_depth;
use super::types::{BoundingBox, BoundingPolygon, DepthMap, Mask};
use crate::error::{Error, Result};

/// Components smaller than this fraction of the image are dropped.
pub const DEFAULT_MIN_AREA_FRAC: f64 = 0.005;

/// A detected sound-source region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    /// Unique within one detection: the mask label, suffixed with `.2`, `.3`, ...
    /// for the second and later components of the same label (in area order).
    pub id: String,
    pub label: u32,
    pub aabb: BoundingBox,
    /// Convex hull of the contour; absent when the contour is collinear.
    pub polygon: Option<BoundingPolygon>,
    pub depth: f64,
    /// Pixel count of the component.
    pub area: u64,
}

/// Contours, hulls, boxes and depths for every component of at least
/// `min_area_frac * W * H` pixels, largest first.
pub fn detect_regions(mask: &Mask, depth: &DepthMap, min_area_frac: f64) -> Result<Vec<Region>> {
    if mask.dims() != depth.dims() {
        return Err(Error::DimensionMismatch {
            expected: mask.dims(),
            found: depth.dims(),
        });
    }
    if !(0.0..=1.0).contains(&min_area_frac) {
        return Err(Error::InvalidInput(format!(
            "minimum area fraction {min_area_frac} outside [0, 1]"
        )));
    }
    let threshold = min_area_frac * (mask.width() * mask.height()) as f64;
    let components = label_components(mask);

    let mut kept: Vec<(usize, u64)> = components
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.area as f64 >= threshold)
        .map(|(i, c)| (i, c.area))
        .collect();
    // Stable: equal areas keep raster order.
    kept.sort_by_key(|k| std::cmp::Reverse(k.1));

    let mut seen: HashMap<u32, usize> = HashMap::new();
    kept.into_iter()
        .map(|(index, area)| {
            let label = components.components[index].label;
            let contour = trace_component(&components, index);
            let bbox = aabb(&contour)?;
            let polygon = match min_bounding_polygon(&contour) {
                Ok(p) => Some(p),
                Err(Error::DegenerateGeometry(_)) => None,
                Err(e) => return Err(e),
            };
            let depth = sample_depth(depth, &bbox)?;
            let count = seen.entry(label).or_insert(0);
            *count += 1;
            let id = if *count == 1 {
                label.to_string()
            } else {
                format!("{label}.{count}")
            };
            Ok(Region {
                id,
                label,
                aabb: bbox,
                polygon,
                depth,
                area,
            })
        })
        .collect()
}
