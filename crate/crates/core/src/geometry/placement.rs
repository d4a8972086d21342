use serde::{Deserialize, Serialize};

use super::types::{BoundingBox, DepthMap};
use crate::error::{Error, Result};
use crate::render::Position;

/// Room axis that receives the depth-derived distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthAxis {
    #[default]
    Frontal,
    Vertical,
    Lateral,
}

/// Extents of the linear image-to-room mapping, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MappingConfig {
    /// Full lateral span; image columns map onto `[-lateral/2, +lateral/2]`.
    pub lateral_extent: f64,
    /// Distance reached at normalized depth 1.
    pub frontal_extent: f64,
    /// Full vertical span; image rows map onto `[-vertical/2, +vertical/2]`.
    pub vertical_extent: f64,
    pub depth_axis: DepthAxis,
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig {
            lateral_extent: 200.0,
            frontal_extent: 100.0,
            vertical_extent: 50.0,
            depth_axis: DepthAxis::Frontal,
        }
    }
}

impl MappingConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lateral_extent", self.lateral_extent),
            ("frontal_extent", self.frontal_extent),
            ("vertical_extent", self.vertical_extent),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "mapping {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Median of the depth values inside the (inclusive) box. For an even pixel
/// count the two middle values are averaged.
pub fn sample_depth(depth: &DepthMap, bbox: &BoundingBox) -> Result<f64> {
    if !bbox.within(depth.width(), depth.height()) {
        return Err(Error::InvalidInput(format!(
            "box {:?} outside {}x{} depth map",
            <[i32; 4]>::from(*bbox),
            depth.width(),
            depth.height()
        )));
    }
    let mut values: Vec<f64> = (bbox.y_min as usize..=bbox.y_max as usize)
        .flat_map(|y| (bbox.x_min as usize..=bbox.x_max as usize).map(move |x| (x, y)))
        .map(|(x, y)| depth.get(x, y))
        .collect();
    let n = values.len();
    let mid = n / 2;
    let (lower, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        Ok(upper)
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok((below + upper) / 2.0)
    }
}

/// Maps an image-plane point `(u, v)` with normalized depth to room
/// coordinates `[frontal, vertical, lateral]` (with the default depth axis).
///
/// `frontal = depth * frontal_extent`,
/// `vertical = (H/2 - v) / H * vertical_extent`,
/// `lateral = (u - W/2) / W * lateral_extent`.
pub fn map_centroid(
    u: f64,
    v: f64,
    depth: f64,
    dims: (usize, usize),
    cfg: &MappingConfig,
) -> Position {
    let (w, h) = (dims.0 as f64, dims.1 as f64);
    let along = depth * cfg.frontal_extent;
    let vertical = (h / 2.0 - v) / h * cfg.vertical_extent;
    let lateral = (u - w / 2.0) / w * cfg.lateral_extent;
    match cfg.depth_axis {
        DepthAxis::Frontal => [along, vertical, lateral],
        DepthAxis::Vertical => [vertical, along, lateral],
        DepthAxis::Lateral => [lateral, vertical, along],
    }
}

/// Room position of a region from its box centroid and sampled depth.
pub fn map_to_room(
    bbox: &BoundingBox,
    depth: f64,
    image_dims: (usize, usize),
    cfg: &MappingConfig,
) -> Result<Position> {
    if !(0.0..=1.0).contains(&depth) {
        return Err(Error::InvalidInput(format!("depth {depth} outside [0, 1]")));
    }
    if !bbox.within(image_dims.0, image_dims.1) {
        return Err(Error::InvalidInput(format!(
            "box {:?} outside {}x{} image",
            <[i32; 4]>::from(*bbox),
            image_dims.0,
            image_dims.1
        )));
    }
    let (u, v) = bbox.centroid();
    Ok(map_centroid(u, v, depth, image_dims, cfg))
}
