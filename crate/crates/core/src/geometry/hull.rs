use super::types::{cross, BoundingBox, BoundingPolygon, Contour};
use crate::error::{Error, Result};

/// Convex hull of the contour points (Andrew's monotone chain).
///
/// Vertices are a subset of the input, counterclockwise, with collinear points
/// removed. Fails with [`Error::DegenerateGeometry`] when the points span no
/// area.
pub fn min_bounding_polygon(contour: &Contour) -> Result<BoundingPolygon> {
    if contour.len() < 3 {
        return Err(Error::DegenerateGeometry(format!(
            "hull needs at least 3 points, contour has {}",
            contour.len()
        )));
    }
    let mut pts = contour.points.clone();
    pts.sort_unstable();
    pts.dedup();

    let mut hull = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(Error::DegenerateGeometry(
            "all contour points are collinear".into(),
        ));
    }
    Ok(BoundingPolygon { vertices: hull })
}

/// Exact min/max bounds of the contour points.
pub fn aabb(contour: &Contour) -> Result<BoundingBox> {
    let first = *contour.points.first().ok_or(Error::EmptyContour)?;
    let init = BoundingBox {
        x_min: first.x,
        x_max: first.x,
        y_min: first.y,
        y_max: first.y,
    };
    Ok(contour.points.iter().fold(init, |b, p| BoundingBox {
        x_min: b.x_min.min(p.x),
        x_max: b.x_max.max(p.x),
        y_min: b.y_min.min(p.y),
        y_max: b.y_max.max(p.y),
    }))
}
