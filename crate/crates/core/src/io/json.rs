use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, BoundingPolygon, MappingConfig, Region};
use crate::metrics::SimilarityReport;
use crate::render::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSize {
    pub width: usize,
    pub height: usize,
}

/// One detected region with its room position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionRecord {
    pub id: String,
    pub label: u32,
    pub aabb: BoundingBox,
    /// Hull vertices; empty when the region's contour is collinear.
    pub polygon: Vec<crate::geometry::Point>,
    pub depth: f64,
    pub area: u64,
    pub position: Position,
}

impl RegionRecord {
    pub fn new(region: &Region, image: ImageSize, mapping: &MappingConfig) -> Result<Self> {
        let position = crate::geometry::map_to_room(
            &region.aabb,
            region.depth,
            (image.width, image.height),
            mapping,
        )?;
        Ok(RegionRecord {
            id: region.id.clone(),
            label: region.label,
            aabb: region.aabb,
            polygon: region
                .polygon
                .as_ref()
                .map(|p: &BoundingPolygon| p.vertices.clone())
                .unwrap_or_default(),
            depth: region.depth,
            area: region.area,
            position,
        })
    }
}

/// Output of region detection for one image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionsDocument {
    pub image: ImageSize,
    pub regions: Vec<RegionRecord>,
}

impl RegionsDocument {
    pub fn from_regions(
        regions: &[Region],
        image: ImageSize,
        mapping: &MappingConfig,
    ) -> Result<Self> {
        Ok(RegionsDocument {
            image,
            regions: regions
                .iter()
                .map(|r| RegionRecord::new(r, image, mapping))
                .collect::<Result<_>>()?,
        })
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value)
        .map_err(|e| Error::io(path, std::io::Error::other(e)))?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Parses JSON, reporting the path of the first offending field on failure.
pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut de = serde_json::Deserializer::from_reader(BufReader::new(file));
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_io() {
            return Error::io(path, std::io::Error::other(inner));
        }
        Error::Schema {
            path: path.to_path_buf(),
            field,
            message: inner.to_string(),
        }
    })
}

pub fn write_regions_json(doc: &RegionsDocument, path: impl AsRef<Path>) -> Result<()> {
    write_json(doc, path)
}

pub fn read_regions_json(path: impl AsRef<Path>) -> Result<RegionsDocument> {
    read_json(path)
}

pub fn write_report_json(report: &SimilarityReport, path: impl AsRef<Path>) -> Result<()> {
    write_json(report, path)
}
