use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::json::{read_json, write_json, ImageSize, RegionsDocument};
use super::wav::{load_wav, OutputFormat};
use crate::error::{Error, Result};
use crate::geometry::{map_to_room, sample_depth, BoundingBox, MappingConfig};
use crate::render::{resample, RoomConfig, SourcePlacement};
use crate::DEFAULT_SAMPLE_RATE;

/// Fully resolved render parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderParams {
    pub sample_rate: u32,
    pub speed_of_sound: f64,
    pub attenuation_clamp: f64,
    pub fractional_delay: bool,
    pub lfe_lowpass: bool,
    pub output_format: OutputFormat,
}

impl Default for RenderParams {
    fn default() -> Self {
        RenderParams {
            sample_rate: DEFAULT_SAMPLE_RATE,
            speed_of_sound: 343.0,
            attenuation_clamp: 1.0,
            fractional_delay: false,
            lfe_lowpass: false,
            output_format: OutputFormat::F32,
        }
    }
}

impl RenderParams {
    /// Room for an image of the given size with these parameters.
    pub fn room(&self, image: ImageSize) -> RoomConfig {
        RoomConfig {
            speed_of_sound: self.speed_of_sound,
            sample_rate: self.sample_rate,
            min_distance: self.attenuation_clamp,
            fractional_delay: self.fractional_delay,
            lfe_lowpass: self.lfe_lowpass,
            ..RoomConfig::for_image(image.width, image.height)
        }
    }
}

/// A partially specified render block (scene file, config file or command
/// line); absent keys fall back to a base.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderOverrides {
    pub sample_rate: Option<u32>,
    pub speed_of_sound: Option<f64>,
    pub attenuation_clamp: Option<f64>,
    pub fractional_delay: Option<bool>,
    pub lfe_lowpass: Option<bool>,
    pub output_format: Option<OutputFormat>,
}

impl RenderOverrides {
    pub fn resolve(self, base: &RenderParams) -> RenderParams {
        RenderParams {
            sample_rate: self.sample_rate.unwrap_or(base.sample_rate),
            speed_of_sound: self.speed_of_sound.unwrap_or(base.speed_of_sound),
            attenuation_clamp: self.attenuation_clamp.unwrap_or(base.attenuation_clamp),
            fractional_delay: self.fractional_delay.unwrap_or(base.fractional_delay),
            lfe_lowpass: self.lfe_lowpass.unwrap_or(base.lfe_lowpass),
            output_format: self.output_format.unwrap_or(base.output_format),
        }
    }

    pub fn explicit(p: &RenderParams) -> Self {
        RenderOverrides {
            sample_rate: Some(p.sample_rate),
            speed_of_sound: Some(p.speed_of_sound),
            attenuation_clamp: Some(p.attenuation_clamp),
            fractional_delay: Some(p.fractional_delay),
            lfe_lowpass: Some(p.lfe_lowpass),
            output_format: Some(p.output_format),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionEntry {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aabb: Option<BoundingBox>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mask: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth_map: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<f64>,
    audio: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gain: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    image: ImageSize,
    regions: Vec<RegionEntry>,
    #[serde(default)]
    render: RenderOverrides,
}

/// Where a region sits in the image.
#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Explicit box; the region's `depth` is required.
    Box(BoundingBox),
    /// Binary mask of the region (every non-zero pixel belongs to it). Depth
    /// comes from `depth_map` (median inside the mask's box) unless the region
    /// gives `depth` directly.
    Mask {
        mask: PathBuf,
        depth_map: Option<PathBuf>,
    },
}

/// One source in a scene. Paths are kept as written, relative to the
/// scene's directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSpec {
    pub id: String,
    pub geometry: Geometry,
    pub depth: Option<f64>,
    pub audio: PathBuf,
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneDescription {
    pub image: ImageSize,
    pub regions: Vec<RegionSpec>,
    pub render: RenderParams,
    /// Directory that relative paths resolve against.
    pub base_dir: PathBuf,
}

fn schema(path: &Path, field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_path_buf(),
        field: field.into(),
        message: message.into(),
    }
}

impl SceneDescription {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn from_file(
        file: SceneFile,
        path: &Path,
        base_dir: PathBuf,
        defaults: &RenderParams,
    ) -> Result<Self> {
        if file.image.width == 0 || file.image.height == 0 {
            return Err(schema(path, "image", "width and height must be positive"));
        }
        if file.regions.is_empty() {
            return Err(schema(path, "regions", "at least one region is required"));
        }
        let render = file.render.resolve(defaults);
        if render.sample_rate == 0 {
            return Err(schema(path, "render.sample_rate", "must be positive"));
        }
        if !(render.speed_of_sound.is_finite() && render.speed_of_sound > 0.0) {
            return Err(schema(path, "render.speed_of_sound", "must be positive"));
        }
        if !(render.attenuation_clamp.is_finite() && render.attenuation_clamp > 0.0) {
            return Err(schema(path, "render.attenuation_clamp", "must be positive"));
        }

        let mut ids = HashSet::new();
        let mut regions = Vec::with_capacity(file.regions.len());
        for (i, r) in file.regions.into_iter().enumerate() {
            let field = |name: &str| format!("regions[{i}].{name}");
            if !ids.insert(r.id.clone()) {
                return Err(schema(
                    path,
                    field("id"),
                    format!("duplicate region id `{}`", r.id),
                ));
            }
            if let Some(d) = r.depth {
                if !(0.0..=1.0).contains(&d) {
                    return Err(schema(path, field("depth"), format!("{d} outside [0, 1]")));
                }
            }
            let gain = r.gain.unwrap_or(1.0);
            if !(gain.is_finite() && gain >= 0.0) {
                return Err(schema(
                    path,
                    field("gain"),
                    format!("{gain} must be non-negative"),
                ));
            }
            let geometry = match (r.aabb, r.mask) {
                (Some(_), Some(_)) => {
                    return Err(schema(
                        path,
                        field("aabb"),
                        "give either `aabb` or `mask`, not both",
                    ))
                }
                (None, None) => {
                    return Err(schema(
                        path,
                        field("aabb"),
                        "one of `aabb` or `mask` is required",
                    ))
                }
                (Some(b), None) => {
                    if r.depth.is_none() {
                        return Err(schema(
                            path,
                            field("depth"),
                            "required with an explicit `aabb`",
                        ));
                    }
                    if r.depth_map.is_some() {
                        return Err(schema(
                            path,
                            field("depth_map"),
                            "only valid together with `mask`",
                        ));
                    }
                    if !b.within(file.image.width, file.image.height) {
                        return Err(schema(path, field("aabb"), "box extends outside the image"));
                    }
                    Geometry::Box(b)
                }
                (None, Some(mask)) => {
                    if r.depth.is_none() && r.depth_map.is_none() {
                        return Err(schema(
                            path,
                            field("depth_map"),
                            "`mask` needs `depth_map` or `depth`",
                        ));
                    }
                    Geometry::Mask {
                        mask,
                        depth_map: r.depth_map,
                    }
                }
            };
            regions.push(RegionSpec {
                id: r.id,
                geometry,
                depth: r.depth,
                audio: r.audio,
                gain,
            });
        }

        let scene = SceneDescription {
            image: file.image,
            regions,
            render,
            base_dir,
        };
        for r in &scene.regions {
            let mut referenced = vec![&r.audio];
            if let Geometry::Mask { mask, depth_map } = &r.geometry {
                referenced.push(mask);
                referenced.extend(depth_map);
            }
            for p in referenced {
                let resolved = scene.resolve(p);
                if !resolved.is_file() {
                    return Err(Error::MissingFile(resolved));
                }
            }
        }
        Ok(scene)
    }

    fn to_file(&self) -> SceneFile {
        SceneFile {
            image: self.image,
            regions: self
                .regions
                .iter()
                .map(|r| {
                    let (aabb, mask, depth_map) = match &r.geometry {
                        Geometry::Box(b) => (Some(*b), None, None),
                        Geometry::Mask { mask, depth_map } => {
                            (None, Some(mask.clone()), depth_map.clone())
                        }
                    };
                    RegionEntry {
                        id: r.id.clone(),
                        aabb,
                        mask,
                        depth_map,
                        depth: r.depth,
                        audio: r.audio.clone(),
                        gain: Some(r.gain),
                    }
                })
                .collect(),
            render: RenderOverrides::explicit(&self.render),
        }
    }

    /// Builds a scene from detected regions, pairing each region with a clip
    /// by region id, falling back to its label. Regions without a clip are
    /// returned separately and left out of the scene.
    pub fn from_regions(
        doc: &RegionsDocument,
        clips: &BTreeMap<String, PathBuf>,
        render: RenderParams,
        base_dir: PathBuf,
    ) -> (Option<SceneDescription>, Vec<String>) {
        let mut skipped = Vec::new();
        let regions: Vec<RegionSpec> = doc
            .regions
            .iter()
            .filter_map(|r| {
                let clip = clips.get(&r.id).or_else(|| clips.get(&r.label.to_string()));
                match clip {
                    Some(audio) => Some(RegionSpec {
                        id: r.id.clone(),
                        geometry: Geometry::Box(r.aabb),
                        depth: Some(r.depth),
                        audio: audio.clone(),
                        gain: 1.0,
                    }),
                    None => {
                        skipped.push(r.id.clone());
                        None
                    }
                }
            })
            .collect();
        let scene = (!regions.is_empty()).then_some(SceneDescription {
            image: doc.image,
            regions,
            render,
            base_dir,
        });
        (scene, skipped)
    }

    /// Loads every clip, resamples it to the render rate, and positions each
    /// region in the room.
    pub fn placements(&self, mapping: &MappingConfig) -> Result<Vec<SourcePlacement>> {
        mapping.validate()?;
        let dims = (self.image.width, self.image.height);
        self.regions
            .iter()
            .map(|r| {
                let clip = load_wav(self.resolve(&r.audio))?;
                let clip = resample(&clip, self.render.sample_rate)?;
                let (bbox, depth) = match &r.geometry {
                    Geometry::Box(b) => (*b, r.depth.expect("validated at load")),
                    Geometry::Mask { mask, depth_map } => {
                        let mask_path = self.resolve(mask);
                        let mask = super::load_mask(&mask_path)?;
                        if mask.dims() != dims {
                            return Err(Error::DimensionMismatch {
                                expected: dims,
                                found: mask.dims(),
                            });
                        }
                        let bbox = foreground_box(&mask).ok_or_else(|| {
                            Error::InvalidInput(format!(
                                "{}: mask has no foreground pixels",
                                mask_path.display()
                            ))
                        })?;
                        let depth = match (r.depth, depth_map) {
                            (Some(d), _) => d,
                            (None, Some(dm)) => {
                                let dm = super::load_depth(self.resolve(dm))?;
                                if dm.dims() != dims {
                                    return Err(Error::DimensionMismatch {
                                        expected: dims,
                                        found: dm.dims(),
                                    });
                                }
                                sample_depth(&dm, &bbox)?
                            }
                            (None, None) => unreachable!("validated at load"),
                        };
                        (bbox, depth)
                    }
                };
                let position = map_to_room(&bbox, depth, dims, mapping)?;
                Ok(SourcePlacement::new(position, clip).with_gain(r.gain))
            })
            .collect()
    }
}

fn foreground_box(mask: &crate::geometry::Mask) -> Option<BoundingBox> {
    let mut bounds: Option<BoundingBox> = None;
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.get(x, y) != 0 {
                let (x, y) = (x as i32, y as i32);
                bounds = Some(match bounds {
                    None => BoundingBox {
                        x_min: x,
                        x_max: x,
                        y_min: y,
                        y_max: y,
                    },
                    Some(b) => BoundingBox {
                        x_min: b.x_min.min(x),
                        x_max: b.x_max.max(x),
                        y_min: b.y_min.min(y),
                        y_max: b.y_max.max(y),
                    },
                });
            }
        }
    }
    bounds
}

/// Loads and validates a scene, filling absent render parameters from
/// `defaults`.
pub fn load_scene_with_defaults(
    path: impl AsRef<Path>,
    defaults: &RenderParams,
) -> Result<SceneDescription> {
    let path = path.as_ref();
    let file: SceneFile = read_json(path)?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    SceneDescription::from_file(file, path, base_dir, defaults)
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<SceneDescription> {
    load_scene_with_defaults(path, &RenderParams::default())
}

/// Writes the scene with every render parameter spelled out. Paths are
/// written as stored, so they stay relative to the scene's directory.
pub fn save_scene(scene: &SceneDescription, path: impl AsRef<Path>) -> Result<()> {
    write_json(&scene.to_file(), path)
}
