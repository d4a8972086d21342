//! Loading and saving: PNG masks and depth maps, WAV clips and renders, and
//! the JSON scene, region and report documents.

mod image;
mod json;
mod scene;
mod wav;

pub use self::image::{load_depth, load_mask, save_depth_png, save_mask_png};
pub use self::json::{
    read_json, read_regions_json, write_json, write_regions_json, write_report_json, ImageSize,
    RegionRecord, RegionsDocument,
};
pub use self::scene::{
    load_scene, load_scene_with_defaults, save_scene, Geometry, RegionSpec, RenderOverrides,
    RenderParams, SceneDescription,
};
pub use self::wav::{
    load_wav, load_wav_downmixed, read_multichannel_wav, write_mono_wav, write_multichannel_wav,
    OutputFormat,
};
