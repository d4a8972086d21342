use std::path::{Path, PathBuf};

use serde::Deserialize;
use surround_core::geometry::DEFAULT_MIN_AREA_FRAC;
use surround_core::io::{read_json, RenderOverrides, RenderParams};
use surround_core::{MappingConfig, MetricParams};

use crate::error::CliResult;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "SURROUND_CONFIG";

/// Optional JSON config file. Every key mirrors a command-line flag and sits
/// below it (and below the scene file) in precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub render: RenderOverrides,
    #[serde(default)]
    pub mapping: MappingConfig,
    #[serde(default)]
    pub metrics: MetricParams,
    pub min_area: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        match path {
            Some(p) => {
                log::info!("config={}", p.display());
                Ok(read_json(p)?)
            }
            None => Ok(ConfigFile::default()),
        }
    }

    pub fn render_defaults(&self) -> RenderParams {
        self.render.resolve(&RenderParams::default())
    }

    pub fn min_area(&self) -> f64 {
        self.min_area.unwrap_or(DEFAULT_MIN_AREA_FRAC)
    }
}

/// Resolves a path relative to a manifest's directory.
pub fn relative_to(base: &Path, p: &str) -> PathBuf {
    let p = Path::new(p);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}
