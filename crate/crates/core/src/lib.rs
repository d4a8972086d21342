//! Spatial audio toolkit: place sound sources from a segmentation mask and a
//! monocular depth map, render them to 5.1 surround with direct-path
//! propagation, and score audio pairs with frame-based similarity metrics.
//!
//! The crate is organised as four stages:
//!
//! - [`geometry`]: contours, convex hulls, bounding boxes, depth sampling and
//!   the image-to-room mapping.
//! - [`render`]: delay/attenuation per source-microphone pair, the 6-channel
//!   mix, resampling and peak normalization.
//! - [`metrics`]: MFCC + DTW, zero-crossing rate, chroma and spectral
//!   contrast similarity.
//! - [`io`]: PNG/WAV/JSON loading and saving, scene descriptions.

pub mod error;
pub mod geometry;
pub mod io;
pub mod metrics;
pub mod render;

pub use error::{Error, ErrorKind, Result};
pub use geometry::{
    BoundingBox, BoundingPolygon, Contour, DepthAxis, DepthMap, MappingConfig, Mask, Point, Region,
};
pub use metrics::{AudioInput, FeatureKind, FeatureSequence, MetricParams, SimilarityReport};
pub use render::{
    Channel, MicArray, MonoClip, MultichannelAudio, Position, RoomConfig, SourcePlacement,
};

/// Sample rate used throughout the pipeline unless overridden.
pub const DEFAULT_SAMPLE_RATE: u32 = 16_000;
