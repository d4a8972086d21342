//! Audio similarity metrics: MFCC sequences compared by DTW, and frame-wise
//! zero-crossing rate, chroma and spectral-contrast comparisons.
//!
//! All metrics expect 16 kHz mono input. Multichannel audio is downmixed by
//! unweighted channel mean before comparison. Frame-wise comparisons truncate
//! to the shorter frame sequence.

mod chroma;
mod contrast;
mod dtw;
mod mfcc;
mod spectrum;
mod zcr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::{MonoClip, MultichannelAudio};
use crate::DEFAULT_SAMPLE_RATE;

pub use chroma::{chroma, chroma_similarity};
pub use contrast::{spectral_contrast, spectral_contrast_similarity};
pub use dtw::{dtw_alignment, dtw_distance, Alignment};
pub use mfcc::{mel_filterbank, mfcc};
pub use spectrum::hann;
pub use zcr::{frame_zcr, zcr, zcr_similarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Mfcc,
    Chroma,
    SpectralContrast,
    Zcr,
}

/// `T x D` feature frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    pub frames: Vec<Vec<f64>>,
    /// Frames per second.
    pub frame_rate: f64,
    pub kind: FeatureKind,
}

impl FeatureSequence {
    pub fn new(frames: Vec<Vec<f64>>, frame_rate: f64, kind: FeatureKind) -> Result<Self> {
        let dim = frames.first().map(Vec::len).ok_or_else(|| {
            Error::InvalidInput("feature sequence needs at least one frame".into())
        })?;
        if dim == 0 || frames.iter().any(|f| f.len() != dim) {
            return Err(Error::InvalidInput(
                "feature frames must share one positive dimension".into(),
            ));
        }
        Ok(FeatureSequence {
            frames,
            frame_rate,
            kind,
        })
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.frames.first().map_or(0, Vec::len)
    }
}

/// Analysis parameters shared by all metrics. Echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricParams {
    pub sample_rate: u32,
    /// Short-time frame (MFCC, ZCR), samples.
    pub frame_length: usize,
    /// Hop between frames for every metric, samples.
    pub hop_length: usize,
    pub mfcc_n_fft: usize,
    pub n_mels: usize,
    pub n_mfcc: usize,
    /// Lower clamp before taking logs.
    pub log_floor: f64,
    /// Analysis window for chroma and spectral contrast, samples.
    pub spectrum_window: usize,
    /// Lowest frequency folded into chroma, Hz.
    pub chroma_fmin: f64,
    /// Reference pitch for chroma bins, Hz.
    pub tuning_hz: f64,
    /// Lower edge of the first contrast octave, Hz.
    pub contrast_fmin: f64,
    /// Octave bands above `contrast_fmin`; one sub-band is added below it.
    pub contrast_bands: usize,
    pub contrast_quantile: f64,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            sample_rate: DEFAULT_SAMPLE_RATE,
            frame_length: 400,
            hop_length: 160,
            mfcc_n_fft: 512,
            n_mels: 40,
            n_mfcc: 13,
            log_floor: 1e-10,
            spectrum_window: 2048,
            chroma_fmin: 32.703_195_662_574_83,
            tuning_hz: 440.0,
            contrast_fmin: 200.0,
            contrast_bands: 6,
            contrast_quantile: 0.2,
        }
    }
}

impl MetricParams {
    // Negated comparisons so NaN is rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidInput(format!("metric parameters: {msg}")));
        if self.sample_rate == 0 {
            return bad("sample_rate must be positive");
        }
        if self.frame_length < 2 || self.hop_length == 0 || self.spectrum_window < 2 {
            return bad("frame_length and spectrum_window must be at least 2, hop_length positive");
        }
        if self.mfcc_n_fft < self.frame_length {
            return bad("mfcc_n_fft must be at least frame_length");
        }
        if self.n_mels == 0 || self.n_mfcc == 0 || self.n_mfcc > self.n_mels {
            return bad("need 0 < n_mfcc <= n_mels");
        }
        if !(self.log_floor > 0.0) {
            return bad("log_floor must be positive");
        }
        if !(self.chroma_fmin > 0.0 && self.tuning_hz > 0.0 && self.contrast_fmin > 0.0) {
            return bad("chroma_fmin, tuning_hz and contrast_fmin must be positive");
        }
        let nyquist = self.sample_rate as f64 / 2.0;
        if self.contrast_bands == 0
            || self.contrast_fmin * 2f64.powi(self.contrast_bands as i32 - 1) >= nyquist
        {
            return bad("contrast octave bands must start below the Nyquist frequency");
        }
        if !(self.contrast_quantile > 0.0 && self.contrast_quantile <= 0.5) {
            return bad("contrast_quantile must be in (0, 0.5]");
        }
        Ok(())
    }

    pub(crate) fn check_clip(&self, clip: &MonoClip, needed: usize) -> Result<()> {
        self.validate()?;
        if clip.sample_rate != self.sample_rate {
            return Err(Error::SampleRateMismatch {
                expected: self.sample_rate,
                found: clip.sample_rate,
            });
        }
        if clip.len() < needed {
            return Err(Error::TooShort {
                needed,
                got: clip.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn frame_rate(&self) -> f64 {
        self.sample_rate as f64 / self.hop_length as f64
    }
}

/// Mean over aligned frames of the cosine similarity. A frame pair where one
/// side has zero norm scores 0; pairs where both are zero are left out. No
/// scored frames means 0.
pub(crate) fn mean_cosine(a: &FeatureSequence, b: &FeatureSequence) -> f64 {
    let mut total = 0.0;
    let mut counted = 0usize;
    for (x, y) in a.frames.iter().zip(&b.frames) {
        let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let zx = nx <= f64::MIN_POSITIVE;
        let zy = ny <= f64::MIN_POSITIVE;
        match (zx, zy) {
            (true, true) => continue,
            (false, false) => {
                let dot: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
                total += (dot / (nx * ny)).clamp(-1.0, 1.0);
            }
            _ => {}
        }
        counted += 1;
    }
    if counted == 0 {
        0.0
    } else {
        total / counted as f64
    }
}

/// One side of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum AudioInput {
    Mono(MonoClip),
    Multichannel(MultichannelAudio),
}

impl AudioInput {
    pub fn to_mono(&self) -> Result<MonoClip> {
        match self {
            AudioInput::Mono(c) => Ok(c.clone()),
            AudioInput::Multichannel(m) => m.downmix(),
        }
    }
}

impl From<MonoClip> for AudioInput {
    fn from(c: MonoClip) -> Self {
        AudioInput::Mono(c)
    }
}

impl From<MultichannelAudio> for AudioInput {
    fn from(m: MultichannelAudio) -> Self {
        AudioInput::Multichannel(m)
    }
}

/// The four scores for one audio pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    /// Path-normalized DTW distance between MFCC sequences; lower is closer.
    pub mfcc_dtw: f64,
    pub zcr: f64,
    pub chroma: f64,
    pub spectral_contrast: f64,
    pub params: MetricParams,
}

/// Downmixes both sides to mono and runs all four metrics.
pub fn compare(a: &AudioInput, b: &AudioInput, params: &MetricParams) -> Result<SimilarityReport> {
    let (a, b) = (a.to_mono()?, b.to_mono()?);
    let mfcc_dtw = dtw_distance(&mfcc(&a, params)?, &mfcc(&b, params)?)?;
    Ok(SimilarityReport {
        mfcc_dtw,
        zcr: zcr_similarity(&a, &b, params)?,
        chroma: chroma_similarity(&a, &b, params)?,
        spectral_contrast: spectral_contrast_similarity(&a, &b, params)?,
        params: params.clone(),
    })
}
