use super::spectrum::frame_count;
use super::{FeatureKind, FeatureSequence, MetricParams};
use crate::error::Result;
use crate::render::MonoClip;

/// Fraction of adjacent sample pairs with strictly opposite signs. Zeros
/// neither start nor end a crossing, so the rate is invariant under negation.
pub fn frame_zcr(frame: &[f64]) -> f64 {
    if frame.len() < 2 {
        return 0.0;
    }
    let crossings = frame
        .windows(2)
        .filter(|w| (w[0] > 0.0 && w[1] < 0.0) || (w[0] < 0.0 && w[1] > 0.0))
        .count();
    crossings as f64 / (frame.len() - 1) as f64
}

/// Per-frame zero-crossing rate over `frame_length` / `hop_length` frames.
pub fn zcr(clip: &MonoClip, params: &MetricParams) -> Result<FeatureSequence> {
    params.check_clip(clip, params.frame_length)?;
    let (len, hop) = (params.frame_length, params.hop_length);
    let frames = (0..frame_count(clip.len(), len, hop))
        .map(|t| vec![frame_zcr(&clip.samples[t * hop..t * hop + len])])
        .collect();
    FeatureSequence::new(frames, params.frame_rate(), FeatureKind::Zcr)
}

/// `1 - mean |zcr_a - zcr_b|` over the overlapping frames.
pub fn zcr_similarity(a: &MonoClip, b: &MonoClip, params: &MetricParams) -> Result<f64> {
    let (za, zb) = (zcr(a, params)?, zcr(b, params)?);
    let n = za.len().min(zb.len());
    let diff: f64 = za
        .frames
        .iter()
        .zip(&zb.frames)
        .map(|(x, y)| (x[0] - y[0]).abs())
        .sum();
    Ok(1.0 - diff / n as f64)
}
