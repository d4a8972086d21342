use super::spectrum::magnitude_frames;
use super::{mean_cosine, FeatureKind, FeatureSequence, MetricParams};
use crate::error::Result;
use crate::render::MonoClip;

/// Pitch class (C = 0 ... B = 11) of the semitone nearest to `hz`.
fn pitch_class(hz: f64, tuning_hz: f64) -> usize {
    let midi = 69.0 + 12.0 * (hz / tuning_hz).log2();
    (midi.round() as i64).rem_euclid(12) as usize
}

/// 12-bin chroma: STFT power of every bin at or above `chroma_fmin`, summed
/// into the pitch class of its centre frequency.
pub fn chroma(clip: &MonoClip, params: &MetricParams) -> Result<FeatureSequence> {
    params.check_clip(clip, params.spectrum_window)?;
    let n_fft = params.spectrum_window;
    let bin_hz = params.sample_rate as f64 / n_fft as f64;
    let classes: Vec<Option<usize>> = (0..n_fft / 2 + 1)
        .map(|k| {
            let f = k as f64 * bin_hz;
            (f >= params.chroma_fmin).then(|| pitch_class(f, params.tuning_hz))
        })
        .collect();
    let frames = magnitude_frames(&clip.samples, n_fft, params.hop_length, n_fft)
        .into_iter()
        .map(|mag| {
            let mut bins = vec![0.0; 12];
            for (m, class) in mag.iter().zip(&classes) {
                if let Some(c) = class {
                    bins[*c] += m * m;
                }
            }
            bins
        })
        .collect();
    FeatureSequence::new(frames, params.frame_rate(), FeatureKind::Chroma)
}

/// Mean frame-wise cosine similarity of the two chromagrams.
pub fn chroma_similarity(a: &MonoClip, b: &MonoClip, params: &MetricParams) -> Result<f64> {
    Ok(mean_cosine(&chroma(a, params)?, &chroma(b, params)?))
}
