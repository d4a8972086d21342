use super::spectrum::magnitude_frames;
use super::{mean_cosine, FeatureKind, FeatureSequence, MetricParams};
use crate::error::Result;
use crate::render::MonoClip;

/// Band edges in Hz: `[0, f, 2f, ..., f * 2^(n-1), nyquist]`.
fn band_edges(params: &MetricParams) -> Vec<f64> {
    let mut edges = vec![0.0];
    edges.extend((0..params.contrast_bands).map(|i| params.contrast_fmin * 2f64.powi(i as i32)));
    edges.push(params.sample_rate as f64 / 2.0);
    edges
}

/// Spectral contrast per frame: for each band, the log of the mean of the
/// top quantile of sorted STFT magnitudes minus the log of the mean of the
/// bottom quantile. Bands are half-open except the last, which includes
/// Nyquist.
pub fn spectral_contrast(clip: &MonoClip, params: &MetricParams) -> Result<FeatureSequence> {
    params.check_clip(clip, params.spectrum_window)?;
    let n_fft = params.spectrum_window;
    let bin_hz = params.sample_rate as f64 / n_fft as f64;
    let n_bins = n_fft / 2 + 1;
    let edges = band_edges(params);
    let n_bands = edges.len() - 1;
    let ranges: Vec<std::ops::Range<usize>> = (0..n_bands)
        .map(|b| {
            let start = (0..n_bins)
                .find(|&k| k as f64 * bin_hz >= edges[b])
                .unwrap_or(n_bins);
            let end = if b + 1 == n_bands {
                n_bins
            } else {
                (0..n_bins)
                    .find(|&k| k as f64 * bin_hz >= edges[b + 1])
                    .unwrap_or(n_bins)
            };
            start..end
        })
        .collect();

    let floor = params.log_floor;
    let frames = magnitude_frames(&clip.samples, n_fft, params.hop_length, n_fft)
        .into_iter()
        .map(|mag| {
            ranges
                .iter()
                .map(|r| {
                    let mut band = mag[r.clone()].to_vec();
                    if band.is_empty() {
                        return 0.0;
                    }
                    band.sort_by(f64::total_cmp);
                    let take =
                        ((params.contrast_quantile * band.len() as f64).round() as usize).max(1);
                    let valley = band[..take].iter().sum::<f64>() / take as f64;
                    let peak = band[band.len() - take..].iter().sum::<f64>() / take as f64;
                    peak.max(floor).ln() - valley.max(floor).ln()
                })
                .collect()
        })
        .collect();
    FeatureSequence::new(frames, params.frame_rate(), FeatureKind::SpectralContrast)
}

/// Mean frame-wise cosine similarity of the two contrast sequences.
pub fn spectral_contrast_similarity(
    a: &MonoClip,
    b: &MonoClip,
    params: &MetricParams,
) -> Result<f64> {
    Ok(mean_cosine(
        &spectral_contrast(a, params)?,
        &spectral_contrast(b, params)?,
    ))
}
