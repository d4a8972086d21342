use super::spectrum::magnitude_frames;
use super::{FeatureKind, FeatureSequence, MetricParams};
use crate::error::Result;
use crate::render::MonoClip;

fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Triangular mel filters over `n_fft / 2 + 1` bins, spanning 0 Hz to Nyquist
/// on the HTK mel scale. Weights are evaluated at exact bin frequencies.
pub fn mel_filterbank(n_mels: usize, n_fft: usize, sample_rate: u32) -> Vec<Vec<f64>> {
    let n_bins = n_fft / 2 + 1;
    let top = hz_to_mel(sample_rate as f64 / 2.0);
    let edges: Vec<f64> = (0..n_mels + 2)
        .map(|i| mel_to_hz(top * i as f64 / (n_mels + 1) as f64))
        .collect();
    let bin_hz = sample_rate as f64 / n_fft as f64;
    (0..n_mels)
        .map(|m| {
            let (lo, mid, hi) = (edges[m], edges[m + 1], edges[m + 2]);
            (0..n_bins)
                .map(|k| {
                    let f = k as f64 * bin_hz;
                    if f <= lo || f >= hi {
                        0.0
                    } else if f <= mid {
                        (f - lo) / (mid - lo)
                    } else {
                        (hi - f) / (hi - mid)
                    }
                })
                .collect()
        })
        .collect()
}

/// Orthonormal DCT-II, first `n_out` coefficients.
fn dct2(input: &[f64], n_out: usize) -> Vec<f64> {
    let n = input.len() as f64;
    (0..n_out)
        .map(|k| {
            let scale = if k == 0 {
                (1.0 / n).sqrt()
            } else {
                (2.0 / n).sqrt()
            };
            scale
                * input
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        x * (std::f64::consts::PI * k as f64 * (2.0 * i as f64 + 1.0) / (2.0 * n))
                            .cos()
                    })
                    .sum::<f64>()
        })
        .collect()
}

/// MFCCs: Hann-windowed frames, power spectrum, mel energies, floored log,
/// orthonormal DCT-II. No padding, so a clip of `N` samples yields
/// `1 + (N - frame_length) / hop_length` frames.
pub fn mfcc(clip: &MonoClip, params: &MetricParams) -> Result<FeatureSequence> {
    params.check_clip(clip, params.frame_length)?;
    let bank = mel_filterbank(params.n_mels, params.mfcc_n_fft, params.sample_rate);
    let frames = magnitude_frames(
        &clip.samples,
        params.frame_length,
        params.hop_length,
        params.mfcc_n_fft,
    )
    .into_iter()
    .map(|mag| {
        let log_mel: Vec<f64> = bank
            .iter()
            .map(|filter| {
                let e: f64 = filter.iter().zip(&mag).map(|(w, m)| w * m * m).sum();
                e.max(params.log_floor).ln()
            })
            .collect();
        dct2(&log_mel, params.n_mfcc)
    })
    .collect();
    FeatureSequence::new(frames, params.frame_rate(), FeatureKind::Mfcc)
}
