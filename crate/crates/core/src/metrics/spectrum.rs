use rustfft::{num_complex::Complex, FftPlanner};

/// Periodic Hann window.
pub fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * n as f64 / len as f64).cos())
        .collect()
}

/// Number of whole frames; callers ensure `signal_len >= frame_len`.
pub(crate) fn frame_count(signal_len: usize, frame_len: usize, hop: usize) -> usize {
    1 + (signal_len - frame_len) / hop
}

/// Magnitude spectra (`n_fft / 2 + 1` bins) of Hann-windowed frames,
/// zero-padded to `n_fft`.
pub(crate) fn magnitude_frames(
    signal: &[f64],
    frame_len: usize,
    hop: usize,
    n_fft: usize,
) -> Vec<Vec<f64>> {
    let window = hann(frame_len);
    let fft = FftPlanner::new().plan_fft_forward(n_fft);
    let mut buf = vec![Complex::new(0.0, 0.0); n_fft];
    (0..frame_count(signal.len(), frame_len, hop))
        .map(|t| {
            let frame = &signal[t * hop..t * hop + frame_len];
            buf.iter_mut().for_each(|c| *c = Complex::new(0.0, 0.0));
            for ((c, s), w) in buf.iter_mut().zip(frame).zip(&window) {
                c.re = s * w;
            }
            fft.process(&mut buf);
            buf[..n_fft / 2 + 1].iter().map(|c| c.norm()).collect()
        })
        .collect()
}
