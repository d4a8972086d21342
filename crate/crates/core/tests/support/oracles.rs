//! Straight-line reference implementations used to check the optimized
//! code paths. Nothing here calls into the implementation under test.

#![allow(dead_code, clippy::needless_range_loop)]

pub struct OracleSource {
    pub position: [f64; 3],
    pub samples: Vec<f64>,
    pub gain: f64,
}

/// Direct evaluation of the 6-channel direct-path sum, one output sample at a
/// time: `out[ch][n] = sum_i gain_i / max(d, clamp) * x_i[n - round(d / c * fs)]`.
pub fn brute_force_render(
    sources: &[OracleSource],
    mics: &[[f64; 3]; 6],
    speed_of_sound: f64,
    sample_rate: f64,
    clamp: f64,
) -> Vec<Vec<f64>> {
    let dist = |a: [f64; 3], b: [f64; 3]| {
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    };
    let mut len = 0usize;
    for s in sources {
        for m in mics {
            let k = (dist(s.position, *m) / speed_of_sound * sample_rate).round() as usize;
            len = len.max(k + s.samples.len());
        }
    }
    let mut out = vec![vec![0.0; len]; 6];
    for (ch, m) in mics.iter().enumerate() {
        for n in 0..len {
            let mut acc = 0.0;
            for s in sources {
                let d = dist(s.position, *m);
                let k = (d / speed_of_sound * sample_rate).round() as usize;
                if n >= k && n - k < s.samples.len() {
                    acc += s.gain * (1.0 / if d > clamp { d } else { clamp }) * s.samples[n - k];
                }
            }
            out[ch][n] = acc;
        }
    }
    out
}

fn frame_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

/// Exhaustive search over every monotone warping path from the first to the
/// last frame pair. Returns the minimum (cost, length) in lexicographic order.
pub fn enumerate_dtw(a: &[Vec<f64>], b: &[Vec<f64>]) -> (f64, usize) {
    fn walk(
        a: &[Vec<f64>],
        b: &[Vec<f64>],
        i: usize,
        j: usize,
        cost: f64,
        len: usize,
        best: &mut (f64, usize),
    ) {
        let cost = cost + frame_distance(&a[i], &b[j]);
        let len = len + 1;
        if i + 1 == a.len() && j + 1 == b.len() {
            if cost < best.0 || (cost == best.0 && len < best.1) {
                *best = (cost, len);
            }
            return;
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, cost, len, best);
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, cost, len, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, cost, len, best);
        }
    }
    let mut best = (f64::INFINITY, usize::MAX);
    walk(a, b, 0, 0, 0.0, 0, &mut best);
    best
}

/// Spectral contrast similarity by naive DFT: 2048-sample Hann frames every
/// 160 samples, bands split at 200 * 2^k Hz up to 6400 Hz, top/bottom 20 %
/// means of sorted magnitudes, natural-log difference, mean frame cosine.
pub fn naive_contrast_similarity(a: &[f64], b: &[f64]) -> f64 {
    const N: usize = 2048;
    const HOP: usize = 160;
    const FS: f64 = 16_000.0;
    let cos_t: Vec<f64> = (0..N)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / N as f64).cos())
        .collect();
    let sin_t: Vec<f64> = (0..N)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / N as f64).sin())
        .collect();
    let window: Vec<f64> = (0..N).map(|i| 0.5 - 0.5 * cos_t[i]).collect();
    let edges = [0.0, 200.0, 400.0, 800.0, 1600.0, 3200.0, 6400.0, 8000.0];

    let contrast = |x: &[f64]| -> Vec<Vec<f64>> {
        let frames = 1 + (x.len() - N) / HOP;
        (0..frames)
            .map(|t| {
                let seg: Vec<f64> = (0..N).map(|i| x[t * HOP + i] * window[i]).collect();
                let mags: Vec<f64> = (0..=N / 2)
                    .map(|k| {
                        let (mut re, mut im) = (0.0, 0.0);
                        for (i, v) in seg.iter().enumerate() {
                            let idx = (k * i) % N;
                            re += v * cos_t[idx];
                            im -= v * sin_t[idx];
                        }
                        (re * re + im * im).sqrt()
                    })
                    .collect();
                (0..7)
                    .map(|band| {
                        let mut vals: Vec<f64> = mags
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| {
                                let f = *k as f64 * FS / N as f64;
                                f >= edges[band] && (f < edges[band + 1] || band == 6)
                            })
                            .map(|(_, m)| *m)
                            .collect();
                        vals.sort_by(|p, q| p.partial_cmp(q).unwrap());
                        let n = ((0.2 * vals.len() as f64).round() as usize).max(1);
                        let low: f64 = vals[..n].iter().sum::<f64>() / n as f64;
                        let high: f64 = vals[vals.len() - n..].iter().sum::<f64>() / n as f64;
                        high.max(1e-10).ln() - low.max(1e-10).ln()
                    })
                    .collect()
            })
            .collect()
    };

    let (ca, cb) = (contrast(a), contrast(b));
    let n = ca.len().min(cb.len());
    let mut total = 0.0;
    let mut counted = 0;
    for t in 0..n {
        let dot: f64 = ca[t].iter().zip(&cb[t]).map(|(p, q)| p * q).sum();
        let na = ca[t].iter().map(|p| p * p).sum::<f64>().sqrt();
        let nb = cb[t].iter().map(|q| q * q).sum::<f64>().sqrt();
        if na == 0.0 && nb == 0.0 {
            continue;
        }
        counted += 1;
        if na > 0.0 && nb > 0.0 {
            total += dot / (na * nb);
        }
    }
    total / counted as f64
}
