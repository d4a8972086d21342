use super::MonoClip;
use crate::error::{Error, Result};

/// Zero crossings of the sinc kernel on each side, at the output bandwidth.
const ZERO_CROSSINGS: f64 = 24.0;
/// Passband edge as a fraction of the lower Nyquist frequency.
const ROLLOFF: f64 = 0.95;
const KAISER_BETA: f64 = 8.0;

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Kaiser-windowed sinc interpolation.
///
/// Output length is `round(len * target / source)`; the clip is returned
/// unchanged when the rates already match. Each output sample is normalized
/// by the sum of its kernel taps (including taps that fall outside the
/// clip), so a constant input stays constant away from the edges.
pub fn resample(clip: &MonoClip, target_rate: u32) -> Result<MonoClip> {
    if target_rate == 0 {
        return Err(Error::InvalidInput(
            "target sample rate must be positive".into(),
        ));
    }
    let source_rate = clip.sample_rate;
    if source_rate == target_rate {
        return Ok(clip.clone());
    }

    let (src, dst) = (source_rate as u64, target_rate as u64);
    let ratio = dst as f64 / src as f64;
    let cutoff = ratio.min(1.0) * ROLLOFF;
    let half_width = (ZERO_CROSSINGS / cutoff).ceil() as i64;
    let out_len = ((clip.len() as f64 * ratio).round() as usize).max(1);

    // Output sample m sits at input position m * src / dst. The fractional
    // part cycles through dst / gcd phases; kernels are cached per phase.
    let g = gcd(src, dst);
    let (step, phases) = (src / g, dst / g);
    let mut kernels: Vec<Option<Vec<f64>>> = vec![None; phases as usize];
    let i0_beta = bessel_i0(KAISER_BETA);
    let kernel_for = |phase: u64| -> Vec<f64> {
        let frac = phase as f64 / phases as f64;
        let mut taps: Vec<f64> = (-half_width + 1..=half_width)
            .map(|k| {
                let x = frac - k as f64;
                let r = x / half_width as f64;
                if r.abs() >= 1.0 {
                    return 0.0;
                }
                let window = bessel_i0(KAISER_BETA * (1.0 - r * r).sqrt()) / i0_beta;
                cutoff * sinc(cutoff * x) * window
            })
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        taps
    };

    let input = &clip.samples;
    let n = input.len() as i64;
    let samples = (0..out_len as u64)
        .map(|m| {
            let pos = m * step;
            let center = (pos / phases) as i64;
            let phase = pos % phases;
            let kernel = kernels[phase as usize].get_or_insert_with(|| kernel_for(phase));
            kernel
                .iter()
                .zip(center - half_width + 1..)
                .filter(|&(_, k)| (0..n).contains(&k))
                .map(|(t, k)| t * input[k as usize])
                .sum()
        })
        .collect();
    MonoClip::new(samples, target_rate)
}
