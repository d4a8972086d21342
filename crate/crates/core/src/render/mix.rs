use super::filter::Biquad;
use super::{Channel, MicArray, MultichannelAudio, Position, RoomConfig, SourcePlacement};
use crate::error::{Error, Result};

/// Peak level after [`normalize`] scales a clipping render.
pub const NORMALIZED_PEAK: f64 = 0.99;

const LFE_CUTOFF_HZ: f64 = 120.0;

fn distance(a: Position, b: Position) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Propagation delay in seconds and distance attenuation `1 / max(d, clamp)`.
pub fn delay_and_attenuation(source: Position, mic: Position, cfg: &RoomConfig) -> (f64, f64) {
    let d = distance(source, mic);
    (d / cfg.speed_of_sound, 1.0 / d.max(cfg.min_distance))
}

fn check_inputs(placements: &[SourcePlacement], cfg: &RoomConfig) -> Result<()> {
    cfg.validate()?;
    if placements.is_empty() {
        return Err(Error::NoPlacements);
    }
    for (i, p) in placements.iter().enumerate() {
        if p.clip.sample_rate != cfg.sample_rate {
            return Err(Error::SampleRateMismatch {
                expected: cfg.sample_rate,
                found: p.clip.sample_rate,
            });
        }
        if p.position.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "source {i} position is not finite"
            )));
        }
        if !(p.gain.is_finite() && p.gain >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "source {i} gain must be non-negative, got {}",
                p.gain
            )));
        }
    }
    Ok(())
}

/// Delay of one source at one mic, split into whole samples and a fraction
/// in `[0, 1)`. Nearest-sample mode always has a zero fraction.
fn sample_delay(delay_s: f64, cfg: &RoomConfig) -> (usize, f64) {
    let exact = delay_s * cfg.sample_rate as f64;
    if cfg.fractional_delay {
        let whole = exact.floor();
        (whole as usize, exact - whole)
    } else {
        (exact.round() as usize, 0.0)
    }
}

/// The 6-channel direct-path mix before normalization:
/// `out[ch][n] = sum_i gain_i * alpha_{i,ch} * clip_i[n - delay_{i,ch}]`.
///
/// Output length is the latest end of any source at any mic. The optional
/// LFE low-pass is applied here.
pub fn render_direct(
    placements: &[SourcePlacement],
    mics: &MicArray,
    cfg: &RoomConfig,
) -> Result<MultichannelAudio> {
    check_inputs(placements, cfg)?;

    let taps: Vec<[(usize, f64, f64); 6]> = placements
        .iter()
        .map(|p| {
            Channel::ALL.map(|ch| {
                let (delay, alpha) = delay_and_attenuation(p.position, mics.position(ch), cfg);
                let (whole, frac) = sample_delay(delay, cfg);
                (whole, frac, p.gain * alpha)
            })
        })
        .collect();

    let len = placements
        .iter()
        .zip(&taps)
        .flat_map(|(p, t)| {
            t.iter()
                .map(move |&(whole, frac, _)| whole + p.clip.len() + usize::from(frac > 0.0))
        })
        .max()
        .unwrap_or(0);

    let channels = Channel::ALL.map(|ch| {
        let mut out = vec![0.0; len];
        for (p, t) in placements.iter().zip(&taps) {
            let (whole, frac, scale) = t[ch.index()];
            let dst = &mut out[whole..whole + p.clip.len()];
            if frac == 0.0 {
                for (o, s) in dst.iter_mut().zip(&p.clip.samples) {
                    *o += scale * s;
                }
            } else {
                let (near, far) = (scale * (1.0 - frac), scale * frac);
                for (o, s) in dst.iter_mut().zip(&p.clip.samples) {
                    *o += near * s;
                }
                let dst = &mut out[whole + 1..whole + 1 + p.clip.len()];
                for (o, s) in dst.iter_mut().zip(&p.clip.samples) {
                    *o += far * s;
                }
            }
        }
        if ch == Channel::LFE && cfg.lfe_lowpass {
            Biquad::butterworth_lowpass(LFE_CUTOFF_HZ, cfg.sample_rate as f64).process(&mut out);
        }
        out
    });

    Ok(MultichannelAudio::from_parts(channels, cfg.sample_rate))
}

/// Scales all channels jointly by `0.99 / peak` when the peak exceeds 1.0.
pub fn normalize(audio: MultichannelAudio) -> MultichannelAudio {
    let peak = audio.peak();
    if peak <= 1.0 {
        return audio;
    }
    let scale = NORMALIZED_PEAK / peak;
    let sample_rate = audio.sample_rate();
    let channels = audio
        .into_channels()
        .map(|c| c.into_iter().map(|s| s * scale).collect());
    MultichannelAudio::from_parts(channels, sample_rate)
}

/// [`render_direct`] followed by [`normalize`].
pub fn render(
    placements: &[SourcePlacement],
    mics: &MicArray,
    cfg: &RoomConfig,
) -> Result<MultichannelAudio> {
    render_direct(placements, mics, cfg).map(normalize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::MonoClip;
    use proptest::prelude::*;

    fn cfg() -> RoomConfig {
        RoomConfig::default()
    }

    fn impulse() -> MonoClip {
        MonoClip::new(vec![1.0], 16_000).unwrap()
    }

    #[test]
    fn delay_examples() {
        let (d, a) = delay_and_attenuation([343.0, 0.0, 0.0], [0.0; 3], &cfg());
        assert_eq!(d, 1.0);
        assert_eq!(a, 1.0 / 343.0);

        let (d, a) = delay_and_attenuation([5.0, 5.0, 5.0], [5.0, 5.0, 5.0], &cfg());
        assert_eq!((d, a), (0.0, 1.0));

        let (d, a) = delay_and_attenuation([3.0, 0.0, 4.0], [0.0; 3], &cfg());
        assert_eq!(d, 5.0 / 343.0);
        assert_eq!(a, 0.2);
    }

    #[test]
    fn attenuation_clamped_inside_one_meter() {
        for d in [0.0, 0.25, 0.5, 1.0] {
            let (_, a) = delay_and_attenuation([d, 0.0, 0.0], [0.0; 3], &cfg());
            assert_eq!(a, 1.0);
        }
    }

    #[test]
    fn single_impulse_center_channel() {
        let p = SourcePlacement::new([343.0, 0.0, 0.0], impulse());
        let out = render_direct(&[p], &MicArray::default(), &cfg()).unwrap();
        let c = out.channel(Channel::C);
        let nonzero: Vec<(usize, f64)> = c
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, v)| *v != 0.0)
            .collect();
        assert_eq!(nonzero, vec![(11335, 1.0 / 243.0)]);
    }

    #[test]
    fn front_pair_identical_on_median_plane() {
        let clip =
            MonoClip::new((0..500).map(|i| (i as f64 * 0.37).sin()).collect(), 16_000).unwrap();
        let p = SourcePlacement::new([10.0, 0.0, 0.0], clip);
        let out = render_direct(&[p], &MicArray::default(), &cfg()).unwrap();
        assert_eq!(out.channel(Channel::FL), out.channel(Channel::FR));
    }

    #[test]
    fn output_length_is_latest_end() {
        let a = SourcePlacement::new(
            [0.0, 0.0, 0.0],
            MonoClip::new(vec![0.1; 100], 16_000).unwrap(),
        );
        let b = SourcePlacement::new(
            [200.0, 0.0, 0.0],
            MonoClip::new(vec![0.1; 10], 16_000).unwrap(),
        );
        let out = render_direct(&[a, b], &MicArray::default(), &cfg()).unwrap();
        // Farthest pair: source b to SL at 300 m.
        let far = (300.0f64 / 343.0 * 16_000.0).round() as usize;
        assert_eq!(out.len(), far + 10);
    }

    #[test]
    fn rejects_empty_and_wrong_rate() {
        assert!(matches!(
            render_direct(&[], &MicArray::default(), &cfg()),
            Err(Error::NoPlacements)
        ));
        let p = SourcePlacement::new([1.0, 0.0, 0.0], MonoClip::new(vec![1.0], 44_100).unwrap());
        assert!(matches!(
            render_direct(&[p], &MicArray::default(), &cfg()),
            Err(Error::SampleRateMismatch { .. })
        ));
        let p = SourcePlacement::new([1.0, 0.0, 0.0], impulse()).with_gain(-1.0);
        assert!(render_direct(&[p], &MicArray::default(), &cfg()).is_err());
    }

    #[test]
    fn fractional_delay_splits_impulse() {
        let cfg = RoomConfig {
            fractional_delay: true,
            ..cfg()
        };
        let p = SourcePlacement::new([343.0, 0.0, 0.0], impulse());
        let out = render_direct(&[p], &MicArray::default(), &cfg).unwrap();
        let c = out.channel(Channel::C);
        let exact: f64 = 243.0 / 343.0 * 16_000.0;
        let whole = exact.floor() as usize;
        let frac = exact - exact.floor();
        let alpha = 1.0 / 243.0;
        assert!((c[whole] - alpha * (1.0 - frac)).abs() < 1e-15);
        assert!((c[whole + 1] - alpha * frac).abs() < 1e-15);
        assert!((c.iter().sum::<f64>() - alpha).abs() < 1e-15);
    }

    #[test]
    fn lfe_lowpass_only_touches_lfe() {
        let clip = MonoClip::new(
            (0..2000)
                .map(|i| if i % 2 == 0 { 0.5 } else { -0.5 })
                .collect(),
            16_000,
        )
        .unwrap();
        let p = SourcePlacement::new([20.0, 3.0, -7.0], clip);
        let plain = render_direct(std::slice::from_ref(&p), &MicArray::default(), &cfg()).unwrap();
        let filtered = render_direct(
            &[p],
            &MicArray::default(),
            &RoomConfig {
                lfe_lowpass: true,
                ..cfg()
            },
        )
        .unwrap();
        for ch in Channel::ALL {
            if ch == Channel::LFE {
                let energy = |x: &[f64]| x.iter().map(|s| s * s).sum::<f64>();
                assert!(energy(filtered.channel(ch)) < 1e-3 * energy(plain.channel(ch)));
            } else {
                assert_eq!(filtered.channel(ch), plain.channel(ch));
            }
        }
    }

    #[test]
    fn normalize_rules() {
        let mk = |a: f64, b: f64| {
            MultichannelAudio::new(
                [vec![a], vec![b], vec![0.0], vec![0.0], vec![0.0], vec![0.0]],
                16_000,
            )
            .unwrap()
        };
        let quiet = mk(0.5, -0.25);
        assert_eq!(normalize(quiet.clone()), quiet);

        let loud = normalize(mk(2.0, 0.0));
        assert_eq!(loud.channel(Channel::FL), &[2.0 * 0.495]);
        assert_eq!(loud.peak(), 0.99);

        let ratio = normalize(mk(3.0, 1.0));
        let (fl, fr) = (ratio.channel(Channel::FL)[0], ratio.channel(Channel::FR)[0]);
        assert!((fl / fr - 3.0).abs() < 1e-15);

        let silent = mk(0.0, 0.0);
        assert_eq!(normalize(silent.clone()), silent);
    }

    proptest! {
        #[test]
        fn attenuation_non_increasing(d0 in 0.0f64..500.0, d1 in 0.0f64..500.0) {
            let (near, far) = if d0 <= d1 { (d0, d1) } else { (d1, d0) };
            let (t0, a0) = delay_and_attenuation([near, 0.0, 0.0], [0.0; 3], &cfg());
            let (t1, a1) = delay_and_attenuation([far, 0.0, 0.0], [0.0; 3], &cfg());
            prop_assert!(a1 <= a0);
            prop_assert!(t1 >= t0);
        }

        #[test]
        fn onset_never_earlier_when_farther(r0 in 0.0f64..400.0, r1 in 0.0f64..400.0) {
            let (near, far) = if r0 <= r1 { (r0, r1) } else { (r1, r0) };
            let onset = |r: f64| {
                let p = SourcePlacement::new([0.0, 100.0 + r, 0.0], impulse());
                let out = render_direct(&[p], &MicArray::default(), &cfg()).unwrap();
                out.channel(Channel::SR).iter().position(|s| *s != 0.0).unwrap()
            };
            prop_assert!(onset(far) >= onset(near));
        }

        #[test]
        fn normalized_peak_bounded(scale in 0.0f64..100.0) {
            let clip = MonoClip::new(vec![scale, -scale / 2.0], 16_000).unwrap();
            let p = SourcePlacement::new([0.5, 0.0, 100.0], clip);
            let out = render(&[p], &MicArray::default(), &cfg()).unwrap();
            prop_assert!(out.peak() <= NORMALIZED_PEAK + 1e-12 || out.peak() <= 1.0);
        }
    }
}
