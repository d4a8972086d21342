mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::oracles::{
    brute_force_render, enumerate_dtw, naive_contrast_similarity, OracleSource,
};
use surround_core::geometry::{aabb, min_bounding_polygon};
use surround_core::metrics::{
    chroma_similarity, compare, dtw_alignment, spectral_contrast_similarity, zcr_similarity,
};
use surround_core::render::{
    render_direct, Channel, MicArray, MonoClip, RoomConfig, SourcePlacement,
};
use surround_core::{BoundingBox, Contour, FeatureKind, FeatureSequence, MetricParams, Point};

const MICS: [[f64; 3]; 6] = [
    [0.0, 0.0, 100.0],
    [0.0, 0.0, -100.0],
    [100.0, 0.0, 0.0],
    [0.0, -100.0, 0.0],
    [-100.0, 0.0, 0.0],
    [0.0, 100.0, 0.0],
];

fn impulse_train(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let period = rng.gen_range(20..200);
    (0..len)
        .map(|n| {
            if n % period == 0 {
                rng.gen_range(-1.0..1.0)
            } else {
                0.0
            }
        })
        .collect()
}

#[test]
fn render_matches_brute_force_for_impulse_trains() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sources: Vec<OracleSource> = (0..3)
        .map(|_| OracleSource {
            position: [
                rng.gen_range(-150.0..150.0),
                rng.gen_range(-150.0..150.0),
                rng.gen_range(-150.0..150.0),
            ],
            samples: impulse_train(&mut rng, 4000),
            gain: rng.gen_range(0.0..2.0),
        })
        .collect();
    let placements: Vec<SourcePlacement> = sources
        .iter()
        .map(|s| {
            SourcePlacement::new(
                s.position,
                MonoClip::new(s.samples.clone(), 16_000).unwrap(),
            )
            .with_gain(s.gain)
        })
        .collect();
    let got = render_direct(&placements, &MicArray::default(), &RoomConfig::default()).unwrap();
    let want = brute_force_render(&sources, &MICS, 343.0, 16_000.0, 1.0);
    assert_eq!(got.len(), want[0].len());
    for ch in Channel::ALL {
        for (g, w) in got.channel(ch).iter().zip(&want[ch.index()]) {
            assert!((g - w).abs() <= 1e-9);
        }
    }
}

#[test]
fn gain_scales_only_its_source() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let clip = |rng: &mut ChaCha8Rng| MonoClip::new(impulse_train(rng, 1000), 16_000).unwrap();
    let a = SourcePlacement::new([30.0, -4.0, 12.0], clip(&mut rng));
    let b = SourcePlacement::new([-60.0, 20.0, -90.0], clip(&mut rng));
    let cfg = RoomConfig::default();
    let mics = MicArray::default();
    let base = render_direct(&[a.clone(), b.clone()], &mics, &cfg).unwrap();
    let scaled = render_direct(&[a.clone().with_gain(3.0), b.clone()], &mics, &cfg).unwrap();
    let only_a = render_direct(&[a], &mics, &cfg).unwrap();
    for ch in Channel::ALL {
        let (s, o, ba) = (scaled.channel(ch), only_a.channel(ch), base.channel(ch));
        for n in 0..s.len() {
            let a_n = o.get(n).copied().unwrap_or(0.0);
            assert!((s[n] - ba[n] - 2.0 * a_n).abs() <= 1e-12);
        }
    }
}

#[test]
fn hull_contains_500_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let pts: Vec<Point> = (0..500)
        .map(|_| Point::new(rng.gen_range(0..=100), rng.gen_range(0..=100)))
        .collect();
    let contour = Contour::new(pts.clone());
    let hull = min_bounding_polygon(&contour).unwrap();
    let v = &hull.vertices;
    for p in &pts {
        for i in 0..v.len() {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            let orient =
                (b.x - a.x) as i64 * (p.y - a.y) as i64 - (b.y - a.y) as i64 * (p.x - a.x) as i64;
            assert!(orient >= 0, "{p:?} outside edge {a:?}->{b:?}");
        }
    }
    let (mut x0, mut x1, mut y0, mut y1) = (i32::MAX, i32::MIN, i32::MAX, i32::MIN);
    for p in &pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    assert_eq!(
        aabb(&contour).unwrap(),
        BoundingBox {
            x_min: x0,
            x_max: x1,
            y_min: y0,
            y_max: y1
        }
    );
}

#[test]
fn dtw_equals_path_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let dim = rng.gen_range(1..=3);
        let seq = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            let len = rng.gen_range(1..=6);
            (0..len)
                .map(|_| (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect()
        };
        let (a, b) = (seq(&mut rng), seq(&mut rng));
        let (cost, len) = enumerate_dtw(&a, &b);
        let fa = FeatureSequence::new(a, 100.0, FeatureKind::Mfcc).unwrap();
        let fb = FeatureSequence::new(b, 100.0, FeatureKind::Mfcc).unwrap();
        let al = dtw_alignment(&fa, &fb).unwrap();
        assert_eq!((al.cost, al.path_len), (cost, len));
    }
}

fn tone(freq: f64, amp: f64, len: usize) -> MonoClip {
    MonoClip::new(
        (0..len)
            .map(|n| amp * (2.0 * std::f64::consts::PI * freq * n as f64 / 16_000.0).sin())
            .collect(),
        16_000,
    )
    .unwrap()
}

fn noise(seed: u64, amp: f64, len: usize) -> MonoClip {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MonoClip::new((0..len).map(|_| rng.gen_range(-amp..amp)).collect(), 16_000).unwrap()
}

/// Naive-DFT value for white noise (seed 42, amplitude 0.5) against a
/// 440 Hz tone (amplitude 0.5), both 8000 samples.
const NOISE_VS_TONE_CONTRAST: f64 = 0.716_287_339_883_591_2;

#[test]
fn spectral_contrast_matches_naive_reimplementation() {
    let (n, t) = (noise(42, 0.5, 8000), tone(440.0, 0.5, 8000));
    let oracle = naive_contrast_similarity(&n.samples, &t.samples);
    let got = spectral_contrast_similarity(&n, &t, &MetricParams::default()).unwrap();
    assert!((got - oracle).abs() < 1e-9, "fft {got} vs naive {oracle}");
    assert!(
        (got - NOISE_VS_TONE_CONTRAST).abs() < 1e-9,
        "regression value moved: {got}"
    );
}

#[test]
fn spectral_contrast_symmetric_and_identity() {
    let p = MetricParams::default();
    let (a, b) = (noise(1, 0.3, 6000), tone(700.0, 0.8, 7000));
    assert_eq!(
        spectral_contrast_similarity(&a, &b, &p).unwrap(),
        spectral_contrast_similarity(&b, &a, &p).unwrap()
    );
    assert!((spectral_contrast_similarity(&a, &a, &p).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn chroma_and_zcr_amplitude_invariant() {
    let p = MetricParams::default();
    let a = MonoClip::new(
        noise(3, 0.4, 8000)
            .samples
            .iter()
            .zip(&tone(330.0, 0.5, 8000).samples)
            .map(|(x, y)| x + y)
            .collect(),
        16_000,
    )
    .unwrap();
    let b = MonoClip::new(
        noise(4, 0.2, 8000)
            .samples
            .iter()
            .zip(&tone(523.0, 0.5, 8000).samples)
            .map(|(x, y)| x + y)
            .collect(),
        16_000,
    )
    .unwrap();
    let scale = |c: &MonoClip, k: f64| {
        MonoClip::new(c.samples.iter().map(|s| s * k).collect(), 16_000).unwrap()
    };
    for k in [0.01, 0.5, 3.0] {
        let (sa, sb) = (scale(&a, k), scale(&b, k));
        assert!(
            (chroma_similarity(&a, &b, &p).unwrap() - chroma_similarity(&sa, &sb, &p).unwrap())
                .abs()
                < 1e-6
        );
        assert!(
            (zcr_similarity(&a, &b, &p).unwrap() - zcr_similarity(&sa, &sb, &p).unwrap()).abs()
                < 1e-6
        );
    }
}

#[test]
fn compare_identity_and_symmetry() {
    let p = MetricParams::default();
    let a = noise(9, 0.5, 12_000);
    let b = tone(261.6, 0.7, 10_000);
    let aa = compare(&a.clone().into(), &a.clone().into(), &p).unwrap();
    assert_eq!(aa.mfcc_dtw, 0.0);
    assert!((aa.zcr - 1.0).abs() < 1e-9);
    assert!((aa.chroma - 1.0).abs() < 1e-9);
    assert!((aa.spectral_contrast - 1.0).abs() < 1e-9);
    let ab = compare(&a.clone().into(), &b.clone().into(), &p).unwrap();
    let ba = compare(&b.into(), &a.into(), &p).unwrap();
    assert_eq!(ab, ba);
    assert!(ab.mfcc_dtw > 0.0);
    assert!((0.0..=1.0).contains(&ab.zcr));
}

#[test]
fn render_vs_own_downmix_compares_identical() {
    let p = MetricParams::default();
    let clip = MonoClip::new(
        noise(77, 0.3, 6000)
            .samples
            .iter()
            .zip(&tone(440.0, 0.5, 6000).samples)
            .map(|(x, y)| x + y)
            .collect(),
        16_000,
    )
    .unwrap();
    let audio = surround_core::render::render(
        &[SourcePlacement::new([20.0, 5.0, -30.0], clip)],
        &MicArray::default(),
        &RoomConfig::default(),
    )
    .unwrap();
    let mono = audio.downmix().unwrap();
    let report = compare(&audio.into(), &mono.into(), &p).unwrap();
    assert_eq!(report.mfcc_dtw, 0.0);
    assert_eq!((report.zcr, report.chroma), (1.0, 1.0));
    assert!((report.spectral_contrast - 1.0).abs() < 1e-12);
}
