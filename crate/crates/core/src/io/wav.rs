use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::{MonoClip, MultichannelAudio};

/// Sample encoding for written WAV files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    F32,
    Pcm16,
}

fn map_hound(path: &Path, e: hound::Error) -> Error {
    match e {
        // hound reports short reads as `Other`.
        hound::Error::IoError(io)
            if matches!(
                io.kind(),
                std::io::ErrorKind::UnexpectedEof | std::io::ErrorKind::Other
            ) =>
        {
            Error::Corrupt {
                path: path.to_path_buf(),
                message: io.to_string(),
            }
        }
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::Corrupt {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    }
}

/// Reads all samples, interleaved, scaled to `[-1, 1]`.
fn read_interleaved(path: &Path) -> Result<(WavSpec, Vec<f64>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = WavReader::new(std::io::BufReader::new(file)).map_err(|e| map_hound(path, e))?;
    let spec = reader.spec();
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<Vec<_>, _>>(),
        (SampleFormat::Int, bits @ (16 | 24)) => {
            let scale = (1i64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / scale))
                .collect()
        }
        (_, bits) => {
            return Err(Error::BitDepth {
                path: path.to_path_buf(),
                bits,
            })
        }
    }
    .map_err(|e| map_hound(path, e))?;
    if samples.is_empty() {
        return Err(Error::Corrupt {
            path: path.to_path_buf(),
            message: "no audio frames".into(),
        });
    }
    if samples.iter().any(|s| !s.is_finite()) {
        return Err(Error::Corrupt {
            path: path.to_path_buf(),
            message: "non-finite samples".into(),
        });
    }
    Ok((spec, samples))
}

/// Mono PCM16, PCM24 or float32 WAV at any sample rate.
pub fn load_wav(path: impl AsRef<Path>) -> Result<MonoClip> {
    let path = path.as_ref();
    let (spec, samples) = read_interleaved(path)?;
    if spec.channels != 1 {
        return Err(Error::ChannelCount {
            path: path.to_path_buf(),
            expected: 1,
            found: spec.channels,
        });
    }
    MonoClip::new(samples, spec.sample_rate)
}

/// Any channel count, averaged down to mono.
pub fn load_wav_downmixed(path: impl AsRef<Path>) -> Result<MonoClip> {
    let path = path.as_ref();
    let (spec, samples) = read_interleaved(path)?;
    let ch = spec.channels as usize;
    let mono = samples
        .chunks_exact(ch)
        .map(|frame| frame.iter().sum::<f64>() / ch as f64)
        .collect();
    MonoClip::new(mono, spec.sample_rate)
}

/// A 6-channel WAV in FL, FR, C, LFE, SL, SR order.
pub fn read_multichannel_wav(path: impl AsRef<Path>) -> Result<MultichannelAudio> {
    let path = path.as_ref();
    let (spec, samples) = read_interleaved(path)?;
    if spec.channels != 6 {
        return Err(Error::ChannelCount {
            path: path.to_path_buf(),
            expected: 6,
            found: spec.channels,
        });
    }
    let mut channels: [Vec<f64>; 6] = Default::default();
    for frame in samples.chunks_exact(6) {
        for (c, s) in channels.iter_mut().zip(frame) {
            c.push(*s);
        }
    }
    MultichannelAudio::new(channels, spec.sample_rate)
}

fn pcm16(s: f64) -> i16 {
    (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16
}

fn write_frames<'a>(
    path: &Path,
    channels: u16,
    sample_rate: u32,
    format: OutputFormat,
    frames: impl Iterator<Item = &'a f64>,
) -> Result<()> {
    let spec = WavSpec {
        channels,
        sample_rate,
        bits_per_sample: match format {
            OutputFormat::F32 => 32,
            OutputFormat::Pcm16 => 16,
        },
        sample_format: match format {
            OutputFormat::F32 => SampleFormat::Float,
            OutputFormat::Pcm16 => SampleFormat::Int,
        },
    };
    let mut writer = WavWriter::create(path, spec).map_err(|e| map_hound(path, e))?;
    for &s in frames {
        match format {
            OutputFormat::F32 => writer.write_sample(s as f32),
            OutputFormat::Pcm16 => writer.write_sample(pcm16(s)),
        }
        .map_err(|e| map_hound(path, e))?;
    }
    writer.finalize().map_err(|e| map_hound(path, e))
}

/// Writes the six channels interleaved in file order. With more than two
/// channels the file uses WAVE_FORMAT_EXTENSIBLE with channel mask 0x3F
/// (FL, FR, FC, LFE, BL, BR).
pub fn write_multichannel_wav(
    audio: &MultichannelAudio,
    path: impl AsRef<Path>,
    format: OutputFormat,
) -> Result<()> {
    let ch = audio.channels();
    let interleaved: Vec<f64> = (0..audio.len())
        .flat_map(|n| ch.iter().map(move |c| c[n]))
        .collect();
    write_frames(
        path.as_ref(),
        6,
        audio.sample_rate(),
        format,
        interleaved.iter(),
    )
}

pub fn write_mono_wav(clip: &MonoClip, path: impl AsRef<Path>, format: OutputFormat) -> Result<()> {
    write_frames(
        path.as_ref(),
        1,
        clip.sample_rate,
        format,
        clip.samples.iter(),
    )
}
