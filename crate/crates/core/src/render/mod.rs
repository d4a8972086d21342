//! Direct-path 5.1 rendering.
//!
//! Each source reaches each of the six microphones once, delayed by
//! `distance / c` and scaled by `1 / max(distance, clamp)`. There are no
//! reflections, so the room dimensions carried in [`RoomConfig`] do not
//! change the output.

mod filter;
mod mix;
mod resample;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::DEFAULT_SAMPLE_RATE;

pub use filter::Biquad;
pub use mix::{delay_and_attenuation, normalize, render, render_direct, NORMALIZED_PEAK};
pub use resample::resample;

/// Room coordinates in meters. With the default microphone layout the axes
/// read `[frontal, vertical, lateral]`.
pub type Position = [f64; 3];

/// Output channel, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    FL,
    FR,
    C,
    LFE,
    SL,
    SR,
}

impl Channel {
    pub const ALL: [Channel; 6] = [
        Channel::FL,
        Channel::FR,
        Channel::C,
        Channel::LFE,
        Channel::SL,
        Channel::SR,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Channel::FL => "FL",
            Channel::FR => "FR",
            Channel::C => "C",
            Channel::LFE => "LFE",
            Channel::SL => "SL",
            Channel::SR => "SR",
        }
    }
}

/// Receiver positions, one per output channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicArray {
    positions: [Position; 6],
}

impl Default for MicArray {
    fn default() -> Self {
        MicArray {
            positions: [
                [0.0, 0.0, 100.0],
                [0.0, 0.0, -100.0],
                [100.0, 0.0, 0.0],
                [0.0, -100.0, 0.0],
                [-100.0, 0.0, 0.0],
                [0.0, 100.0, 0.0],
            ],
        }
    }
}

impl MicArray {
    /// Positions indexed by [`Channel::index`].
    pub fn new(positions: [Position; 6]) -> Result<Self> {
        if positions.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("microphone position not finite".into()));
        }
        Ok(MicArray { positions })
    }

    pub fn position(&self, channel: Channel) -> Position {
        self.positions[channel.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Channel, Position)> + '_ {
        Channel::ALL.into_iter().map(|ch| (ch, self.position(ch)))
    }
}

/// Render parameters. Room dimensions follow the image (1 px = 1 m): width,
/// height, and half the width as length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoomConfig {
    pub width: f64,
    pub height: f64,
    pub length: f64,
    /// Meters per second.
    pub speed_of_sound: f64,
    pub sample_rate: u32,
    /// Distances below this are treated as this distance for attenuation.
    pub min_distance: f64,
    /// Linear-interpolation fractional delays instead of nearest-sample.
    pub fractional_delay: bool,
    /// 120 Hz low-pass on the LFE channel.
    pub lfe_lowpass: bool,
}

impl Default for RoomConfig {
    fn default() -> Self {
        RoomConfig {
            width: 1.0,
            height: 1.0,
            length: 0.5,
            speed_of_sound: 343.0,
            sample_rate: DEFAULT_SAMPLE_RATE,
            min_distance: 1.0,
            fractional_delay: false,
            lfe_lowpass: false,
        }
    }
}

impl RoomConfig {
    pub fn for_image(width: usize, height: usize) -> Self {
        RoomConfig {
            width: width as f64,
            height: height as f64,
            length: 0.5 * width as f64,
            ..RoomConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("width", self.width),
            ("height", self.height),
            ("length", self.length),
            ("speed_of_sound", self.speed_of_sound),
            ("min_distance", self.min_distance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "room {name} must be positive, got {v}"
                )));
            }
        }
        if self.sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        Ok(())
    }
}

/// Mono signal at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct MonoClip {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl MonoClip {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("audio clip has no samples".into()));
        }
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(
                "audio clip contains non-finite samples".into(),
            ));
        }
        Ok(MonoClip {
            samples,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

/// One source: where it is, what it plays, how loud.
#[derive(Debug, Clone, PartialEq)]
pub struct SourcePlacement {
    pub position: Position,
    pub clip: MonoClip,
    pub gain: f64,
}

impl SourcePlacement {
    pub fn new(position: Position, clip: MonoClip) -> Self {
        SourcePlacement {
            position,
            clip,
            gain: 1.0,
        }
    }

    pub fn with_gain(mut self, gain: f64) -> Self {
        self.gain = gain;
        self
    }
}

/// Six equally long channels in [`Channel::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct MultichannelAudio {
    channels: [Vec<f64>; 6],
    sample_rate: u32,
}

impl MultichannelAudio {
    pub fn new(channels: [Vec<f64>; 6], sample_rate: u32) -> Result<Self> {
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(Error::InvalidInput("channels differ in length".into()));
        }
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        if channels.iter().flatten().any(|s| !s.is_finite()) {
            return Err(Error::InvalidInput(
                "audio contains non-finite samples".into(),
            ));
        }
        Ok(MultichannelAudio {
            channels,
            sample_rate,
        })
    }

    pub(crate) fn from_parts(channels: [Vec<f64>; 6], sample_rate: u32) -> Self {
        MultichannelAudio {
            channels,
            sample_rate,
        }
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Frames per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn channel(&self, channel: Channel) -> &[f64] {
        &self.channels[channel.index()]
    }

    pub fn channels(&self) -> &[Vec<f64>; 6] {
        &self.channels
    }

    pub fn into_channels(self) -> [Vec<f64>; 6] {
        self.channels
    }

    pub fn peak(&self) -> f64 {
        self.channels
            .iter()
            .flatten()
            .fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Unweighted mean of the six channels.
    pub fn downmix(&self) -> Result<MonoClip> {
        let samples = (0..self.len())
            .map(|n| self.channels.iter().map(|c| c[n]).sum::<f64>() / 6.0)
            .collect();
        MonoClip::new(samples, self.sample_rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_mics_match_layout() {
        let mics = MicArray::default();
        assert_eq!(mics.position(Channel::FL), [0.0, 0.0, 100.0]);
        assert_eq!(mics.position(Channel::FR), [0.0, 0.0, -100.0]);
        assert_eq!(mics.position(Channel::C), [100.0, 0.0, 0.0]);
        assert_eq!(mics.position(Channel::LFE), [0.0, -100.0, 0.0]);
        assert_eq!(mics.position(Channel::SL), [-100.0, 0.0, 0.0]);
        assert_eq!(mics.position(Channel::SR), [0.0, 100.0, 0.0]);
    }

    #[test]
    fn room_from_image() {
        let room = RoomConfig::for_image(640, 480);
        assert_eq!(
            (room.width, room.height, room.length),
            (640.0, 480.0, 320.0)
        );
        assert_eq!(room.sample_rate, 16_000);
        assert_eq!(room.speed_of_sound, 343.0);
        room.validate().unwrap();
    }

    #[test]
    fn clip_validation() {
        assert!(MonoClip::new(vec![], 16_000).is_err());
        assert!(MonoClip::new(vec![0.0], 0).is_err());
        assert!(MonoClip::new(vec![f64::INFINITY], 16_000).is_err());
    }

    #[test]
    fn downmix_is_channel_mean() {
        let audio = MultichannelAudio::new(
            [
                vec![6.0, 0.0],
                vec![0.0, 6.0],
                vec![0.0, 0.0],
                vec![0.0, 0.0],
                vec![0.0, 0.0],
                vec![0.0, 0.0],
            ],
            16_000,
        )
        .unwrap();
        assert_eq!(audio.downmix().unwrap().samples, vec![1.0, 1.0]);
    }
}
