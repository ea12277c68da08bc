//! Renders cues to stereo PCM and four-channel haptic drive waveforms.
//!
//! Audio is a sine pulse at the cue pitch with raised-cosine edges, mixed with
//! the material's modal impact, peak-normalized and panned with a
//! constant-power law. Haptics drive all four actuators with the same
//! amplitude-scaled sine carrier.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, TAU};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::crossmodal::{CueKind, FeedbackCue, PresetTable, TimbrePreset, STATIC_DURATION_S, STATIC_PITCH_HZ};
use crate::error::{Error, Result};

pub const DEFAULT_AUDIO_RATE: u32 = 48_000;
pub const DEFAULT_HAPTIC_RATE: u32 = 1_000;
pub const DEFAULT_HAPTIC_CARRIER_HZ: f64 = 170.0;
pub const HAPTIC_CHANNELS: usize = 4;

/// ln(1000): amplitude decay to -60 dB.
const T60_LN: f64 = 6.907_755_278_982_137;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub audio_rate: u32,
    pub haptic_rate: u32,
    pub haptic_carrier_hz: f64,
    /// Raised-cosine attack and release of the pulse, seconds.
    pub ramp_s: f64,
    /// Peak level of the mono mix before panning.
    pub peak: f64,
    /// Level of the impact layer relative to the pulse.
    pub impact_gain: f64,
    pub pulse_repeats: u32,
    pub repeat_interval_s: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            audio_rate: DEFAULT_AUDIO_RATE,
            haptic_rate: DEFAULT_HAPTIC_RATE,
            haptic_carrier_hz: DEFAULT_HAPTIC_CARRIER_HZ,
            ramp_s: 0.005,
            peak: 0.9,
            impact_gain: 0.35,
            pulse_repeats: 1,
            repeat_interval_s: 0.3,
            seed: 0x5eed,
        }
    }
}

/// Planar two-channel audio.
#[derive(Debug, Clone, PartialEq)]
pub struct StereoBuffer {
    pub sample_rate: u32,
    pub left: Vec<f32>,
    pub right: Vec<f32>,
}

impl StereoBuffer {
    pub fn silence(sample_rate: u32, frames: usize) -> Self {
        Self { sample_rate, left: vec![0.0; frames], right: vec![0.0; frames] }
    }

    pub fn frames(&self) -> usize {
        self.left.len()
    }

    pub fn duration_s(&self) -> f64 {
        self.frames() as f64 / f64::from(self.sample_rate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HapticBuffer {
    pub sample_rate: u32,
    pub channels: [Vec<f32>; HAPTIC_CHANNELS],
}

impl HapticBuffer {
    pub fn frames(&self) -> usize {
        self.channels[0].len()
    }
}

/// Constant-power gains `(left, right)` for a pan in [-1, 1].
pub fn pan_gains(pan: f64) -> (f64, f64) {
    let theta = (pan.clamp(-1.0, 1.0) + 1.0) * FRAC_PI_4;
    (libm::cos(theta), libm::sin(theta))
}

fn frames_for(duration_s: f64, rate: u32) -> usize {
    libm::round(duration_s * f64::from(rate)) as usize
}

/// Raised-cosine edges of `ramp` samples on a buffer of `len` samples.
fn envelope(i: usize, len: usize, ramp: usize) -> f64 {
    let ramp = ramp.min(len / 2);
    if ramp == 0 {
        return 1.0;
    }
    let edge = i.min(len - 1 - i);
    if edge >= ramp {
        1.0
    } else {
        0.5 * (1.0 - libm::cos(core::f64::consts::PI * edge as f64 / ramp as f64))
    }
}

/// One sine pulse with raised-cosine edges.
pub fn render_pulse(freq_hz: f64, duration_s: f64, rate: u32, ramp_s: f64) -> Vec<f64> {
    let len = frames_for(duration_s, rate);
    let ramp = frames_for(ramp_s, rate);
    let step = TAU * freq_hz / f64::from(rate);
    (0..len).map(|i| libm::sin(step * i as f64) * envelope(i, len, ramp)).collect()
}

/// Modal impact for a material preset, normalized to unit peak. Noise
/// components are drawn from a generator seeded with `seed`.
pub fn render_impact(preset: &TimbrePreset, rate: u32, seed: u64) -> Vec<f64> {
    let fs = f64::from(rate);
    let len = frames_for(preset.tail_s(), rate);
    let mut out: Vec<f64> = (0..len)
        .map(|i| {
            let t = i as f64 / fs;
            preset
                .modes
                .iter()
                .map(|m| {
                    let decay = libm::exp(-T60_LN * t / m.decay_s);
                    m.gain * decay * libm::sin(TAU * preset.base_hz * m.ratio * t)
                })
                .sum()
        })
        .collect();

    if let Some(noise) = preset.noise {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = 1.0 - libm::exp(-TAU * noise.lowpass_hz / fs);
        let mut state = 0.0;
        for (i, sample) in out.iter_mut().enumerate() {
            let white = (rng.next_u32() as f64 / u32::MAX as f64) * 2.0 - 1.0;
            state += alpha * (white - state);
            let t = i as f64 / fs;
            *sample += noise.gain * libm::exp(-T60_LN * t / noise.decay_s) * state;
        }
    }

    let peak = out.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        out.iter_mut().for_each(|s| *s /= peak);
    }
    out
}

fn pulse_train(freq_hz: f64, duration_s: f64, cfg: &SynthConfig) -> Vec<f64> {
    let pulse = render_pulse(freq_hz, duration_s, cfg.audio_rate, cfg.ramp_s);
    let repeats = cfg.pulse_repeats.max(1) as usize;
    if repeats == 1 {
        return pulse;
    }
    let hop = frames_for(cfg.repeat_interval_s.max(duration_s), cfg.audio_rate);
    let mut out = vec![0.0; hop * (repeats - 1) + pulse.len()];
    for r in 0..repeats {
        for (o, s) in out[r * hop..].iter_mut().zip(&pulse) {
            *o += s;
        }
    }
    out
}

fn pan_to_stereo(mono: &[f64], pan: f64, rate: u32) -> StereoBuffer {
    let (gl, gr) = pan_gains(pan);
    StereoBuffer {
        sample_rate: rate,
        left: mono.iter().map(|s| (s * gl) as f32).collect(),
        right: mono.iter().map(|s| (s * gr) as f32).collect(),
    }
}

/// Renders a cue to stereo audio. Silent cues give an all-zero buffer of the
/// cue's duration; static cues are a bare 220 Hz, 0.2 s pulse.
pub fn render_cue_audio(cue: &FeedbackCue, presets: &PresetTable, cfg: &SynthConfig) -> Result<StereoBuffer> {
    cue.validate()?;
    validate_config(cfg)?;
    let mut mono = match cue.kind {
        CueKind::Silent => return Ok(StereoBuffer::silence(cfg.audio_rate, frames_for(cue.duration_s, cfg.audio_rate))),
        CueKind::Static => pulse_train(STATIC_PITCH_HZ, STATIC_DURATION_S, cfg),
        CueKind::Sonohaptics => {
            let mut mix = pulse_train(cue.pitch_hz, cue.duration_s, cfg);
            let preset = presets.get(cue.timbre);
            let impact = render_impact(preset, cfg.audio_rate, cfg.seed ^ cue.timbre as u64);
            if impact.len() > mix.len() {
                mix.resize(impact.len(), 0.0);
            }
            for (m, s) in mix.iter_mut().zip(&impact) {
                *m += cfg.impact_gain * s;
            }
            mix
        }
    };
    let peak = mono.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        let scale = cfg.peak / peak;
        mono.iter_mut().for_each(|s| *s *= scale);
    }
    Ok(pan_to_stereo(&mono, cue.pan, cfg.audio_rate))
}

/// Renders the vibration drive for a cue: the same waveform on all four
/// actuators.
pub fn render_cue_haptics(cue: &FeedbackCue, cfg: &SynthConfig) -> Result<HapticBuffer> {
    cue.validate()?;
    validate_config(cfg)?;
    let len = frames_for(cue.duration_s, cfg.haptic_rate);
    let wave: Vec<f32> = match cue.kind {
        CueKind::Silent => vec![0.0; len],
        CueKind::Static | CueKind::Sonohaptics => {
            let ramp = frames_for(cfg.ramp_s, cfg.haptic_rate);
            let step = TAU * cfg.haptic_carrier_hz / f64::from(cfg.haptic_rate);
            (0..len)
                .map(|i| (cue.amplitude * libm::sin(step * i as f64) * envelope(i, len, ramp)) as f32)
                .collect()
        }
    };
    Ok(HapticBuffer {
        sample_rate: cfg.haptic_rate,
        channels: [wave.clone(), wave.clone(), wave.clone(), wave],
    })
}

fn validate_config(cfg: &SynthConfig) -> Result<()> {
    if cfg.audio_rate == 0 || cfg.haptic_rate == 0 {
        return Err(Error::InvalidConfig("sample rates must be positive"));
    }
    if !(cfg.peak > 0.0 && cfg.peak <= 1.0) {
        return Err(Error::InvalidConfig("peak must lie in (0, 1]"));
    }
    if !(cfg.ramp_s >= 0.0 && cfg.impact_gain >= 0.0 && cfg.haptic_carrier_hz > 0.0) {
        return Err(Error::InvalidConfig("invalid synthesis parameters"));
    }
    Ok(())
}
