//! 16-bit PCM WAV export and haptic waveform JSON.

use std::fs;
use std::path::Path;

use serde::Serialize;
use sonohaptics_core::synthesis::{HapticBuffer, StereoBuffer};

use crate::error::{Error, Result};

fn to_i16(s: f32) -> i16 {
    (f64::from(s).clamp(-1.0, 1.0) * 32767.0).round() as i16
}

/// RIFF/WAVE bytes: PCM, 16-bit little-endian, two interleaved channels.
pub fn encode_wav(buf: &StereoBuffer) -> Vec<u8> {
    const CHANNELS: u16 = 2;
    const BITS: u16 = 16;
    let block_align = CHANNELS * BITS / 8;
    let data_len = (buf.frames() * usize::from(block_align)) as u32;

    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&CHANNELS.to_le_bytes());
    out.extend_from_slice(&buf.sample_rate.to_le_bytes());
    out.extend_from_slice(&(buf.sample_rate * u32::from(block_align)).to_le_bytes());
    out.extend_from_slice(&block_align.to_le_bytes());
    out.extend_from_slice(&BITS.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for (&l, &r) in buf.left.iter().zip(&buf.right) {
        out.extend_from_slice(&to_i16(l).to_le_bytes());
        out.extend_from_slice(&to_i16(r).to_le_bytes());
    }
    out
}

pub fn write_wav(buf: &StereoBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_wav(buf)).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct HapticJson<'a> {
    sample_rate: u32,
    channels: &'a [Vec<f32>],
}

pub fn haptics_to_json(buf: &HapticBuffer) -> String {
    serde_json::to_string(&HapticJson { sample_rate: buf.sample_rate, channels: &buf.channels })
        .expect("haptic buffers always serialize")
}

pub fn write_haptics_json(buf: &HapticBuffer, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, haptics_to_json(buf)).map_err(|e| Error::io(path, e))
}
