//! Cross-modal feedback for gaze-based object selection.
//!
//! Maps visual properties of scene objects (lightness, size, position,
//! material) to audio-haptic hover cues, resolves gaze targets with a sphere
//! cast, runs the global/local feedback state machine and renders cues to
//! PCM buffers. Everything here is `no_std` with `alloc`; file formats, the
//! CLI and the session server live in the `sonohaptics` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cast;
pub mod colorimetry;
pub mod crossmodal;
pub mod engine;
mod error;
pub mod math;
pub mod scene;
pub mod synthesis;

pub use error::{Error, Result};
