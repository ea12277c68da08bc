//! File formats, analysis tools and the session server around
//! [`sonohaptics_core`].

pub mod analyze;
mod error;
pub mod protocol;
pub mod scene_io;
pub mod server;
pub mod simulate;
pub mod trace;
pub mod wav;

pub use error::{Error, Result};
pub use sonohaptics_core as core;
