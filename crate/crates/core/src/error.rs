use alloc::string::String;
use core::fmt;

/// Errors raised by the core. Variants that concern a specific scene object
/// carry its id.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    UnsupportedVersion(u32),
    DuplicateId(String),
    NonPositiveExtent { object: String },
    NonFinite { object: String, field: &'static str },
    UnknownMaterial { object: String, material: String },
    EmptyScene,
    TextureUnreadable { object: String, path: String, reason: String },
    EmptyCluster,
    NoAnchor,
    NotActive,
    UnknownObject(String),
    InvalidCue(&'static str),
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedVersion(v) => write!(f, "unsupported scene version {v} (expected 1)"),
            Error::DuplicateId(id) => write!(f, "duplicate object id \"{id}\""),
            Error::NonPositiveExtent { object } => {
                write!(f, "object \"{object}\": bbox extents must be strictly positive")
            }
            Error::NonFinite { object, field } => {
                write!(f, "object \"{object}\": {field} contains a non-finite value")
            }
            Error::UnknownMaterial { object, material } => {
                write!(f, "object \"{object}\": unknown material \"{material}\"")
            }
            Error::EmptyScene => f.write_str("scene has no visible objects"),
            Error::TextureUnreadable { object, path, reason } => {
                write!(f, "object \"{object}\": texture {path} unreadable: {reason}")
            }
            Error::EmptyCluster => f.write_str("local cluster is empty"),
            Error::NoAnchor => f.write_str("no object has been gazed at yet"),
            Error::NotActive => f.write_str("selection is not active"),
            Error::UnknownObject(id) => write!(f, "unknown object id \"{id}\""),
            Error::InvalidCue(why) => write!(f, "invalid cue: {why}"),
            Error::InvalidConfig(why) => write!(f, "invalid config: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
