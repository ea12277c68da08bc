//! Scene, texture and preset files.

use std::fs;
use std::path::{Path, PathBuf};

use sonohaptics_core::colorimetry::TextureSource;
use sonohaptics_core::crossmodal::{PresetTable, TimbrePreset};
use sonohaptics_core::scene::{Scene, SceneDocument};

use crate::error::{Error, Result};

/// Parses and validates scene JSON. Validation errors name the offending
/// object.
pub fn parse_scene(bytes: &[u8], origin: &Path) -> Result<Scene> {
    let doc: SceneDocument =
        serde_json::from_slice(bytes).map_err(|source| Error::Json { path: origin.to_path_buf(), source })?;
    Ok(doc.into_scene()?)
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_scene(&bytes, path)
}

pub fn scene_to_json(scene: &Scene) -> String {
    serde_json::to_string_pretty(&scene.to_document()).expect("scene documents always serialize")
}

/// Loads PNG textures from disk; relative paths resolve against `base_dir`
/// (normally the scene file's directory). Alpha is dropped.
#[derive(Debug, Clone)]
pub struct PngTextures {
    base_dir: PathBuf,
}

impl PngTextures {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        Self { base_dir: base_dir.into() }
    }

    /// Texture source rooted at the directory containing `scene_path`.
    pub fn beside(scene_path: &Path) -> Self {
        Self::new(scene_path.parent().map(Path::to_path_buf).unwrap_or_default())
    }
}

impl TextureSource for PngTextures {
    fn pixels(&self, path: &str) -> std::result::Result<Vec<[u8; 3]>, String> {
        let full = self.base_dir.join(path);
        let img = image::open(&full).map_err(|e| e.to_string())?;
        Ok(img.to_rgb8().pixels().map(|p| p.0).collect())
    }
}

/// Reads a JSON list of timbre presets; listed materials replace the defaults.
pub fn load_presets(path: impl AsRef<Path>) -> Result<PresetTable> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let presets: Vec<TimbrePreset> =
        serde_json::from_slice(&bytes).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    Ok(PresetTable::with_overrides(presets)?)
}
