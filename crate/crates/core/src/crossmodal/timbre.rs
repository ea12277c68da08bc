//! Per-material impact timbres rendered by modal synthesis.
//!
//! Each preset is a handful of exponentially decaying partials above a base
//! frequency, optionally mixed with a decaying noise burst. Decay times are
//! T60 values (seconds to fall by 60 dB).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::Material;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Partial {
    /// Frequency relative to the preset's base frequency.
    pub ratio: f64,
    pub gain: f64,
    pub decay_s: f64,
}

/// Decaying noise burst, one-pole low-passed at `lowpass_hz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseBurst {
    pub gain: f64,
    pub decay_s: f64,
    pub lowpass_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimbrePreset {
    pub material: Material,
    pub base_hz: f64,
    pub modes: Vec<Partial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseBurst>,
}

impl TimbrePreset {
    fn modal(material: Material, base_hz: f64, ratios: [f64; 3], decay_s: f64) -> Self {
        let gains = [1.0, 0.6, 0.35];
        let decay_scale = [1.0, 0.7, 0.45];
        let modes = (0..3)
            .map(|i| Partial { ratio: ratios[i], gain: gains[i], decay_s: decay_s * decay_scale[i] })
            .collect();
        Self { material, base_hz, modes, noise: None }
    }

    pub fn default_for(material: Material) -> Self {
        match material {
            Material::Metal => Self::modal(material, 880.0, [1.0, 2.76, 5.40], 1.2),
            Material::Glass => Self::modal(material, 1320.0, [1.0, 2.32, 4.25], 0.6),
            Material::Ceramic => Self::modal(material, 1040.0, [1.0, 2.5, 4.1], 0.35),
            Material::Wood => Self::modal(material, 420.0, [1.0, 2.1, 3.0], 0.12),
            Material::Plastic => Self::modal(material, 620.0, [1.0, 1.9, 2.8], 0.10),
            Material::Paper => Self {
                material,
                base_hz: 1800.0,
                modes: vec![Partial { ratio: 1.0, gain: 0.3, decay_s: 0.05 }],
                noise: Some(NoiseBurst { gain: 1.0, decay_s: 0.05, lowpass_hz: 6000.0 }),
            },
            Material::Fabric => Self {
                material,
                base_hz: 180.0,
                modes: vec![Partial { ratio: 1.0, gain: 0.2, decay_s: 0.08 }],
                noise: Some(NoiseBurst { gain: 1.0, decay_s: 0.08, lowpass_hz: 700.0 }),
            },
        }
    }

    /// Length of the longest decay in the preset.
    pub fn tail_s(&self) -> f64 {
        let modes = self.modes.iter().map(|m| m.decay_s);
        modes.chain(self.noise.map(|n| n.decay_s)).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(Error::InvalidConfig("timbre preset needs at least one mode"));
        }
        if !(self.base_hz > 0.0 && self.base_hz.is_finite()) {
            return Err(Error::InvalidConfig("timbre base frequency must be positive"));
        }
        for m in &self.modes {
            if !(m.decay_s > 0.0 && m.decay_s.is_finite()) {
                return Err(Error::InvalidConfig("timbre decay times must be positive"));
            }
            if !(m.gain > 0.0 && m.gain <= 1.0) {
                return Err(Error::InvalidConfig("timbre gains must lie in (0, 1]"));
            }
            if !(m.ratio > 0.0 && m.ratio.is_finite()) {
                return Err(Error::InvalidConfig("timbre ratios must be positive"));
            }
        }
        if let Some(n) = self.noise {
            if !(n.decay_s > 0.0 && n.gain > 0.0 && n.gain <= 1.0 && n.lowpass_hz > 0.0) {
                return Err(Error::InvalidConfig("invalid noise burst"));
            }
        }
        Ok(())
    }
}

/// One preset per material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<TimbrePreset>", into = "Vec<TimbrePreset>")]
pub struct PresetTable {
    presets: BTreeMap<Material, TimbrePreset>,
}

impl Default for PresetTable {
    fn default() -> Self {
        let presets = Material::ALL.into_iter().map(|m| (m, TimbrePreset::default_for(m))).collect();
        Self { presets }
    }
}

impl PresetTable {
    /// Defaults with the given presets replacing those of their material.
    pub fn with_overrides(overrides: impl IntoIterator<Item = TimbrePreset>) -> Result<Self> {
        let mut table = Self::default();
        for preset in overrides {
            preset.validate()?;
            table.presets.insert(preset.material, preset);
        }
        Ok(table)
    }

    pub fn get(&self, material: Material) -> &TimbrePreset {
        &self.presets[&material]
    }

    pub fn iter(&self) -> impl Iterator<Item = &TimbrePreset> + '_ {
        self.presets.values()
    }
}

impl TryFrom<Vec<TimbrePreset>> for PresetTable {
    type Error = Error;

    fn try_from(presets: Vec<TimbrePreset>) -> Result<Self> {
        Self::with_overrides(presets)
    }
}

impl From<PresetTable> for Vec<TimbrePreset> {
    fn from(table: PresetTable) -> Self {
        table.presets.into_values().collect()
    }
}

pub fn timbre_for_material(table: &PresetTable, material: Material) -> &TimbrePreset {
    table.get(material)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_is_tagged() {
        let table = PresetTable::default();
        assert_eq!(timbre_for_material(&table, Material::Metal).material, Material::Metal);
        assert_eq!(timbre_for_material(&table, Material::Fabric).material, Material::Fabric);
    }

    #[test]
    fn seven_distinct_valid_presets() {
        let table = PresetTable::default();
        let presets: Vec<_> = Material::ALL.iter().map(|&m| table.get(m)).collect();
        for (i, a) in presets.iter().enumerate() {
            a.validate().unwrap();
            for b in &presets[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn override_replaces_only_its_material() {
        let mut metal = TimbrePreset::default_for(Material::Metal);
        metal.base_hz = 500.0;
        let table = PresetTable::with_overrides([metal]).unwrap();
        assert_eq!(table.get(Material::Metal).base_hz, 500.0);
        assert_eq!(table.get(Material::Wood), &TimbrePreset::default_for(Material::Wood));
    }

    #[test]
    fn invalid_override_rejected() {
        let mut glass = TimbrePreset::default_for(Material::Glass);
        glass.modes.clear();
        assert!(PresetTable::with_overrides([glass]).is_err());
    }
}
