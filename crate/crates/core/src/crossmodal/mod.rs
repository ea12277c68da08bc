//! Visual-to-audio/haptic mappings.
//!
//! Lightness drives pitch, silhouette area drives vibration amplitude,
//! azimuth drives stereo pan and material selects the impact timbre. In
//! local mode, pitch and amplitude are instead spread evenly over their full
//! output ranges among the objects of a cluster.

mod timbre;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

pub use timbre::{timbre_for_material, NoiseBurst, Partial, PresetTable, TimbrePreset};

use crate::colorimetry::{object_lightness, TextureSource};
use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scene::{Material, SceneObject, SizeNormalizationParams};

/// C3.
pub const PITCH_MIN_HZ: f64 = 130.81;
/// B5.
pub const PITCH_MAX_HZ: f64 = 987.77;
pub const AMP_MIN: f64 = 0.125;
pub const AMP_MAX: f64 = 1.0;
/// Side lengths of the smallest and largest cubes shown during data collection.
pub const STUDY_SIDE_MIN: f64 = 46.0;
pub const STUDY_SIDE_MAX: f64 = 147.0;
pub const STUDY_AREA_MIN: f64 = STUDY_SIDE_MIN * STUDY_SIDE_MIN;
pub const STUDY_AREA_MAX: f64 = STUDY_SIDE_MAX * STUDY_SIDE_MAX;
pub const LIGHTNESS_MAX: f64 = 100.0;

pub const STATIC_PITCH_HZ: f64 = 220.0;
pub const STATIC_DURATION_S: f64 = 0.2;
/// Vibration drive for static cues: the middle of the amplitude range.
pub const STATIC_AMPLITUDE: f64 = (AMP_MIN + AMP_MAX) / 2.0;
pub const DEFAULT_CUE_DURATION_S: f64 = 0.2;

/// Lightness-to-pitch regression, coefficients in ascending order.
pub const PITCH_COEFFS: [f64; 3] = [184.05, 0.375, 0.054];
/// Area-to-amplitude regression, coefficients in ascending order.
pub const AMP_COEFFS: [f64; 3] = [0.275, 3.80e-05, -6.01e-10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CueKind {
    #[default]
    Sonohaptics,
    Static,
    Silent,
}

/// A fully resolved hover cue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackCue {
    pub pitch_hz: f64,
    pub amplitude: f64,
    pub pan: f64,
    pub timbre: Material,
    pub duration_s: f64,
    pub kind: CueKind,
}

impl FeedbackCue {
    pub fn silent(timbre: Material, pan: f64, duration_s: f64) -> Self {
        Self { pitch_hz: 0.0, amplitude: 0.0, pan, timbre, duration_s, kind: CueKind::Silent }
    }

    pub fn is_audible(&self) -> bool {
        self.kind != CueKind::Silent
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return Err(Error::InvalidCue("duration must be positive"));
        }
        if !(-1.0..=1.0).contains(&self.pan) {
            return Err(Error::InvalidCue("pan outside [-1, 1]"));
        }
        match self.kind {
            CueKind::Sonohaptics => {
                if !(PITCH_MIN_HZ..=PITCH_MAX_HZ).contains(&self.pitch_hz) {
                    return Err(Error::InvalidCue("pitch outside C3..B5"));
                }
                if !(AMP_MIN..=AMP_MAX).contains(&self.amplitude) {
                    return Err(Error::InvalidCue("amplitude outside [0.125, 1]"));
                }
            }
            CueKind::Static => {
                if !(self.pitch_hz > 0.0 && self.pitch_hz.is_finite()) {
                    return Err(Error::InvalidCue("pitch must be positive"));
                }
                if !(0.0..=1.0).contains(&self.amplitude) {
                    return Err(Error::InvalidCue("amplitude outside [0, 1]"));
                }
            }
            CueKind::Silent => {}
        }
        Ok(())
    }
}

/// How hover cues are produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CueSettings {
    pub kind: CueKind,
    pub snap_to_scale: bool,
    pub duration_s: f64,
}

impl Default for CueSettings {
    fn default() -> Self {
        Self { kind: CueKind::Sonohaptics, snap_to_scale: false, duration_s: DEFAULT_CUE_DURATION_S }
    }
}

/// Head position and forward direction, used for panning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadPose {
    pub position: Vec3,
    pub forward: Vec3,
}

fn poly(coeffs: [f64; 3], x: f64) -> f64 {
    coeffs[0] + coeffs[1] * x + coeffs[2] * x * x
}

/// Unclamped lightness-to-pitch polynomial.
pub fn pitch_polynomial(l: f64) -> f64 {
    poly(PITCH_COEFFS, l)
}

/// Unclamped area-to-amplitude polynomial.
pub fn amplitude_polynomial(s: f64) -> f64 {
    poly(AMP_COEFFS, s)
}

/// Pitch in Hz for a CIELAB lightness in 0..=100. Inputs are clamped to the
/// lightness domain and the output to C3..B5.
pub fn pitch_from_lightness(l: f64) -> f64 {
    pitch_polynomial(l.clamp(0.0, LIGHTNESS_MAX)).clamp(PITCH_MIN_HZ, PITCH_MAX_HZ)
}

/// Vibration amplitude for a normalized area in study units². Inputs are
/// clamped to the study area range; the polynomial turns over past it.
pub fn amplitude_from_size(s: f64) -> f64 {
    amplitude_polynomial(s.clamp(STUDY_AREA_MIN, STUDY_AREA_MAX)).clamp(AMP_MIN, AMP_MAX)
}

fn linmap(value: f64, lo: f64, hi: f64) -> f64 {
    let span = hi - lo;
    if span <= 0.0 {
        return (STUDY_SIDE_MIN + STUDY_SIDE_MAX) / 2.0;
    }
    let t = ((value - lo) / span).clamp(0.0, 1.0);
    STUDY_SIDE_MIN + t * (STUDY_SIDE_MAX - STUDY_SIDE_MIN)
}

/// Maps an object's silhouette onto the study's side-length scale and returns
/// the scaled area.
pub fn normalize_size(obj: &SceneObject, params: &SizeNormalizationParams) -> f64 {
    let (w, h) = obj.face_dims();
    linmap(w, params.min_w, params.max_w) * linmap(h, params.min_h, params.max_h)
}

/// Signed horizontal azimuth of `target` relative to the head, in radians,
/// positive to the right. `None` when either the forward direction or the
/// head-to-target vector has no horizontal component.
pub fn azimuth(head_forward: Vec3, head_pos: Vec3, target: Vec3) -> Option<f64> {
    let flat = |v: Vec3| Vec3::new(v.x, 0.0, v.z).normalized();
    let fwd = flat(head_forward)?;
    let to_target = flat(target - head_pos)?;
    let right = Vec3::new(fwd.z, 0.0, -fwd.x);
    Some(libm::atan2(to_target.dot(right), to_target.dot(fwd)))
}

/// Left-right pan in [-1, 1], linear in azimuth over ±90°.
pub fn pan_from_direction(head_forward: Vec3, head_pos: Vec3, obj_pos: Vec3) -> f64 {
    azimuth(head_forward, head_pos, obj_pos).map_or(0.0, |theta| (theta / FRAC_PI_2).clamp(-1.0, 1.0))
}

/// Equal-tempered semitones from C3 (MIDI 48) to B5 (MIDI 83).
pub fn scale_table() -> [f64; 36] {
    core::array::from_fn(|i| 440.0 * libm::exp2((48.0 + i as f64 - 69.0) / 12.0))
}

/// Nearest of the 36 semitones C3..B5 by log-frequency distance.
pub fn quantize_to_scale(f: f64) -> f64 {
    let table = scale_table();
    if f.is_nan() || f <= 0.0 {
        return table[0];
    }
    let target = libm::log(f);
    table
        .into_iter()
        .min_by(|a, b| (libm::log(*a) - target).abs().total_cmp(&(libm::log(*b) - target).abs()))
        .unwrap_or(table[0])
}

/// Lightness and normalized area of one object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectProfile {
    pub lightness: f64,
    pub area: f64,
}

pub fn object_profile(
    obj: &SceneObject,
    params: &SizeNormalizationParams,
    textures: &dyn TextureSource,
) -> Result<ObjectProfile> {
    Ok(ObjectProfile { lightness: object_lightness(obj, textures)?, area: normalize_size(obj, params) })
}

/// Cue for an object whose profile is already known.
pub fn cue_from_profile(profile: ObjectProfile, obj: &SceneObject, pose: &HeadPose, settings: &CueSettings) -> FeedbackCue {
    let pan = pan_from_direction(pose.forward, pose.position, obj.position);
    match settings.kind {
        CueKind::Sonohaptics => {
            let mut pitch_hz = pitch_from_lightness(profile.lightness);
            if settings.snap_to_scale {
                pitch_hz = quantize_to_scale(pitch_hz);
            }
            FeedbackCue {
                pitch_hz,
                amplitude: amplitude_from_size(profile.area),
                pan,
                timbre: obj.material,
                duration_s: settings.duration_s,
                kind: CueKind::Sonohaptics,
            }
        }
        CueKind::Static => static_cue(obj.material, pan),
        CueKind::Silent => FeedbackCue::silent(obj.material, pan, settings.duration_s),
    }
}

pub fn static_cue(timbre: Material, pan: f64) -> FeedbackCue {
    FeedbackCue {
        pitch_hz: STATIC_PITCH_HZ,
        amplitude: STATIC_AMPLITUDE,
        pan,
        timbre,
        duration_s: STATIC_DURATION_S,
        kind: CueKind::Static,
    }
}

/// Global-mode cue for an object from its absolute visual properties.
pub fn global_cue(
    obj: &SceneObject,
    params: &SizeNormalizationParams,
    pose: &HeadPose,
    textures: &dyn TextureSource,
    settings: &CueSettings,
) -> Result<FeedbackCue> {
    let profile = match settings.kind {
        // Static and silent cues ignore appearance; skip texture decoding.
        CueKind::Static | CueKind::Silent => ObjectProfile { lightness: 0.0, area: 0.0 },
        CueKind::Sonohaptics => object_profile(obj, params, textures)?,
    };
    Ok(cue_from_profile(profile, obj, pose, settings))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterMember<'a> {
    pub id: &'a str,
    pub profile: ObjectProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalAssignment {
    pub pitch_hz: f64,
    pub amplitude: f64,
}

fn spread(rank: usize, k: usize, lo: f64, hi: f64) -> f64 {
    if k == 1 {
        (lo + hi) / 2.0
    } else {
        lo + (hi - lo) * rank as f64 / (k - 1) as f64
    }
}

fn ranks_by<F>(members: &[ClusterMember<'_>], key: F) -> Vec<usize>
where
    F: Fn(&ObjectProfile) -> f64,
{
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| {
        key(&members[a].profile)
            .total_cmp(&key(&members[b].profile))
            .then_with(|| members[a].id.cmp(members[b].id))
    });
    let mut rank = alloc::vec![0; members.len()];
    for (r, idx) in order.into_iter().enumerate() {
        rank[idx] = r;
    }
    rank
}

/// Spreads pitch (ranked by lightness) and amplitude (ranked by area) evenly
/// over their full ranges. Ties rank by id. A lone object gets the midpoints.
pub fn local_assignments(cluster: &[ClusterMember<'_>]) -> Result<BTreeMap<String, LocalAssignment>> {
    let k = cluster.len();
    if k == 0 {
        return Err(Error::EmptyCluster);
    }
    let pitch_rank = ranks_by(cluster, |p| p.lightness);
    let amp_rank = ranks_by(cluster, |p| p.area);
    Ok(cluster
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let assignment = LocalAssignment {
                pitch_hz: spread(pitch_rank[i], k, PITCH_MIN_HZ, PITCH_MAX_HZ),
                amplitude: spread(amp_rank[i], k, AMP_MIN, AMP_MAX),
            };
            (String::from(m.id), assignment)
        })
        .collect())
}
