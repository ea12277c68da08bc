//! Selection state machine: activation, global/local feedback modes,
//! edge-triggered hover cues and selection confirmation.
//!
//! The engine is single-owner. Every mutation goes through `&mut self`, so
//! concurrent callers must serialize commands and samples themselves.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::cast::sphere_cast;
use crate::colorimetry::TextureSource;
use crate::crossmodal::{
    cue_from_profile, local_assignments, object_profile, pan_from_direction, static_cue, ClusterMember, CueKind,
    CueSettings, FeedbackCue, HeadPose, LocalAssignment, ObjectProfile,
};
use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scene::{scene_stats, Scene, SceneObject, SizeNormalizationParams};

pub const DEFAULT_CAST_RADIUS: f64 = 0.5;
pub const DEFAULT_LOCAL_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub cast_radius: f64,
    pub local_radius: f64,
    #[serde(flatten)]
    pub cue: CueSettings,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { cast_radius: DEFAULT_CAST_RADIUS, local_radius: DEFAULT_LOCAL_RADIUS, cue: CueSettings::default() }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cast_radius > 0.0 && self.cast_radius.is_finite()) {
            return Err(Error::InvalidConfig("cast radius must be positive"));
        }
        if !(self.local_radius > 0.0 && self.local_radius.is_finite()) {
            return Err(Error::InvalidConfig("local radius must be positive"));
        }
        if !(self.cue.duration_s > 0.0 && self.cue.duration_s.is_finite()) {
            return Err(Error::InvalidConfig("cue duration must be positive"));
        }
        Ok(())
    }
}

/// One eye-tracker reading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeSample {
    pub t: f64,
    pub eye_origin: Vec3,
    pub eye_dir: Vec3,
    pub head_forward: Vec3,
    pub head_pos: Vec3,
}

impl GazeSample {
    pub fn head_pose(&self) -> HeadPose {
        HeadPose { position: self.head_pos, forward: self.head_forward }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Activate,
    Deactivate,
    EnterLocal,
    ExitLocal,
    Select,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Idle,
    Global,
    Local {
        anchor: String,
        /// Frozen when local mode is entered; keys are the cluster members.
        assignments: BTreeMap<String, LocalAssignment>,
    },
}

impl Mode {
    pub fn is_active(&self) -> bool {
        !matches!(self, Mode::Idle)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Idle => "idle",
            Mode::Global => "global",
            Mode::Local { .. } => "local",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EventPayload {
    HoverEnter { object: String, cue: FeedbackCue },
    HoverExit { object: String },
    ModeChanged { mode: Mode },
    SelectionConfirmed { object: Option<String> },
    Activated,
    Deactivated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineEvent {
    pub t: f64,
    #[serde(flatten)]
    pub payload: EventPayload,
}

impl EngineEvent {
    fn new(t: f64, payload: EventPayload) -> Self {
        Self { t, payload }
    }
}

#[derive(Debug, Clone)]
pub struct Engine {
    scene: Scene,
    config: EngineConfig,
    params: SizeNormalizationParams,
    profiles: BTreeMap<String, ObjectProfile>,
    mode: Mode,
    hovered: Option<String>,
    last_gazed: Option<String>,
}

impl Engine {
    /// Resolves lightness and normalized size for every visible object up
    /// front, so texture problems surface here rather than mid-session.
    pub fn new(scene: Scene, config: EngineConfig, textures: &dyn TextureSource) -> Result<Self> {
        config.validate()?;
        let params = scene_stats(&scene)?;
        let profiles = scene
            .visible()
            .map(|o| Ok((o.id.clone(), object_profile(o, &params, textures)?)))
            .collect::<Result<_>>()?;
        Ok(Self { scene, config, params, profiles, mode: Mode::Idle, hovered: None, last_gazed: None })
    }

    pub fn scene(&self) -> &Scene {
        &self.scene
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn params(&self) -> &SizeNormalizationParams {
        &self.params
    }

    pub fn profile(&self, id: &str) -> Option<ObjectProfile> {
        self.profiles.get(id).copied()
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn hovered(&self) -> Option<&str> {
        self.hovered.as_deref()
    }

    pub fn set_cue_kind(&mut self, kind: CueKind) {
        self.config.cue.kind = kind;
    }

    /// Changes the cluster radius used the next time local mode is entered.
    pub fn set_local_radius(&mut self, radius: f64) -> Result<()> {
        let config = EngineConfig { local_radius: radius, ..self.config };
        config.validate()?;
        self.config = config;
        Ok(())
    }

    /// Global-mode cue for a visible object as heard from `pose`.
    pub fn global_cue(&self, id: &str, pose: &HeadPose) -> Result<FeedbackCue> {
        let (obj, profile) = self.visible_object(id)?;
        Ok(cue_from_profile(profile, obj, pose, &self.config.cue))
    }

    fn visible_object(&self, id: &str) -> Result<(&SceneObject, ObjectProfile)> {
        let obj = self.scene.get(id).filter(|o| !o.hidden).ok_or_else(|| Error::UnknownObject(String::from(id)))?;
        Ok((obj, self.profiles[id]))
    }

    /// Visible objects whose position lies within the local radius of the
    /// anchor's position, the anchor included.
    pub fn cluster(&self, anchor: &str) -> Result<Vec<&SceneObject>> {
        let (anchor, _) = self.visible_object(anchor)?;
        let r = self.config.local_radius;
        Ok(self.scene.visible().filter(|o| o.position.distance(anchor.position) <= r).collect())
    }

    /// Frozen local-mode values for the cluster around `anchor`.
    pub fn local_assignments_for(&self, anchor: &str) -> Result<BTreeMap<String, LocalAssignment>> {
        let members: Vec<ClusterMember<'_>> = self
            .cluster(anchor)?
            .into_iter()
            .map(|o| ClusterMember { id: &o.id, profile: self.profiles[&o.id] })
            .collect();
        local_assignments(&members)
    }

    pub fn activate(&mut self, t: f64) -> Vec<EngineEvent> {
        if self.mode.is_active() {
            return Vec::new();
        }
        self.mode = Mode::Global;
        vec![EngineEvent::new(t, EventPayload::Activated)]
    }

    pub fn deactivate(&mut self, t: f64) -> Vec<EngineEvent> {
        if !self.mode.is_active() {
            return Vec::new();
        }
        let mut events = Vec::with_capacity(2);
        if let Some(old) = self.hovered.take() {
            events.push(EngineEvent::new(t, EventPayload::HoverExit { object: old }));
        }
        self.mode = Mode::Idle;
        events.push(EngineEvent::new(t, EventPayload::Deactivated));
        events
    }

    /// Freezes local assignments around the last gazed object.
    pub fn enter_local(&mut self, t: f64) -> Result<Vec<EngineEvent>> {
        match self.mode {
            Mode::Idle => return Err(Error::NotActive),
            Mode::Local { .. } => return Ok(Vec::new()),
            Mode::Global => {}
        }
        let anchor = self.last_gazed.clone().ok_or(Error::NoAnchor)?;
        let assignments = self.local_assignments_for(&anchor)?;
        self.mode = Mode::Local { anchor, assignments };
        Ok(vec![EngineEvent::new(t, EventPayload::ModeChanged { mode: self.mode.clone() })])
    }

    pub fn exit_local(&mut self, t: f64) -> Vec<EngineEvent> {
        if !matches!(self.mode, Mode::Local { .. }) {
            return Vec::new();
        }
        self.mode = Mode::Global;
        vec![EngineEvent::new(t, EventPayload::ModeChanged { mode: Mode::Global })]
    }

    pub fn confirm_selection(&self, t: f64) -> Vec<EngineEvent> {
        vec![EngineEvent::new(t, EventPayload::SelectionConfirmed { object: self.hovered.clone() })]
    }

    pub fn apply(&mut self, command: Command, t: f64) -> Result<Vec<EngineEvent>> {
        match command {
            Command::Activate => Ok(self.activate(t)),
            Command::Deactivate => Ok(self.deactivate(t)),
            Command::EnterLocal => self.enter_local(t),
            Command::ExitLocal => Ok(self.exit_local(t)),
            Command::Select => Ok(self.confirm_selection(t)),
        }
    }

    /// Object the gaze ray currently resolves to.
    pub fn resolve(&self, origin: Vec3, dir: Vec3) -> Option<&SceneObject> {
        let dir = dir.normalized()?;
        sphere_cast(&self.scene, origin, dir, self.config.cast_radius).map(|hit| hit.object)
    }

    /// Feeds one gaze sample. Emits events only when the resolved target
    /// changes.
    pub fn step(&mut self, sample: &GazeSample) -> Vec<EngineEvent> {
        if !self.mode.is_active() {
            return Vec::new();
        }
        let target = self.resolve(sample.eye_origin, sample.eye_dir).map(|o| o.id.clone());
        if target == self.hovered {
            return Vec::new();
        }
        let mut events = Vec::with_capacity(2);
        if let Some(old) = self.hovered.take() {
            events.push(EngineEvent::new(sample.t, EventPayload::HoverExit { object: old }));
        }
        if let Some(id) = target {
            let cue = self.hover_cue(&id, &sample.head_pose());
            events.push(EngineEvent::new(sample.t, EventPayload::HoverEnter { object: id.clone(), cue }));
            self.last_gazed = Some(id.clone());
            self.hovered = Some(id);
        }
        events
    }

    fn hover_cue(&self, id: &str, pose: &HeadPose) -> FeedbackCue {
        let (obj, profile) = self.visible_object(id).expect("cast only returns visible objects");
        match &self.mode {
            Mode::Local { assignments, .. } => {
                let pan = pan_from_direction(pose.forward, pose.position, obj.position);
                let settings = &self.config.cue;
                match (assignments.get(id), settings.kind) {
                    (None, _) | (_, CueKind::Silent) => FeedbackCue::silent(obj.material, pan, settings.duration_s),
                    (Some(_), CueKind::Static) => static_cue(obj.material, pan),
                    (Some(a), CueKind::Sonohaptics) => FeedbackCue {
                        pitch_hz: a.pitch_hz,
                        amplitude: a.amplitude,
                        pan,
                        timbre: obj.material,
                        duration_s: settings.duration_s,
                        kind: CueKind::Sonohaptics,
                    },
                }
            }
            _ => cue_from_profile(profile, obj, pose, &self.config.cue),
        }
    }
}
