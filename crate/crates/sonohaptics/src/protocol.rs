//! Wire protocol between the session server and interactive clients.
//!
//! Messages are JSON objects tagged by `"type"`, one per line. A [`Session`]
//! owns one engine and turns each client line into zero or more server
//! messages; transports only move lines.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sonohaptics_core::crossmodal::{CueKind, FeedbackCue, LocalAssignment, PresetTable};
use sonohaptics_core::engine::{Command, Engine, EngineConfig, EngineEvent, EventPayload, GazeSample, Mode};
use sonohaptics_core::math::Vec3;
use sonohaptics_core::scene::SceneDocument;

use crate::trace::{Driver, TraceLine};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientMessage {
    Hello {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cue_kind: Option<CueKind>,
    },
    Gaze { t: f64, origin: Vec3, dir: Vec3, head_forward: Vec3, head_pos: Vec3 },
    Activate { #[serde(default, skip_serializing_if = "Option::is_none")] t: Option<f64> },
    Deactivate { #[serde(default, skip_serializing_if = "Option::is_none")] t: Option<f64> },
    EnterLocal { #[serde(default, skip_serializing_if = "Option::is_none")] t: Option<f64> },
    ExitLocal { #[serde(default, skip_serializing_if = "Option::is_none")] t: Option<f64> },
    Select { #[serde(default, skip_serializing_if = "Option::is_none")] t: Option<f64> },
}

impl ClientMessage {
    /// The equivalent trace line, if the message drives the engine.
    pub fn to_trace_line(&self) -> Option<TraceLine> {
        let command = |command, t| Some(TraceLine::Command { command, t });
        match *self {
            ClientMessage::Hello { .. } => None,
            ClientMessage::Gaze { t, origin, dir, head_forward, head_pos } => Some(TraceLine::Sample(GazeSample {
                t,
                eye_origin: origin,
                eye_dir: dir.normalized().unwrap_or(dir),
                head_forward: head_forward.normalized().unwrap_or(head_forward),
                head_pos,
            })),
            ClientMessage::Activate { t } => command(Command::Activate, t),
            ClientMessage::Deactivate { t } => command(Command::Deactivate, t),
            ClientMessage::EnterLocal { t } => command(Command::EnterLocal, t),
            ClientMessage::ExitLocal { t } => command(Command::ExitLocal, t),
            ClientMessage::Select { t } => command(Command::Select, t),
        }
    }

    pub fn from_trace_line(line: &TraceLine) -> Self {
        match *line {
            TraceLine::Sample(s) => ClientMessage::Gaze {
                t: s.t,
                origin: s.eye_origin,
                dir: s.eye_dir,
                head_forward: s.head_forward,
                head_pos: s.head_pos,
            },
            TraceLine::Command { command, t } => match command {
                Command::Activate => ClientMessage::Activate { t },
                Command::Deactivate => ClientMessage::Deactivate { t },
                Command::EnterLocal => ClientMessage::EnterLocal { t },
                Command::ExitLocal => ClientMessage::ExitLocal { t },
                Command::Select => ClientMessage::Select { t },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerMessage {
    Scene { scene: SceneDocument, presets: PresetTable, config: EngineConfig },
    Hover { t: f64, object: String, cue: FeedbackCue },
    HoverExit { t: f64, object: String },
    Mode {
        t: f64,
        mode: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchor: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        assignments: Option<BTreeMap<String, LocalAssignment>>,
    },
    Selection { t: f64, object: Option<String> },
    Error { msg: String },
}

impl ServerMessage {
    fn mode(t: f64, mode: &Mode) -> Self {
        let (anchor, assignments) = match mode {
            Mode::Local { anchor, assignments } => (Some(anchor.clone()), Some(assignments.clone())),
            _ => (None, None),
        };
        ServerMessage::Mode { t, mode: mode.name().to_string(), anchor, assignments }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}

impl From<&EngineEvent> for ServerMessage {
    fn from(ev: &EngineEvent) -> Self {
        let t = ev.t;
        match &ev.payload {
            EventPayload::HoverEnter { object, cue } => ServerMessage::Hover { t, object: object.clone(), cue: *cue },
            EventPayload::HoverExit { object } => ServerMessage::HoverExit { t, object: object.clone() },
            EventPayload::ModeChanged { mode } => ServerMessage::mode(t, mode),
            EventPayload::SelectionConfirmed { object } => ServerMessage::Selection { t, object: object.clone() },
            EventPayload::Activated => ServerMessage::mode(t, &Mode::Global),
            EventPayload::Deactivated => ServerMessage::mode(t, &Mode::Idle),
        }
    }
}

/// One client's engine plus the message handling around it.
#[derive(Debug, Clone)]
pub struct Session {
    driver: Driver,
    presets: PresetTable,
    events: Vec<EngineEvent>,
}

impl Session {
    pub fn new(engine: Engine, presets: PresetTable) -> Self {
        Self { driver: Driver::new(engine), presets, events: Vec::new() }
    }

    /// Every engine event produced so far, in order.
    pub fn events(&self) -> &[EngineEvent] {
        &self.events
    }

    pub fn engine(&self) -> &Engine {
        self.driver.engine()
    }

    pub fn handle(&mut self, msg: ClientMessage) -> Vec<ServerMessage> {
        if let ClientMessage::Hello { cue_kind } = msg {
            if let Some(kind) = cue_kind {
                self.driver.engine_mut().set_cue_kind(kind);
            }
            let engine = self.driver.engine();
            return vec![ServerMessage::Scene {
                scene: engine.scene().to_document(),
                presets: self.presets.clone(),
                config: *engine.config(),
            }];
        }
        let line = msg.to_trace_line().expect("only hello lacks a trace line");
        match self.driver.feed(&line) {
            Ok(events) => {
                let replies = events.iter().map(ServerMessage::from).collect();
                self.events.extend(events);
                replies
            }
            Err(err) => vec![ServerMessage::Error { msg: err.to_string() }],
        }
    }

    /// Handles one line of text. Malformed input yields an error reply and
    /// leaves the session untouched.
    pub fn handle_line(&mut self, line: &str) -> Vec<ServerMessage> {
        if line.trim().is_empty() {
            return Vec::new();
        }
        match serde_json::from_str::<ClientMessage>(line) {
            Ok(msg) => self.handle(msg),
            Err(err) => vec![ServerMessage::Error { msg: format!("malformed message: {err}") }],
        }
    }
}
