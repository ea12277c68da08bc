//! Gaze trace files (JSON Lines) and deterministic replay.
//!
//! Each line is either a gaze sample
//! `{"t":..,"eye_origin":[..],"eye_dir":[..],"head_forward":[..],"head_pos":[..]}`
//! or a command `{"cmd":"activate"|"deactivate"|"enter_local"|"exit_local"|"select","t":..}`.
//! Command timestamps are optional and default to the latest time seen.
//! Timestamps must not decrease.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;
use sonohaptics_core::engine::{Command, Engine, EngineEvent, GazeSample};

use crate::error::{Error, Result};

const UNIT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceLine {
    Sample(GazeSample),
    Command { command: Command, t: Option<f64> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CommandLine {
    cmd: Command,
    #[serde(default)]
    t: Option<f64>,
}

fn parse_line(text: &str) -> std::result::Result<TraceLine, String> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if value.get("cmd").is_some() {
        let c: CommandLine = serde_json::from_value(value).map_err(|e| e.to_string())?;
        return Ok(TraceLine::Command { command: c.cmd, t: c.t });
    }
    let sample: GazeSample = serde_json::from_value(value).map_err(|e| e.to_string())?;
    for (name, v) in [("eye_dir", sample.eye_dir), ("head_forward", sample.head_forward)] {
        if (v.length() - 1.0).abs() > UNIT_TOLERANCE {
            return Err(format!("{name} is not a unit vector"));
        }
    }
    if !(sample.t.is_finite() && sample.eye_origin.is_finite() && sample.head_pos.is_finite()) {
        return Err("non-finite sample".into());
    }
    Ok(TraceLine::Sample(sample))
}

/// Parses a whole trace. Blank lines are skipped; errors carry the 1-based
/// line number.
pub fn parse_trace(text: &str) -> Result<Vec<TraceLine>> {
    let mut last_t = f64::NEG_INFINITY;
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let parsed = parse_line(raw).map_err(|msg| Error::Trace { line, msg })?;
        let t = match parsed {
            TraceLine::Sample(s) => Some(s.t),
            TraceLine::Command { t, .. } => t,
        };
        if let Some(t) = t {
            if t < last_t {
                return Err(Error::Trace { line, msg: format!("timestamp {t} goes backwards (previous {last_t})") });
            }
            last_t = t;
        }
        lines.push(parsed);
    }
    Ok(lines)
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<Vec<TraceLine>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace(&text)
}

/// Feeds trace lines to an engine, tracking the clock for untimed commands.
#[derive(Debug, Clone)]
pub struct Driver {
    engine: Engine,
    clock: f64,
}

impl Driver {
    pub fn new(engine: Engine) -> Self {
        Self { engine, clock: 0.0 }
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    pub fn engine_mut(&mut self) -> &mut Engine {
        &mut self.engine
    }

    pub fn feed(&mut self, line: &TraceLine) -> sonohaptics_core::Result<Vec<EngineEvent>> {
        match *line {
            TraceLine::Sample(ref sample) => {
                self.clock = self.clock.max(sample.t);
                Ok(self.engine.step(sample))
            }
            TraceLine::Command { command, t } => {
                if let Some(t) = t {
                    self.clock = self.clock.max(t);
                }
                self.engine.apply(command, self.clock)
            }
        }
    }
}

/// Runs a trace through a fresh engine. Commands the engine rejects (such as
/// entering local mode before anything was gazed at) are logged and skipped.
pub fn replay(engine: Engine, lines: &[TraceLine]) -> Vec<EngineEvent> {
    let mut driver = Driver::new(engine);
    let mut events = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        match driver.feed(line) {
            Ok(ev) => events.extend(ev),
            Err(err) => tracing::warn!(entry = i + 1, %err, "command rejected"),
        }
    }
    events
}

pub fn events_to_jsonl(events: &[EngineEvent]) -> String {
    let mut out = String::new();
    for ev in events {
        out.push_str(&serde_json::to_string(ev).expect("events always serialize"));
        out.push('\n');
    }
    out
}

pub fn write_events(events: &[EngineEvent], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(events_to_jsonl(events).as_bytes()).map_err(|e| Error::io(path, e))
}
