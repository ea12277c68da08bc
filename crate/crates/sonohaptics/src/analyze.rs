//! Cue distinctiveness report: the cue each object would get and how far
//! apart the cues are.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sonohaptics_core::crossmodal::{pan_from_direction, HeadPose, LocalAssignment};
use sonohaptics_core::engine::Engine;
use sonohaptics_core::scene::Material;
use sonohaptics_core::Error as CoreError;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisMode {
    Global,
    Local,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CueRow {
    pub id: String,
    pub pitch_hz: f64,
    pub amplitude: f64,
    pub pan: f64,
    pub timbre: Material,
}

/// Minimum and mean absolute difference over all pairs; `None` with fewer
/// than two values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapStats {
    pub min: Option<f64>,
    pub mean: Option<f64>,
}

impl GapStats {
    pub fn of(values: &[f64]) -> Self {
        let mut min = f64::INFINITY;
        let mut sum = 0.0;
        let mut pairs = 0usize;
        for (i, a) in values.iter().enumerate() {
            for b in &values[i + 1..] {
                let gap = (a - b).abs();
                min = min.min(gap);
                sum += gap;
                pairs += 1;
            }
        }
        if pairs == 0 {
            Self { min: None, mean: None }
        } else {
            Self { min: Some(min), mean: Some(sum / pairs as f64) }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinctivenessReport {
    pub mode: AnalysisMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// Cluster members, local mode only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cluster: Option<Vec<String>>,
    pub cues: Vec<CueRow>,
    pub pitch_gap: GapStats,
    pub amplitude_gap: GapStats,
    /// Gaps the same cluster members would have under global feedback.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_pitch_gap: Option<GapStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_amplitude_gap: Option<GapStats>,
}

fn gaps(rows: &[CueRow]) -> (GapStats, GapStats) {
    let pitches: Vec<f64> = rows.iter().map(|r| r.pitch_hz).collect();
    let amps: Vec<f64> = rows.iter().map(|r| r.amplitude).collect();
    (GapStats::of(&pitches), GapStats::of(&amps))
}

fn global_rows<'a>(engine: &Engine, ids: impl Iterator<Item = &'a str>, pose: &HeadPose) -> Result<Vec<CueRow>> {
    ids.map(|id| {
        let cue = engine.global_cue(id, pose)?;
        Ok(CueRow { id: id.to_string(), pitch_hz: cue.pitch_hz, amplitude: cue.amplitude, pan: cue.pan, timbre: cue.timbre })
    })
    .collect()
}

/// Analyzes the scene as heard from its default viewpoint. Local mode needs
/// an anchor and uses `radius` in place of the engine's local radius.
pub fn analyze(engine: &Engine, mode: AnalysisMode, anchor: Option<&str>, radius: f64) -> Result<DistinctivenessReport> {
    let vp = engine.scene().viewpoint();
    let pose = HeadPose { position: vp.position, forward: vp.forward };
    match mode {
        AnalysisMode::Global => {
            let rows = global_rows(engine, engine.scene().visible().map(|o| o.id.as_str()), &pose)?;
            let (pitch_gap, amplitude_gap) = gaps(&rows);
            Ok(DistinctivenessReport {
                mode,
                anchor: None,
                radius: None,
                cluster: None,
                cues: rows,
                pitch_gap,
                amplitude_gap,
                global_pitch_gap: None,
                global_amplitude_gap: None,
            })
        }
        AnalysisMode::Local => {
            let anchor = anchor.ok_or(CoreError::NoAnchor)?;
            let mut scoped = engine.clone();
            scoped.set_local_radius(radius)?;
            let assignments: BTreeMap<String, LocalAssignment> = scoped.local_assignments_for(anchor)?;
            let rows: Vec<CueRow> = assignments
                .iter()
                .map(|(id, a)| {
                    let obj = engine.scene().get(id).expect("cluster members exist");
                    CueRow {
                        id: id.clone(),
                        pitch_hz: a.pitch_hz,
                        amplitude: a.amplitude,
                        pan: pan_from_direction(pose.forward, pose.position, obj.position),
                        timbre: obj.material,
                    }
                })
                .collect();
            let (pitch_gap, amplitude_gap) = gaps(&rows);
            let baseline = global_rows(engine, assignments.keys().map(String::as_str), &pose)?;
            let (global_pitch, global_amp) = gaps(&baseline);
            Ok(DistinctivenessReport {
                mode,
                anchor: Some(anchor.to_string()),
                radius: Some(radius),
                cluster: Some(assignments.keys().cloned().collect()),
                cues: rows,
                pitch_gap,
                amplitude_gap,
                global_pitch_gap: Some(global_pitch),
                global_amplitude_gap: Some(global_amp),
            })
        }
    }
}
