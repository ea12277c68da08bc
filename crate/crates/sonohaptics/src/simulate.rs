//! Noisy-gaze selection proxy.
//!
//! Each trial aims the eye ray from the scene viewpoint at a random visible
//! object's center, perturbs it by Gaussian angular noise on two independent
//! axes, and counts the trial as an error unless the sphere cast lands on the
//! intended object. This models tracker noise and target geometry only.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use sonohaptics_core::engine::Engine;
use sonohaptics_core::math::Vec3;

/// Head-free accuracy of the headset tracker the defaults mimic, degrees.
pub const DEFAULT_NOISE_DEG: f64 = 1.652;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectTally {
    pub trials: usize,
    pub errors: usize,
    /// Trials where the cast hit nothing.
    pub misses: usize,
}

impl ObjectTally {
    pub fn error_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub trials: usize,
    pub noise_sigma_deg: f64,
    pub seed: u64,
    pub errors: usize,
    pub error_rate: f64,
    /// Fraction of trials that resolved to no object at all.
    pub give_up_rate: f64,
    pub per_object: BTreeMap<String, ObjectTally>,
}

/// Rotates `dir` by `yaw` about the vertical and then by `pitch` about the
/// resulting horizontal axis.
pub fn perturb(dir: Vec3, yaw: f64, pitch: f64) -> Vec3 {
    let right = Vec3::UP.cross(dir).normalized().unwrap_or(Vec3::new(1.0, 0.0, 0.0));
    let up = dir.cross(right);
    let (sy, cy) = yaw.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let turned = dir * cy + right * sy;
    (turned * cp + up * sp).normalized().unwrap_or(dir)
}

pub fn simulate(engine: &Engine, noise_sigma_deg: f64, trials: usize, seed: u64) -> SimulationReport {
    let eye = engine.scene().viewpoint().position;
    let targets: Vec<_> = engine.scene().visible().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = (noise_sigma_deg > 0.0)
        .then(|| Normal::new(0.0, noise_sigma_deg.to_radians()).expect("sigma is positive and finite"));

    let mut per_object: BTreeMap<String, ObjectTally> =
        targets.iter().map(|o| (o.id.clone(), ObjectTally::default())).collect();
    let (mut errors, mut misses) = (0, 0);

    for _ in 0..trials {
        let target = targets[rng.random_range(0..targets.len())];
        let ideal = (target.position - eye).normalized().unwrap_or(Vec3::FORWARD);
        let dir = match &noise {
            Some(n) => perturb(ideal, n.sample(&mut rng), n.sample(&mut rng)),
            None => ideal,
        };
        let hit = engine.resolve(eye, dir);
        let tally = per_object.get_mut(&target.id).expect("targets are tallied");
        tally.trials += 1;
        if hit.map(|o| o.id.as_str()) != Some(target.id.as_str()) {
            tally.errors += 1;
            errors += 1;
            if hit.is_none() {
                tally.misses += 1;
                misses += 1;
            }
        }
    }

    let rate = |n: usize| if trials == 0 { 0.0 } else { n as f64 / trials as f64 };
    SimulationReport {
        trials,
        noise_sigma_deg,
        seed,
        errors,
        error_rate: rate(errors),
        give_up_rate: rate(misses),
        per_object,
    }
}
