//! Shared fixtures, scene generators and independent oracles for the
//! integration tests. Nothing here calls into the code paths it checks.
#![allow(dead_code)]

pub mod oracles;

use std::path::PathBuf;

use rand::Rng;
use sonohaptics::core::math::Vec3;
use sonohaptics::core::scene::{Aabb, ColorSource, Material, Scene, SceneObject, Viewpoint};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_scene(n: usize) -> PathBuf {
    fixtures_dir().join(format!("living-room-{n}.json"))
}

pub fn fixture_trace() -> PathBuf {
    fixtures_dir().join("traces/living-room-1.jsonl")
}

pub fn random_unit<R: Rng>(rng: &mut R) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let len = v.length();
        if len > 0.05 && len <= 1.0 {
            return v * (1.0 / len);
        }
    }
}

pub fn random_object<R: Rng>(rng: &mut R, id: String, center: Vec3) -> SceneObject {
    let extents = Vec3::new(rng.random_range(0.05..1.2), rng.random_range(0.05..1.2), rng.random_range(0.05..1.2));
    SceneObject {
        name: id.clone(),
        id,
        position: center,
        bbox: Aabb { center, extents },
        material: Material::ALL[rng.random_range(0..Material::ALL.len())],
        color: ColorSource::Rgb([rng.random(), rng.random(), rng.random()]),
        hidden: false,
    }
}

/// `n` objects scattered through a cube of half-width `spread` meters.
pub fn random_scene<R: Rng>(rng: &mut R, n: usize, spread: f64) -> Scene {
    let objects = (0..n)
        .map(|i| {
            let c = Vec3::new(
                rng.random_range(-spread..spread),
                rng.random_range(-spread..spread),
                rng.random_range(-spread..spread),
            );
            random_object(rng, format!("obj-{i:02}"), c)
        })
        .collect();
    Scene::new("random", Viewpoint::default(), objects).expect("generated scenes are valid")
}

/// A scene with an anchor at index 0 and exactly `k - 1` neighbours within
/// `radius` of it; all other objects sit at least `2 * radius` away.
pub fn clustered_scene<R: Rng>(rng: &mut R, k: usize, outsiders: usize, radius: f64) -> Scene {
    let anchor = Vec3::new(rng.random_range(-2.0..2.0), rng.random_range(0.5..2.0), rng.random_range(3.0..6.0));
    let mut objects = vec![random_object(rng, "anchor".into(), anchor)];
    for i in 1..k {
        let offset = random_unit(rng) * rng.random_range(0.0..radius * 0.95);
        objects.push(random_object(rng, format!("near-{i}"), anchor + offset));
    }
    for i in 0..outsiders {
        let offset = random_unit(rng) * rng.random_range(radius * 2.0..radius * 6.0);
        objects.push(random_object(rng, format!("far-{i}"), anchor + offset));
    }
    Scene::new("clustered", Viewpoint::default(), objects).expect("generated scenes are valid")
}
