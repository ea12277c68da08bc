//! Scene representation, validation and per-scene size statistics.
//!
//! [`SceneDocument`] mirrors the versioned JSON layout one-to-one; turning it
//! into a [`Scene`] validates every object. Reading files is left to callers.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::Vec3;

pub const SCENE_VERSION: u32 = 1;

/// Seated eye height used when a scene does not declare a viewpoint.
pub const DEFAULT_EYE_HEIGHT: f64 = 1.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    Ceramic,
    Glass,
    Plastic,
    Metal,
    Wood,
    Fabric,
    Paper,
}

impl Material {
    pub const ALL: [Material; 7] = [
        Material::Ceramic,
        Material::Glass,
        Material::Plastic,
        Material::Metal,
        Material::Wood,
        Material::Fabric,
        Material::Paper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Material::Ceramic => "ceramic",
            Material::Glass => "glass",
            Material::Plastic => "plastic",
            Material::Metal => "metal",
            Material::Wood => "wood",
            Material::Fabric => "fabric",
            Material::Paper => "paper",
        }
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Returned by [`Material::from_str`]; carries the rejected name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMaterial(pub String);

impl FromStr for Material {
    type Err = UnknownMaterial;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Material::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| UnknownMaterial(s.to_string()))
    }
}

/// Axis-aligned box given by its center and full side lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub center: Vec3,
    pub extents: Vec3,
}

impl Aabb {
    pub fn min(&self) -> Vec3 {
        self.center - self.extents * 0.5
    }

    pub fn max(&self) -> Vec3 {
        self.center + self.extents * 0.5
    }

    /// The two largest extents, largest first: the silhouette width and
    /// height used for size normalization.
    pub fn face_dims(&self) -> (f64, f64) {
        let mut e = self.extents.to_array();
        e.sort_by(|a, b| b.total_cmp(a));
        (e[0], e[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorSource {
    Rgb([u8; 3]),
    Texture(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneObject {
    pub id: String,
    pub name: String,
    pub position: Vec3,
    pub bbox: Aabb,
    pub material: Material,
    pub color: ColorSource,
    pub hidden: bool,
}

impl SceneObject {
    pub fn face_dims(&self) -> (f64, f64) {
        self.bbox.face_dims()
    }
}

/// Where the user's head sits when the scene opens.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewpoint {
    pub position: Vec3,
    pub forward: Vec3,
}

impl Default for Viewpoint {
    fn default() -> Self {
        Self {
            position: Vec3::new(0.0, DEFAULT_EYE_HEIGHT, 0.0),
            forward: Vec3::FORWARD,
        }
    }
}

/// A validated scene. Construct through [`Scene::new`] or
/// [`SceneDocument::into_scene`].
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    name: String,
    viewpoint: Viewpoint,
    objects: Vec<SceneObject>,
}

impl Scene {
    pub fn new(name: impl Into<String>, viewpoint: Viewpoint, objects: Vec<SceneObject>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for obj in &objects {
            if !seen.insert(obj.id.as_str()) {
                return Err(Error::DuplicateId(obj.id.clone()));
            }
            validate_object(obj)?;
        }
        let forward = viewpoint.forward.normalized().ok_or(Error::InvalidConfig("viewpoint forward is zero"))?;
        if !viewpoint.position.is_finite() {
            return Err(Error::InvalidConfig("viewpoint position is not finite"));
        }
        Ok(Self {
            name: name.into(),
            viewpoint: Viewpoint { position: viewpoint.position, forward },
            objects,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn viewpoint(&self) -> Viewpoint {
        self.viewpoint
    }

    pub fn objects(&self) -> &[SceneObject] {
        &self.objects
    }

    pub fn visible(&self) -> impl Iterator<Item = &SceneObject> + '_ {
        self.objects.iter().filter(|o| !o.hidden)
    }

    pub fn get(&self, id: &str) -> Option<&SceneObject> {
        self.objects.iter().find(|o| o.id == id)
    }

    /// Returns a copy with the given objects marked hidden.
    pub fn with_hidden<'a>(&self, ids: impl IntoIterator<Item = &'a str>) -> Result<Scene> {
        let mut scene = self.clone();
        for id in ids {
            let obj = scene
                .objects
                .iter_mut()
                .find(|o| o.id == id)
                .ok_or_else(|| Error::UnknownObject(id.to_string()))?;
            obj.hidden = true;
        }
        Ok(scene)
    }

    pub fn to_document(&self) -> SceneDocument {
        SceneDocument {
            version: SCENE_VERSION,
            name: self.name.clone(),
            viewpoint: Some(self.viewpoint),
            objects: self
                .objects
                .iter()
                .map(|o| ObjectDocument {
                    id: o.id.clone(),
                    name: o.name.clone(),
                    position: o.position,
                    bbox: o.bbox,
                    material: o.material.as_str().to_string(),
                    color: o.color.clone(),
                    hidden: o.hidden,
                })
                .collect(),
        }
    }
}

fn validate_object(obj: &SceneObject) -> Result<()> {
    let non_finite = |field| Error::NonFinite { object: obj.id.clone(), field };
    if !obj.position.is_finite() {
        return Err(non_finite("position"));
    }
    if !obj.bbox.center.is_finite() {
        return Err(non_finite("bbox.center"));
    }
    if !obj.bbox.extents.is_finite() {
        return Err(non_finite("bbox.extents"));
    }
    if obj.bbox.extents.to_array().iter().any(|&e| e <= 0.0) {
        return Err(Error::NonPositiveExtent { object: obj.id.clone() });
    }
    Ok(())
}

/// On-disk scene layout (`"version": 1`). Material names stay strings here so
/// that validation can report the offending object id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneDocument {
    pub version: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewpoint: Option<Viewpoint>,
    pub objects: Vec<ObjectDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectDocument {
    pub id: String,
    pub name: String,
    pub position: Vec3,
    pub bbox: Aabb,
    pub material: String,
    pub color: ColorSource,
    #[serde(default)]
    pub hidden: bool,
}

impl SceneDocument {
    pub fn into_scene(self) -> Result<Scene> {
        if self.version != SCENE_VERSION {
            return Err(Error::UnsupportedVersion(self.version));
        }
        let objects = self
            .objects
            .into_iter()
            .map(|o| {
                let material = o.material.parse().map_err(|UnknownMaterial(material)| Error::UnknownMaterial {
                    object: o.id.clone(),
                    material,
                })?;
                Ok(SceneObject {
                    id: o.id,
                    name: o.name,
                    position: o.position,
                    bbox: o.bbox,
                    material,
                    color: o.color,
                    hidden: o.hidden,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Scene::new(self.name, self.viewpoint.unwrap_or_default(), objects)
    }
}

/// Per-scene extrema of object silhouette width and height, over visible
/// objects only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeNormalizationParams {
    pub min_w: f64,
    pub max_w: f64,
    pub min_h: f64,
    pub max_h: f64,
}

pub fn scene_stats(scene: &Scene) -> Result<SizeNormalizationParams> {
    let mut visible = scene.visible().map(SceneObject::face_dims);
    let (w0, h0) = visible.next().ok_or(Error::EmptyScene)?;
    let init = SizeNormalizationParams { min_w: w0, max_w: w0, min_h: h0, max_h: h0 };
    Ok(visible.fold(init, |p, (w, h)| SizeNormalizationParams {
        min_w: p.min_w.min(w),
        max_w: p.max_w.max(w),
        min_h: p.min_h.min(h),
        max_h: p.max_h.max(h),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn boxed(id: &str, extents: [f64; 3]) -> SceneObject {
        SceneObject {
            id: id.to_string(),
            name: id.to_string(),
            position: Vec3::new(0.0, 1.0, 3.0),
            bbox: Aabb { center: Vec3::new(0.0, 1.0, 3.0), extents: extents.into() },
            material: Material::Wood,
            color: ColorSource::Rgb([128, 128, 128]),
            hidden: false,
        }
    }

    #[test]
    fn face_dims_take_two_largest() {
        let b = Aabb { center: Vec3::ZERO, extents: Vec3::new(0.1, 0.7, 0.3) };
        assert_eq!(b.face_dims(), (0.7, 0.3));
    }

    #[test]
    fn duplicate_id_names_the_object() {
        let err = Scene::new("s", Viewpoint::default(), vec![boxed("tv", [1.0; 3]), boxed("tv", [1.0; 3])]).unwrap_err();
        assert_eq!(err, Error::DuplicateId("tv".into()));
        assert!(err.to_string().contains("tv"));
    }

    #[test]
    fn zero_extent_rejected() {
        let err = Scene::new("s", Viewpoint::default(), vec![boxed("a", [1.0, 0.0, 1.0])]).unwrap_err();
        assert_eq!(err, Error::NonPositiveExtent { object: "a".into() });
    }

    #[test]
    fn unknown_material_rejected() {
        let mut doc = Scene::new("s", Viewpoint::default(), vec![boxed("rock", [1.0; 3])]).unwrap().to_document();
        doc.objects[0].material = "stone".into();
        let err = doc.into_scene().unwrap_err();
        assert_eq!(err, Error::UnknownMaterial { object: "rock".into(), material: "stone".into() });
        assert!(err.to_string().contains("unknown material"));
    }

    #[test]
    fn wrong_version_rejected() {
        let mut doc = Scene::new("s", Viewpoint::default(), vec![boxed("a", [1.0; 3])]).unwrap().to_document();
        doc.version = 2;
        assert_eq!(doc.into_scene().unwrap_err(), Error::UnsupportedVersion(2));
    }

    #[test]
    fn stats_over_widths() {
        let objs = vec![
            boxed("a", [0.2, 0.1, 0.05]),
            boxed("b", [0.5, 0.3, 0.05]),
            boxed("c", [1.0, 0.4, 0.05]),
        ];
        let p = scene_stats(&Scene::new("s", Viewpoint::default(), objs).unwrap()).unwrap();
        assert_eq!((p.min_w, p.max_w), (0.2, 1.0));
        assert_eq!((p.min_h, p.max_h), (0.1, 0.4));
    }

    #[test]
    fn stats_single_object_degenerate() {
        let p = scene_stats(&Scene::new("s", Viewpoint::default(), vec![boxed("a", [0.3, 0.2, 0.1])]).unwrap()).unwrap();
        assert_eq!(p.min_w, p.max_w);
        assert_eq!(p.min_w, 0.3);
    }

    #[test]
    fn stats_ignore_hidden_and_fail_when_all_hidden() {
        let mut big = boxed("big", [5.0, 5.0, 5.0]);
        big.hidden = true;
        let scene = Scene::new("s", Viewpoint::default(), vec![boxed("a", [0.3, 0.2, 0.1]), big]).unwrap();
        assert_eq!(scene_stats(&scene).unwrap().max_w, 0.3);
        let all_hidden = scene.with_hidden(["a"]).unwrap();
        assert_eq!(scene_stats(&all_hidden).unwrap_err(), Error::EmptyScene);
    }
}
