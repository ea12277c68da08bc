//! sRGB to CIELAB conversion (D65 white, 2° observer) and per-object lightness.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scene::{ColorSource, SceneObject};

/// Linear sRGB to XYZ, IEC 61966-2-1.
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.412_456_4, 0.357_576_1, 0.180_437_5],
    [0.212_672_9, 0.715_152_2, 0.072_175_0],
    [0.019_333_9, 0.119_192_0, 0.950_304_1],
];

const EPSILON: f64 = 216.0 / 24389.0;
const KAPPA: f64 = 24389.0 / 27.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabColor {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

fn decode_channel(c: u8) -> f64 {
    let c = f64::from(c) / 255.0;
    if c <= 0.040_45 {
        c / 12.92
    } else {
        libm::pow((c + 0.055) / 1.055, 2.4)
    }
}

fn to_xyz(linear: [f64; 3]) -> [f64; 3] {
    SRGB_TO_XYZ.map(|row| row[0] * linear[0] + row[1] * linear[1] + row[2] * linear[2])
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        libm::cbrt(t)
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

/// Converts an 8-bit sRGB triple to CIELAB.
///
/// The reference white is the image of sRGB white under the conversion
/// matrix, so white lands on L = 100, a = b = 0 exactly.
pub fn srgb_to_lab(rgb: [u8; 3]) -> LabColor {
    let white = to_xyz([1.0; 3]);
    let xyz = to_xyz(rgb.map(decode_channel));
    let [fx, fy, fz] = [0, 1, 2].map(|i| lab_f(xyz[i] / white[i]));
    LabColor {
        l: 116.0 * fy - 16.0,
        a: 500.0 * (fx - fy),
        b: 200.0 * (fy - fz),
    }
}

pub fn lightness(rgb: [u8; 3]) -> f64 {
    srgb_to_lab(rgb).l
}

/// Mean of per-pixel lightness. Averaging happens after conversion, so a
/// half-black, half-white image has lightness 50. Returns `None` for an
/// empty pixel set.
pub fn mean_lightness<I>(pixels: I) -> Option<f64>
where
    I: IntoIterator<Item = [u8; 3]>,
{
    let (sum, count) = pixels
        .into_iter()
        .fold((0.0, 0usize), |(sum, n), px| (sum + lightness(px), n + 1));
    (count > 0).then(|| sum / count as f64)
}

/// Supplies decoded texture pixels (RGB, alpha dropped) for texture-backed
/// objects.
pub trait TextureSource {
    fn pixels(&self, path: &str) -> core::result::Result<Vec<[u8; 3]>, String>;
}

/// Texture source for scenes that only use base colors.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoTextures;

impl TextureSource for NoTextures {
    fn pixels(&self, _path: &str) -> core::result::Result<Vec<[u8; 3]>, String> {
        Err(String::from("texture loading is not available"))
    }
}

impl<T: TextureSource + ?Sized> TextureSource for &T {
    fn pixels(&self, path: &str) -> core::result::Result<Vec<[u8; 3]>, String> {
        (**self).pixels(path)
    }
}

/// Lightness (0..=100) of an object's base color or texture.
pub fn object_lightness(obj: &SceneObject, textures: &dyn TextureSource) -> Result<f64> {
    match &obj.color {
        ColorSource::Rgb(rgb) => Ok(lightness(*rgb)),
        ColorSource::Texture(path) => {
            let unreadable = |reason: String| Error::TextureUnreadable {
                object: obj.id.clone(),
                path: path.clone(),
                reason,
            };
            let pixels = textures.pixels(path).map_err(unreadable)?;
            mean_lightness(pixels).ok_or_else(|| unreadable(String::from("texture has no pixels")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;
    use crate::scene::{Aabb, Material};
    use alloc::collections::BTreeMap;
    use alloc::string::ToString;
    use alloc::vec;

    struct MapTextures(BTreeMap<String, Vec<[u8; 3]>>);

    impl TextureSource for MapTextures {
        fn pixels(&self, path: &str) -> core::result::Result<Vec<[u8; 3]>, String> {
            self.0.get(path).cloned().ok_or_else(|| "missing".to_string())
        }
    }

    fn object(color: ColorSource) -> SceneObject {
        SceneObject {
            id: "o".into(),
            name: "o".into(),
            position: Vec3::ZERO,
            bbox: Aabb { center: Vec3::ZERO, extents: Vec3::new(1.0, 1.0, 1.0) },
            material: Material::Paper,
            color,
            hidden: false,
        }
    }

    #[test]
    fn white_and_black_are_exact() {
        let w = srgb_to_lab([255, 255, 255]);
        assert_eq!(w.l, 100.0);
        assert!(w.a.abs() < 0.01 && w.b.abs() < 0.01);
        assert_eq!(srgb_to_lab([0, 0, 0]), LabColor { l: 0.0, a: 0.0, b: 0.0 });
    }

    #[test]
    fn pure_red() {
        let r = srgb_to_lab([255, 0, 0]);
        assert!((r.l - 53.24).abs() < 0.1, "{r:?}");
        assert!((r.a - 80.09).abs() < 0.1, "{r:?}");
        assert!((r.b - 67.20).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn grays_strictly_increase() {
        let ls: Vec<f64> = (0..=255u8).map(|g| lightness([g, g, g])).collect();
        assert!(ls.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn base_color_lightness() {
        assert_eq!(object_lightness(&object(ColorSource::Rgb([0, 0, 0])), &NoTextures).unwrap(), 0.0);
    }

    #[test]
    fn texture_lightness() {
        let mut map = BTreeMap::new();
        map.insert("white.png".to_string(), vec![[255, 255, 255]; 16]);
        let mut half = vec![[0, 0, 0]; 8];
        half.extend(vec![[255, 255, 255]; 8]);
        map.insert("half.png".to_string(), half);
        let tex = MapTextures(map);
        let white = object_lightness(&object(ColorSource::Texture("white.png".into())), &tex).unwrap();
        assert_eq!(white, 100.0);
        let half = object_lightness(&object(ColorSource::Texture("half.png".into())), &tex).unwrap();
        assert!((half - 50.0).abs() < 0.01);
    }

    #[test]
    fn missing_texture_errors() {
        let err = object_lightness(&object(ColorSource::Texture("nope.png".into())), &NoTextures).unwrap_err();
        assert!(matches!(err, Error::TextureUnreadable { ref object, .. } if object == "o"));
    }
}
