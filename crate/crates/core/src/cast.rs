//! Gaze target resolution by sphere casting.
//!
//! Sweeping a sphere of radius `r` along a ray hits a box exactly when the ray
//! hits the box's Minkowski sum with that sphere (the box with rounded edges
//! and corners). The entry distance is found piecewise: between the parameter
//! values where the ray crosses a slab boundary, squared distance to the box
//! is a quadratic in `t`.

use alloc::vec::Vec;

use crate::math::Vec3;
use crate::scene::{Aabb, Scene, SceneObject};

/// Distance along a unit ray at which a sphere of `radius` first touches
/// `aabb`, or `None` when it never does. Zero if the sphere already overlaps
/// the box at the origin.
pub fn entry_distance(origin: Vec3, dir: Vec3, aabb: &Aabb, radius: f64) -> Option<f64> {
    let lo = aabb.min();
    let hi = aabb.max();

    // Clip against the box grown by `radius` on every side.
    let mut t_enter = 0.0f64;
    let mut t_exit = f64::INFINITY;
    for axis in 0..3 {
        let (o, d) = (origin.get(axis), dir.get(axis));
        let (a, b) = (lo.get(axis) - radius, hi.get(axis) + radius);
        if d == 0.0 {
            if o < a || o > b {
                return None;
            }
        } else {
            let (t1, t2) = ((a - o) / d, (b - o) / d);
            t_enter = t_enter.max(t1.min(t2));
            t_exit = t_exit.min(t1.max(t2));
        }
    }
    if t_enter > t_exit {
        return None;
    }

    let mut breaks: Vec<f64> = Vec::with_capacity(8);
    breaks.push(t_enter);
    for axis in 0..3 {
        let d = dir.get(axis);
        if d != 0.0 {
            for plane in [lo.get(axis), hi.get(axis)] {
                let t = (plane - origin.get(axis)) / d;
                if t > t_enter && t < t_exit {
                    breaks.push(t);
                }
            }
        }
    }
    breaks.push(t_exit);
    breaks.sort_by(f64::total_cmp);

    let r2 = radius * radius;
    for span in breaks.windows(2) {
        let (a, b) = (span[0], span[1]);
        let mid = 0.5 * (a + b);
        // Per-axis excess outside the box is linear in t on this span:
        // excess = c + k t. Accumulate the squared distance as A t² + B t + C.
        let (mut qa, mut qb, mut qc) = (0.0, 0.0, 0.0);
        for axis in 0..3 {
            let (o, d) = (origin.get(axis), dir.get(axis));
            let p = o + d * mid;
            let (c, k) = if p < lo.get(axis) {
                (lo.get(axis) - o, -d)
            } else if p > hi.get(axis) {
                (o - hi.get(axis), d)
            } else {
                continue;
            };
            qa += k * k;
            qb += 2.0 * c * k;
            qc += c * c;
        }
        let g = |t: f64| (qa * t + qb) * t + qc - r2;
        if g(a) <= 0.0 {
            return Some(a);
        }
        if qa <= 0.0 {
            continue;
        }
        let disc = qb * qb - 4.0 * qa * (qc - r2);
        if disc < 0.0 {
            continue;
        }
        let sq = libm::sqrt(disc);
        let q = -0.5 * (qb + libm::copysign(sq, qb));
        let (x1, x2) = (q / qa, if q != 0.0 { (qc - r2) / q } else { q / qa });
        let (near, far) = (x1.min(x2), x1.max(x2));
        if far < a || near > b {
            continue;
        }
        // g(a) > 0 with a between the roots only happens through rounding at
        // a tangential boundary; the sphere is already touching there.
        return Some(near.max(a));
    }
    None
}

/// A resolved gaze target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CastHit<'a> {
    pub object: &'a SceneObject,
    pub distance: f64,
}

/// First visible object touched by a sphere of `radius` swept along the ray.
/// Equal entry distances resolve to the earlier object in scene order.
pub fn sphere_cast<'a>(scene: &'a Scene, origin: Vec3, dir: Vec3, radius: f64) -> Option<CastHit<'a>> {
    scene
        .visible()
        .filter_map(|object| entry_distance(origin, dir, &object.bbox, radius).map(|distance| CastHit { object, distance }))
        .fold(None, |best: Option<CastHit<'a>>, hit| match best {
            Some(b) if b.distance <= hit.distance => Some(b),
            _ => Some(hit),
        })
}
