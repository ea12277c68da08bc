//! Independent reference computations.

use palette::{white_point::D65, FromColor, Lab, Srgb};
use rustfft::{num_complex::Complex, FftPlanner};
use sonohaptics::core::math::Vec3;
use sonohaptics::core::scene::{Aabb, Scene};

/// Lightness-to-pitch regression, evaluated directly in Horner form.
pub fn pitch_poly(l: f64) -> f64 {
    184.05 + l * (0.375 + l * 0.054)
}

/// Area-to-amplitude regression, evaluated directly in Horner form.
pub fn amp_poly(s: f64) -> f64 {
    0.275 + s * (3.80e-05 + s * -6.01e-10)
}

/// Kendall's tau-a between two equally long series.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut score = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let s = (x[j] - x[i]).signum() * (y[j] - y[i]).signum();
            score += s as i64;
        }
    }
    score as f64 / (n * (n - 1) / 2) as f64
}

/// CIELAB lightness of an sRGB triple from the `palette` crate.
pub fn reference_lightness(rgb: [u8; 3]) -> f64 {
    let srgb = Srgb::new(rgb[0], rgb[1], rgb[2]).into_format::<f64>();
    Lab::<D65, f64>::from_color(srgb.into_linear()).l
}

fn distance_to_box(p: Vec3, b: &Aabb) -> f64 {
    let (lo, hi) = (b.min(), b.max());
    let e = |i: usize| (lo.get(i) - p.get(i)).max(0.0).max(p.get(i) - hi.get(i));
    (e(0).powi(2) + e(1).powi(2) + e(2).powi(2)).sqrt()
}

/// First parameter at which a sphere swept along the ray touches the box,
/// found numerically: golden-section search for the closest approach of the
/// (convex) distance function, then bisection for the first crossing.
pub fn brute_entry(origin: Vec3, dir: Vec3, b: &Aabb, radius: f64) -> Option<f64> {
    let h = |t: f64| distance_to_box(origin + dir * t, b) - radius;
    if h(0.0) <= 0.0 {
        return Some(0.0);
    }
    let reach = origin.distance(b.center) + b.extents.length() + radius + 1.0;
    let (mut lo, mut hi) = (0.0f64, reach);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (h(x1), h(x2));
    for _ in 0..90 {
        if f1 <= 0.0 || f2 <= 0.0 {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = h(x2);
        }
    }
    let inside = if f1 <= 0.0 {
        x1
    } else if f2 <= 0.0 {
        x2
    } else {
        return None;
    };
    let (mut a, mut c) = (0.0, inside);
    for _ in 0..80 {
        let m = 0.5 * (a + c);
        if h(m) <= 0.0 {
            c = m;
        } else {
            a = m;
        }
    }
    Some(c)
}

/// Tests every visible object and sorts hits by entry distance.
pub fn brute_cast(scene: &Scene, origin: Vec3, dir: Vec3, radius: f64) -> Option<(String, f64)> {
    let mut hits: Vec<(String, f64)> = scene
        .visible()
        .filter_map(|o| brute_entry(origin, dir, &o.bbox, radius).map(|t| (o.id.clone(), t)))
        .collect();
    hits.sort_by(|a, b| a.1.total_cmp(&b.1));
    hits.into_iter().next()
}

/// Frequency of the largest FFT magnitude, with the signal zero-padded to
/// `pad_to` samples and the peak refined by parabolic interpolation.
pub fn fft_peak_hz(signal: &[f64], sample_rate: f64, pad_to: usize) -> f64 {
    let n = pad_to.max(signal.len());
    let mut buf: Vec<Complex<f64>> = signal.iter().map(|&s| Complex::new(s, 0.0)).collect();
    buf.resize(n, Complex::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mags: Vec<f64> = buf[..n / 2].iter().map(|c| c.norm()).collect();
    let (k, _) = mags.iter().enumerate().skip(1).fold((1, 0.0), |best, (i, &m)| if m > best.1 { (i, m) } else { best });
    let delta = if k + 1 < mags.len() {
        let (a, b, c) = (mags[k - 1], mags[k], mags[k + 1]);
        0.5 * (a - c) / (a - 2.0 * b + c)
    } else {
        0.0
    };
    (k as f64 + delta) * sample_rate / n as f64
}
