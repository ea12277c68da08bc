mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sonohaptics::core::cast::{entry_distance, sphere_cast};
use sonohaptics::core::colorimetry::lightness;
use sonohaptics::core::crossmodal::{
    amplitude_from_size, pitch_from_lightness, quantize_to_scale, CueKind, FeedbackCue, PresetTable, AMP_MAX, AMP_MIN,
    PITCH_MAX_HZ, PITCH_MIN_HZ, STUDY_AREA_MAX, STUDY_AREA_MIN,
};
use sonohaptics::core::math::Vec3;
use sonohaptics::core::scene::{Aabb, Material};
use sonohaptics::core::synthesis::{render_cue_audio, render_pulse, SynthConfig};
use support::oracles::{amp_poly, brute_cast, brute_entry, fft_peak_hz, pitch_poly, reference_lightness};

#[test]
fn lightness_matches_reference_on_a_lattice() {
    let levels: Vec<u8> = (0..17).map(|k| ((k * 255) as f64 / 16.0).round() as u8).collect();
    for &r in &levels {
        for &g in &levels {
            for &b in &levels {
                let (got, want) = (lightness([r, g, b]), reference_lightness([r, g, b]));
                assert!((got - want).abs() < 0.1, "({r},{g},{b}): {got} vs {want}");
            }
        }
    }
}

#[test]
fn pitch_of_red_lightness() {
    // L* of pure red is about 53.24
    let p = pitch_from_lightness(lightness([255, 0, 0]));
    assert!((p - pitch_poly(reference_lightness([255, 0, 0]))).abs() < 0.05, "{p}");
}

proptest! {
    #[test]
    fn lightness_agrees_with_reference(rgb in any::<[u8; 3]>()) {
        prop_assert!((lightness(rgb) - reference_lightness(rgb)).abs() < 0.1);
    }

    #[test]
    fn pitch_matches_polynomial_inside_range(l in 0.0f64..=100.0) {
        let want = pitch_poly(l).clamp(PITCH_MIN_HZ, PITCH_MAX_HZ);
        prop_assert!((pitch_from_lightness(l) - want).abs() <= 1e-9);
    }

    #[test]
    fn pitch_is_monotone(a in -50.0f64..150.0, b in -50.0f64..150.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(pitch_from_lightness(lo) <= pitch_from_lightness(hi));
    }

    #[test]
    fn amplitude_matches_polynomial_on_study_range(s in STUDY_AREA_MIN..=STUDY_AREA_MAX) {
        let want = amp_poly(s).clamp(AMP_MIN, AMP_MAX);
        prop_assert!((amplitude_from_size(s) - want).abs() <= 1e-12);
    }

    #[test]
    fn amplitude_always_in_range(s in proptest::num::f64::NORMAL) {
        let a = amplitude_from_size(s);
        prop_assert!((AMP_MIN..=AMP_MAX).contains(&a));
    }

    #[test]
    fn scale_snap_is_nearest_semitone(p in 100.0f64..1200.0) {
        let q = quantize_to_scale(p);
        let table: Vec<f64> = (48..=83).map(|m| 440.0 * 2f64.powf((m as f64 - 69.0) / 12.0)).collect();
        let best = table.iter().cloned().min_by(|a, b| (p / a).ln().abs().total_cmp(&(p / b).ln().abs())).unwrap();
        prop_assert!((q - best).abs() < 1e-9, "{p} -> {q}, expected {best}");
    }
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Vec3> {
    vec3().prop_filter_map("non-degenerate", |v| if v.length() > 0.1 { v.normalized() } else { None })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn entry_distance_agrees_with_brute_force(
        origin in vec3(),
        dir in unit(),
        center in vec3(),
        ex in 0.02f64..2.0, ey in 0.02f64..2.0, ez in 0.02f64..2.0,
        radius in 0.01f64..1.0,
    ) {
        let b = Aabb { center, extents: Vec3::new(ex, ey, ez) };
        let got = entry_distance(origin, dir, &b, radius);
        let want = brute_entry(origin, dir, &b, radius);
        match (got, want) {
            (Some(g), Some(w)) => prop_assert!((g - w).abs() < 1e-6, "{g} vs {w}"),
            (None, None) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn scene_cast_agrees_with_brute_force(seed in any::<u64>(), origin in vec3(), dir in unit()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scene = support::random_scene(&mut rng, 10, 4.0);
        let got = sphere_cast(&scene, origin, dir, 0.5).map(|h| (h.object.id.clone(), h.distance));
        let want = brute_cast(&scene, origin, dir, 0.5);
        match (got, want) {
            (Some((gi, gd)), Some((wi, wd))) => {
                prop_assert_eq!(gi, wi);
                prop_assert!((gd - wd).abs() < 1e-6);
            }
            (None, None) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }
}

#[test]
fn pulse_spectrum_peaks_at_the_requested_pitch() {
    for pitch in [130.81, 261.63, 440.0, 559.285, 987.77] {
        let pulse = render_pulse(pitch, 0.2, 48_000, 0.005);
        let peak = fft_peak_hz(&pulse, 48_000.0, 4 * 48_000);
        assert!((peak - pitch).abs() <= 1.0, "{pitch}: {peak}");
    }
}

#[test]
fn full_mix_keeps_the_pitch_dominant() {
    let presets = PresetTable::default();
    for material in Material::ALL {
        let cue = FeedbackCue {
            pitch_hz: 440.0,
            amplitude: 0.5,
            pan: 0.0,
            timbre: material,
            duration_s: 0.2,
            kind: CueKind::Sonohaptics,
        };
        let buf = render_cue_audio(&cue, &presets, &SynthConfig::default()).unwrap();
        let mono: Vec<f64> = buf.left.iter().zip(&buf.right).map(|(&l, &r)| f64::from(l + r)).collect();
        let peak = fft_peak_hz(&mono, 48_000.0, (4 * 48_000).max(mono.len()));
        assert!((peak - 440.0).abs() <= 1.0, "{material:?}: {peak}");
    }
}
