use std::f64::consts::{FRAC_PI_2, PI};

use wavesign::signature::DEFAULT_THRESHOLD as TAU;

use wavesign::corpus::{generate, GeneratorSpec, Orientation, SignalKind};
use wavesign::operators::{dilate, translate};
use wavesign::signature::{angle_diff, cesaro_diagnostic, classify, mean_resultant};
use wavesign::transform::{cwt, make_scale_grid, CoefficientField};
use wavesign::{analyze, Complex64, ScaleGrid, Signal, SignatureField, WaveletSpec};

fn grid() -> ScaleGrid {
    make_scale_grid(wavesign::cli::DEFAULT_BASE_SCALE, 3, 16).unwrap()
}

fn step_at(pos: f64) -> Signal {
    generate(&GeneratorSpec::new(1024, pos, SignalKind::Step { orientation: Orientation::Positive })).unwrap()
}

fn sig_of(field: &CoefficientField) -> SignatureField {
    classify(&mean_resultant(field, field.magnitude_floor(1e-12)), TAU).unwrap()
}

fn run(s: &Signal) -> SignatureField {
    analyze(s, &WaveletSpec::default(), &grid(), 1e-12, TAU).unwrap()
}

#[test]
fn rotating_coefficients_rotates_the_resultant() {
    let f = cwt(&generate(&GeneratorSpec::new(1024, 0.5, SignalKind::PiecewiseDemo)).unwrap(), &WaveletSpec::default(), &grid()).unwrap();
    let u = Complex64::from_polar(1.0, 0.9);
    let a = sig_of(&f);
    let b = sig_of(&f.rotated(u));
    assert_eq!(a.detected, b.detected);
    for i in 0..a.len() {
        assert!((a.mean_resultant[i] * u - b.mean_resultant[i]).norm() < 1e-12);
    }
    for &i in &a.detected {
        assert!(angle_diff(b.arg[i], a.arg[i] + 0.9).abs() < 1e-12);
    }
}

#[test]
fn every_suffix_of_scales_keeps_the_jump_signature() {
    let s = step_at(0.5);
    for first in 0..16 {
        let g = grid().suffix(first).unwrap();
        let sig = analyze(&s, &WaveletSpec::default(), &g, 1e-12, TAU).unwrap();
        assert!(sig.is_detected(512), "suffix from {first}");
        assert!(angle_diff(sig.arg[512], FRAC_PI_2).abs() < 1e-12);
    }
}

#[test]
fn cesaro_means_at_a_jump_stay_coherent() {
    let f = cwt(&step_at(0.5), &WaveletSpec::default(), &grid()).unwrap();
    let means = cesaro_diagnostic(&f, 512, f.magnitude_floor(1e-12));
    assert_eq!(means.len(), 16);
    assert!(means.iter().all(|m| m.norm() >= 0.99));
}

#[test]
fn signature_field_follows_translation() {
    let s = generate(&GeneratorSpec::new(1024, 0.5, SignalKind::PiecewiseDemo)).unwrap();
    let a = run(&s);
    let b = run(&translate(&s, 0.125).unwrap());
    let moved: Vec<usize> = a.detected.iter().map(|i| (i + 128) % 1024).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    assert_eq!(b.detected, moved);
}

#[test]
fn dilation_moves_detections() {
    let d = run(&dilate(&step_at(0.25), 2.0).unwrap());
    assert!(d.is_detected(512));
    assert!(angle_diff(d.arg[512], FRAC_PI_2).abs() < 0.05);

    let d = run(&dilate(&step_at(0.5), 0.5).unwrap());
    assert!(d.is_detected(256));
    assert!(angle_diff(d.arg[256], FRAC_PI_2).abs() < 0.05);
}

#[test]
fn cosine_outside_every_band_has_no_signature() {
    // bin 5 lies below the coarsest band, so the field is pure roundoff
    let s = generate(&GeneratorSpec::new(1024, 0.5, SignalKind::Cosine { frequency: 5 })).unwrap();
    assert!(run(&s).detected.is_empty());
}

#[test]
fn cusp_orientation_sets_the_real_sign() {
    for (o, target) in [(Orientation::Positive, PI), (Orientation::Negative, 0.0)] {
        let s = generate(&GeneratorSpec::new(1024, 0.5, SignalKind::Cusp { exponent: 0.5, orientation: o })).unwrap();
        let sig = run(&s);
        assert!(angle_diff(sig.arg[512], target).abs() < 1e-9);
    }
}

#[test]
fn off_centre_features_are_found_where_placed() {
    let s = generate(&GeneratorSpec::new(1024, 0.3, SignalKind::StepPlusCusp { exponent: 0.5, amplitude: 0.25 })).unwrap();
    let sig = run(&s);
    let b0 = (0.3f64 * 1024.0).round() as usize;
    let nearest = sig.detected.iter().map(|&i| i.abs_diff(b0)).min().unwrap();
    assert!(nearest <= 1);
}
