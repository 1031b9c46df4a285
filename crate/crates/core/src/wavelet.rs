//! One-sided Meyer-type signature wavelets, defined in the frequency domain.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial blend used on the transition edges of the Meyer window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionProfile {
    /// `ξ²(3 − 2ξ)`, one continuous derivative.
    #[default]
    Cubic,
    /// `ξ⁴(35 − 84ξ + 70ξ² − 20ξ³)`, three continuous derivatives.
    Septic,
}

impl TransitionProfile {
    /// Looks up a profile by its smoothness order (1 or 3).
    pub fn from_smoothness_order(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Self::Cubic),
            3 => Ok(Self::Septic),
            other => Err(Error::InvalidParameter(format!(
                "no transition profile with smoothness order {other} (available: 1, 3)"
            ))),
        }
    }

    pub fn smoothness_order(self) -> u32 {
        match self {
            Self::Cubic => 1,
            Self::Septic => 3,
        }
    }

    pub fn eval(self, xi: f64) -> f64 {
        eval_transition(self, xi)
    }
}

pub fn eval_transition(profile: TransitionProfile, xi: f64) -> f64 {
    if xi <= 0.0 {
        return 0.0;
    }
    if xi >= 1.0 {
        return 1.0;
    }
    match profile {
        TransitionProfile::Cubic => xi * xi * (3.0 - 2.0 * xi),
        TransitionProfile::Septic => {
            let x2 = xi * xi;
            x2 * x2 * (35.0 - 84.0 * xi + 70.0 * x2 - 20.0 * x2 * xi)
        }
    }
}

/// A Meyer-type window with a transition profile and a frequency stretch `s`.
///
/// The window is supported on `[2s/3, 5s/3]` and equals one on `[5s/6, 4s/3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    transition: TransitionProfile,
    dilation: f64,
}

impl Default for WaveletSpec {
    fn default() -> Self {
        Self {
            transition: TransitionProfile::Cubic,
            dilation: 1.0,
        }
    }
}

impl WaveletSpec {
    pub fn new(transition: TransitionProfile, dilation: f64) -> Result<Self> {
        if !(dilation.is_finite() && dilation > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "wavelet dilation must be positive and finite, got {dilation}"
            )));
        }
        Ok(Self { transition, dilation })
    }

    pub fn transition(&self) -> TransitionProfile {
        self.transition
    }

    pub fn dilation(&self) -> f64 {
        self.dilation
    }

    /// Closed support interval `[c, d]` of the window.
    pub fn support(&self) -> (f64, f64) {
        (self.dilation * 2.0 / 3.0, self.dilation * 5.0 / 3.0)
    }

    pub fn window(&self, omega: f64) -> f64 {
        eval_meyer_window(self, omega)
    }
}

/// Evaluates `W(ω/s)`.
///
/// The edges are written as `sin(π/2 · (1 − g))` rather than `cos(π/2 · g)`
/// so that the support endpoints evaluate to an exact zero.
pub fn eval_meyer_window(spec: &WaveletSpec, omega: f64) -> f64 {
    let w = omega / spec.dilation;
    let g = |xi: f64| eval_transition(spec.transition, xi);
    if (2.0 / 3.0..5.0 / 6.0).contains(&w) {
        (FRAC_PI_2 * (1.0 - g(5.0 - 6.0 * w))).sin()
    } else if (5.0 / 6.0..4.0 / 3.0).contains(&w) {
        1.0
    } else if (4.0 / 3.0..5.0 / 3.0).contains(&w) {
        (FRAC_PI_2 * (1.0 - g(3.0 * w - 4.0))).sin()
    } else {
        0.0
    }
}

/// A wavelet spectrum sampled on an increasing grid of angular frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpectrum {
    freq_grid: Vec<f64>,
    values: Vec<f64>,
    support: (f64, f64),
}

impl WaveletSpectrum {
    /// Builds a spectrum from raw parts without checking admissibility.
    /// Use [`check_admissibility`] to validate.
    pub fn from_parts(freq_grid: Vec<f64>, values: Vec<f64>, support: (f64, f64)) -> Result<Self> {
        if freq_grid.is_empty() {
            return Err(Error::InvalidParameter("empty frequency grid".into()));
        }
        if freq_grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "grid has {} points but {} values were given",
                freq_grid.len(),
                values.len()
            )));
        }
        if freq_grid.windows(2).any(|p| p[1] <= p[0] || p[1].is_nan() || p[0].is_nan()) {
            return Err(Error::InvalidParameter("frequency grid must be strictly increasing".into()));
        }
        Ok(Self { freq_grid, values, support })
    }

    pub fn freq_grid(&self) -> &[f64] {
        &self.freq_grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Quadrature weights of the grid (trapezoid rule; equal to the step on
    /// the interior of a uniform grid).
    fn weights(&self) -> Vec<f64> {
        let g = &self.freq_grid;
        let n = g.len();
        if n == 1 {
            return vec![1.0];
        }
        (0..n)
            .map(|i| {
                let lo = if i == 0 { g[0] } else { g[i - 1] };
                let hi = if i + 1 == n { g[n - 1] } else { g[i + 1] };
                0.5 * (hi - lo)
            })
            .collect()
    }

    fn uniform_step(&self) -> Option<f64> {
        let g = &self.freq_grid;
        if g.len() < 2 {
            return None;
        }
        let h = (g[g.len() - 1] - g[0]) / (g.len() - 1) as f64;
        let uniform = g
            .windows(2)
            .all(|p| ((p[1] - p[0]) - h).abs() <= 1e-9 * h.abs().max(1.0));
        uniform.then_some(h)
    }
}

pub fn sample_spectrum(spec: &WaveletSpec, freq_grid: &[f64]) -> Result<WaveletSpectrum> {
    let values = freq_grid.iter().map(|&w| eval_meyer_window(spec, w)).collect();
    WaveletSpectrum::from_parts(freq_grid.to_vec(), values, spec.support())
}

/// A clause of the signature-wavelet definition that a sampled spectrum violates.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Support interval does not lie in `(0, ∞)`, or a nonzero value sits at `ω ≤ 0`.
    NotOneSided,
    /// Indices of negative (or non-finite) samples.
    Negative(Vec<usize>),
    /// Nonzero values outside the declared support, or touching the ends of
    /// the grid so that the support is not resolved.
    NotCompact,
    /// Every sample is zero.
    Zero,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NotOneSided => write!(f, "spectrum is not one-sided"),
            Violation::Negative(idx) => write!(f, "{} negative or non-finite sample(s)", idx.len()),
            Violation::NotCompact => write!(f, "spectrum is not compactly supported within the grid"),
            Violation::Zero => write!(f, "spectrum is identically zero"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdmissibilityReport {
    pub violations: Vec<Violation>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_admissible() {
            return Ok(());
        }
        let msg: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        Err(Error::NotAdmissible(msg.join("; ")))
    }
}

pub fn check_admissibility(spectrum: &WaveletSpectrum) -> AdmissibilityReport {
    let mut violations = Vec::new();
    let (c, d) = spectrum.support;
    let grid = &spectrum.freq_grid;
    let vals = &spectrum.values;

    let one_sided = c > 0.0
        && d > c
        && grid.iter().zip(vals).all(|(&w, &v)| w > 0.0 || v == 0.0);
    if !one_sided {
        violations.push(Violation::NotOneSided);
    }

    let negative: Vec<usize> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| !(v.is_finite() && **v >= 0.0))
        .map(|(i, _)| i)
        .collect();
    if !negative.is_empty() {
        violations.push(Violation::Negative(negative));
    }

    let outside = grid.iter().zip(vals).any(|(&w, &v)| v != 0.0 && (w < c || w > d));
    let at_edge = vals[0] != 0.0 || vals[vals.len() - 1] != 0.0;
    if outside || at_edge {
        violations.push(Violation::NotCompact);
    }

    if vals.iter().all(|&v| v == 0.0) {
        violations.push(Violation::Zero);
    }
    AdmissibilityReport { violations }
}

/// Spatial samples of a wavelet together with their positions.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialWavelet {
    pub positions: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Evaluates `κ(x) = (1/2π) ∫ κ̂(ω) e^{iωx} dω` at arbitrary points by
/// direct quadrature over the sampled spectrum.
pub fn spatial_wavelet_at(spectrum: &WaveletSpectrum, points: &[f64]) -> Vec<Complex64> {
    let weights = spectrum.weights();
    let terms: Vec<(f64, f64)> = spectrum
        .freq_grid
        .iter()
        .zip(&spectrum.values)
        .zip(&weights)
        .filter(|((_, &v), _)| v != 0.0)
        .map(|((&w, &v), &q)| (w, v * q / (2.0 * PI)))
        .collect();
    points
        .iter()
        .map(|&x| {
            terms
                .iter()
                .map(|&(w, c)| Complex64::from_polar(c, w * x))
                .sum()
        })
        .collect()
}

/// Samples the wavelet on `n_samples` equispaced points of one period of
/// its discrete inverse transform, centred so that `x = 0` is at index
/// `n_samples / 2`.
///
/// For a uniform frequency grid with step `h` the period is `2π/h`; a
/// non-uniform grid uses the span implied by its mean step.
pub fn spatial_wavelet(spectrum: &WaveletSpectrum, n_samples: usize) -> Result<SpatialWavelet> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter("spatial wavelet needs at least 2 samples".into()));
    }
    let g = &spectrum.freq_grid;
    let h = match spectrum.uniform_step() {
        Some(h) => h,
        None if g.len() >= 2 => (g[g.len() - 1] - g[0]) / (g.len() - 1) as f64,
        None => 1.0,
    };
    let period = 2.0 * PI / h;
    let dx = period / n_samples as f64;
    let half = (n_samples / 2) as f64;
    let positions: Vec<f64> = (0..n_samples).map(|m| (m as f64 - half) * dx).collect();
    let values = spatial_wavelet_at(spectrum, &positions);
    Ok(SpatialWavelet { positions, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn meyer(s: f64) -> WaveletSpec {
        WaveletSpec::new(TransitionProfile::Cubic, s).unwrap()
    }

    fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn transition_examples() {
        for p in [TransitionProfile::Cubic, TransitionProfile::Septic] {
            assert_eq!(eval_transition(p, -0.2), 0.0);
            assert_eq!(eval_transition(p, 1.5), 1.0);
            assert!((eval_transition(p, 0.5) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn profile_lookup() {
        assert_eq!(TransitionProfile::from_smoothness_order(1).unwrap(), TransitionProfile::Cubic);
        assert_eq!(TransitionProfile::from_smoothness_order(3).unwrap(), TransitionProfile::Septic);
        assert!(TransitionProfile::from_smoothness_order(2).is_err());
    }

    #[test]
    fn derivative_orders_at_the_ends() {
        // one-sided finite differences: cubic has g'(0)=0 but g''(0)≠0,
        // septic also has g''(0)=g'''(0)=0
        let h = 1e-3;
        let d2 = |p: TransitionProfile| (eval_transition(p, 2.0 * h) - 2.0 * eval_transition(p, h)) / (h * h);
        assert!(d2(TransitionProfile::Cubic) > 5.0);
        assert!(d2(TransitionProfile::Septic).abs() < 1e-3);
    }

    #[test]
    fn window_examples() {
        let s = meyer(1.0);
        assert_eq!(eval_meyer_window(&s, 1.0), 1.0);
        assert_eq!(eval_meyer_window(&s, 0.5), 0.0);
        assert!((eval_meyer_window(&s, 1.5) - (PI / 4.0).cos()).abs() < 1e-14);
        assert_eq!(eval_meyer_window(&s, 2.0 / 3.0), 0.0);
        assert_eq!(eval_meyer_window(&s, 5.0 / 3.0), 0.0);
    }

    #[test]
    fn sampled_support() {
        let grid = uniform(0.0, 2.0 * PI, 4001);
        let sp = sample_spectrum(&meyer(1.0), &grid).unwrap();
        for (&w, &v) in sp.freq_grid().iter().zip(sp.values()) {
            let inside = w > 2.0 / 3.0 && w < 5.0 / 3.0;
            assert_eq!(v > 0.0, inside, "ω = {w}");
        }
        assert_eq!(sp.support(), (2.0 / 3.0, 5.0 / 3.0));
        let sp3 = sample_spectrum(&meyer(3.0), &grid).unwrap();
        assert!((sp3.support().0 - 2.0).abs() < 1e-15 && (sp3.support().1 - 5.0).abs() < 1e-15);
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(sample_spectrum(&meyer(1.0), &[]).is_err());
        assert!(WaveletSpectrum::from_parts(vec![1.0, 1.0], vec![0.0, 0.0], (0.5, 2.0)).is_err());
    }

    #[test]
    fn admissibility_clauses() {
        let grid = uniform(0.0, 2.0 * PI, 512);
        let sp = sample_spectrum(&meyer(1.0), &grid).unwrap();
        assert!(check_admissibility(&sp).is_admissible());

        let zero = WaveletSpectrum::from_parts(grid.clone(), vec![0.0; 512], sp.support()).unwrap();
        assert_eq!(check_admissibility(&zero).violations, vec![Violation::Zero]);

        let mut vals = sp.values().to_vec();
        let k = vals.iter().position(|&v| v > 0.5).unwrap();
        vals[k] = -0.1;
        let neg = WaveletSpectrum::from_parts(grid.clone(), vals, sp.support()).unwrap();
        assert_eq!(check_admissibility(&neg).violations, vec![Violation::Negative(vec![k])]);

        let none_inside = sample_spectrum(&meyer(1.0), &uniform(3.0, 9.0, 64)).unwrap();
        assert!(!check_admissibility(&none_inside).is_admissible());

        let clipped = sample_spectrum(&meyer(1.0), &uniform(0.0, 1.2, 64)).unwrap();
        assert_eq!(check_admissibility(&clipped).violations, vec![Violation::NotCompact]);

        let two_sided = WaveletSpectrum::from_parts(vec![-1.0, 0.0, 1.0], vec![0.0, 1.0, 0.0], (-0.5, 0.5)).unwrap();
        assert!(check_admissibility(&two_sided).violations.contains(&Violation::NotOneSided));
    }

    #[test]
    fn spatial_wavelet_is_hermitian_with_zero_mean() {
        let grid = uniform(0.0, 4.0, 257);
        let sp = sample_spectrum(&meyer(1.0), &grid).unwrap();
        let n = 256;
        let k = spatial_wavelet(&sp, n).unwrap();
        let c = n / 2;
        for m in 1..c {
            let a = k.values[c + m];
            let b = k.values[c - m];
            assert!((a - b.conj()).norm() < 1e-10);
        }
        let dx = k.positions[1] - k.positions[0];
        let mean: Complex64 = k.values.iter().sum::<Complex64>() * dx;
        assert!(mean.norm() < 1e-10, "{mean}");
        let peak = (0..n).max_by(|&i, &j| k.values[i].norm().total_cmp(&k.values[j].norm())).unwrap();
        assert_eq!(peak, c);
    }

    #[test]
    fn spatial_wavelet_needs_two_samples() {
        let sp = sample_spectrum(&meyer(1.0), &uniform(0.0, 4.0, 33)).unwrap();
        assert!(spatial_wavelet(&sp, 1).is_err());
    }

    proptest! {
        #[test]
        fn transition_invariants(xi in -1.0f64..2.0, eta in 0.0f64..1.0, septic in any::<bool>()) {
            let p = if septic { TransitionProfile::Septic } else { TransitionProfile::Cubic };
            let g = eval_transition(p, xi);
            prop_assert!((0.0..=1.0).contains(&g));
            prop_assert!((g + eval_transition(p, 1.0 - xi) - 1.0).abs() < 1e-13);
            let lo = eta.min(xi.clamp(0.0, 1.0));
            let hi = eta.max(xi.clamp(0.0, 1.0));
            prop_assert!(eval_transition(p, lo) <= eval_transition(p, hi) + 1e-15);
        }

        #[test]
        fn window_bounds(s in 0.1f64..10.0, t in 0.0f64..3.0, septic in any::<bool>()) {
            let p = if septic { TransitionProfile::Septic } else { TransitionProfile::Cubic };
            let spec = WaveletSpec::new(p, s).unwrap();
            let v = eval_meyer_window(&spec, t * s);
            prop_assert!((0.0..=1.0).contains(&v));
            if (5.0 / 6.0..=4.0 / 3.0).contains(&t) {
                prop_assert_eq!(v, 1.0);
            }
        }

        #[test]
        fn window_is_continuous(s in 0.1f64..10.0) {
            // adjacent-sample jumps shrink linearly with the step
            let spec = meyer(s);
            let jump = |n: usize| {
                let grid = uniform(0.0, 2.0 * s, n);
                grid.windows(2)
                    .map(|p| (spec.window(p[1]) - spec.window(p[0])).abs())
                    .fold(0.0, f64::max)
            };
            let h1 = jump(1001);
            let h2 = jump(10001);
            prop_assert!(h1 < 0.03);
            prop_assert!(h2 < h1 / 5.0);
        }

        #[test]
        fn sampled_meyer_is_admissible(s in 0.05f64..20.0, extra in 8usize..200, septic in any::<bool>()) {
            let p = if septic { TransitionProfile::Septic } else { TransitionProfile::Cubic };
            let spec = WaveletSpec::new(p, s).unwrap();
            let (c, d) = spec.support();
            // grid with at least 8 points strictly inside the support, plus margins
            let h = (d - c) / (extra as f64 + 1.0);
            let grid: Vec<f64> = (0..extra + 6).map(|i| c - 2.0 * h + i as f64 * h).filter(|&w| w > 0.0).collect();
            let sp = sample_spectrum(&spec, &grid).unwrap();
            prop_assert!(check_admissibility(&sp).is_admissible());
        }
    }

    #[test]
    fn bad_dilation() {
        assert!(WaveletSpec::new(TransitionProfile::Cubic, 0.0).is_err());
        assert!(WaveletSpec::new(TransitionProfile::Cubic, f64::NAN).is_err());
    }
}
