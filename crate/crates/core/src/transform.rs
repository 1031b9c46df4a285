//! Signals on the unit periodic domain and their wavelet pairing fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::wavelet::{sample_spectrum, spatial_wavelet_at, WaveletSpec};

/// A real signal sampled at `x_n = n/N` on the periodic interval `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    samples: Vec<f64>,
    label: String,
}

impl Signal {
    pub fn new(samples: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        let n = samples.len();
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidSignal(format!("length must be even and at least 8, got {n}")));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSignal(format!("sample {i} is not finite")));
        }
        Ok(Self { samples, label: label.into() })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn step(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn position(&self, n: usize) -> f64 {
        n as f64 / self.len() as f64
    }

    /// Circular shift by `m` samples: output sample `n` is input sample `n − m`.
    pub fn roll(&self, m: i64) -> Self {
        let n = self.len() as i64;
        let samples = (0..n)
            .map(|i| self.samples[(i - m).rem_euclid(n) as usize])
            .collect();
        Self { samples, label: self.label.clone() }
    }
}

/// Geometric scales `a_j = a_0 · 2^{−j/Q}`, `j = 0..J`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    scales: Vec<f64>,
    voices_per_octave: u32,
    base_scale: f64,
}

impl ScaleGrid {
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    pub fn len(&self) -> usize {
        self.scales.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scales.is_empty()
    }

    pub fn voices_per_octave(&self) -> u32 {
        self.voices_per_octave
    }

    pub fn base_scale(&self) -> f64 {
        self.base_scale
    }

    /// The grid restricted to scales `j ≥ first`, keeping the original indices' values.
    pub fn suffix(&self, first: usize) -> Result<Self> {
        if first >= self.scales.len() {
            return Err(Error::InvalidParameter("suffix would be empty".into()));
        }
        Ok(Self {
            scales: self.scales[first..].to_vec(),
            voices_per_octave: self.voices_per_octave,
            base_scale: self.scales[first],
        })
    }
}

pub fn make_scale_grid(base_scale: f64, voices_per_octave: u32, count: usize) -> Result<ScaleGrid> {
    if !(base_scale.is_finite() && base_scale > 0.0) {
        return Err(Error::InvalidParameter(format!("base scale must be positive, got {base_scale}")));
    }
    if voices_per_octave == 0 {
        return Err(Error::InvalidParameter("voices per octave must be positive".into()));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("scale grid needs at least one scale".into()));
    }
    let q = voices_per_octave as f64;
    let scales = (0..count).map(|j| base_scale * (-(j as f64) / q).exp2()).collect();
    Ok(ScaleGrid { scales, voices_per_octave, base_scale })
}

/// Pairings `⟨f, κ_{a_j, b_n}⟩` for every scale (rows) and position (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    values: Vec<Vec<Complex64>>,
    grid: ScaleGrid,
    bound: f64,
}

impl CoefficientField {
    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.values[j]
    }

    pub fn get(&self, j: usize, b: usize) -> Complex64 {
        self.values[j][b]
    }

    pub fn scale_grid(&self) -> &ScaleGrid {
        &self.grid
    }

    pub fn n_scales(&self) -> usize {
        self.values.len()
    }

    pub fn n_positions(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn positions(&self) -> Vec<f64> {
        let n = self.n_positions();
        (0..n).map(|i| i as f64 / n as f64).collect()
    }

    /// Largest coefficient modulus in the field.
    pub fn max_modulus(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `‖f‖_∞ · √a_0`, which bounds every pairing up to the `L¹` norm of
    /// the wavelet.
    pub fn coefficient_bound(&self) -> f64 {
        self.bound
    }

    /// Absolute sign floor: `rel` times the larger of the field maximum and
    /// [`Self::coefficient_bound`]. The second term keeps roundoff from being
    /// normalised into signs when no band sees the signal at all.
    pub fn magnitude_floor(&self, rel: f64) -> f64 {
        rel * self.max_modulus().max(self.bound)
    }

    /// Multiplies every coefficient by `u`.
    pub fn rotated(&self, u: Complex64) -> Self {
        let values = self
            .values
            .iter()
            .map(|row| row.iter().map(|z| z * u).collect())
            .collect();
        Self { values, grid: self.grid.clone(), bound: self.bound }
    }
}

/// Discrete frequency bins reached by one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleBand {
    pub scale: f64,
    /// Bins `k ≥ 1` with `κ̂(2πk·a) > 0`, up to and including Nyquist.
    pub bins: Vec<usize>,
    /// No bin in `1..=N/2` carries any weight.
    pub empty: bool,
    /// Part of the continuous band lies at or above the Nyquist bin.
    pub clipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandReport {
    pub n: usize,
    pub scales: Vec<ScaleBand>,
}

impl BandReport {
    pub fn all_empty(&self) -> bool {
        self.scales.iter().all(|s| s.empty)
    }

    pub fn any_flagged(&self) -> bool {
        self.scales.iter().any(|s| s.empty || s.clipped)
    }
}

pub fn band_coverage(wavelet: &WaveletSpec, grid: &ScaleGrid, n: usize) -> BandReport {
    let nyq = n / 2;
    let (_, d) = wavelet.support();
    let scales = grid
        .scales()
        .iter()
        .map(|&a| {
            let bins: Vec<usize> = (1..=nyq)
                .filter(|&k| wavelet.window(2.0 * PI * k as f64 * a) > 0.0)
                .collect();
            let clipped = d / (2.0 * PI * a) >= nyq as f64;
            ScaleBand { scale: a, empty: bins.is_empty(), bins, clipped }
        })
        .collect();
    BandReport { n, scales }
}

/// Per-bin multiplier `√a · κ̂(2πk·a)` for `k = 0..=N/2`, with the Nyquist
/// bin at half weight and `k = 0` zero.
fn scale_multiplier(wavelet: &WaveletSpec, a: f64, n: usize) -> Result<Vec<f64>> {
    let nyq = n / 2;
    let grid: Vec<f64> = (0..=nyq).map(|k| 2.0 * PI * k as f64 * a).collect();
    let spectrum = sample_spectrum(wavelet, &grid)?;
    let root = a.sqrt();
    let mut m: Vec<f64> = spectrum.values().iter().map(|v| root * v).collect();
    m[0] = 0.0;
    m[nyq] *= 0.5;
    Ok(m)
}

/// Wavelet pairing field computed through the DFT.
///
/// For real `f` and real `κ̂`, the bilinear pairing `∫ f κ_{a,b}` equals the
/// complex conjugate of the inverse DFT of `F_k · √a κ̂(2πk·a)` restricted
/// to nonnegative bins. Scales whose band misses every bin give zero rows;
/// the call fails only when every scale is empty.
pub fn cwt(signal: &Signal, wavelet: &WaveletSpec, grid: &ScaleGrid) -> Result<CoefficientField> {
    let n = signal.len();
    let report = band_coverage(wavelet, grid, n);
    if report.all_empty() {
        return Err(Error::BandCoverage(format!(
            "no scale of the grid reaches any frequency bin of a length-{n} signal"
        )));
    }
    let spectrum = fourier::forward(signal.samples());
    let values = grid
        .scales()
        .par_iter()
        .map(|&a| {
            let m = scale_multiplier(wavelet, a, n)?;
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for (k, &w) in m.iter().enumerate() {
                if w != 0.0 {
                    buf[k] = spectrum[k] * w;
                }
            }
            Ok(fourier::inverse(buf).into_iter().map(|z| z.conj()).collect())
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    let sup = signal.samples().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bound = sup * grid.scales()[0].sqrt();
    Ok(CoefficientField { values, grid: grid.clone(), bound })
}

/// Pairing `Σ_n f(x_n) · a^{-1/2} κ((x_n − b)/a) · Δx` with `κ` evaluated in
/// space by quadrature over the sampled spectrum.
///
/// The spectrum is sampled with step `2πa`, which makes the spatial kernel
/// periodic with period `1/a` and hence `κ((x − b)/a)` 1-periodic in `x`.
/// Bands reaching the Nyquist bin are rejected because the sampled sum
/// would alias.
pub fn direct_pairing(signal: &Signal, wavelet: &WaveletSpec, a: f64, b: f64) -> Result<Complex64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidParameter(format!("scale must be positive, got {a}")));
    }
    let n = signal.len();
    let (c, d) = wavelet.support();
    let step = 2.0 * PI * a;
    let k_hi = (d / step).ceil() as usize + 1;
    if d / step >= (n / 2) as f64 {
        return Err(Error::BandCoverage(format!("band of scale {a} reaches the Nyquist bin")));
    }
    if ((c / step).floor() as usize + 1..k_hi).all(|k| wavelet.window(k as f64 * step) == 0.0) {
        return Err(Error::BandCoverage(format!("band of scale {a} contains no frequency bin")));
    }
    let grid: Vec<f64> = (0..=k_hi).map(|k| k as f64 * step).collect();
    let spectrum = sample_spectrum(wavelet, &grid)?;
    let points: Vec<f64> = (0..n).map(|i| (signal.position(i) - b) / a).collect();
    let kernel = spatial_wavelet_at(&spectrum, &points);
    let scale = signal.step() / a.sqrt();
    Ok(signal
        .samples()
        .iter()
        .zip(kernel)
        .map(|(&f, k)| k * (f * scale))
        .sum())
}
