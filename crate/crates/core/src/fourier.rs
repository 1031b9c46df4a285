//! Thin wrappers around `rustfft` with the conventions used throughout the
//! crate: forward transforms are unnormalised, inverse transforms carry the
//! `1/N` factor, and bin `k` stands for the angular frequency `2πk` on the
//! unit periodic domain.

use num_complex::Complex64;
use rustfft::FftPlanner;

pub(crate) fn forward(samples: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

pub(crate) fn inverse(mut spectrum: Vec<Complex64>) -> Vec<Complex64> {
    let n = spectrum.len();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_inverse(n).process(&mut spectrum);
    let scale = 1.0 / n as f64;
    for v in spectrum.iter_mut() {
        *v *= scale;
    }
    spectrum
}

/// Signed frequency of DFT bin `k` for a length-`n` transform. The Nyquist
/// bin of an even-length transform is reported as `+n/2`.
pub(crate) fn signed_bin(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Applies a Fourier multiplier to a real signal and returns the real part
/// of the result. `multiplier` receives the signed bin index; the caller
/// is responsible for Hermitian symmetry, so the discarded imaginary part
/// is roundoff.
pub(crate) fn apply_real_multiplier<F>(samples: &[f64], multiplier: F) -> Vec<f64>
where
    F: Fn(i64) -> Complex64,
{
    let n = samples.len();
    let mut spec = forward(samples);
    for (k, v) in spec.iter_mut().enumerate() {
        *v *= multiplier(signed_bin(k, n));
    }
    inverse(spec).into_iter().map(|z| z.re).collect()
}
