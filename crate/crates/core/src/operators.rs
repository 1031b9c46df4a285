//! Fourier multipliers and rigid motions acting on periodic signals.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::transform::Signal;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    FractionalLaplacian { order: f64 },
    FractionalHilbert { order: f64 },
    Translate { shift: f64 },
    Dilate { factor: f64 },
}

impl OperatorSpec {
    pub fn describe(&self) -> String {
        match self {
            Self::FractionalLaplacian { order } => format!("laplacian(r={order})"),
            Self::FractionalHilbert { order } => format!("hilbert(alpha={order})"),
            Self::Translate { shift } => format!("translate(shift={shift})"),
            Self::Dilate { factor } => format!("dilate(factor={factor})"),
        }
    }
}

pub fn apply(signal: &Signal, op: &OperatorSpec) -> Result<Signal> {
    match *op {
        OperatorSpec::FractionalLaplacian { order } => frac_laplacian(signal, order),
        OperatorSpec::FractionalHilbert { order } => frac_hilbert(signal, order),
        OperatorSpec::Translate { shift } => translate(signal, shift),
        OperatorSpec::Dilate { factor } => dilate(signal, factor),
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

fn relabel(signal: &Signal, samples: Vec<f64>, what: String) -> Result<Signal> {
    let label = if signal.label().is_empty() {
        what
    } else {
        format!("{} | {what}", signal.label())
    };
    Signal::new(samples, label)
}

/// `Δ^{r/2}`: bin `k ≠ 0` scaled by `|2πk|^r`, the mean removed.
pub fn frac_laplacian(signal: &Signal, r: f64) -> Result<Signal> {
    finite("Laplacian order", r)?;
    let out = fourier::apply_real_multiplier(signal.samples(), |k| {
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((2.0 * PI * k.unsigned_abs() as f64).powf(r), 0.0)
        }
    });
    relabel(signal, out, format!("laplacian(r={r})"))
}

/// `H^α`: bin `k` scaled by `e^{−iαπ/2·sgn k}`; the DC and Nyquist bins by
/// `cos(απ/2)`.
pub fn frac_hilbert(signal: &Signal, alpha: f64) -> Result<Signal> {
    finite("Hilbert order", alpha)?;
    let nyq = (signal.len() / 2) as i64;
    let theta = alpha * FRAC_PI_2;
    let out = fourier::apply_real_multiplier(signal.samples(), |k| {
        if k == 0 || k == nyq {
            Complex64::new(theta.cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, -theta * k.signum() as f64)
        }
    });
    relabel(signal, out, format!("hilbert(alpha={alpha})"))
}

/// `f(x − shift)` on the periodic domain. Whole-sample shifts are exact
/// rotations; other shifts use the trigonometric interpolant.
pub fn translate(signal: &Signal, shift: f64) -> Result<Signal> {
    finite("shift", shift)?;
    let n = signal.len();
    let what = format!("translate(shift={shift})");
    let m = shift * n as f64;
    if (m - m.round()).abs() < 1e-9 {
        return relabel(signal, signal.roll(m.round() as i64).into_samples(), what);
    }
    let nyq = (n / 2) as i64;
    let out = fourier::apply_real_multiplier(signal.samples(), |k| {
        if k == nyq {
            Complex64::new((PI * n as f64 * shift).cos(), 0.0)
        } else {
            Complex64::from_polar(1.0, -2.0 * PI * k as f64 * shift)
        }
    });
    relabel(signal, out, what)
}

/// `ν^{−1/2} f(x/ν)` sampled on the same grid, where `f` is taken as its
/// 1-periodic trigonometric interpolant. Features at `b` move to `νb`.
pub fn dilate(signal: &Signal, factor: f64) -> Result<Signal> {
    let n = signal.len();
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::InvalidParameter(format!("dilation factor must be positive, got {factor}")));
    }
    if factor > (n / 2) as f64 || factor < 2.0 / n as f64 {
        return Err(Error::InvalidParameter(format!(
            "dilation factor {factor} maps the whole signal onto fewer than two samples"
        )));
    }
    let spec = fourier::forward(signal.samples());
    let nyq = n / 2;
    let inv_n = 1.0 / n as f64;
    let amp = factor.sqrt().recip();
    let out = (0..n)
        .map(|i| {
            let x = i as f64 / n as f64 / factor;
            let mut v = spec[0].re;
            for (k, c) in spec.iter().enumerate().take(nyq).skip(1) {
                v += 2.0 * (c * Complex64::from_polar(1.0, 2.0 * PI * k as f64 * x)).re;
            }
            v += spec[nyq].re * (PI * n as f64 * x).cos();
            amp * v * inv_n
        })
        .collect();
    relabel(signal, out, format!("dilate(factor={factor})"))
}
