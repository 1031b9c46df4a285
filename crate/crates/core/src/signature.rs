//! Complex signs, mean resultant vectors and the thresholded signature.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::CoefficientField;

/// Default relative magnitude floor for sign extraction.
pub const DEFAULT_MAGNITUDE_FLOOR: f64 = 1e-12;

/// Default detection threshold `τ = √2/2`.
pub const DEFAULT_THRESHOLD: f64 = FRAC_1_SQRT_2;

/// A complex number of modulus exactly zero or one (to roundoff).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexSign(Complex64);

impl ComplexSign {
    pub const ZERO: Self = Self(Complex64::new(0.0, 0.0));

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }

    /// Argument in `(−π, π]`; zero for the zero sign.
    pub fn arg(self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            principal_arg(self.0)
        }
    }
}

/// `z/|z|`, or zero when `|z| ≤ floor`.
pub fn complex_sign(z: Complex64, floor: f64) -> ComplexSign {
    let r = z.norm();
    if r <= floor || r == 0.0 || !r.is_finite() {
        ComplexSign::ZERO
    } else {
        ComplexSign(z / r)
    }
}

/// `arg z` mapped into `(−π, π]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Signed distance between two angles, wrapped into `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}

/// Scale average of the complex signs at every position. Zero signs count
/// in the denominator.
pub fn mean_resultant(field: &CoefficientField, floor: f64) -> Vec<Complex64> {
    let n = field.n_positions();
    let j = field.n_scales();
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for row in field.rows() {
        for (a, &z) in acc.iter_mut().zip(row) {
            *a += complex_sign(z, floor).value();
        }
    }
    let inv = 1.0 / j as f64;
    acc.iter_mut().for_each(|a| *a *= inv);
    acc
}

/// Running means `(1/n) Σ_{j<n} sgn values[j][b]` for `n = 1..=J`.
pub fn cesaro_diagnostic(field: &CoefficientField, b: usize, floor: f64) -> Vec<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    field
        .rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            sum += complex_sign(row[b], floor).value();
            sum / (i + 1) as f64
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureField {
    pub mean_resultant: Vec<Complex64>,
    pub resultant_modulus: Vec<f64>,
    pub directional_variance: Vec<f64>,
    pub signature: Vec<ComplexSign>,
    pub threshold: f64,
    /// `arg σ̄` in `(−π, π]`, zero where the signature vanishes.
    pub arg: Vec<f64>,
    pub detected: Vec<usize>,
}

impl SignatureField {
    pub fn len(&self) -> usize {
        self.mean_resultant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean_resultant.is_empty()
    }

    pub fn is_detected(&self, b: usize) -> bool {
        !self.signature[b].is_zero()
    }

    pub fn detected_fraction(&self) -> f64 {
        self.detected.len() as f64 / self.len() as f64
    }
}

/// Thresholds the mean resultant: `σ̄ = sgn w̄` where `|w̄| > τ`, zero otherwise.
pub fn classify(w: &[Complex64], threshold: f64) -> Result<SignatureField> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    let resultant_modulus: Vec<f64> = w.iter().map(|z| z.norm().min(1.0)).collect();
    let directional_variance = resultant_modulus.iter().map(|r| 1.0 - r).collect();
    let signature: Vec<ComplexSign> = w
        .iter()
        .zip(&resultant_modulus)
        .map(|(&z, &r)| if r > threshold { complex_sign(z, 0.0) } else { ComplexSign::ZERO })
        .collect();
    let arg = signature.iter().map(|s| s.arg()).collect();
    let detected = signature
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(i, _)| i)
        .collect();
    Ok(SignatureField {
        mean_resultant: w.to_vec(),
        resultant_modulus,
        directional_variance,
        signature,
        threshold,
        arg,
        detected,
    })
}

/// Feature class suggested by the angle of a nonzero signature.
///
/// Cusps are named by the direction their tip points: `|x|^γ` (tip down)
/// has signature `−1` for `γ ∈ (0, 2)`, `−|x|^γ` (tip up) has `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureLabel {
    StepUp,
    StepDown,
    CuspUp,
    CuspDown,
}

impl FeatureLabel {
    pub const ALL: [FeatureLabel; 4] = [Self::StepUp, Self::StepDown, Self::CuspUp, Self::CuspDown];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::StepUp => "step-up",
            Self::StepDown => "step-down",
            Self::CuspUp => "cusp-up",
            Self::CuspDown => "cusp-down",
        }
    }

    pub fn angle(self) -> f64 {
        match self {
            Self::StepUp => FRAC_PI_2,
            Self::StepDown => -FRAC_PI_2,
            Self::CuspUp => 0.0,
            Self::CuspDown => PI,
        }
    }

    pub fn is_step(self) -> bool {
        matches!(self, Self::StepUp | Self::StepDown)
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

impl std::fmt::Display for FeatureLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryLabel {
    pub label: FeatureLabel,
    /// Angular distance to the label's reference angle, in `[0, π/4]`.
    pub distance: f64,
}

/// Nearest reference angle; exact ties go to the step labels. `None` for
/// the zero sign.
pub fn symmetry_label(sign: ComplexSign) -> Option<SymmetryLabel> {
    if sign.is_zero() {
        return None;
    }
    let theta = sign.arg();
    let mut best: Option<SymmetryLabel> = None;
    for label in FeatureLabel::ALL {
        let distance = angle_diff(theta, label.angle()).abs();
        let better = match best {
            None => true,
            Some(b) => {
                let tol = 1e-12;
                distance < b.distance - tol
                    || (distance <= b.distance + tol && label.is_step() && !b.label.is_step())
            }
        };
        if better {
            best = Some(SymmetryLabel { label, distance });
        }
    }
    best
}

/// Keeps detections whose `|w̄|` is maximal within `±window` samples
/// (circularly). Plateaus keep their first sample.
pub fn non_max_suppression(field: &SignatureField, window: usize) -> Vec<usize> {
    let n = field.len() as i64;
    let m = &field.resultant_modulus;
    field
        .detected
        .iter()
        .copied()
        .filter(|&b| {
            (1..=window as i64).all(|d| {
                let left = m[(b as i64 - d).rem_euclid(n) as usize];
                let right = m[(b as i64 + d).rem_euclid(n) as usize];
                m[b] > left && m[b] >= right
            })
        })
        .collect()
}
