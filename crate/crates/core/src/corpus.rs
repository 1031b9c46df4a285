//! Synthetic reference signals and Rademacher sign perturbation.
//!
//! Every generator is written in the centred periodic coordinate
//! `y = ((x − b₀ + ½) mod 1) − ½ ∈ [−½, ½)`, so the feature sits at `b₀`
//! and the periodic extension meets itself at the antipode `b₀ + ½`, which
//! is the domain seam `x = 0` for the default `b₀ = ½`. Samples that land
//! exactly on a jump take the midpoint of the one-sided limits.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dwt;
use crate::error::{Error, Result};
use crate::transform::Signal;

pub use crate::dwt::MAX_FILTER_ORDER;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Self::Positive => 1.0,
            Self::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalKind {
    /// Unit jump at `b₀`; positive orientation rises.
    Step { orientation: Orientation },
    /// `±|y|^γ` plus an even polynomial that makes the seam `C⁴`.
    Cusp { exponent: f64, orientation: Orientation },
    /// `Σ cᵢ yⁱ` (degree ≤ 3) plus a degree 4..7 correction matching values
    /// and three derivatives across the seam.
    Polynomial { coefficients: Vec<f64> },
    Gaussian { std_dev: f64 },
    /// `cos(2πk y)`.
    Cosine { frequency: u32 },
    /// `Σ_{n<terms} rⁿ cos(tⁿ · 2πy)`; `terms` defaults to every `tⁿ` below Nyquist.
    Weierstrass { r: f64, t: f64, terms: Option<u32> },
    /// Polynomial arcs with an upward jump at `b₀`, a downward jump at
    /// `b₀ − ¼` and a `|·|^{1/2}` cusp at `b₀ + ¼`.
    PiecewiseDemo,
    /// Unit step plus `amplitude · |y|^γ` (with the same seam correction as [`SignalKind::Cusp`]).
    StepPlusCusp { exponent: f64, amplitude: f64 },
    /// `slope · y`: smooth except at the seam.
    LinearRamp { slope: f64 },
}

impl SignalKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Step { .. } => "step",
            Self::Cusp { .. } => "cusp",
            Self::Polynomial { .. } => "polynomial",
            Self::Gaussian { .. } => "gaussian",
            Self::Cosine { .. } => "cosine",
            Self::Weierstrass { .. } => "weierstrass",
            Self::PiecewiseDemo => "piecewise_demo",
            Self::StepPlusCusp { .. } => "step_plus_cusp",
            Self::LinearRamp { .. } => "linear_ramp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    pub position: f64,
    #[serde(flatten)]
    pub kind: SignalKind,
}

impl GeneratorSpec {
    pub fn new(n: usize, position: f64, kind: SignalKind) -> Self {
        Self { n, position, kind }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n < 8 || !self.n.is_multiple_of(2) {
            return bad(format!("signal length must be even and at least 8, got {}", self.n));
        }
        if !(0.0..1.0).contains(&self.position) {
            return bad(format!("feature position must lie in [0, 1), got {}", self.position));
        }
        match &self.kind {
            SignalKind::Cusp { exponent, .. } | SignalKind::StepPlusCusp { exponent, .. }
                if !(exponent.is_finite() && *exponent > 0.0) =>
            {
                bad(format!("cusp exponent must be positive, got {exponent}"))
            }
            SignalKind::StepPlusCusp { amplitude, .. } if !amplitude.is_finite() => {
                bad("cusp amplitude must be finite".into())
            }
            SignalKind::Polynomial { coefficients } if coefficients.len() > 4 => {
                bad(format!("polynomial degree must be at most 3, got {} coefficients", coefficients.len()))
            }
            SignalKind::Polynomial { coefficients } if coefficients.iter().any(|c| !c.is_finite()) => {
                bad("polynomial coefficients must be finite".into())
            }
            SignalKind::Gaussian { std_dev } if !(std_dev.is_finite() && *std_dev > 0.0) => {
                bad(format!("Gaussian width must be positive, got {std_dev}"))
            }
            SignalKind::Cosine { frequency } if *frequency as usize >= self.n / 2 => {
                bad(format!("cosine frequency {frequency} is not below Nyquist"))
            }
            SignalKind::Weierstrass { r, t, terms } => {
                if !(*r > 0.0 && *r < 1.0) {
                    return bad(format!("Weierstrass ratio must satisfy 0 < r < 1, got {r}"));
                }
                if !(t.is_finite() && *t >= 2.0 && t.fract() == 0.0) {
                    return bad(format!("Weierstrass base must be an integer ≥ 2 on a periodic domain, got {t}"));
                }
                if r * t < 1.0 {
                    return bad(format!("Weierstrass parameters need r·t ≥ 1, got {}", r * t));
                }
                if let Some(m) = terms {
                    if *m == 0 {
                        return bad("Weierstrass series needs at least one term".into());
                    }
                    if t.powi(*m as i32 - 1) >= (self.n / 2) as f64 {
                        return bad(format!("Weierstrass term {} has frequency at or above Nyquist", m - 1));
                    }
                }
                Ok(())
            }
            SignalKind::LinearRamp { slope } if !slope.is_finite() => bad("ramp slope must be finite".into()),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

/// `m(m−1)…(m−d+1) · (½)^{m−d}`, the `d`-th derivative of `y^m` at `½`.
fn derivative_at_half(m: f64, d: u32) -> f64 {
    let falling: f64 = (0..d).map(|i| m - i as f64).product();
    falling * 0.5f64.powf(m - d as f64)
}

fn solve2(a: [[f64; 2]; 2], rhs: [f64; 2]) -> [f64; 2] {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [
        (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det,
        (a[0][0] * rhs[1] - rhs[0] * a[1][0]) / det,
    ]
}

/// `|y|^γ + c_p |y|^p + c_q |y|^q` with even `p < q` above `γ`, chosen so the
/// odd derivatives up to the third vanish at `|y| = ½`.
#[derive(Debug, Clone, Copy)]
struct SmoothCusp {
    gamma: f64,
    p: f64,
    cp: f64,
    cq: f64,
}

impl SmoothCusp {
    fn new(gamma: f64) -> Self {
        let p = 2.0 * (gamma / 2.0).floor() + 2.0;
        let q = p + 2.0;
        let a = [
            [derivative_at_half(p, 1), derivative_at_half(q, 1)],
            [derivative_at_half(p, 3), derivative_at_half(q, 3)],
        ];
        let rhs = [-derivative_at_half(gamma, 1), -derivative_at_half(gamma, 3)];
        let [cp, cq] = solve2(a, rhs);
        Self { gamma, p, cp, cq }
    }

    fn eval(&self, y: f64) -> f64 {
        let u = y.abs();
        u.powf(self.gamma) + self.cp * u.powf(self.p) + self.cq * u.powf(self.p + 2.0)
    }
}

/// Degree 4..7 correction for `Σ cᵢ yⁱ` making values and the first three
/// derivatives agree at `y = ±½`.
fn polynomial_correction(c: &[f64]) -> [f64; 4] {
    // jump of the j-th derivative of y^m across the seam
    let jump = |m: usize, j: u32| -> f64 {
        if m < j as usize {
            return 0.0;
        }
        let e = m as i32 - j as i32;
        let falling: f64 = (0..j).map(|i| (m - i as usize) as f64).product();
        falling * (0.5f64.powi(e) - (-0.5f64).powi(e))
    };
    let base = |j: u32| -> f64 { c.iter().enumerate().map(|(m, &cm)| cm * jump(m, j)).sum() };
    // odd powers 5, 7 fix the value and second-derivative jumps,
    // even powers 4, 6 fix the first and third
    let [e5, e7] = solve2(
        [[jump(5, 0), jump(7, 0)], [jump(5, 2), jump(7, 2)]],
        [-base(0), -base(2)],
    );
    let [e4, e6] = solve2(
        [[jump(4, 1), jump(6, 1)], [jump(4, 3), jump(6, 3)]],
        [-base(1), -base(3)],
    );
    [e4, e5, e6, e7]
}

fn heaviside(y: f64, side: Side) -> f64 {
    if y > 0.0 || (y == 0.0 && side == Side::Right) {
        1.0
    } else {
        0.0
    }
}

fn piecewise_demo(y: f64, side: Side, cusp: &SmoothCusp) -> f64 {
    let x = 4.0 * y;
    let base = if y > 0.0 || (y == 0.0 && side == Side::Right) {
        (x + 3.0).powi(3) / 125.0
    } else {
        -(x - 1.0).powi(2) / 9.0
    };
    let drop = if y > -0.25 || (y == -0.25 && side == Side::Right) { -0.3 } else { 0.0 };
    let mut yc = y - 0.25;
    if yc < -0.5 {
        yc += 1.0;
    }
    base + drop + 0.25 * cusp.eval(yc)
}

/// Offset of sample `i` from `b₀` in units of the domain, in `[−½, ½)`.
fn centred(i: usize, n: usize, position: f64) -> f64 {
    let nf = n as f64;
    let mut d = i as f64 - position * nf;
    d = (d + nf / 2.0).rem_euclid(nf) - nf / 2.0;
    if d.abs() < 1e-9 {
        d = 0.0;
    }
    if (d + nf / 2.0).abs() < 1e-9 {
        d = -nf / 2.0;
    }
    d / nf
}

pub fn generate(spec: &GeneratorSpec) -> Result<Signal> {
    spec.validate()?;
    let n = spec.n;
    let ys: Vec<f64> = (0..n).map(|i| centred(i, n, spec.position)).collect();

    // one-sided evaluation; the two sides differ only on jump samples
    let sided = |f: &dyn Fn(f64, Side) -> f64| -> Vec<f64> {
        ys.iter()
            .map(|&y| {
                let (l, r) = if y == -0.5 { (f(0.5, Side::Left), f(-0.5, Side::Right)) } else { (f(y, Side::Left), f(y, Side::Right)) };
                0.5 * (l + r)
            })
            .collect()
    };

    let samples = match &spec.kind {
        SignalKind::Step { orientation } => {
            let s = orientation.sign();
            sided(&|y, side| s * heaviside(y, side))
        }
        SignalKind::Cusp { exponent, orientation } => {
            let c = SmoothCusp::new(*exponent);
            let s = orientation.sign();
            ys.iter().map(|&y| s * c.eval(y)).collect()
        }
        SignalKind::Polynomial { coefficients } => {
            let e = polynomial_correction(coefficients);
            ys.iter()
                .map(|&y| {
                    let p: f64 = coefficients.iter().rev().fold(0.0, |acc, c| acc * y + c);
                    let q = y.powi(4) * (e[0] + y * (e[1] + y * (e[2] + y * e[3])));
                    p + q
                })
                .collect()
        }
        SignalKind::Gaussian { std_dev } => {
            let k = 0.5 / (std_dev * std_dev);
            ys.iter().map(|&y| (-k * y * y).exp()).collect()
        }
        SignalKind::Cosine { frequency } => {
            let w = 2.0 * PI * *frequency as f64;
            ys.iter().map(|&y| (w * y).cos()).collect()
        }
        SignalKind::Weierstrass { r, t, terms } => {
            let m = terms.unwrap_or_else(|| weierstrass_terms(*t, n));
            ys.iter()
                .map(|&y| {
                    (0..m)
                        .map(|k| r.powi(k as i32) * (2.0 * PI * t.powi(k as i32) * y).cos())
                        .sum()
                })
                .collect()
        }
        SignalKind::PiecewiseDemo => {
            let c = SmoothCusp::new(0.5);
            sided(&|y, side| piecewise_demo(y, side, &c))
        }
        SignalKind::StepPlusCusp { exponent, amplitude } => {
            let c = SmoothCusp::new(*exponent);
            sided(&|y, side| heaviside(y, side) + amplitude * c.eval(y))
        }
        SignalKind::LinearRamp { slope } => sided(&|y, _| slope * y),
    };
    Signal::new(samples, spec.kind.name())
}

/// Number of Weierstrass terms with frequency strictly below Nyquist.
pub fn weierstrass_terms(t: f64, n: usize) -> u32 {
    let nyq = (n / 2) as f64;
    let mut m = 0u32;
    while t.powi(m as i32) < nyq {
        m += 1;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub seed: u64,
    pub dwt_levels: usize,
    pub filter_order: usize,
}

/// Default Daubechies order (number of vanishing moments).
pub const DEFAULT_FILTER_ORDER: usize = 4;

impl PerturbationSpec {
    /// Every level of a length-`n` signal, default filter.
    pub fn full_depth(seed: u64, n: usize) -> Self {
        Self {
            seed,
            dwt_levels: n.max(1).trailing_zeros() as usize,
            filter_order: DEFAULT_FILTER_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    pub signal: Signal,
    /// Sorted detail-coefficient moduli per level (finest first), before
    /// and after the sign flips.
    pub moduli_before: Vec<Vec<f64>>,
    pub moduli_after: Vec<Vec<f64>>,
}

impl Perturbation {
    pub fn moduli_preserved(&self) -> bool {
        self.moduli_before == self.moduli_after
    }
}

fn sorted_moduli(levels: &[Vec<f64>]) -> Vec<Vec<f64>> {
    levels
        .iter()
        .map(|d| {
            let mut m: Vec<f64> = d.iter().map(|v| v.abs()).collect();
            m.sort_by(f64::total_cmp);
            m
        })
        .collect()
}

/// FNV-1a hash over the bit patterns of each level's sorted moduli.
pub fn moduli_checksum(moduli: &[Vec<f64>]) -> Vec<String> {
    moduli
        .iter()
        .map(|level| {
            let mut h: u64 = 0xcbf2_9ce4_8422_2325;
            for v in level {
                for byte in v.to_bits().to_le_bytes() {
                    h ^= byte as u64;
                    h = h.wrapping_mul(0x0100_0000_01b3);
                }
            }
            format!("{h:016x}")
        })
        .collect()
}

/// Flips the sign of every detail coefficient with an independent
/// Rademacher draw from a ChaCha8 stream seeded by `spec.seed`. Draws are
/// taken level by level from the finest, in coefficient order.
pub fn perturb_wavelet_signs(signal: &Signal, spec: &PerturbationSpec) -> Result<Perturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    perturb_with_signs(signal, spec, || if rng.random_bool(0.5) { 1.0 } else { -1.0 })
}

/// As [`perturb_wavelet_signs`] but with the signs supplied by `next_sign`.
pub fn perturb_with_signs<F>(signal: &Signal, spec: &PerturbationSpec, mut next_sign: F) -> Result<Perturbation>
where
    F: FnMut() -> f64,
{
    let mut dec = dwt::decompose(signal.samples(), spec.dwt_levels, spec.filter_order)?;
    let moduli_before = sorted_moduli(&dec.details);
    for level in dec.details.iter_mut() {
        for c in level.iter_mut() {
            let e = next_sign();
            if e != 1.0 && e != -1.0 {
                return Err(Error::InvalidParameter(format!("Rademacher sign must be ±1, got {e}")));
            }
            *c *= e;
        }
    }
    let moduli_after = sorted_moduli(&dec.details);
    let samples = dwt::reconstruct(&dec, spec.filter_order)?;
    let label = format!("{} | perturb(seed={})", signal.label(), spec.seed);
    Ok(Perturbation { signal: Signal::new(samples, label)?, moduli_before, moduli_after })
}

/// What a catalog entry predicts at its feature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Expected {
    Zero,
    Sign(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: GeneratorSpec,
    /// Prediction at `spec.position`.
    pub at_feature: Expected,
    /// Whether the signature should vanish away from `features`.
    pub zero_elsewhere: bool,
    /// Every point where a detection is allowed, including the seam.
    pub features: Vec<f64>,
}

fn wrap(x: f64) -> f64 {
    x.rem_euclid(1.0)
}

/// Reference signals of length `n` with their predicted signatures.
pub fn catalog(n: usize) -> Vec<CatalogEntry> {
    let b = 0.5;
    let seam = wrap(b + 0.5);
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    let entry = |name, kind, at, zero_elsewhere, features: Vec<f64>| CatalogEntry {
        name,
        spec: GeneratorSpec::new(n, b, kind),
        at_feature: at,
        zero_elsewhere,
        features,
    };
    vec![
        entry("step-up", SignalKind::Step { orientation: Orientation::Positive }, Expected::Sign(i), true, vec![b, seam]),
        entry("step-down", SignalKind::Step { orientation: Orientation::Negative }, Expected::Sign(-i), true, vec![b, seam]),
        entry(
            "cusp-down",
            SignalKind::Cusp { exponent: 0.5, orientation: Orientation::Positive },
            Expected::Sign(-one),
            true,
            vec![b, seam],
        ),
        entry(
            "cusp-up",
            SignalKind::Cusp { exponent: 0.5, orientation: Orientation::Negative },
            Expected::Sign(one),
            true,
            vec![b, seam],
        ),
        entry(
            "polynomial",
            SignalKind::Polynomial { coefficients: vec![0.2, 1.0, -2.0, 3.0] },
            Expected::Zero,
            true,
            vec![seam],
        ),
        entry("cosine", SignalKind::Cosine { frequency: 5 }, Expected::Zero, true, vec![]),
        entry("gaussian", SignalKind::Gaussian { std_dev: 0.01 }, Expected::Sign(one), false, vec![b]),
        entry(
            "step_plus_cusp",
            SignalKind::StepPlusCusp { exponent: 0.5, amplitude: 0.25 },
            Expected::Sign(i),
            true,
            vec![b, seam],
        ),
        entry(
            "piecewise_demo",
            SignalKind::PiecewiseDemo,
            Expected::Sign(i),
            true,
            vec![b, wrap(b - 0.25), wrap(b + 0.25), seam],
        ),
    ]
}

pub fn catalog_entry(name: &str, n: usize) -> Option<CatalogEntry> {
    catalog(n).into_iter().find(|e| e.name == name)
}
