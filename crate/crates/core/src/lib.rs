//! Complex wavelet-sign signatures of one-dimensional signals.
//!
//! The signature of a signal at a position `b` is the limit, as the scale
//! goes to zero, of the complex sign of its pairing with a wavelet whose
//! spectrum is nonnegative and supported on a compact interval of positive
//! frequencies. Jumps produce imaginary signatures, cusps real ones, and
//! locally polynomial regions produce none.
//!
//! The crate is organised bottom-up:
//!
//! - [`wavelet`]: Meyer-type one-sided windows and admissibility checks.
//! - [`transform`]: signals, scale grids and the FFT-based pairing field,
//!   plus a direct spatial-sum oracle.
//! - [`signature`]: complex signs, mean resultant vectors and the
//!   thresholded discrete signature.
//! - [`operators`]: fractional Laplacian, fractional Hilbert transform,
//!   translation and dilation.
//! - [`corpus`]: synthetic reference signals and Rademacher sign
//!   perturbation in an orthonormal Daubechies basis.
//! - [`cli`]: the `wavesign` command-line front end and its file formats.

pub mod cli;
pub mod corpus;
mod dwt;
pub mod error;
mod fourier;
pub mod operators;
pub mod signature;
pub mod transform;
pub mod wavelet;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use signature::{classify, complex_sign, mean_resultant, ComplexSign, SignatureField};
pub use transform::{cwt, make_scale_grid, CoefficientField, ScaleGrid, Signal};
pub use wavelet::{TransitionProfile, WaveletSpec, WaveletSpectrum};

/// Runs the default pipeline: transform, mean resultant, threshold.
///
/// The magnitude floor is `floor_rel` times the largest coefficient modulus
/// in the field.
pub fn analyze(
    signal: &Signal,
    wavelet: &WaveletSpec,
    grid: &ScaleGrid,
    floor_rel: f64,
    threshold: f64,
) -> Result<SignatureField> {
    let field = cwt(signal, wavelet, grid)?;
    let floor = field.magnitude_floor(floor_rel);
    let w = mean_resultant(&field, floor);
    classify(&w, threshold)
}
