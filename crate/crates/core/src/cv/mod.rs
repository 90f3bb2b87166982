//! Exact algebra of finite superpositions of coherent states.
//!
//! Every state here is a weighted list of coherent amplitudes; overlaps,
//! norms, beam-splitter action and quadrature wavefunctions are closed forms
//! on those lists. Nothing is truncated.

mod superposition;
mod wigner;

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

pub use superposition::{
    beam_splitter_50_50, superposition_inner, superposition_norm, CoherentSuperposition, Term,
    TwoModeSuperposition, TwoModeTerm,
};
pub use wigner::{wigner_grid, wigner_point};

/// Complex phase-space amplitude (dimensionless).
pub type Amplitude = Complex64;

/// `π^{-1/4}`, the vacuum quadrature wavefunction at the origin.
pub fn pi_quarter_inv() -> f64 {
    PI.powf(-0.25)
}

/// `⟨α|β⟩ = exp(−|α|²/2 − |β|²/2 + conj(α)·β)`.
///
/// Evaluated as `exp(−|α−β|²/2 + i·Im(conj(α)·β))`, which keeps the modulus
/// at most one in floating point.
pub fn coherent_overlap(alpha: Amplitude, beta: Amplitude) -> Amplitude {
    let modulus = (-0.5 * (alpha - beta).norm_sqr()).exp();
    let phase = (alpha.conj() * beta).im;
    Complex64::from_polar(modulus, phase)
}

/// `⟨X = x|α⟩` for the quadrature `X = (a + a†)/√2`:
/// `π^{-1/4} exp(−x²/2 + √2·x·α − α²/2 − |α|²/2)`.
pub fn quadrature_overlap(x: f64, alpha: Amplitude) -> Amplitude {
    let (a, b) = (alpha.re, alpha.im);
    // real part of the exponent is a perfect square, imaginary part is linear in x
    let shifted = x - SQRT_2 * a;
    let re = -0.5 * shifted * shifted;
    let im = b * (SQRT_2 * x - a);
    Complex64::from_polar(pi_quarter_inv() * re.exp(), im)
}
