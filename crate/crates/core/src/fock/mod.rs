//! Truncated photon-number-basis simulation of the whole scheme.
//!
//! Nothing in here uses the coherent-state closed forms of [`crate::cv`];
//! states are expanded in the Fock basis, the beam splitter is a block
//! unitary per total photon number and the homodyne outcome is a Hermite
//! function projection. It exists to check the closed forms.

mod beam_splitter;
mod density;
mod hermite;
mod simulation;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use beam_splitter::{apply_bs, BeamSplitter};
pub use density::{project_quadrature, window_state, FockDensity};
pub use hermite::quadrature_eigvec;
pub use simulation::ProtocolOracle;

use crate::cv::Amplitude;
use crate::error::{Error, Result};
use crate::tolerance::Limits;

/// `ceil(m² + 10m + 20)` basis states for coherent amplitudes up to `max_amp`,
/// against the cap from [`Limits::from_env`].
pub fn choose_truncation(max_amp: f64) -> Result<usize> {
    choose_truncation_with_cap(max_amp, Limits::from_env().max_fock)
}

pub fn choose_truncation_with_cap(max_amp: f64, cap: usize) -> Result<usize> {
    if !(max_amp.is_finite() && max_amp >= 0.0) {
        return Err(Error::domain(format!(
            "truncation amplitude must be finite and >= 0, got {max_amp}"
        )));
    }
    let n = (max_amp * max_amp + 10.0 * max_amp + 20.0).ceil();
    if n > cap as f64 {
        return Err(Error::TruncationTooLarge {
            required: n as usize,
            cap,
        });
    }
    Ok(n as usize)
}

/// Pure state of one mode on `|0⟩ … |N−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: DVector<Complex64>,
}

impl FockVector {
    pub fn zeros(dim: usize) -> Self {
        FockVector {
            amps: DVector::zeros(dim),
        }
    }

    pub fn basis(dim: usize, n: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amps[n] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amps.dotc(&other.amps))
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::DegenerateState("zero Fock vector".into()));
        }
        self.amps /= Complex64::new(n, 0.0);
        Ok(self)
    }

    /// `Σ_n (−1)^n |ψ_n|²`, i.e. `(π/2)·W(0)`.
    pub fn parity(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, a)| if n % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum()
    }
}

impl std::ops::Add for FockVector {
    type Output = FockVector;

    fn add(self, rhs: FockVector) -> FockVector {
        FockVector {
            amps: self.amps + rhs.amps,
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `e^{−|α|²/2} Σ_{n<N} αⁿ/√(n!) |n⟩`, computed in log-magnitude so large
/// amplitudes do not underflow the vacuum coefficient.
pub fn coherent_fock(alpha: Amplitude, dim: usize) -> FockVector {
    let mut v = FockVector::zeros(dim);
    if dim == 0 {
        return v;
    }
    let r = alpha.norm();
    if r == 0.0 {
        v.amps[0] = Complex64::new(1.0, 0.0);
        return v;
    }
    let (ln_r, theta) = (r.ln(), alpha.arg());
    let mut log_mag = -0.5 * r * r;
    for n in 0..dim {
        if n > 0 {
            log_mag += ln_r - 0.5 * (n as f64).ln();
        }
        v.amps[n] = Complex64::from_polar(log_mag.exp(), theta * n as f64);
    }
    v
}

/// Pure two-mode state; rows index mode a, columns mode b.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFock {
    pub amps: DMatrix<Complex64>,
}

impl TwoModeFock {
    pub fn product(a: &FockVector, b: &FockVector) -> Self {
        TwoModeFock {
            amps: &a.amps * b.amps.transpose(),
        }
    }

    pub fn dim_a(&self) -> usize {
        self.amps.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.amps.ncols()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        let mut acc = 0.0;
        for n in 0..self.dim_a() {
            for m in 0..self.dim_b() {
                acc += (n + m) as f64 * self.amps[(n, m)].norm_sqr();
            }
        }
        acc
    }
}

/// Overlap measure against a pure target.
pub trait Fidelity {
    fn fidelity(&self, target: &FockVector) -> Result<f64>;
}

impl Fidelity for FockVector {
    /// `|⟨target|v⟩|²` with both sides normalized.
    fn fidelity(&self, target: &FockVector) -> Result<f64> {
        let ov = target.inner(self)?;
        let f = ov.norm_sqr() / (self.norm_sqr() * target.norm_sqr());
        Ok(f.clamp(0.0, 1.0))
    }
}

pub fn fidelity<S: Fidelity + ?Sized>(state: &S, target: &FockVector) -> Result<f64> {
    state.fidelity(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cv::coherent_overlap;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Complex64::new(re, im)
    }

    /// Mass beyond `dim`, from the Poisson series summed well past the truncation.
    fn coherent_tail(r: f64, dim: usize) -> f64 {
        let mut log_p = -r * r;
        let mut tail = 0.0;
        for n in 0..dim + 400 {
            if n > 0 {
                log_p += 2.0 * r.ln() - (n as f64).ln();
            }
            if n >= dim {
                tail += log_p.exp();
            }
        }
        tail
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(choose_truncation_with_cap(0.0, 4096), Ok(20));
        assert_eq!(choose_truncation_with_cap(2.0, 4096), Ok(44));
        assert!(coherent_tail(2.0, 44) <= 1e-12);
        assert_eq!(
            choose_truncation_with_cap(100.0, 4096),
            Err(Error::TruncationTooLarge {
                required: 11020,
                cap: 4096
            })
        );
        assert!(choose_truncation_with_cap(-1.0, 4096).is_err());
    }

    proptest! {
        #[test]
        fn truncation_tail_bounded(r in 0.0f64..30.0) {
            let n = choose_truncation_with_cap(r, 4096).unwrap();
            prop_assert!(coherent_tail(r, n) <= 1e-12);
        }
    }

    #[test]
    fn coherent_examples() {
        let v = coherent_fock(c(0.0, 0.0), 8);
        assert_eq!(v, FockVector::basis(8, 0));
        let v = coherent_fock(c(1.0, 0.0), 40);
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn large_amplitude_does_not_underflow() {
        let r = 45.0;
        let n = choose_truncation_with_cap(r, 4096).unwrap();
        let v = coherent_fock(c(0.0, r), n);
        assert_abs_diff_eq!(v.norm_sqr(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_inner_matches_closed_form() {
        let amps = [c(0.0, 0.0), c(1.2, -0.4), c(-1.5, 1.3), c(0.3, 1.9), c(-2.0, 0.0)];
        for &a in &amps {
            for &b in &amps {
                let fa = coherent_fock(a, 60);
                let fb = coherent_fock(b, 60);
                let d = fa.inner(&fb).unwrap() - coherent_overlap(a, b);
                assert!(d.norm() <= 1e-10, "{a} {b} {d}");
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let v = coherent_fock(c(0.4, 0.2), 30);
        assert_abs_diff_eq!(fidelity(&v, &v).unwrap(), 1.0, epsilon = 1e-14);
        let vac = FockVector::basis(30, 0);
        assert_abs_diff_eq!(
            fidelity(&vac, &coherent_fock(c(1.0, 0.0), 30)).unwrap(),
            (-1.0f64).exp(),
            epsilon = 1e-14
        );
        assert_eq!(
            fidelity(&vac, &FockVector::basis(10, 0)),
            Err(Error::DimensionMismatch {
                expected: 10,
                found: 30
            })
        );
    }

    #[test]
    fn fock_cat_values_match_closed_forms() {
        // cross-check of the Gram-matrix values used in the cv tests
        let cat = coherent_fock(c(1.0, 0.0), 60) + coherent_fock(c(-1.0, 0.0), 60);
        assert_abs_diff_eq!(cat.norm_sqr().sqrt(), 1.5068744362000523, epsilon = 1e-13);
        let cat = cat.normalized().unwrap();
        let v = FockVector::basis(60, 0).inner(&cat).unwrap();
        assert_abs_diff_eq!(v.re, 0.805018182194592, epsilon = 1e-13);
        // W(0) of an even cat through the parity operator
        assert_abs_diff_eq!(cat.parity(), 1.0, epsilon = 1e-13);
    }
}
