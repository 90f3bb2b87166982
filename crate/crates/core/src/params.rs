use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::cv::Amplitude;
use crate::error::{Error, Result};

/// Source parameters: coherent magnitude `alpha0 = |α|` and the angle `phi`
/// between the two components of `|α⟩ + |α e^{-iφ}⟩`.
///
/// The phase of `α` is pinned to `π/2 + φ/2`, which puts the two components
/// symmetrically about the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolParams {
    alpha0: f64,
    phi: f64,
}

impl ProtocolParams {
    /// Negative `phi` is mapped to `|phi|` (the source state is symmetric
    /// under `φ → −φ`); `|phi| > π` is rejected.
    pub fn new(alpha0: f64, phi: f64) -> Result<Self> {
        if !alpha0.is_finite() || alpha0 < 0.0 {
            return Err(Error::domain(format!("alpha0 must be finite and >= 0, got {alpha0}")));
        }
        if !phi.is_finite() || phi.abs() > PI {
            return Err(Error::domain(format!("phi must lie in [-pi, pi], got {phi}")));
        }
        Ok(ProtocolParams {
            alpha0,
            phi: phi.abs(),
        })
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha0
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(α, α e^{-iφ}) = (iα0 e^{iφ/2}, iα0 e^{-iφ/2})`, built so the real
    /// parts are exact negatives of each other.
    pub fn source_amplitudes(&self) -> (Amplitude, Amplitude) {
        let (s, c) = (0.5 * self.phi).sin_cos();
        let (re, im) = (self.alpha0 * s, self.alpha0 * c);
        (Complex64::new(-re, im), Complex64::new(re, im))
    }

    /// Magnitude of the cat components after interference, `√2·α0·sin(φ/2)`.
    pub fn cat_amplitude(&self) -> f64 {
        SQRT_2 * self.alpha0 * (0.5 * self.phi).sin()
    }

    pub fn separations(&self) -> Separations {
        let d0 = 2.0 * self.alpha0 * (0.5 * self.phi).sin();
        Separations { d0, d: SQRT_2 * d0 }
    }
}

/// Phase-space distance between the two components before (`d0`) and after (`d`) the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separations {
    pub d0: f64,
    pub d: f64,
}

/// Accepted homodyne outcomes `[center − half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomodyneWindow {
    center: f64,
    half_width: f64,
}

impl HomodyneWindow {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::domain(format!("window center must be finite, got {center}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::domain(format!(
                "window half-width must be finite and > 0, got {half_width}"
            )));
        }
        Ok(HomodyneWindow { center, half_width })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rejects_bad_params() {
        assert!(ProtocolParams::new(-1.0, 0.1).is_err());
        assert!(ProtocolParams::new(f64::NAN, 0.1).is_err());
        assert!(ProtocolParams::new(1.0, 4.0).is_err());
        assert!(HomodyneWindow::new(0.0, 0.0).is_err());
        assert!(HomodyneWindow::new(0.0, -1.0).is_err());
    }

    #[test]
    fn negative_phi_is_canonicalized() {
        let p = ProtocolParams::new(1.0, -0.3).unwrap();
        assert_eq!(p.phi(), 0.3);
        let (a, b) = p.source_amplitudes();
        let (a2, b2) = ProtocolParams::new(1.0, 0.3).unwrap().source_amplitudes();
        assert_eq!((a, b), (a2, b2));
    }

    #[test]
    fn source_amplitudes_have_pinned_phase() {
        let p = ProtocolParams::new(2.0, 0.2).unwrap();
        let (a, b) = p.source_amplitudes();
        assert_abs_diff_eq!(a.norm(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.arg(), PI / 2.0 + 0.1, epsilon = 1e-15);
        let rotated = a * Complex64::from_polar(1.0, -0.2);
        assert!((rotated - b).norm() < 1e-15);
        // d0 = 2·2·sin(0.1) and |α − α e^{-iφ}|
        let s = p.separations();
        assert_abs_diff_eq!(s.d0, 0.3993336665873126, epsilon = 1e-15);
        assert_abs_diff_eq!(s.d0, (a - b).norm(), epsilon = 1e-15);
    }
}
