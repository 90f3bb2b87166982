//! The preparation scheme as closed-form operations.
//!
//! The source `|α⟩ + |αe^{−iφ}⟩` (with `arg α = π/2 + φ/2`) is sent twice
//! through a 50:50 beam splitter. Mode 3 then carries
//! `√2·iα0·e^{±iφ/2}` (paired with vacuum in mode 4) and `√2·iα0·cos(φ/2)`
//! (paired with `±√2·α0·sin(φ/2)` in mode 4). Projecting mode 3 on `X = x`
//! leaves `c1(x)|0⟩ + c2(x)(|β⟩ + |−β⟩)` in mode 4.
//!
//! All normalizations are computed from the raw four-term expansion.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::Serialize;

use crate::cv::{
    beam_splitter_50_50, quadrature_overlap, Amplitude, CoherentSuperposition, TwoModeSuperposition,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::ProtocolOracle;
use crate::params::{HomodyneWindow, ProtocolParams, Separations};
use crate::quadrature::{panels_for, CompositeRule};
use crate::tolerance::ZERO_PROBABILITY;

const ONE: Amplitude = Complex64::new(1.0, 0.0);

/// Normalized source superposition.
pub fn source_state(p: &ProtocolParams) -> Result<CoherentSuperposition> {
    let (a, b) = p.source_amplitudes();
    CoherentSuperposition::new([(ONE, a), (ONE, b)])?.normalized()
}

/// Beam-splitter output for two copies of the source, normalized from its own Gram matrix.
pub fn interfere(p: &ProtocolParams) -> Result<TwoModeSuperposition> {
    let (a, b) = p.source_amplitudes();
    let raw = CoherentSuperposition::new([(ONE, a), (ONE, b)])?;
    let input = TwoModeSuperposition::product(&raw, &raw)?;
    beam_splitter_50_50(&input).normalized()
}

/// Mode-3 amplitudes after interference: `(√2·α, √2·αe^{−iφ}, √2·iα0·cos(φ/2))`.
pub fn mode3_amplitudes(p: &ProtocolParams) -> (Amplitude, Amplitude, Amplitude) {
    let (a, b) = p.source_amplitudes();
    (a * SQRT_2, b * SQRT_2, (a + b) / SQRT_2)
}

/// The target even cat `|β⟩ + |−β⟩`, `β = √2·α0·sin(φ/2)`, normalized.
///
/// For `β ≈ 0` the two components coalesce into the vacuum; with
/// `require_separation` that is reported as [`Error::DegenerateState`].
pub fn ideal_cat(p: &ProtocolParams, require_separation: bool) -> Result<CoherentSuperposition> {
    let cat = CoherentSuperposition::even_cat(Complex64::new(p.cat_amplitude(), 0.0))?;
    if require_separation && cat.len() < 2 {
        return Err(Error::DegenerateState(format!(
            "cat components coalesce (alpha0 = {}, phi = {})",
            p.alpha0(),
            p.phi()
        )));
    }
    Ok(cat)
}

/// Vacuum coefficient `⟨x|√2α⟩ + ⟨x|√2αe^{−iφ}⟩`.
pub fn c1_at(p: &ProtocolParams, x: f64) -> Amplitude {
    let (a, b, _) = mode3_amplitudes(p);
    quadrature_overlap(x, a) + quadrature_overlap(x, b)
}

/// Cat coefficient `⟨x|√2·iα0·cos(φ/2)⟩`.
pub fn c2_at(p: &ProtocolParams, x: f64) -> Amplitude {
    let (_, _, s) = mode3_amplitudes(p);
    quadrature_overlap(x, s)
}

pub fn c1(p: &ProtocolParams) -> Amplitude {
    c1_at(p, 0.0)
}

/// Always `π^{−1/4}`: the cat-branch amplitude in mode 3 is purely imaginary.
pub fn c2(p: &ProtocolParams) -> Amplitude {
    c2_at(p, 0.0)
}

/// `|c1/c2| = 2·e^{−α0²(1−cos φ)}·|cos(α0²·sin φ)|`.
pub fn ratio_exact(p: &ProtocolParams) -> f64 {
    let (a2, phi) = (p.alpha0() * p.alpha0(), p.phi());
    let half = (0.5 * phi).sin();
    2.0 * (-2.0 * a2 * half * half).exp() * (a2 * phi.sin()).cos().abs()
}

/// Small-angle form `2|cos(α0²φ)|`.
pub fn ratio_first_order(p: &ProtocolParams) -> f64 {
    let a2 = p.alpha0() * p.alpha0();
    2.0 * (a2 * p.phi()).cos().abs()
}

/// `e^{−α0²φ²/2}·2|cos(α0²φ)|`.
pub fn ratio_second_order(p: &ProtocolParams) -> f64 {
    let (a2, phi) = (p.alpha0() * p.alpha0(), p.phi());
    (-0.5 * a2 * phi * phi).exp() * 2.0 * (a2 * phi).cos().abs()
}

/// [`ratio_second_order`] in terms of the small-angle separation `d = √2·α0·φ`:
/// `e^{−d²/4}·2|cos(α0·d/√2)|`.
pub fn ratio_second_order_from_separation(alpha0: f64, d: f64) -> f64 {
    (-0.25 * d * d).exp() * 2.0 * (alpha0 * d / SQRT_2).cos().abs()
}

fn check_angle(phi: f64) -> Result<()> {
    if phi.is_finite() && phi > 0.0 && phi < PI {
        Ok(())
    } else {
        Err(Error::domain(format!("phi must lie in (0, pi), got {phi}")))
    }
}

/// First zero of the small-angle ratio, `√(π/(2φ))`.
pub fn alpha_min_first_order(phi: f64) -> Result<f64> {
    alpha_zero_first_order(phi, 0)
}

/// `k`-th zero of the small-angle ratio, `√((π/2 + kπ)/φ)`.
pub fn alpha_zero_first_order(phi: f64, k: u32) -> Result<f64> {
    check_angle(phi)?;
    Ok(((FRAC_PI_2 + k as f64 * PI) / phi).sqrt())
}

/// `k`-th zero of the exact ratio, `√((π/2 + kπ)/sin φ)`.
pub fn alpha_min_exact(phi: f64, k: u32) -> Result<f64> {
    check_angle(phi)?;
    Ok(((FRAC_PI_2 + k as f64 * PI) / phi.sin()).sqrt())
}

/// The interference output with the pieces needed for repeated projections.
#[derive(Debug, Clone)]
pub struct Scheme {
    params: ProtocolParams,
    output: TwoModeSuperposition,
    cat: CoherentSuperposition,
}

impl Scheme {
    pub fn new(params: &ProtocolParams) -> Result<Self> {
        Ok(Scheme {
            params: *params,
            output: interfere(params)?,
            cat: ideal_cat(params, false)?,
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn output(&self) -> &TwoModeSuperposition {
        &self.output
    }

    pub fn ideal_cat(&self) -> &CoherentSuperposition {
        &self.cat
    }

    /// Marginal density of `X` on mode 3.
    pub fn density(&self, x: f64) -> f64 {
        self.output
            .project_mode_a(x)
            .map_or(0.0, |v| v.norm_sqr())
    }

    pub fn conditional_state(&self, x: f64) -> Result<CoherentSuperposition> {
        let null = |density| Error::ZeroProbability {
            density,
            threshold: ZERO_PROBABILITY,
        };
        let v = self.output.project_mode_a(x).map_err(|_| null(0.0))?;
        let density = v.norm_sqr();
        if density < ZERO_PROBABILITY {
            return Err(null(density));
        }
        v.normalized()
    }

    pub fn cat_fidelity(&self, x: f64) -> Result<f64> {
        let state = self.conditional_state(x)?;
        Ok(self.cat.inner(&state).norm_sqr().min(1.0))
    }

    /// Window metrics from the coherent-state expansion: with
    /// `v(x) = Σ_k w_k⟨x|a_k⟩|b_k⟩`, integrate
    /// `M_kl = ∫ w_k⟨x|a_k⟩ conj(w_l⟨x|a_l⟩) dx` over the window, then
    /// `P = Σ M_kl⟨b_l|b_k⟩` and `F = Σ M_kl⟨cat|b_k⟩⟨b_l|cat⟩ / P`.
    pub fn window_metrics_analytic(&self, window: &HomodyneWindow) -> Result<WindowMetrics> {
        let terms = self.output.terms();
        let rule = CompositeRule::new(
            window.lower(),
            window.upper(),
            panels_for(2.0 * window.half_width()),
        );
        let n = terms.len();
        let mut m = vec![Complex64::new(0.0, 0.0); n * n];
        let mut g = vec![Complex64::new(0.0, 0.0); n];
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            for (gk, t) in g.iter_mut().zip(terms) {
                *gk = t.weight * quadrature_overlap(x, t.amp_a);
            }
            for k in 0..n {
                for l in 0..n {
                    m[k * n + l] += g[k] * g[l].conj() * w;
                }
            }
        }
        let cat_overlap: Vec<Complex64> = terms
            .iter()
            .map(|t| {
                self.cat
                    .inner(&CoherentSuperposition::coherent(t.amp_b))
            })
            .collect();
        let mut probability = Complex64::new(0.0, 0.0);
        let mut cat_weight = Complex64::new(0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                let mkl = m[k * n + l];
                probability += mkl * crate::cv::coherent_overlap(terms[l].amp_b, terms[k].amp_b);
                cat_weight += mkl * cat_overlap[k] * cat_overlap[l].conj();
            }
        }
        let probability = probability.re;
        if !(probability >= ZERO_PROBABILITY) {
            return Err(Error::ZeroProbability {
                density: probability,
                threshold: ZERO_PROBABILITY,
            });
        }
        Ok(WindowMetrics {
            probability,
            fidelity: (cat_weight.re / probability).clamp(0.0, 1.0),
        })
    }
}

/// Normalized mode-4 state after the outcome `X = x` on mode 3.
pub fn conditional_state(p: &ProtocolParams, x: f64) -> Result<CoherentSuperposition> {
    Scheme::new(p)?.conditional_state(x)
}

/// Marginal density of the mode-3 quadrature.
pub fn homodyne_density(p: &ProtocolParams, x: f64) -> f64 {
    Scheme::new(p)
        .expect("the source superposition never cancels")
        .density(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedStateReport {
    pub params: ProtocolParams,
    pub x: f64,
    pub c1: Amplitude,
    pub c2: Amplitude,
    pub ratio: f64,
    pub fidelity: f64,
    pub density_at_x: f64,
    pub separations: Separations,
}

pub fn report(p: &ProtocolParams, x: f64) -> Result<PreparedStateReport> {
    let scheme = Scheme::new(p)?;
    let fidelity = scheme.cat_fidelity(x)?;
    let (c1, c2) = (c1_at(p, x), c2_at(p, x));
    Ok(PreparedStateReport {
        params: *p,
        x,
        c1,
        c2,
        ratio: c1.norm() / c2.norm(),
        fidelity,
        density_at_x: scheme.density(x),
        separations: p.separations(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowMetrics {
    pub probability: f64,
    pub fidelity: f64,
}

/// Acceptance probability and cat fidelity for a finite window, through the Fock oracle.
pub fn window_metrics(p: &ProtocolParams, w: &HomodyneWindow) -> Result<WindowMetrics> {
    window_metrics_with(&ProtocolOracle::new(p)?, w, Execution::default())
}

pub fn window_metrics_with(
    oracle: &ProtocolOracle,
    w: &HomodyneWindow,
    exec: Execution,
) -> Result<WindowMetrics> {
    let (probability, fidelity) = oracle.window_metrics(w, exec)?;
    Ok(WindowMetrics {
        probability,
        fidelity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cv::{pi_quarter_inv, superposition_inner};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn params(a: f64, phi: f64) -> ProtocolParams {
        ProtocolParams::new(a, phi).unwrap()
    }

    fn zero_condition() -> ProtocolParams {
        params(PI.sqrt(), PI / 6.0)
    }

    /// `|exp[(−1+e^{−iφ})α0²] + exp[(−1+e^{iφ})α0²]|`.
    fn ratio_complex_form(a: f64, phi: f64) -> f64 {
        let a2 = a * a;
        let e = |s: f64| ((Complex64::from_polar(1.0, s * phi) - 1.0) * a2).exp();
        (e(-1.0) + e(1.0)).norm()
    }

    #[test]
    fn source_examples() {
        let vac = source_state(&params(0.0, 0.7)).unwrap();
        assert_eq!(vac.len(), 1);
        assert_eq!(vac.terms()[0].amplitude, Complex64::new(0.0, 0.0));
        let s = source_state(&params(1.0, 0.0)).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.terms()[0].amplitude - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_abs_diff_eq!(s.norm().unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn interference_amplitudes() {
        let p = params(1.0, 0.3);
        let out = interfere(&p).unwrap();
        assert_eq!(out.terms().len(), 4);
        let beta = SQRT_2 * (0.15f64).sin();
        let (a, b, s) = mode3_amplitudes(&p);
        let expect = [
            (a, Complex64::new(0.0, 0.0)),
            (b, Complex64::new(0.0, 0.0)),
            (s, Complex64::new(beta, 0.0)),
            (s, Complex64::new(-beta, 0.0)),
        ];
        for (x, y) in expect {
            assert!(out
                .terms()
                .iter()
                .any(|t| (t.amp_a - x).norm() < 1e-15 && (t.amp_b - y).norm() < 1e-15));
        }
        let mode4: Vec<f64> = out.terms().iter().map(|t| t.amp_b.re).collect();
        assert!(mode4.iter().all(|&r| r.abs() < 1e-15 || (r.abs() - beta).abs() < 1e-15));
        assert!((a - Complex64::new(0.0, SQRT_2) * Complex64::from_polar(1.0, 0.15)).norm() < 1e-15);
        assert!((s - Complex64::new(0.0, SQRT_2 * 0.15f64.cos())).norm() < 1e-15);
        assert_eq!(s.re, 0.0);

        let vac = interfere(&params(0.0, 0.3)).unwrap();
        assert_eq!(vac.terms().len(), 1);
        assert_eq!(vac.terms()[0].amp_a, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn ideal_cat_examples() {
        let cat = ideal_cat(&params(2f64.sqrt(), PI), true).unwrap();
        let amps: Vec<f64> = cat.terms().iter().map(|t| t.amplitude.re).collect();
        assert_abs_diff_eq!(amps[0].abs(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(amps[1].abs(), 2.0, epsilon = 1e-15);
        assert!(cat.terms().iter().all(|t| t.amplitude.im == 0.0));

        let degenerate = ideal_cat(&params(1.0, 0.0), false).unwrap();
        assert_eq!(degenerate.len(), 1);
        assert!(matches!(ideal_cat(&params(1.0, 0.0), true), Err(Error::DegenerateState(_))));

        // β = 1: α0 = 1/(√2 sin(φ/2)) with φ = π/2
        let p = params(1.0 / (SQRT_2 * (PI / 4.0).sin()), PI / 2.0);
        let cat = ideal_cat(&p, true).unwrap();
        let v = superposition_inner(&CoherentSuperposition::vacuum(), &cat);
        assert_abs_diff_eq!(v.re, 0.805018182194592, epsilon = 1e-14);
    }

    #[test]
    fn coefficient_examples() {
        assert_abs_diff_eq!(c2(&params(2.3, 0.4)).re, pi_quarter_inv(), epsilon = 1e-15);
        assert_eq!(c2(&params(2.3, 0.4)).im, 0.0);
        assert_abs_diff_eq!(c1(&params(0.0, 0.4)).re, 2.0 * pi_quarter_inv(), epsilon = 1e-15);
        assert!(c1(&zero_condition()).norm() <= 1e-12);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio_exact(&params(0.0, 0.5)), 2.0);
        assert_eq!(ratio_exact(&params(1.7, 0.0)), 2.0);
        assert_abs_diff_eq!(ratio_exact(&params(1.0, 0.1)), 1.9801244381583083, epsilon = 1e-15);
        assert_abs_diff_eq!(ratio_exact(&params(1.0, 0.1)), ratio_complex_form(1.0, 0.1), epsilon = 1e-14);

        for a in [0.3, 2.0] {
            assert_eq!(ratio_first_order(&params(a, 0.0)), 2.0);
            assert_eq!(ratio_second_order(&params(a, 0.0)), 2.0);
        }
        let a = alpha_min_first_order(0.1).unwrap();
        assert_abs_diff_eq!(a, 3.963327297606011, epsilon = 1e-14);
        assert!(ratio_first_order(&params(a, 0.1)) < 1e-14);
        // d = 4
        let (a, phi) = (4.0, 1.0 / SQRT_2);
        assert_abs_diff_eq!(SQRT_2 * a * phi, 4.0, epsilon = 1e-15);
        assert!(ratio_second_order(&params(a, phi)) <= 2.0 * (-4.0f64).exp());
    }

    #[test]
    fn second_order_separation_form() {
        for &(a, phi) in &[(1.0, 0.1), (3.2, 0.05), (4.5, 0.2)] {
            let d = SQRT_2 * a * phi;
            assert_abs_diff_eq!(
                ratio_second_order(&params(a, phi)),
                ratio_second_order_from_separation(a, d),
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn optimum_examples() {
        assert_abs_diff_eq!(alpha_min_exact(0.1, 0).unwrap(), 3.9666325494340016, epsilon = 1e-13);
        let a = alpha_min_first_order(1e-5).unwrap();
        assert_abs_diff_eq!(a, 396.33272976060107, epsilon = 1e-10);
        let d = SQRT_2 * a * 1e-5;
        assert_abs_diff_eq!(d, (PI * 1e-5).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(d, 5.604991216397929e-3, epsilon = 1e-15);
        let a = alpha_min_exact(0.3, 2).unwrap();
        assert!(ratio_exact(&params(a, 0.3)) <= 1e-12);
        for bad in [0.0, -0.1, PI, 4.0, f64::NAN] {
            assert!(alpha_min_exact(bad, 0).is_err());
            assert!(alpha_min_first_order(bad).is_err());
        }
    }

    #[test]
    fn conditional_examples() {
        let z = zero_condition();
        let cond = conditional_state(&z, 0.0).unwrap();
        let cat = ideal_cat(&z, true).unwrap();
        assert_abs_diff_eq!(superposition_inner(&cat, &cond).norm_sqr(), 1.0, epsilon = 1e-10);

        let vac = conditional_state(&params(0.0, 0.4), 0.0).unwrap();
        assert_eq!(vac.len(), 1);
        assert_eq!(vac.terms()[0].amplitude, Complex64::new(0.0, 0.0));

        assert!(matches!(
            conditional_state(&params(1.0, 0.1), 60.0),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn report_examples() {
        let r = report(&zero_condition(), 0.0).unwrap();
        assert!(r.ratio <= 1e-12);
        assert_abs_diff_eq!(r.fidelity, 1.0, epsilon = 1e-10);
        let r = report(&params(0.0, 0.2), 0.0).unwrap();
        assert_abs_diff_eq!(r.ratio, 2.0, epsilon = 1e-15);
        let p = params(1.0, 0.1);
        let r = report(&p, 0.0).unwrap();
        assert_abs_diff_eq!(r.ratio, ratio_exact(&p), epsilon = 1e-12);
    }

    #[test]
    fn density_examples() {
        assert_abs_diff_eq!(
            homodyne_density(&params(0.0, 0.3), 0.0),
            1.0 / PI.sqrt(),
            epsilon = 1e-15
        );
        let p = params(2.0, 0.3);
        let s = Scheme::new(&p).unwrap();
        let total = CompositeRule::with_max_width(-12.0, 12.0).integrate(|x| s.density(x));
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        let raw = |phi: f64| {
            let q = ProtocolParams::new(2.0, phi).unwrap();
            homodyne_density(&q, 0.4)
        };
        assert_eq!(raw(0.3), raw(-0.3));
    }

    #[test]
    fn window_paths_agree() {
        let z = zero_condition();
        let w = HomodyneWindow::new(0.0, 0.2).unwrap();
        let oracle = window_metrics(&z, &w).unwrap();
        let analytic = Scheme::new(&z).unwrap().window_metrics_analytic(&w).unwrap();
        assert_abs_diff_eq!(oracle.probability, analytic.probability, epsilon = 1e-10);
        assert_abs_diff_eq!(oracle.fidelity, analytic.fidelity, epsilon = 1e-10);
    }

    #[test]
    fn regression_at_unit_amplitude() {
        let p = params(1.0, 0.1);
        let r = report(&p, 0.0).unwrap();
        let oracle = ProtocolOracle::new(&p).unwrap();
        let (c1_fock, _) = oracle.coefficients(0.0).unwrap();
        for (analytic, fock, frozen) in [
            (r.c1.re, c1_fock.re, 1.4873220467199977),
            (r.ratio, oracle.ratio().unwrap(), 1.9801244381583083),
            (r.fidelity, oracle.cat_fidelity(0.0).unwrap(), 0.99999690356844),
            (r.density_at_x, oracle.density(0.0), 0.5627776700410809),
        ] {
            assert_abs_diff_eq!(analytic, fock, epsilon = 1e-8);
            assert_abs_diff_eq!(analytic, frozen, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(r.separations.d, 0.14136243803746787, epsilon = 1e-16);
    }

    #[test]
    fn regression_window_at_zero_condition() {
        let w = HomodyneWindow::new(0.0, 0.2).unwrap();
        let m = window_metrics(&zero_condition(), &w).unwrap();
        assert_abs_diff_eq!(m.probability, 0.1604098703886822, epsilon = 1e-12);
        assert_abs_diff_eq!(m.fidelity, 0.9994483589785379, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn interfere_is_normalized(a in 0.0f64..3.0, phi in 0.0f64..0.5) {
            let out = interfere(&params(a, phi)).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn ratio_is_coefficient_ratio(a in 0.0f64..5.0, phi in 0.0f64..FRAC_PI_2) {
            let p = params(a, phi);
            let direct = c1(&p).norm() / c2(&p).norm();
            prop_assert!((direct - ratio_exact(&p)).abs() <= 1e-12);
            prop_assert!((ratio_complex_form(a, phi) - ratio_exact(&p)).abs() <= 1e-12);
        }

        #[test]
        fn ratios_even_in_phi(a in 0.0f64..5.0, phi in 0.0f64..FRAC_PI_2) {
            let (p, q) = (params(a, phi), params(a, -phi));
            prop_assert_eq!(ratio_exact(&p), ratio_exact(&q));
            prop_assert_eq!(ratio_first_order(&p), ratio_first_order(&q));
            prop_assert_eq!(ratio_second_order(&p), ratio_second_order(&q));
            prop_assert!((ratio_complex_form(a, phi) - ratio_complex_form(a, -phi)).abs() <= 1e-13);
        }

        #[test]
        fn amplification_is_exact(a in 0.0f64..10.0, phi in 0.0f64..PI) {
            let s = params(a, phi).separations();
            prop_assert_eq!(s.d, SQRT_2 * s.d0);
            prop_assert!(s.d0 >= 0.0);
        }

        #[test]
        fn zeros_coincide(phi in 0.01f64..1.5, k in 0u32..4) {
            let a = alpha_min_exact(phi, k).unwrap();
            prop_assert!(ratio_exact(&params(a, phi)) <= 1e-12);
            let a1 = alpha_zero_first_order(phi, k).unwrap();
            prop_assert!(ratio_first_order(&params(a1, phi)) <= 1e-12);
        }

        #[test]
        fn conditional_fidelity_bounded(a in 0.0f64..3.0, phi in 0.0f64..0.6, x in -1.0f64..1.0) {
            let f = Scheme::new(&params(a, phi)).unwrap().cat_fidelity(x).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
        }
    }
}
