use std::f64::consts::SQRT_2;

use num_complex::Complex64;

use super::beam_splitter::BeamSplitter;
use super::density::{outcome_density, window_state_with, FockDensity};
use super::{
    choose_truncation_with_cap, coherent_fock, project_quadrature, Fidelity, FockVector,
    TwoModeFock,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::params::{HomodyneWindow, ProtocolParams};
use crate::quadrature::{panels_for, CompositeRule};
use crate::tolerance::{Limits, MARGINAL_MARGIN};

/// The whole scheme in the truncated Fock basis: source ⊗ source through the
/// beam splitter, ready for quadrature projections of mode 3 (rows).
#[derive(Debug, Clone)]
pub struct ProtocolOracle {
    params: ProtocolParams,
    dim: usize,
    output: TwoModeFock,
    /// `‖|α⟩ + |αe^{−iφ}⟩‖²` in the Fock basis, i.e. `1/N_Φ²`.
    source_norm_sqr: f64,
    /// Unnormalized `|β⟩ + |−β⟩` in mode 4.
    cat_branch: FockVector,
}

impl ProtocolOracle {
    pub fn new(params: &ProtocolParams) -> Result<Self> {
        Self::with_limits(params, &Limits::from_env())
    }

    pub fn with_limits(params: &ProtocolParams, limits: &Limits) -> Result<Self> {
        // outgoing amplitudes are at most √2·α0
        let dim = choose_truncation_with_cap(SQRT_2 * params.alpha0(), limits.max_fock)?;
        let (a, b) = params.source_amplitudes();
        let source = coherent_fock(a, dim) + coherent_fock(b, dim);
        let source_norm_sqr = source.norm_sqr();
        let source = source.normalized()?;
        let input = TwoModeFock::product(&source, &source);
        let output = BeamSplitter::new(dim).apply(&input)?;

        let beta = Complex64::new(params.cat_amplitude(), 0.0);
        let cat_branch = coherent_fock(beta, dim) + coherent_fock(-beta, dim);
        Ok(ProtocolOracle {
            params: *params,
            dim,
            output,
            source_norm_sqr,
            cat_branch,
        })
    }

    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn output(&self) -> &TwoModeFock {
        &self.output
    }

    /// Unnormalized mode-4 vector and outcome density for `X = x` on mode 3.
    pub fn project(&self, x: f64) -> Result<(FockVector, f64)> {
        project_quadrature(&self.output, x)
    }

    pub fn density(&self, x: f64) -> f64 {
        outcome_density(&self.output, x)
    }

    /// `(c1, c2)` at outcome `x`, read off the projected vector.
    ///
    /// The projection is `N_Φ²·(c1|0⟩ + c2(|β⟩ + |−β⟩))`; only the cat branch
    /// populates `n ≥ 1`, so a least-squares fit there gives `c2` and the
    /// vacuum component then gives `c1`.
    pub fn coefficients(&self, x: f64) -> Result<(Complex64, Complex64)> {
        let (v, _) = self.project(x)?;
        let u = &self.cat_branch.amps;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for n in 1..self.dim {
            num += u[n].conj() * v.amps[n];
            den += u[n].norm_sqr();
        }
        if den < 1e-24 {
            return Err(Error::DegenerateState(
                "cat branch coincides with the vacuum; c1 and c2 are not separable".into(),
            ));
        }
        let c2 = num / den;
        let c1 = v.amps[0] - c2 * u[0];
        Ok((c1 * self.source_norm_sqr, c2 * self.source_norm_sqr))
    }

    pub fn ratio(&self) -> Result<f64> {
        let (c1, c2) = self.coefficients(0.0)?;
        Ok(c1.norm() / c2.norm())
    }

    pub fn conditional_state(&self, x: f64) -> Result<FockVector> {
        self.project(x)?.0.normalized()
    }

    /// Normalized even cat `|β⟩ + |−β⟩`, `β = √2·α0·sin(φ/2)`.
    pub fn ideal_cat(&self) -> Result<FockVector> {
        self.cat_branch.clone().normalized()
    }

    pub fn cat_fidelity(&self, x: f64) -> Result<f64> {
        self.conditional_state(x)?.fidelity(&self.ideal_cat()?)
    }

    /// `∫ p(x) dx` over `|x| ≤ √2·max|Re α| + 10`.
    pub fn marginal_total(&self) -> f64 {
        let (a, _) = self.params.source_amplitudes();
        let reach = SQRT_2 * SQRT_2 * a.re.abs() + MARGINAL_MARGIN;
        CompositeRule::with_max_width(-reach, reach).integrate(|x| self.density(x))
    }

    pub fn window(&self, window: &HomodyneWindow, exec: Execution) -> Result<(FockDensity, f64)> {
        let panels = panels_for(2.0 * window.half_width());
        window_state_with(&self.output, window, panels, exec)
    }

    /// `(probability, fidelity to the ideal cat)` for a finite window.
    pub fn window_metrics(&self, window: &HomodyneWindow, exec: Execution) -> Result<(f64, f64)> {
        let (rho, probability) = self.window(window, exec)?;
        Ok((probability, rho.fidelity(&self.ideal_cat()?)?))
    }
}
