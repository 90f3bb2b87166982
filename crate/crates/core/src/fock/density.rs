use nalgebra::DMatrix;
use num_complex::Complex64;

use super::hermite::hermite_functions;
use super::{check_dim, Fidelity, FockVector, TwoModeFock};
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};
use crate::params::HomodyneWindow;
use crate::quadrature::CompositeRule;
use crate::tolerance::{DENSITY_EIGEN_FLOOR, HERMITIAN, ZERO_PROBABILITY};

/// Unit-trace, Hermitian, positive semidefinite density matrix on `|0⟩ … |N−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    matrix: DMatrix<Complex64>,
}

impl FockDensity {
    /// Normalizes `matrix` to unit trace and enforces the density invariants.
    ///
    /// Eigenvalues in `[−1e−8, 0)` are roundoff: they are clipped to zero and
    /// the trace is restored. Anything more negative is an error.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("density matrix"));
        }
        let trace = matrix.trace().re;
        if !(trace > 0.0) {
            return Err(Error::DegenerateState(format!("density trace {trace:e}")));
        }
        let scaled = matrix / Complex64::new(trace, 0.0);
        let skew = (&scaled - scaled.adjoint()).camax();
        if skew > HERMITIAN {
            return Err(Error::Domain(format!("matrix is not Hermitian (|ρ − ρ†| = {skew:e})")));
        }
        let hermitian = (&scaled + scaled.adjoint()) * Complex64::new(0.5, 0.0);

        let eigen = hermitian.clone().symmetric_eigen();
        let min = eigen.eigenvalues.min();
        if min < -DENSITY_EIGEN_FLOOR {
            return Err(Error::NotPositive(min));
        }
        if min >= 0.0 {
            return Ok(FockDensity { matrix: hermitian });
        }
        let clipped = eigen.eigenvalues.map(|l| Complex64::new(l.max(0.0), 0.0));
        let v = &eigen.eigenvectors;
        let rebuilt = v * DMatrix::from_diagonal(&clipped) * v.adjoint();
        let trace = rebuilt.trace().re;
        Ok(FockDensity {
            matrix: rebuilt / Complex64::new(trace, 0.0),
        })
    }

    pub fn pure(v: &FockVector) -> Result<Self> {
        Self::new(&v.amps * v.amps.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        FockDensity {
            matrix: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.clone().symmetric_eigen().eigenvalues.iter().copied().collect()
    }

    /// `(π/2)·W(0)`: expectation of the parity operator.
    pub fn parity(&self) -> f64 {
        (0..self.dim())
            .map(|n| {
                let p = self.matrix[(n, n)].re;
                if n % 2 == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum()
    }
}

impl Fidelity for FockDensity {
    /// `⟨t|ρ|t⟩` for the normalized target `t`.
    fn fidelity(&self, target: &FockVector) -> Result<f64> {
        check_dim(self.dim(), target.dim())?;
        let t = &target.amps;
        let f = (t.adjoint() * &self.matrix * t)[(0, 0)].re / target.norm_sqr();
        Ok(f.clamp(0.0, 1.0))
    }
}

/// Mode-b vector after projecting mode a onto `⟨X = x|`, with its squared norm.
fn project_raw(state: &TwoModeFock, h: &[f64]) -> (FockVector, f64) {
    let mut v = FockVector::zeros(state.dim_b());
    for (n, &hn) in h.iter().enumerate() {
        if hn == 0.0 {
            continue;
        }
        for m in 0..state.dim_b() {
            v.amps[m] += state.amps[(n, m)] * hn;
        }
    }
    let p = v.norm_sqr();
    (v, p)
}

/// `v[m] = Σ_n hₙ(x)·ψ[n, m]` and the outcome density `p(x) = ‖v‖²`.
pub fn project_quadrature(state: &TwoModeFock, x: f64) -> Result<(FockVector, f64)> {
    let (v, p) = project_raw(state, &hermite_functions(x, state.dim_a()));
    if p < ZERO_PROBABILITY {
        return Err(Error::ZeroProbability {
            density: p,
            threshold: ZERO_PROBABILITY,
        });
    }
    Ok((v, p))
}

/// Outcome density `p(x)` without the null-outcome check.
pub(crate) fn outcome_density(state: &TwoModeFock, x: f64) -> f64 {
    project_raw(state, &hermite_functions(x, state.dim_a())).1
}

/// Conditional state of mode b for outcomes in the window,
/// `ρ ∝ ∫ v(x) v(x)† dx`, and the acceptance probability `Tr ∫ v v† dx`.
///
/// The integral is a composite Gauss-Legendre rule with `panels` equal panels.
pub fn window_state(
    state: &TwoModeFock,
    window: &HomodyneWindow,
    panels: usize,
) -> Result<(FockDensity, f64)> {
    window_state_with(state, window, panels, Execution::default())
}

pub fn window_state_with(
    state: &TwoModeFock,
    window: &HomodyneWindow,
    panels: usize,
    exec: Execution,
) -> Result<(FockDensity, f64)> {
    if panels == 0 {
        return Err(Error::domain("window integration needs at least one panel"));
    }
    let rule = CompositeRule::new(window.lower(), window.upper(), panels);
    let per_panel = rule.len() / panels;
    let dim = state.dim_b();
    // partial sums per panel, reduced in panel order so the result does not depend on scheduling
    let partials = map_range(panels, exec, |p| {
        let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
        for i in p * per_panel..(p + 1) * per_panel {
            let (v, _) = project_raw(state, &hermite_functions(rule.nodes[i], state.dim_a()));
            let w = Complex64::new(rule.weights[i], 0.0);
            acc += (&v.amps * w) * v.amps.adjoint();
        }
        acc
    });
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for part in partials {
        rho += part;
    }
    let probability = rho.trace().re;
    if !(probability >= ZERO_PROBABILITY) {
        return Err(Error::ZeroProbability {
            density: probability,
            threshold: ZERO_PROBABILITY,
        });
    }
    Ok((FockDensity::new(rho)?, probability))
}
