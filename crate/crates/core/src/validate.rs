//! Closed forms against the Fock-space oracle.

use serde::Serialize;

use crate::cv::CoherentSuperposition;
use crate::error::Result;
use crate::exec::{try_map_range, Execution};
use crate::fock::{coherent_fock, fidelity, FockVector, ProtocolOracle};
use crate::params::{HomodyneWindow, ProtocolParams};
use crate::protocol::{c1_at, c2_at, ratio_exact, Scheme};
use crate::tolerance::CROSS_REPRESENTATION;

pub const DEFAULT_ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 3.0];
pub const DEFAULT_PHIS: [f64; 3] = [0.05, 0.1, 0.5];

/// Homodyne outcomes at which the pointwise quantities are compared.
const OUTCOMES: [f64; 4] = [0.0, 0.3, -0.7, 1.5];
const WINDOW_HALF_WIDTH: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Worst {
    pub alpha0: f64,
    pub phi: f64,
    pub quantity: &'static str,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSummary {
    pub max_deviation: f64,
    pub worst: Option<Worst>,
    pub points: usize,
    pub comparisons: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Largest deviation of every compared quantity at one parameter point.
pub fn compare_point(p: &ProtocolParams) -> Result<Vec<(&'static str, f64)>> {
    let oracle = ProtocolOracle::new(p)?;
    let scheme = Scheme::new(p)?;
    let mut out = Vec::new();
    let mut push = |name, d: f64| out.push((name, d));

    push("ratio", (oracle.ratio()? - ratio_exact(p)).abs());
    for &x in &OUTCOMES {
        let (c1, c2) = oracle.coefficients(x)?;
        push("c1", (c1 - c1_at(p, x)).norm());
        push("c2", (c2 - c2_at(p, x)).norm());
        push("density", (oracle.density(x) - scheme.density(x)).abs());
        push(
            "cat fidelity",
            (oracle.cat_fidelity(x)? - scheme.cat_fidelity(x)?).abs(),
        );
        let analytic = to_fock(&scheme.conditional_state(x)?, oracle.dim());
        let state = oracle.conditional_state(x)?;
        push("conditional state", 1.0 - fidelity(&state, &analytic)?);
    }
    let w = HomodyneWindow::new(0.0, WINDOW_HALF_WIDTH)?;
    let (prob, fid) = oracle.window_metrics(&w, Execution::Sequential)?;
    let analytic = scheme.window_metrics_analytic(&w)?;
    push("window probability", (prob - analytic.probability).abs());
    push("window fidelity", (fid - analytic.fidelity).abs());
    Ok(out)
}

fn to_fock(s: &CoherentSuperposition, dim: usize) -> FockVector {
    let mut v = FockVector::zeros(dim);
    for t in s.terms() {
        v.amps += coherent_fock(t.amplitude, dim).amps * t.weight;
    }
    v
}

/// Runs [`compare_point`] over `alphas × phis`. Any error (e.g. a Fock
/// truncation beyond the cap) aborts the run.
pub fn cross_validate(
    alphas: &[f64],
    phis: &[f64],
    tolerance: f64,
    exec: Execution,
) -> Result<ValidationSummary> {
    let params = alphas
        .iter()
        .flat_map(|&a| phis.iter().map(move |&phi| (a, phi)))
        .map(|(a, phi)| ProtocolParams::new(a, phi))
        .collect::<Result<Vec<_>>>()?;
    let results = try_map_range(params.len(), exec, |i| compare_point(&params[i]))?;
    let mut summary = ValidationSummary {
        max_deviation: 0.0,
        worst: None,
        points: params.len(),
        comparisons: 0,
        tolerance,
        passed: true,
    };
    for (p, devs) in params.iter().zip(results) {
        for (quantity, deviation) in devs {
            summary.comparisons += 1;
            // a NaN deviation is a failure, never a silent pass
            if deviation.is_nan() || deviation > summary.max_deviation || summary.worst.is_none() {
                summary.max_deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
                summary.worst = Some(Worst {
                    alpha0: p.alpha0(),
                    phi: p.phi(),
                    quantity,
                    deviation: summary.max_deviation,
                });
            }
        }
    }
    summary.passed = summary.max_deviation <= tolerance;
    Ok(summary)
}

pub fn cross_validate_default(exec: Execution) -> Result<ValidationSummary> {
    cross_validate(&DEFAULT_ALPHAS, &DEFAULT_PHIS, CROSS_REPRESENTATION, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn small_grid_passes() {
        let s = cross_validate(&[0.5, 2.0], &[0.1], CROSS_REPRESENTATION, Execution::default()).unwrap();
        assert_eq!(s.points, 2);
        assert!(s.passed, "{s:?}");
    }

    #[test]
    fn impossible_tolerance_fails() {
        let s = cross_validate(&[1.0], &[0.1], 1e-20, Execution::default()).unwrap();
        assert!(!s.passed);
        assert!(s.worst.is_some());
    }

    #[test]
    fn truncation_cap_propagates() {
        let r = cross_validate(&[50.0], &[0.1], CROSS_REPRESENTATION, Execution::default());
        assert!(matches!(r, Err(Error::TruncationTooLarge { .. })));
    }
}
