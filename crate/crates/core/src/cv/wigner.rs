use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;

use super::{coherent_overlap, Amplitude, CoherentSuperposition};
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};

/// `W(γ) = (2/π)·Tr[ρ D(γ) Π D†(γ)]` before discarding the imaginary part.
///
/// For `ρ = |α_i⟩⟨α_j|` the trace is
/// `exp(i·Im(γ̄α_i) − i·Im(γ̄α_j))·⟨α_j − γ|γ − α_i⟩`. The state is
/// normalized on the fly, so unnormalized input is fine.
fn wigner_value(s: &CoherentSuperposition, gamma: Amplitude) -> Complex64 {
    let gbar = gamma.conj();
    let mut acc = Complex64::new(0.0, 0.0);
    for ti in s.terms() {
        for tj in s.terms() {
            let phase = (gbar * ti.amplitude).im - (gbar * tj.amplitude).im;
            let overlap = coherent_overlap(tj.amplitude - gamma, gamma - ti.amplitude);
            acc += ti.weight * tj.weight.conj() * Complex64::from_polar(1.0, phase) * overlap;
        }
    }
    acc * (FRAC_2_PI / s.norm_sqr())
}

/// Wigner function at `γ`, normalized so that `∫ W d²γ = 1` (vacuum peak `2/π`).
pub fn wigner_point(s: &CoherentSuperposition, gamma: Amplitude) -> f64 {
    wigner_value(s, gamma).re
}

/// Square grid of `steps × steps` points over `[−half_extent, half_extent]²`
/// in the amplitude plane, `Re γ` outer and `Im γ` inner: `(Re γ, Im γ, W)`.
pub fn wigner_grid(
    s: &CoherentSuperposition,
    half_extent: f64,
    steps: usize,
    exec: Execution,
) -> Result<Vec<(f64, f64, f64)>> {
    if !(half_extent.is_finite() && half_extent > 0.0) {
        return Err(Error::domain(format!("grid half extent must be > 0, got {half_extent}")));
    }
    if steps < 2 {
        return Err(Error::domain(format!("grid needs at least 2 steps, got {steps}")));
    }
    let at = |i: usize| -half_extent + 2.0 * half_extent * i as f64 / (steps - 1) as f64;
    let rows = map_range(steps, exec, |i| {
        let x = at(i);
        (0..steps)
            .map(|j| {
                let y = at(j);
                (x, y, wigner_point(s, Complex64::new(x, y)))
            })
            .collect::<Vec<_>>()
    });
    Ok(rows.into_iter().flatten().collect())
}
