use num_complex::Complex64;

use super::FockVector;
use crate::cv::pi_quarter_inv;

/// Hermite functions `hₙ(x) = (2ⁿ n! √π)^{−1/2} Hₙ(x) e^{−x²/2}` for `n < dim`,
/// i.e. the Fock components of the (unnormalizable) quadrature eigenvector `|X = x⟩`.
///
/// Uses the normalized recurrence
/// `hₙ₊₁ = x·√(2/(n+1))·hₙ − √(n/(n+1))·hₙ₋₁`, which never forms a factorial.
pub fn hermite_functions(x: f64, dim: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(dim);
    if dim == 0 {
        return h;
    }
    h.push(pi_quarter_inv() * (-0.5 * x * x).exp());
    let mut prev = 0.0;
    for n in 0..dim - 1 {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * h[n] - (nf / (nf + 1.0)).sqrt() * prev;
        prev = h[n];
        h.push(next);
    }
    h
}

pub fn quadrature_eigvec(x: f64, dim: usize) -> FockVector {
    let mut v = FockVector::zeros(dim);
    for (slot, h) in v.amps.iter_mut().zip(hermite_functions(x, dim)) {
        *slot = Complex64::new(h, 0.0);
    }
    v
}
