use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_dim, TwoModeFock};
use crate::error::Result;
use crate::exec::{map_range, Execution};

/// 50:50 beam splitter on two modes truncated at `dim`, stored as one real
/// orthogonal block per total photon number `t < dim`.
///
/// Block `t` holds `⟨k, t−k| U |n, t−n⟩` at `[k·(t+1) + n]`, where
/// `U a† U† = (c† + d†)/√2` and `U b† U† = (c† − d†)/√2`.
#[derive(Debug, Clone)]
pub struct BeamSplitter {
    dim: usize,
    blocks: Vec<Vec<f64>>,
}

impl BeamSplitter {
    pub fn new(dim: usize) -> Self {
        Self::with_exec(dim, Execution::default())
    }

    pub fn with_exec(dim: usize, exec: Execution) -> Self {
        BeamSplitter {
            dim,
            blocks: map_range(dim, exec, block),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major `(t+1) × (t+1)` block for total photon number `t`.
    pub fn block(&self, t: usize) -> &[f64] {
        &self.blocks[t]
    }

    /// `max |BᵀB − I|` over all blocks.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (t, block) in self.blocks.iter().enumerate() {
            let size = t + 1;
            for i in 0..size {
                for j in 0..size {
                    let dot: f64 = (0..size)
                        .map(|k| block[k * size + i] * block[k * size + j])
                        .sum();
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((dot - target).abs());
                }
            }
        }
        worst
    }

    /// Applies the splitter. Input components with total photon number
    /// `≥ dim` would leave the truncated space and are dropped.
    pub fn apply(&self, input: &TwoModeFock) -> Result<TwoModeFock> {
        self.apply_with(input, Execution::default())
    }

    pub fn apply_with(&self, input: &TwoModeFock, exec: Execution) -> Result<TwoModeFock> {
        check_dim(self.dim, input.dim_a())?;
        check_dim(self.dim, input.dim_b())?;
        let diagonals = map_range(self.dim, exec, |t| {
            let size = t + 1;
            let block = &self.blocks[t];
            (0..size)
                .map(|k| {
                    (0..size).fold(Complex64::new(0.0, 0.0), |acc, n| {
                        acc + input.amps[(n, t - n)] * block[k * size + n]
                    })
                })
                .collect::<Vec<_>>()
        });
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (t, diag) in diagonals.into_iter().enumerate() {
            for (k, v) in diag.into_iter().enumerate() {
                out[(k, t - k)] = v;
            }
        }
        Ok(TwoModeFock { amps: out })
    }
}

/// Block `t` from the generator `G = a†b − ab†`, `U = (−1)^{N_b}·e^{−πG/4}`.
///
/// On `|k, t−k⟩`, `G = D·(iT)·D⁻¹` with `D = diag(iᵏ)` and `T` the real
/// symmetric tridiagonal matrix with off-diagonals `√((k+1)(t−k))`, whose
/// eigenvalues are exactly `−t, −t+2, …, t`. Going through the orthogonal
/// eigenvectors of `T` keeps the block orthogonal to rounding at any `t`;
/// building columns by repeated creation operators does not.
fn block(t: usize) -> Vec<f64> {
    let size = t + 1;
    if t == 0 {
        return vec![1.0];
    }
    let mut tri = DMatrix::<f64>::zeros(size, size);
    for k in 0..t {
        let g = (((k + 1) * (t - k)) as f64).sqrt();
        tri[(k, k + 1)] = g;
        tri[(k + 1, k)] = g;
    }
    let eigen = tri.symmetric_eigen();
    let v = &eigen.eigenvectors;
    // snap to the exact spectrum; only the phases e^{−iπλ/4} depend on it
    let phase: Vec<(f64, f64)> = eigen
        .eigenvalues
        .iter()
        .map(|&l| {
            let exact = 2.0 * ((l + t as f64) / 2.0).round() - t as f64;
            let (s, c) = (-FRAC_PI_4 * exact).sin_cos();
            (c, s)
        })
        .collect();
    let mut out = vec![0.0; size * size];
    for k in 0..size {
        let row_sign = if (t - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        for n in 0..size {
            let (mut re, mut im) = (0.0, 0.0);
            for (m, &(c, s)) in phase.iter().enumerate() {
                let w = v[(k, m)] * v[(n, m)];
                re += w * c;
                im += w * s;
            }
            // Re(i^{k−n}·(re + i·im))
            let val = match (k + 4 * size - n) % 4 {
                0 => re,
                1 => -im,
                2 => -re,
                _ => im,
            };
            out[k * size + n] = row_sign * val;
        }
    }
    out
}

/// One-shot [`BeamSplitter::apply`]; requires `dim_a == dim_b`.
pub fn apply_bs(input: &TwoModeFock) -> Result<TwoModeFock> {
    check_dim(input.dim_a(), input.dim_b())?;
    BeamSplitter::new(input.dim_a()).apply(input)
}
