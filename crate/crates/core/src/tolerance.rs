//! Numerical thresholds shared by every module.
//!
//! Everything here is a plain constant; values that a user may want to move
//! (the Fock cap, the grid cap, the validation tolerance) are carried by
//! [`Limits`] and can be overridden at run time.

/// Two coherent amplitudes closer than this are the same amplitude; their weights are merged.
pub const COALESCE: f64 = 1e-12;

/// Norms below this mean the superposition cancelled out.
pub const DEGENERATE_NORM: f64 = 1e-14;

/// Conditioning densities below this are treated as null outcomes.
pub const ZERO_PROBABILITY: f64 = 1e-30;

/// Negative density eigenvalues above `-DENSITY_EIGEN_FLOOR` are roundoff and get clipped.
pub const DENSITY_EIGEN_FLOOR: f64 = 1e-8;

/// Hermiticity check on conditional density matrices.
pub const HERMITIAN: f64 = 1e-10;

/// Closed form vs Fock oracle agreement.
pub const CROSS_REPRESENTATION: f64 = 1e-8;

/// Absolute bisection tolerance on alpha0.
pub const BISECTION: f64 = 1e-12;
pub const BISECTION_MAX_ITER: usize = 200;

/// Gauss-Legendre order per panel.
pub const GL_ORDER: usize = 16;
/// Widest allowed quadrature panel along the quadrature axis.
pub const MAX_PANEL_WIDTH: f64 = 0.1;
/// Half-width added around the displaced Gaussians when integrating a full marginal.
pub const MARGINAL_MARGIN: f64 = 10.0;

pub const DEFAULT_MAX_FOCK: usize = 4096;
pub const DEFAULT_MAX_GRID_STEPS: usize = 2001;

/// Environment variable overriding [`DEFAULT_MAX_FOCK`].
pub const MAX_FOCK_ENV: &str = "CATFORGE_MAX_FOCK";

/// Run-time configurable limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    pub max_fock: usize,
    pub max_grid_steps: usize,
    pub validation: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_fock: DEFAULT_MAX_FOCK,
            max_grid_steps: DEFAULT_MAX_GRID_STEPS,
            validation: CROSS_REPRESENTATION,
        }
    }
}

impl Limits {
    /// Defaults, with the Fock cap taken from `CATFORGE_MAX_FOCK` when set to a positive integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_FOCK_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&c| c > 0)
        {
            limits.max_fock = cap;
        }
        limits
    }
}
