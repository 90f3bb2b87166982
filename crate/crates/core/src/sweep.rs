//! Parameter sweeps over `(α0, φ)`, optimum search and window trade-off scans.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{map_range, try_map_range, Execution};
use crate::fock::ProtocolOracle;
use crate::params::{HomodyneWindow, ProtocolParams};
use crate::protocol::{
    alpha_min_exact, ratio_exact, ratio_first_order, ratio_second_order, window_metrics_with,
};
use crate::tolerance::{Limits, BISECTION, BISECTION_MAX_ITER};

/// Rectangular `alpha0 × phi` grid; both axes include their end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub alpha0_min: f64,
    pub alpha0_max: f64,
    pub alpha0_steps: usize,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
}

impl GridSpec {
    pub fn new(
        (alpha0_min, alpha0_max, alpha0_steps): (f64, f64, usize),
        (phi_min, phi_max, phi_steps): (f64, f64, usize),
    ) -> Result<Self> {
        let g = GridSpec {
            alpha0_min,
            alpha0_max,
            alpha0_steps,
            phi_min,
            phi_max,
            phi_steps,
        };
        g.validate(&Limits::from_env())?;
        Ok(g)
    }

    /// 500 × 500 over `[0, 5] × [0, 0.2]`, wide enough for the first two zero valleys.
    pub fn figure2() -> Self {
        GridSpec {
            alpha0_min: 0.0,
            alpha0_max: 5.0,
            alpha0_steps: 500,
            phi_min: 0.0,
            phi_max: 0.2,
            phi_steps: 500,
        }
    }

    pub fn validate(&self, limits: &Limits) -> Result<()> {
        let axis = |name: &str, lo: f64, hi: f64, steps: usize| -> Result<()> {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::domain(format!("{name} range must be finite")));
            }
            if !(lo < hi) {
                return Err(Error::domain(format!("{name} range is empty: [{lo}, {hi}]")));
            }
            if steps < 2 {
                return Err(Error::domain(format!("{name} needs at least 2 steps, got {steps}")));
            }
            if steps > limits.max_grid_steps {
                return Err(Error::GridTooLarge {
                    steps,
                    cap: limits.max_grid_steps,
                });
            }
            Ok(())
        };
        axis("alpha0", self.alpha0_min, self.alpha0_max, self.alpha0_steps)?;
        axis("phi", self.phi_min, self.phi_max, self.phi_steps)?;
        if self.alpha0_min < 0.0 {
            return Err(Error::domain("alpha0 range must be >= 0"));
        }
        if self.phi_min < -PI || self.phi_max > PI {
            return Err(Error::domain("phi range must lie in [-pi, pi]"));
        }
        Ok(())
    }

    pub fn alpha0_step(&self) -> f64 {
        (self.alpha0_max - self.alpha0_min) / (self.alpha0_steps - 1) as f64
    }

    pub fn phi_step(&self) -> f64 {
        (self.phi_max - self.phi_min) / (self.phi_steps - 1) as f64
    }

    pub fn alpha0_at(&self, i: usize) -> f64 {
        linspace_at(self.alpha0_min, self.alpha0_max, self.alpha0_steps, i)
    }

    pub fn phi_at(&self, j: usize) -> f64 {
        linspace_at(self.phi_min, self.phi_max, self.phi_steps, j)
    }
}

fn linspace_at(lo: f64, hi: f64, steps: usize, i: usize) -> f64 {
    if i + 1 == steps {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (steps - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha0: f64,
    pub phi: f64,
    pub ratio_exact: f64,
    pub ratio_o1: f64,
    pub ratio_o2: f64,
    pub d: f64,
}

impl SweepRow {
    pub fn at(alpha0: f64, phi: f64) -> Result<Self> {
        let p = ProtocolParams::new(alpha0, phi)?;
        Ok(SweepRow {
            alpha0,
            phi,
            ratio_exact: ratio_exact(&p),
            ratio_o1: ratio_first_order(&p),
            ratio_o2: ratio_second_order(&p),
            d: p.separations().d,
        })
    }
}

/// All grid points, `phi` outer and `alpha0` inner. Columns are computed
/// independently; the output order does not depend on `exec`.
pub fn sweep_ratio(g: &GridSpec, exec: Execution) -> Result<Vec<SweepRow>> {
    g.validate(&Limits::from_env())?;
    let columns = try_map_range(g.phi_steps, exec, |j| {
        let phi = g.phi_at(j);
        (0..g.alpha0_steps)
            .map(|i| SweepRow::at(g.alpha0_at(i), phi))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(columns.into_iter().flatten().collect())
}

/// Number of exact zeros `α0²·sin φ = π/2 + kπ` with `α0 ≤ alpha_max`.
pub fn zero_count(phi: f64, alpha_max: f64) -> usize {
    let top = alpha_max * alpha_max * phi.abs().sin();
    if top < FRAC_PI_2 {
        0
    } else {
        ((top - FRAC_PI_2) / PI).floor() as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Valley {
    pub k: u32,
    /// Columns in which the zero lies inside the `alpha0` range.
    pub columns: usize,
    /// Largest `|argmin − zero|` in units of the `alpha0` step.
    pub max_offset_cells: f64,
    /// Smallest sampled ratio along the valley.
    pub depth: f64,
    /// Largest per-column minimum along the valley.
    pub shallowest_column: f64,
    /// Columns whose local minimum is more than one cell from the zero.
    pub missed: usize,
}

/// Locates the per-column minima of `ratio_exact` around each exact zero
/// `α0 = √((π/2 + kπ)/sin φ)` and compares their positions with the curve.
///
/// `rows` must come from [`sweep_ratio`] on `g`. The minimum is searched
/// within two cells of the zero so neighbouring valleys do not interfere.
pub fn trace_valleys(g: &GridSpec, rows: &[SweepRow]) -> Result<Vec<Valley>> {
    if rows.len() != g.alpha0_steps * g.phi_steps {
        return Err(Error::DimensionMismatch {
            expected: g.alpha0_steps * g.phi_steps,
            found: rows.len(),
        });
    }
    let step = g.alpha0_step();
    let kmax = (0..g.phi_steps)
        .map(|j| zero_count(g.phi_at(j), g.alpha0_max))
        .max()
        .unwrap_or(0);
    let mut valleys = Vec::with_capacity(kmax);
    for k in 0..kmax as u32 {
        let mut v = Valley {
            k,
            columns: 0,
            max_offset_cells: 0.0,
            depth: f64::INFINITY,
            shallowest_column: 0.0,
            missed: 0,
        };
        for j in 0..g.phi_steps {
            let phi = g.phi_at(j).abs();
            if phi == 0.0 || phi >= PI {
                continue;
            }
            let zero = alpha_min_exact(phi, k)?;
            if zero < g.alpha0_min || zero > g.alpha0_max {
                continue;
            }
            let column = &rows[j * g.alpha0_steps..(j + 1) * g.alpha0_steps];
            let centre = ((zero - g.alpha0_min) / step).round() as usize;
            let lo = centre.saturating_sub(2);
            let hi = (centre + 2).min(g.alpha0_steps - 1);
            let (idx, min) = (lo..=hi)
                .map(|i| (i, column[i].ratio_exact))
                .fold((lo, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
            let offset = (column[idx].alpha0 - zero).abs() / step;
            v.columns += 1;
            v.max_offset_cells = v.max_offset_cells.max(offset);
            v.depth = v.depth.min(min);
            v.shallowest_column = v.shallowest_column.max(min);
            if offset > 1.0 {
                v.missed += 1;
            }
        }
        valleys.push(v);
    }
    Ok(valleys)
}

/// Worst relative deviation of one approximation from `ratio_exact`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Deviation {
    pub max_relative: f64,
    pub worst_alpha0: f64,
    pub worst_phi: f64,
    pub points: usize,
}

/// `|approx − exact| / max(exact, 1e−6)` over rows with `exact ≥ exclude_below`.
pub fn approximation_error(
    rows: &[SweepRow],
    approx: impl Fn(&SweepRow) -> f64,
    exclude_below: f64,
) -> Deviation {
    let mut dev = Deviation {
        max_relative: 0.0,
        worst_alpha0: f64::NAN,
        worst_phi: f64::NAN,
        points: 0,
    };
    for r in rows.iter().filter(|r| r.ratio_exact >= exclude_below) {
        dev.points += 1;
        let rel = (approx(r) - r.ratio_exact).abs() / r.ratio_exact.max(1e-6);
        if rel > dev.max_relative || dev.worst_alpha0.is_nan() {
            dev.max_relative = dev.max_relative.max(rel);
            dev.worst_alpha0 = r.alpha0;
            dev.worst_phi = r.phi;
        }
    }
    dev
}

/// Bisection for a sign change of `f` on `[lo, hi]`, to an absolute bracket width of `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::domain(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `k`-th exact optimum. With `validate_numeric`, bisection on `cos(α0²·sin φ)`
/// over `[√(kπ/sin φ), √((k+1)π/sin φ)]` must land within `1e−12` of it.
pub fn find_min_alpha(phi: f64, k: u32, validate_numeric: bool) -> Result<f64> {
    let closed_form = alpha_min_exact(phi, k)?;
    if validate_numeric {
        let s = phi.sin();
        let lo = (k as f64 * PI / s).sqrt();
        let hi = ((k as f64 + 1.0) * PI / s).sqrt();
        let numeric = bisect(|a| (a * a * s).cos(), lo, hi, BISECTION)?;
        let diff = (numeric - closed_form).abs();
        if diff > BISECTION {
            return Err(Error::RootMismatch {
                closed_form,
                numeric,
                diff,
            });
        }
    }
    Ok(closed_form)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowRow {
    pub epsilon: f64,
    pub probability: f64,
    pub fidelity: f64,
}

/// Window metrics around `x = 0` for each half width; the Fock oracle is built once.
pub fn window_tradeoff(p: &ProtocolParams, epsilons: &[f64], exec: Execution) -> Result<Vec<WindowRow>> {
    if epsilons.is_empty() {
        return Err(Error::domain("no window widths given"));
    }
    for pair in epsilons.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(Error::domain("window widths must be strictly ascending"));
        }
    }
    let windows = epsilons
        .iter()
        .map(|&e| HomodyneWindow::new(0.0, e))
        .collect::<Result<Vec<_>>>()?;
    let oracle = ProtocolOracle::new(p)?;
    // the window integrals are themselves parallel; keep the outer loop sequential
    let rows = map_range(windows.len(), Execution::Sequential, |i| {
        window_metrics_with(&oracle, &windows[i], exec).map(|m| WindowRow {
            epsilon: epsilons[i],
            probability: m.probability,
            fidelity: m.fidelity,
        })
    });
    rows.into_iter().collect()
}
