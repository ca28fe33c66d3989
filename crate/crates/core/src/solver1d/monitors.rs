//! Domain integrals and scalar bounds.

use serde::Serialize;

use super::{Fields, Grid1D};
use crate::error::Result;
use crate::model::ModelParams;

/// Names of the transported scalars, in the order of [`Monitors::scalar_ranges`].
pub const SCALARS: [&str; 8] = ["y", "alpha", "a_i", "w", "n", "s", "s1", "s2"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarRange {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Monitors {
    pub t: f64,
    pub mass: f64,
    pub y_mass: f64,
    pub momentum: f64,
    pub energy: f64,
    /// Integral of `a_i s_i`.
    pub ai_si: f64,
    pub scalar_ranges: Vec<ScalarRange>,
    pub clamp_count: u64,
    /// `E(t) - E(0)` plus the time-integrated boundary outflow of `(E + p_hat) u`.
    pub energy_residual_p_hat: f64,
    /// Same with `(E + p) u`.
    pub energy_residual_p: f64,
}

/// Neumaier compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Midpoint-rule integrals over the grid. Time, clamp count and residuals are left at zero.
pub fn compute_monitors(fields: &Fields, grid: &Grid1D, params: &ModelParams) -> Result<Monitors> {
    let evals = fields.evaluate(params)?;
    let dx = grid.dx();
    let integral = |f: &dyn Fn(usize) -> f64| compensated_sum((0..evals.len()).map(f)) * dx;
    let cells = &fields.cells;
    let scalar_ranges = SCALARS
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let pick = |c: &crate::model::PrimCell| [c.y, c.alpha, c.a_i, c.w, c.n, c.s, c.s1, c.s2][k];
            let (min, max) = cells
                .iter()
                .map(pick)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            ScalarRange { name, min, max }
        })
        .collect();
    Ok(Monitors {
        t: 0.0,
        mass: integral(&|i| cells[i].rho),
        y_mass: integral(&|i| cells[i].rho * cells[i].y),
        momentum: integral(&|i| cells[i].rho * cells[i].u),
        energy: integral(&|i| evals[i].total_energy_density()),
        ai_si: integral(&|i| cells[i].a_i * evals[i].thermo.view.s_i),
        scalar_ranges,
        clamp_count: 0,
        energy_residual_p_hat: 0.0,
        energy_residual_p: 0.0,
    })
}
