//! Cell-local relaxation sources for `(alpha, a_i, w, n)`.

use rayon::prelude::*;

use super::{clamp_cell, Fields, SolverConfig, SourceIntegrator};
use crate::error::{Error, Result};
use crate::model::{CellEvaluation, ModelParams, PrimCell};

/// Substep ceiling for the subcycled integrator.
pub const MAX_SUBSTEPS: u64 = 1_000_000;

/// Heun's explicit second-order step.
pub fn rk2_step<const N: usize, F>(x: &[f64; N], h: f64, f: F) -> Result<[f64; N]>
where
    F: Fn(&[f64; N]) -> Result<[f64; N]>,
{
    let k1 = f(x)?;
    let mut x1 = *x;
    for i in 0..N {
        x1[i] += h * k1[i];
    }
    let k2 = f(&x1)?;
    let mut out = *x;
    for i in 0..N {
        out[i] += 0.5 * h * (k1[i] + k2[i]);
    }
    Ok(out)
}

/// Fastest local relaxation rate (1/s): the `alpha` and `a_i` oscillation
/// frequencies and the damping rates.
pub fn stiffness_rate(ev: &CellEvaluation, params: &ModelParams) -> f64 {
    let c = &ev.cell;
    let k = phasic_stiffness(ev);
    let omega_alpha = (k / params.m).sqrt();
    let s_i = ev.thermo.view.s_i;
    let omega_a = (params.fluids.interface.theta * s_i * s_i / (c.a_i * params.nu)).sqrt();
    omega_alpha.max(omega_a).max(params.lambda_w).max(params.lambda_n)
}

/// `rho1 c1^2 / alpha + rho2 c2^2 / (1 - alpha)`, i.e. `-d(p1 - p2)/d alpha`.
pub fn phasic_stiffness(ev: &CellEvaluation) -> f64 {
    let a = ev.cell.alpha;
    let k1 = ev.thermo.phase1.c2 / ev.thermo.view.tau1;
    let k2 = ev.thermo.phase2.c2 / ev.thermo.view.tau2;
    k1 / a + k2 / (1.0 - a)
}

fn cell_with(cell: &PrimCell, x: &[f64; 4]) -> PrimCell {
    PrimCell { alpha: x[0], a_i: x[1], w: x[2], n: x[3], ..*cell }
}

fn rates(cell: &PrimCell, params: &ModelParams, x: &[f64; 4]) -> Result<[f64; 4]> {
    let ev = CellEvaluation::new(&cell_with(cell, x), params)?;
    let r = ev.source_terms(params);
    Ok([r.alpha, r.a_i, r.w, r.n])
}

/// Number of substeps the configured integrator uses for one cell.
pub fn substeps(ev: &CellEvaluation, params: &ModelParams, dt: f64, config: &SolverConfig) -> Result<u64> {
    match config.source_integrator {
        SourceIntegrator::Rk2 => Ok(1),
        SourceIntegrator::SubcycledRk2 => {
            let needed = (dt * stiffness_rate(ev, params) / config.subcycle_max_dt_fraction).ceil();
            if !needed.is_finite() || needed > MAX_SUBSTEPS as f64 {
                let needed = if needed.is_finite() { needed as u64 } else { u64::MAX };
                return Err(Error::SubcycleLimit { needed, limit: MAX_SUBSTEPS });
            }
            Ok((needed as u64).max(1))
        }
    }
}

/// Integrates the sources over `dt` in every cell; `rho, u, y, s, s1, s2` are untouched.
/// Returns the new fields and the number of clamped components.
pub fn source_step(
    fields: &Fields,
    params: &ModelParams,
    dt: f64,
    config: &SolverConfig,
) -> Result<(Fields, u64)> {
    let out: Vec<(PrimCell, u64)> = fields
        .cells
        .par_iter()
        .enumerate()
        .map(|(i, cell)| {
            let ev = CellEvaluation::new(cell, params)?;
            let k = substeps(&ev, params, dt, config)?;
            let h = dt / k as f64;
            let mut x = [cell.alpha, cell.a_i, cell.w, cell.n];
            for _ in 0..k {
                x = rk2_step(&x, h, |x| rates(cell, params, x))?;
            }
            clamp_cell(cell_with(cell, &x), &config.floors, i)
        })
        .collect::<Result<_>>()?;
    let clamps = out.iter().map(|(_, k)| k).sum();
    Ok((Fields { cells: out.into_iter().map(|(c, _)| c).collect() }, clamps))
}

/// The `(alpha, w)` pair with frozen thermodynamics and a linear pressure difference
/// `p1 - p2 = -k (alpha - alpha_star)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearOscillator {
    pub k: f64,
    pub m: f64,
    pub rho_y: f64,
    pub alpha_star: f64,
    pub lambda_w: f64,
}

impl LinearOscillator {
    /// Linearisation of the `alpha` source about the given cell.
    pub fn linearize(ev: &CellEvaluation, params: &ModelParams) -> Self {
        let k = phasic_stiffness(ev);
        let dp = ev.thermo.phase1.p - ev.thermo.phase2.p;
        Self {
            k,
            m: params.m,
            rho_y: ev.cell.rho * ev.cell.y,
            alpha_star: ev.cell.alpha + dp / k,
            lambda_w: params.lambda_w,
        }
    }

    pub fn omega(&self) -> f64 {
        (self.k / self.m).sqrt()
    }

    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega()
    }

    /// Rates of `[alpha, w]`.
    pub fn rhs(&self, x: &[f64; 2]) -> [f64; 2] {
        let sm = self.m.sqrt();
        [
            self.rho_y * x[1] / sm,
            -self.k * (x[0] - self.alpha_star) / (sm * self.rho_y) - self.lambda_w * x[1],
        ]
    }

    /// `k (alpha - alpha_star)^2 / 2 + (rho y w)^2 / 2`.
    pub fn energy(&self, x: &[f64; 2]) -> f64 {
        0.5 * self.k * (x[0] - self.alpha_star).powi(2) + 0.5 * (self.rho_y * x[1]).powi(2)
    }

    pub fn integrate(&self, x: [f64; 2], h: f64, steps: usize) -> [f64; 2] {
        let mut x = x;
        for _ in 0..steps {
            x = rk2_step(&x, h, |v| Ok(self.rhs(v))).expect("linear rates are infallible");
        }
        x
    }
}
