//! The ten-variable one-velocity model with volume-fraction and interfacial-area dynamics.
//!
//! Cell unknowns, in this order throughout the crate:
//! `(rho, u, y, alpha, a_i, w, n, s, s1, s2)`.
//!
//! `w` and `n` are the small-scale momentum variables defined by
//! `D_t alpha = rho y w / sqrt(m)` and `D_t a_i = rho y n / sqrt(nu)`.
//!
//! Two effective pressures appear:
//!
//! * [`p_hat`] is the momentum-flux pressure
//!   `p + (m/2) (rho y w)^2 + (nu/2) (rho y n)^2`, where `p` is the
//!   fluid-interface pressure `alpha p1 + (1 - alpha) p2 - a_i gamma_i`;
//! * [`p_hat_quasilinear`] is the pressure whose gradient fills row 2 of the
//!   quasilinear matrix; it has no `a_i gamma_i` term.

pub mod eigen;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{Fluids, MixtureEvaluation, MixtureState};

pub use eigen::{eigen_analytic, eigen_numeric, AnalyticSpectrum, Eigenvalue, NumericSpectrum};

/// Number of cell unknowns.
pub const NVARS: usize = 10;

/// Column index of each unknown in [`QuasiSystem::matrix`].
pub mod var {
    pub const RHO: usize = 0;
    pub const U: usize = 1;
    pub const Y: usize = 2;
    pub const ALPHA: usize = 3;
    pub const A_I: usize = 4;
    pub const W: usize = 5;
    pub const N: usize = 6;
    pub const S: usize = 7;
    pub const S1: usize = 8;
    pub const S2: usize = 9;
}

/// Sign applied to the surface-tension forcing of `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSign {
    /// `+gamma_i`, as the evolution system is usually written.
    #[default]
    #[serde(alias = "paper")]
    Positive,
    /// `-gamma_i`, the sign of `-d(rho e)/d a_i`; keeps the source ODE energy-conserving.
    #[serde(alias = "derived")]
    Negative,
}

impl SourceSign {
    pub fn factor(self) -> f64 {
        match self {
            SourceSign::Positive => 1.0,
            SourceSign::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Small-scale inertia attached to `alpha` (kg/m).
    pub m: f64,
    /// Small-scale inertia attached to `a_i` (kg m).
    pub nu: f64,
    pub fluids: Fluids,
    pub lambda_w: f64,
    pub lambda_n: f64,
    pub source_sign: SourceSign,
}

impl ModelParams {
    pub fn new(m: f64, nu: f64, fluids: Fluids) -> Result<Self> {
        let params =
            Self { m, nu, fluids, lambda_w: 0.0, lambda_n: 0.0, source_sign: SourceSign::default() };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &'static str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: "must be > 0".into() })
            }
        };
        let non_negative = |v: f64, name: &'static str| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: "must be >= 0".into() })
            }
        };
        positive(self.m, "m")?;
        positive(self.nu, "nu")?;
        non_negative(self.lambda_w, "lambda_w")?;
        non_negative(self.lambda_n, "lambda_n")
    }
}

/// Full dynamic state of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimCell {
    pub rho: f64,
    pub u: f64,
    pub y: f64,
    pub alpha: f64,
    pub a_i: f64,
    pub w: f64,
    pub n: f64,
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
}

impl PrimCell {
    pub fn from_mixture(state: &MixtureState, u: f64, w: f64, n: f64) -> Self {
        Self {
            rho: state.rho,
            u,
            y: state.y,
            alpha: state.alpha,
            a_i: state.a_i,
            w,
            n,
            s: state.s,
            s1: state.s1,
            s2: state.s2,
        }
    }

    pub fn mixture(&self) -> MixtureState {
        MixtureState {
            rho: self.rho,
            s: self.s,
            s1: self.s1,
            s2: self.s2,
            a_i: self.a_i,
            y: self.y,
            alpha: self.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.u, self.w, self.n].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite velocity component in {self:?}")));
        }
        self.mixture().validate()
    }

    pub fn to_array(&self) -> [f64; NVARS] {
        [self.rho, self.u, self.y, self.alpha, self.a_i, self.w, self.n, self.s, self.s1, self.s2]
    }

    pub fn from_array(v: [f64; NVARS]) -> Self {
        Self {
            rho: v[0],
            u: v[1],
            y: v[2],
            alpha: v[3],
            a_i: v[4],
            w: v[5],
            n: v[6],
            s: v[7],
            s1: v[8],
            s2: v[9],
        }
    }

    /// `D_t alpha` and `D_t a_i`.
    pub fn small_scale_rates(&self, params: &ModelParams) -> (f64, f64) {
        let ry = self.rho * self.y;
        (ry * self.w / params.m.sqrt(), ry * self.n / params.nu.sqrt())
    }

    fn small_scale_pressure(&self, params: &ModelParams) -> f64 {
        let ry = self.rho * self.y;
        0.5 * params.m * (ry * self.w).powi(2) + 0.5 * params.nu * (ry * self.n).powi(2)
    }
}

/// Cell state together with its thermodynamic evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellEvaluation {
    pub cell: PrimCell,
    pub thermo: MixtureEvaluation,
}

impl CellEvaluation {
    pub fn new(cell: &PrimCell, params: &ModelParams) -> Result<Self> {
        cell.validate()?;
        Ok(Self { cell: *cell, thermo: params.fluids.evaluate(&cell.mixture())? })
    }

    /// Momentum-flux pressure.
    pub fn p_hat(&self, params: &ModelParams) -> f64 {
        self.thermo.mixture.p + self.cell.small_scale_pressure(params)
    }

    pub fn p_hat_quasilinear(&self, params: &ModelParams) -> f64 {
        let (a, p1, p2) = (self.cell.alpha, self.thermo.phase1.p, self.thermo.phase2.p);
        a * p1 + (1.0 - a) * p2 + self.cell.small_scale_pressure(params)
    }

    /// `d p_hat_quasilinear / d rho` at fixed `(y, alpha, a_i, w, n, s, s1, s2)`.
    pub fn dp_hat_drho(&self, params: &ModelParams) -> f64 {
        let c = &self.cell;
        let y = c.y;
        y * self.thermo.phase1.c2
            + (1.0 - y) * self.thermo.phase2.c2
            + c.rho * y * y * (params.m * c.w * c.w + params.nu * c.n * c.n)
    }

    /// Analytic gradient of [`p_hat_quasilinear`] in the crate's variable order.
    /// The velocity slot is zero.
    pub fn p_hat_gradient(&self, params: &ModelParams) -> Result<[f64; NVARS]> {
        let c = &self.cell;
        let (ph1, ph2) = (&self.thermo.phase1, &self.thermo.phase2);
        let (tau1, tau2) = (self.thermo.view.tau1, self.thermo.view.tau2);
        let fl = &params.fluids;
        // rho_k c_k^2
        let k1 = ph1.c2 / tau1;
        let k2 = ph2.c2 / tau2;
        let ry2 = (c.rho * c.y).powi(2);
        let mut g = [0.0; NVARS];
        g[var::RHO] = self.dp_hat_drho(params);
        g[var::Y] = c.alpha * k1 / c.y - (1.0 - c.alpha) * k2 / (1.0 - c.y)
            + c.rho * c.rho * c.y * (params.m * c.w * c.w + params.nu * c.n * c.n);
        g[var::ALPHA] = ph1.p - ph2.p - k1 + k2;
        g[var::W] = params.m * ry2 * c.w;
        g[var::N] = params.nu * ry2 * c.n;
        g[var::S1] = c.alpha * fl.phase1.dp_ds(tau1, c.s1)?;
        g[var::S2] = (1.0 - c.alpha) * fl.phase2.dp_ds(tau2, c.s2)?;
        Ok(g)
    }

    pub fn total_energy_density(&self) -> f64 {
        let c = &self.cell;
        let ry = c.rho * c.y;
        0.5 * c.rho * c.u * c.u
            + 0.5 * (ry * c.w).powi(2)
            + 0.5 * (ry * c.n).powi(2)
            + c.rho * self.thermo.mixture.e
    }

    pub fn source_terms(&self, params: &ModelParams) -> SourceRates {
        let c = &self.cell;
        let ry = c.rho * c.y;
        let (sqrt_m, sqrt_nu) = (params.m.sqrt(), params.nu.sqrt());
        let dp = self.thermo.phase1.p - self.thermo.phase2.p;
        let gamma = self.thermo.interface.gamma_i;
        SourceRates {
            alpha: ry * c.w / sqrt_m,
            a_i: ry * c.n / sqrt_nu,
            w: dp / (sqrt_m * ry) - params.lambda_w * c.w,
            n: params.source_sign.factor() * gamma / (sqrt_nu * ry) - params.lambda_n * c.n,
        }
    }
}

/// Source contributions to `(alpha, a_i, w, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceRates {
    pub alpha: f64,
    pub a_i: f64,
    pub w: f64,
    pub n: f64,
}

impl SourceRates {
    pub fn is_zero(&self) -> bool {
        self.alpha == 0.0 && self.a_i == 0.0 && self.w == 0.0 && self.n == 0.0
    }
}

/// Momentum-flux pressure `p + (m/2)(rho y w)^2 + (nu/2)(rho y n)^2`.
pub fn p_hat(cell: &PrimCell, params: &ModelParams) -> Result<f64> {
    Ok(CellEvaluation::new(cell, params)?.p_hat(params))
}

/// `alpha p1 + (1 - alpha) p2 + (m/2)(rho y w)^2 + (nu/2)(rho y n)^2`.
pub fn p_hat_quasilinear(cell: &PrimCell, params: &ModelParams) -> Result<f64> {
    Ok(CellEvaluation::new(cell, params)?.p_hat_quasilinear(params))
}

/// `rho u^2 / 2 + (rho y w)^2 / 2 + (rho y n)^2 / 2 + rho e`.
pub fn total_energy_density(cell: &PrimCell, params: &ModelParams) -> Result<f64> {
    Ok(CellEvaluation::new(cell, params)?.total_energy_density())
}

/// Total energy written as the partial Legendre transform of the Lagrangian
/// with respect to `u`, `D_t alpha` and `D_t a_i`.
pub fn legendre_energy(cell: &PrimCell, params: &ModelParams) -> Result<f64> {
    let rho_e = params.fluids.energy_density(&cell.mixture())?;
    let (dt_alpha, dt_ai) = cell.small_scale_rates(params);
    let k = cell.rho * cell.u;
    let big_m = params.m * dt_alpha;
    let big_p = params.nu * dt_ai;
    let lagrangian = 0.5 * cell.rho * cell.u * cell.u
        + 0.5 * params.m * dt_alpha * dt_alpha
        + 0.5 * params.nu * dt_ai * dt_ai
        - rho_e;
    Ok(cell.u * k + dt_alpha * big_m + dt_ai * big_p - lagrangian)
}

pub fn source_terms(cell: &PrimCell, params: &ModelParams) -> Result<SourceRates> {
    Ok(CellEvaluation::new(cell, params)?.source_terms(params))
}

/// Quasilinear form `d_t V + C d_x V = R` in the crate's variable order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSystem {
    pub matrix: nalgebra::SMatrix<f64, NVARS, NVARS>,
    pub sources: [f64; NVARS],
}

pub fn assemble_quasilinear(cell: &PrimCell, params: &ModelParams) -> Result<QuasiSystem> {
    let ev = CellEvaluation::new(cell, params)?;
    let grad = ev.p_hat_gradient(params)?;
    let mut c = nalgebra::SMatrix::<f64, NVARS, NVARS>::zeros();
    c[(0, var::RHO)] = cell.u;
    c[(0, var::U)] = cell.rho;
    for (j, g) in grad.iter().enumerate() {
        c[(1, j)] = g / cell.rho;
    }
    for i in 1..NVARS {
        c[(i, i)] = cell.u;
    }
    let src = ev.source_terms(params);
    let mut r = [0.0; NVARS];
    r[var::ALPHA] = src.alpha;
    r[var::A_I] = src.a_i;
    r[var::W] = src.w;
    r[var::N] = src.n;
    Ok(QuasiSystem { matrix: c, sources: r })
}
