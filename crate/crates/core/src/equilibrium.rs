//! Thermodynamic equilibrium of the fluid-interface system.
//!
//! At fixed total specific volume and entropy, stationarity of the mixture energy
//! gives `T1 = T2 = T_i`, `mu1 = mu2` (when mass exchange is allowed) and the
//! differential mechanical condition `gamma_i da_i - (p1 - p2) dalpha = 0`. A
//! geometric closure `a_i(alpha)` turns the latter into `p1 - p2 = gamma_i a_i'(alpha)`,
//! which for monodisperse spherical bubbles is the Young-Laplace law
//! `p1 - p2 = 2 gamma_i / R` with `R = 3 alpha / a_i`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{Floors, Fluids, MixtureState};

/// Relative step of the finite-difference Jacobian.
pub const JACOBIAN_STEP: f64 = 1e-7;
/// Maximum number of step halvings per Newton iteration.
pub const MAX_HALVINGS: usize = 30;

/// Relation between interfacial area density and volume fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometricClosure {
    /// `n_b` identical spheres of phase 1 per unit volume.
    Spherical { n_b: f64 },
    /// Flat interface: `a_i` is a free constant.
    Planar,
}

impl GeometricClosure {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeometricClosure::Spherical { n_b } if !(n_b > 0.0 && n_b.is_finite()) => {
                Err(Error::InvalidParameter { name: "n_b", reason: "must be > 0".into() })
            }
            _ => Ok(()),
        }
    }

    /// Interfacial area density at volume fraction `alpha`; `fixed` is returned for planar closures.
    pub fn area(&self, alpha: f64, fixed: f64) -> f64 {
        match *self {
            GeometricClosure::Spherical { n_b } => (36.0 * PI * n_b).cbrt() * alpha.powf(2.0 / 3.0),
            GeometricClosure::Planar => fixed,
        }
    }

    /// `da_i / dalpha` along the closure.
    pub fn area_derivative(&self, alpha: f64, a_i: f64) -> f64 {
        match self {
            GeometricClosure::Spherical { .. } => 2.0 * a_i / (3.0 * alpha),
            GeometricClosure::Planar => 0.0,
        }
    }

    /// Fails when a spherical closure disagrees with `state.a_i` by more than `1e-10` relative.
    pub fn check(&self, state: &MixtureState) -> Result<()> {
        if let GeometricClosure::Spherical { .. } = self {
            let a = self.area(state.alpha, state.a_i);
            if (a - state.a_i).abs() > 1e-10 * a.abs() {
                return Err(Error::ClosureInconsistent { state: state.a_i, closure: a });
            }
        }
        Ok(())
    }
}

/// Whether the mass fraction is an unknown (`full`) or held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumMode {
    Full,
    FrozenY(f64),
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    100
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumProblem {
    pub tau: f64,
    pub s: f64,
    pub closure: GeometricClosure,
    pub mode: EquilibriumMode,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub floors: Floors,
}

impl EquilibriumProblem {
    pub fn new(tau: f64, s: f64, closure: GeometricClosure, mode: EquilibriumMode) -> Self {
        Self {
            tau,
            s,
            closure,
            mode,
            tol: default_tol(),
            max_iter: default_max_iter(),
            floors: Floors::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter { name: "tau", reason: "must be > 0".into() });
        }
        if !self.s.is_finite() {
            return Err(Error::InvalidParameter { name: "s", reason: "must be finite".into() });
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter { name: "tol", reason: "must be > 0".into() });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter { name: "max_iter", reason: "must be >= 1".into() });
        }
        if let EquilibriumMode::FrozenY(y) = self.mode {
            if !(y > 0.0 && y < 1.0) {
                return Err(Error::InvalidParameter { name: "frozen_y", reason: "must lie in (0, 1)".into() });
            }
        }
        self.floors.validate()?;
        self.closure.validate()
    }
}

/// Nondimensional equilibrium residuals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// `(T1 - T2) / T_bar`
    pub thermal_12: f64,
    /// `(T1 - T_i) / T_bar`
    pub thermal_1i: f64,
    /// `(mu1 - mu2) / mu_bar`, absent when the mass fraction is frozen.
    pub chemical: Option<f64>,
    /// `(p1 - p2 - gamma_i a_i'(alpha)) / p_bar`
    pub mechanical: f64,
}

impl ResidualReport {
    pub fn components(&self) -> Vec<f64> {
        let mut v = vec![self.thermal_12, self.thermal_1i];
        v.extend(self.chemical);
        v.push(self.mechanical);
        v
    }

    /// Largest absolute component.
    pub fn norm(&self) -> f64 {
        self.components().iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub state: MixtureState,
    pub residual_norm: f64,
    pub iterations: usize,
    pub report: ResidualReport,
}

/// Equilibrium residuals of `state` under `closure`.
pub fn equilibrium_residual(
    state: &MixtureState,
    closure: &GeometricClosure,
    mode: &EquilibriumMode,
    fluids: &Fluids,
) -> Result<ResidualReport> {
    closure.check(state)?;
    unchecked_residual(state, closure, mode, fluids)
}

fn unchecked_residual(
    state: &MixtureState,
    closure: &GeometricClosure,
    mode: &EquilibriumMode,
    fluids: &Fluids,
) -> Result<ResidualReport> {
    let ev = fluids.evaluate(state)?;
    let (ph1, ph2, int) = (ev.phase1, ev.phase2, ev.interface);
    let t_bar = ph1.t.max(ph2.t).max(int.t_i);
    let p_bar = ph1
        .p
        .abs()
        .max(ph2.p.abs())
        .max(fluids.phase1.p_inf)
        .max(fluids.phase2.p_inf)
        .max(1.0);
    let mu_bar = ph1.mu.abs().max(ph2.mu.abs()).max(1.0);
    let slope = closure.area_derivative(state.alpha, state.a_i);
    Ok(ResidualReport {
        thermal_12: (ph1.t - ph2.t) / t_bar,
        thermal_1i: (ph1.t - int.t_i) / t_bar,
        chemical: match mode {
            EquilibriumMode::Full => Some((ph1.mu - ph2.mu) / mu_bar),
            EquilibriumMode::FrozenY(_) => None,
        },
        mechanical: (ph1.p - ph2.p - int.gamma_i * slope) / p_bar,
    })
}

/// Bubble radius `3 alpha / a_i` implied by a spherical interpretation of the state.
pub fn young_laplace_radius(state: &MixtureState) -> f64 {
    3.0 * state.alpha / state.a_i
}

/// Maps the Newton unknowns `(y?, alpha, s1, s_i)` to a full mixture state.
struct Unknowns<'a> {
    problem: &'a EquilibriumProblem,
    fixed_area: f64,
}

impl Unknowns<'_> {
    fn len(&self) -> usize {
        match self.problem.mode {
            EquilibriumMode::Full => 4,
            EquilibriumMode::FrozenY(_) => 3,
        }
    }

    fn pack(&self, state: &MixtureState) -> DVector<f64> {
        let s_i = state.interfacial_entropy();
        match self.problem.mode {
            EquilibriumMode::Full => DVector::from_vec(vec![state.y, state.alpha, state.s1, s_i]),
            EquilibriumMode::FrozenY(_) => DVector::from_vec(vec![state.alpha, state.s1, s_i]),
        }
    }

    fn unpack(&self, x: &DVector<f64>) -> MixtureState {
        let (y, rest) = match self.problem.mode {
            EquilibriumMode::Full => (x[0], x.rows(1, 3)),
            EquilibriumMode::FrozenY(y) => (y, x.rows(0, 3)),
        };
        let (alpha, s1, s_i) = (rest[0], rest[1], rest[2]);
        let rho = 1.0 / self.problem.tau;
        let a_i = self.problem.closure.area(alpha, self.fixed_area);
        let s2 = (self.problem.s - y * s1 - a_i / rho * s_i) / (1.0 - y);
        MixtureState { rho, s: self.problem.s, s1, s2, a_i, y, alpha }
    }

    /// Residual vector, or a reason why the iterate is not admissible.
    fn residual(&self, x: &DVector<f64>, fluids: &Fluids) -> std::result::Result<DVector<f64>, String> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err("non-finite iterate".into());
        }
        let state = self.unpack(x);
        let floors = &self.problem.floors;
        if !state.within(floors) {
            return Err(format!("fraction floors reached at y = {}, alpha = {}", state.y, state.alpha));
        }
        if fluids.interface.tension(state.interfacial_entropy()) < 0.0 {
            return Err("negative surface tension".into());
        }
        let report = unchecked_residual(&state, &self.problem.closure, &self.problem.mode, fluids)
            .map_err(|e| e.to_string())?;
        Ok(DVector::from_vec(report.components()))
    }

    fn steps(&self, x: &DVector<f64>, fluids: &Fluids) -> Vec<f64> {
        let entropy_scale1 = fluids.phase1.c_v;
        let interface_scale = 1e-3 * fluids.interface.t_ref_i / fluids.interface.theta;
        let scales: Vec<f64> = match self.problem.mode {
            EquilibriumMode::Full => vec![1e-6, 1e-6, entropy_scale1, interface_scale],
            EquilibriumMode::FrozenY(_) => vec![1e-6, entropy_scale1, interface_scale],
        };
        x.iter().zip(scales).map(|(v, sc)| JACOBIAN_STEP * v.abs().max(sc)).collect()
    }
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, r| m.max(r.abs()))
}

/// Damped Newton solve with a central finite-difference Jacobian.
pub fn solve_equilibrium(
    problem: &EquilibriumProblem,
    guess: &MixtureState,
    fluids: &Fluids,
) -> Result<EquilibriumSolution> {
    problem.validate()?;
    guess.validate()?;
    if fluids.interface.theta == 0.0 {
        return Err(Error::DegenerateInterfaceEos);
    }
    let unknowns = Unknowns { problem, fixed_area: guess.a_i };
    let mut start = *guess;
    start.rho = 1.0 / problem.tau;
    if let EquilibriumMode::FrozenY(y) = problem.mode {
        start.y = y;
    }
    let mut x = unknowns.pack(&start);
    let mut f = unknowns.residual(&x, fluids).map_err(Error::InfeasibleRegion)?;
    let n = unknowns.len();

    let mut iterations = 0;
    while max_abs(&f) > problem.tol {
        if iterations == problem.max_iter {
            return Err(Error::MaxIterExceeded { iterations, residual: max_abs(&f) });
        }
        let steps = unknowns.steps(&x, fluids);
        let mut jac = DMatrix::zeros(n, n);
        for (j, h) in steps.iter().enumerate() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let fp = unknowns.residual(&xp, fluids).map_err(Error::InfeasibleRegion)?;
            let fm = unknowns.residual(&xm, fluids).map_err(Error::InfeasibleRegion)?;
            jac.set_column(j, &((fp - fm) / (2.0 * h)));
        }
        let dx = jac
            .lu()
            .solve(&(-&f))
            .filter(|d| d.iter().all(|v| v.is_finite()))
            .ok_or(Error::SingularJacobian { iteration: iterations })?;

        let norm = max_abs(&f);
        let mut lambda = 1.0;
        let mut accepted = None;
        let mut last_failure = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = &x + &dx * lambda;
            match unknowns.residual(&trial, fluids) {
                Ok(ft) if max_abs(&ft) < norm => {
                    accepted = Some((trial, ft));
                    break;
                }
                Ok(ft) => last_failure = Some(Ok((trial, ft))),
                Err(reason) => last_failure = Some(Err(reason)),
            }
            lambda *= 0.5;
        }
        let (xn, fnew) = match (accepted, last_failure) {
            (Some(step), _) => step,
            // no decrease: take the smallest admissible step and let the iteration cap decide
            (None, Some(Ok(step))) => step,
            (None, Some(Err(reason))) => return Err(Error::InfeasibleRegion(reason)),
            (None, None) => unreachable!("at least one trial step is evaluated"),
        };
        x = xn;
        f = fnew;
        iterations += 1;
    }

    let state = unknowns.unpack(&x);
    let report = unchecked_residual(&state, &problem.closure, &problem.mode, fluids)?;
    Ok(EquilibriumSolution { state, residual_norm: report.norm(), iterations, report })
}

/// Central difference of the mixture grand potential along an admissible variation
/// of `alpha`: phasic volumes, phasic entropies and `s_i` stay fixed while
/// `a_i` follows the closure. Vanishes at mechanical equilibrium.
pub fn grand_potential_slope(
    state: &MixtureState,
    closure: &GeometricClosure,
    fluids: &Fluids,
    delta: f64,
) -> Result<f64> {
    let view = state.phasic_view()?;
    let omega_at = |alpha: f64| -> Result<f64> {
        let a_i = closure.area(alpha, state.a_i);
        let rho = alpha / view.tau1 + (1.0 - alpha) / view.tau2;
        let y = alpha / (view.tau1 * rho);
        let varied = MixtureState::from_phasic(rho, y, alpha, a_i, state.s1, state.s2, view.s_i);
        Ok(fluids.grand_potential_terms(&varied)?.weighted_sum(&varied))
    };
    Ok((omega_at(state.alpha + delta)? - omega_at(state.alpha - delta)?) / (2.0 * delta))
}
