//! Closed-form equations of state for the two bulk phases and the massless interface.
//!
//! Bulk phases follow a stiffened gas written in entropic variables,
//!
//! ```text
//! T(tau, s) = T_ref * (tau_ref / tau)^(gamma - 1) * exp((s - s_ref) / c_v)
//! e(tau, s) = c_v * T + p_inf * tau + q
//! ```
//!
//! so that `p = -de/dtau = (gamma - 1) c_v T / tau - p_inf` and `T = de/ds`.
//!
//! The interface carries energy per unit area as a quadratic function of its
//! entropy per unit area,
//!
//! ```text
//! e_i(s_i) = gamma0 + T_ref_i * s_i + theta / 2 * s_i^2
//! ```
//!
//! giving `T_i = e_i'(s_i)` and a surface tension `gamma_i = e_i - T_i s_i`
//! that satisfies `d gamma_i / d T_i = -s_i` identically. A surface tension that
//! is linear in temperature would make `s_i` constant and `e_i(s_i)` degenerate,
//! which is why it is not offered.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative step for the central-difference consistency checks.
pub const DEFAULT_FD_STEP: f64 = 1e-6;

/// Stiffened-gas parameters of one bulk phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseEos {
    pub gamma: f64,
    pub c_v: f64,
    pub p_inf: f64,
    pub q: f64,
    pub tau_ref: f64,
    #[serde(rename = "T_ref")]
    pub t_ref: f64,
    pub s_ref: f64,
}

/// Potentials of a bulk phase at a given `(tau, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePotentials {
    pub e: f64,
    pub p: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub mu: f64,
    pub c2: f64,
}

impl PhaseEos {
    pub fn new(
        gamma: f64,
        c_v: f64,
        p_inf: f64,
        q: f64,
        tau_ref: f64,
        t_ref: f64,
        s_ref: f64,
    ) -> Result<Self> {
        let eos = Self { gamma, c_v, p_inf, q, tau_ref, t_ref, s_ref };
        eos.validate()?;
        Ok(eos)
    }

    /// Calorically perfect gas with `p_inf = q = 0`.
    pub fn ideal_gas(gamma: f64, c_v: f64, tau_ref: f64, t_ref: f64) -> Result<Self> {
        Self::new(gamma, c_v, 0.0, 0.0, tau_ref, t_ref, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, name: &'static str, reason: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, reason: reason.to_string() })
            }
        };
        check(self.gamma.is_finite() && self.gamma > 1.0, "gamma", "must be > 1")?;
        check(self.c_v.is_finite() && self.c_v > 0.0, "c_v", "must be > 0")?;
        check(self.p_inf.is_finite() && self.p_inf >= 0.0, "p_inf", "must be >= 0")?;
        check(self.q.is_finite(), "q", "must be finite")?;
        check(self.tau_ref.is_finite() && self.tau_ref > 0.0, "tau_ref", "must be > 0")?;
        check(self.t_ref.is_finite() && self.t_ref > 0.0, "T_ref", "must be > 0")?;
        check(self.s_ref.is_finite(), "s_ref", "must be finite")
    }

    pub fn temperature(&self, tau: f64, s: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(Error::NonPositiveVolume(tau));
        }
        let t = self.t_ref
            * (self.tau_ref / tau).powf(self.gamma - 1.0)
            * ((s - self.s_ref) / self.c_v).exp();
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::NonPositiveTemperature(t));
        }
        Ok(t)
    }

    /// Specific internal energy `e(tau, s)`.
    pub fn energy(&self, tau: f64, s: f64) -> Result<f64> {
        let t = self.temperature(tau, s)?;
        Ok(self.c_v * t + self.p_inf * tau + self.q)
    }

    /// Energy, pressure, temperature, chemical potential and squared sound speed.
    pub fn potentials(&self, tau: f64, s: f64) -> Result<PhasePotentials> {
        let t = self.temperature(tau, s)?;
        let e = self.c_v * t + self.p_inf * tau + self.q;
        let p = (self.gamma - 1.0) * self.c_v * t / tau - self.p_inf;
        let mu = e - t * s + p * tau;
        let c2 = self.gamma * (p + self.p_inf) * tau;
        Ok(PhasePotentials { e, p, t, mu, c2 })
    }

    /// `dp/ds` at fixed specific volume.
    pub fn dp_ds(&self, tau: f64, s: f64) -> Result<f64> {
        Ok((self.gamma - 1.0) * self.temperature(tau, s)? / tau)
    }

    /// Specific volume at pressure `p` and temperature `t`.
    pub fn volume_at(&self, p: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveTemperature(t));
        }
        let tau = (self.gamma - 1.0) * self.c_v * t / (p + self.p_inf);
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::NonPositiveVolume(tau));
        }
        Ok(tau)
    }

    /// Specific entropy that yields temperature `t` at specific volume `tau`.
    pub fn entropy_at(&self, tau: f64, t: f64) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(Error::NonPositiveVolume(tau));
        }
        if !(t > 0.0) {
            return Err(Error::NonPositiveTemperature(t));
        }
        Ok(self.s_ref + self.c_v * ((t / self.t_ref) * (tau / self.tau_ref).powf(self.gamma - 1.0)).ln())
    }

    /// Central-difference check of `de = T ds - p dtau`.
    ///
    /// Returns `(|p + de/dtau| / (|p| + 1), |T - de/ds| / (|T| + 1))` with steps
    /// `h * tau` and `h * (|s| + 1)`.
    pub fn gibbs_residuals(&self, tau: f64, s: f64, h: f64) -> Result<(f64, f64)> {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter { name: "h", reason: "must be > 0".into() });
        }
        let pot = self.potentials(tau, s)?;
        let dtau = h * tau;
        let ds = h * (s.abs() + 1.0);
        let de_dtau = (self.energy(tau + dtau, s)? - self.energy(tau - dtau, s)?) / (2.0 * dtau);
        let de_ds = (self.energy(tau, s + ds)? - self.energy(tau, s - ds)?) / (2.0 * ds);
        Ok((
            (pot.p + de_dtau).abs() / (pot.p.abs() + 1.0),
            (pot.t - de_ds).abs() / (pot.t.abs() + 1.0),
        ))
    }
}

/// Quadratic interfacial equation of state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfaceEos {
    pub gamma0: f64,
    #[serde(rename = "T_ref_i")]
    pub t_ref_i: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfacePotentials {
    pub e_i: f64,
    #[serde(rename = "T_i")]
    pub t_i: f64,
    pub gamma_i: f64,
}

impl InterfacePotentials {
    /// Surface tension below zero. Tolerated by the dynamics, infeasible at equilibrium.
    pub fn negative_tension(&self) -> bool {
        self.gamma_i < 0.0
    }
}

impl InterfaceEos {
    pub fn new(gamma0: f64, t_ref_i: f64, theta: f64) -> Result<Self> {
        let ieos = Self { gamma0, t_ref_i, theta };
        ieos.validate()?;
        Ok(ieos)
    }

    /// `theta = 0` is accepted here; operations that need `T_i -> s_i` reject it.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma0.is_finite() && self.gamma0 >= 0.0) {
            return Err(Error::InvalidParameter { name: "gamma0", reason: "must be >= 0".into() });
        }
        if !(self.t_ref_i.is_finite() && self.t_ref_i > 0.0) {
            return Err(Error::InvalidParameter { name: "T_ref_i", reason: "must be > 0".into() });
        }
        if !(self.theta.is_finite() && self.theta >= 0.0) {
            return Err(Error::InvalidParameter { name: "theta", reason: "must be >= 0".into() });
        }
        Ok(())
    }

    pub fn energy(&self, s_i: f64) -> f64 {
        self.gamma0 + self.t_ref_i * s_i + 0.5 * self.theta * s_i * s_i
    }

    pub fn temperature(&self, s_i: f64) -> f64 {
        self.t_ref_i + self.theta * s_i
    }

    pub fn tension(&self, s_i: f64) -> f64 {
        self.gamma0 - 0.5 * self.theta * s_i * s_i
    }

    pub fn potentials(&self, s_i: f64) -> Result<InterfacePotentials> {
        let t_i = self.temperature(s_i);
        if !(t_i > 0.0) {
            return Err(Error::NonPositiveTemperature(t_i));
        }
        let e_i = self.energy(s_i);
        Ok(InterfacePotentials { e_i, t_i, gamma_i: e_i - t_i * s_i })
    }

    /// Inverse of `T_i(s_i)`.
    pub fn entropy_at(&self, t_i: f64) -> Result<f64> {
        if self.theta == 0.0 {
            return Err(Error::DegenerateInterfaceEos);
        }
        Ok((t_i - self.t_ref_i) / self.theta)
    }

    /// Surface tension as a function of interfacial temperature.
    pub fn tension_at_temperature(&self, t_i: f64) -> Result<f64> {
        Ok(self.tension(self.entropy_at(t_i)?))
    }

    /// Central-difference check of the Gibbs-Duhem relation and of `e_i'(s_i) = T_i`.
    ///
    /// Returns `(|dgamma_i/dT_i + s_i| / (|s_i| + 1), |e_i'(s_i) - T_i| / T_i)`,
    /// the first derivative taken through `T_i -> s_i -> gamma_i` with step
    /// `h * (T_i + 1)`, the second with step `h * (|s_i| + 1)`.
    pub fn gibbs_duhem_residuals(&self, s_i: f64, h: f64) -> Result<(f64, f64)> {
        if self.theta == 0.0 {
            return Err(Error::DegenerateInterfaceEos);
        }
        if !(h > 0.0) {
            return Err(Error::InvalidParameter { name: "h", reason: "must be > 0".into() });
        }
        let pot = self.potentials(s_i)?;
        let dt = h * (pot.t_i.abs() + 1.0);
        let dgamma_dt = (self.tension_at_temperature(pot.t_i + dt)?
            - self.tension_at_temperature(pot.t_i - dt)?)
            / (2.0 * dt);
        let ds = h * (s_i.abs() + 1.0);
        let de_ds = (self.energy(s_i + ds) - self.energy(s_i - ds)) / (2.0 * ds);
        Ok((
            (dgamma_dt + s_i).abs() / (s_i.abs() + 1.0),
            (de_ds - pot.t_i).abs() / pot.t_i,
        ))
    }
}

/// Worst finite-difference residuals over a sampled region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GibbsSweep {
    pub points: usize,
    pub max_pressure_residual: f64,
    pub max_temperature_residual: f64,
}

impl GibbsSweep {
    pub fn max(&self) -> f64 {
        self.max_pressure_residual.max(self.max_temperature_residual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceSweep {
    pub points: usize,
    pub max_gibbs_duhem_residual: f64,
    pub max_energy_slope_residual: f64,
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |k| lo + step * k as f64)
}

impl PhaseEos {
    /// [`Self::gibbs_residuals`] over an `n x n` grid: `tau` log-spaced in
    /// `[tau_ref / 10, 10 tau_ref]`, `s` uniform in `[s_ref - c_v, s_ref + c_v]`.
    pub fn gibbs_sweep(&self, n: usize, h: f64) -> Result<GibbsSweep> {
        let mut sweep = GibbsSweep { points: 0, max_pressure_residual: 0.0, max_temperature_residual: 0.0 };
        for lt in linspace(-1.0, 1.0, n) {
            let tau = self.tau_ref * 10f64.powf(lt);
            for s in linspace(self.s_ref - self.c_v, self.s_ref + self.c_v, n) {
                let (rp, rt) = self.gibbs_residuals(tau, s, h)?;
                sweep.points += 1;
                sweep.max_pressure_residual = sweep.max_pressure_residual.max(rp);
                sweep.max_temperature_residual = sweep.max_temperature_residual.max(rt);
            }
        }
        Ok(sweep)
    }
}

impl InterfaceEos {
    /// [`Self::gibbs_duhem_residuals`] at `n` points uniform in `[s_lo, s_hi]`.
    pub fn gibbs_duhem_sweep(&self, s_lo: f64, s_hi: f64, n: usize, h: f64) -> Result<InterfaceSweep> {
        let mut sweep = InterfaceSweep { points: 0, max_gibbs_duhem_residual: 0.0, max_energy_slope_residual: 0.0 };
        for s_i in linspace(s_lo, s_hi, n) {
            let (gd, es) = self.gibbs_duhem_residuals(s_i, h)?;
            sweep.points += 1;
            sweep.max_gibbs_duhem_residual = sweep.max_gibbs_duhem_residual.max(gd);
            sweep.max_energy_slope_residual = sweep.max_energy_slope_residual.max(es);
        }
        Ok(sweep)
    }
}
