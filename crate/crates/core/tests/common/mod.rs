#![allow(dead_code)]

use std::f64::consts::PI;

use capillar::equilibrium::GeometricClosure;
use capillar::mixture::{Fluids, MixtureState};
use capillar::model::{ModelParams, PrimCell};
use capillar::thermo::{InterfaceEos, PhaseEos};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

pub fn air() -> PhaseEos {
    PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0).unwrap()
}

pub fn water() -> PhaseEos {
    PhaseEos::new(4.4, 1816.0, 6.0e8, -1.167e6, 1.0e-3, 300.0, 0.0).unwrap()
}

pub fn helium() -> PhaseEos {
    PhaseEos::new(5.0 / 3.0, 3116.0, 0.0, 0.0, 6.0, 300.0, 0.0).unwrap()
}

pub fn interface(gamma0: f64) -> InterfaceEos {
    InterfaceEos::new(gamma0, 300.0, 1.0).unwrap()
}

pub fn air_water() -> Fluids {
    Fluids::new(air(), water(), interface(0.072)).unwrap()
}

/// Two copies of the same gas and a tension-free interface.
pub fn single_gas() -> Fluids {
    Fluids::new(air(), air(), interface(0.0)).unwrap()
}

/// Both phases at `(p, t)` with pressure offset `dp` on phase 1.
pub fn phasic_state(fl: &Fluids, p2: f64, dp: f64, t1: f64, t2: f64, alpha: f64, a_i: f64, s_i: f64) -> MixtureState {
    let tau1 = fl.phase1.volume_at(p2 + dp, t1).unwrap();
    let tau2 = fl.phase2.volume_at(p2, t2).unwrap();
    let rho = alpha / tau1 + (1.0 - alpha) / tau2;
    let y = alpha / (tau1 * rho);
    let s1 = fl.phase1.entropy_at(tau1, t1).unwrap();
    let s2 = fl.phase2.entropy_at(tau2, t2).unwrap();
    MixtureState::from_phasic(rho, y, alpha, a_i, s1, s2, s_i)
}

/// Exact mechanical and thermal equilibrium of spherical bubbles of radius `r` at temperature `t`.
pub fn bubble_equilibrium(fl: &Fluids, t: f64, p2: f64, r: f64, alpha: f64) -> (MixtureState, GeometricClosure) {
    let s_i = fl.interface.entropy_at(t).unwrap();
    let gamma = fl.interface.tension(s_i);
    let n_b = alpha / (4.0 / 3.0 * PI * r.powi(3));
    let st = phasic_state(fl, p2, 2.0 * gamma / r, t, t, alpha, 3.0 * alpha / r, s_i);
    (st, GeometricClosure::Spherical { n_b })
}

/// Exact planar equilibrium: equal pressures and temperatures.
pub fn planar_equilibrium(fl: &Fluids, t: f64, p: f64, alpha: f64, a_i: f64) -> (MixtureState, GeometricClosure) {
    let s_i = fl.interface.entropy_at(t).unwrap();
    (phasic_state(fl, p, 0.0, t, t, alpha, a_i, s_i), GeometricClosure::Planar)
}

/// Deterministic sampler for ad-hoc random draws.
pub struct Sampler {
    runner: TestRunner,
}

impl Sampler {
    pub fn new() -> Self {
        Self { runner: TestRunner::deterministic() }
    }

    pub fn draw<S: Strategy>(&mut self, s: S) -> S::Value {
        s.new_tree(&mut self.runner).unwrap().current()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.draw(lo..hi)
    }
}

/// A random air/water cell with positive tension, nonzero small-scale motion and
/// independent phase temperatures.
pub fn random_cell(rng: &mut Sampler) -> (PrimCell, ModelParams) {
    let fl = air_water();
    let alpha = rng.uniform(0.02, 0.98);
    let p = 10f64.powf(rng.uniform(4.5, 7.0));
    let dp = p * rng.uniform(-0.2, 0.2);
    let t1 = rng.uniform(270.0, 400.0);
    let t2 = rng.uniform(270.0, 400.0);
    let a_i = 10f64.powf(rng.uniform(-1.0, 4.0));
    let s_i = rng.uniform(-0.3, 0.3);
    let st = phasic_state(&fl, p, dp, t1, t2, alpha, a_i, s_i);
    let cell = PrimCell::from_mixture(&st, rng.uniform(-200.0, 200.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    let params = ModelParams::new(10f64.powf(rng.uniform(-2.0, 2.0)), 10f64.powf(rng.uniform(-2.0, 2.0)), fl).unwrap();
    (cell, params)
}

/// Ideal-gas entropy at density `rho` and pressure `p` for [`air`].
pub fn air_entropy(rho: f64, p: f64) -> f64 {
    let eos = air();
    let tau = 1.0 / rho;
    let t = p * tau / ((eos.gamma - 1.0) * eos.c_v);
    eos.entropy_at(tau, t).unwrap()
}
