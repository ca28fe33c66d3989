//! Intensive fluid-interface mixture state and the potentials derived from its energy.
//!
//! The state is `(rho, s, s1, s2, a_i, y, alpha)`. Phasic specific volumes follow
//! from `y_k tau_k = alpha_k tau` and the interfacial entropy per area from the
//! entropy balance `s = y s1 + (1 - y) s2 + (a_i / rho) s_i`. The mixture energy is
//!
//! ```text
//! e = y e1(tau1, s1) + (1 - y) e2(tau2, s2) + (a_i / rho) e_i(s_i)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermo::{InterfaceEos, InterfacePotentials, PhaseEos, PhasePotentials};

/// Floors applied to fractions and interfacial area before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Floors {
    pub eps_frac: f64,
    pub a_min: f64,
}

impl Default for Floors {
    fn default() -> Self {
        Self { eps_frac: 1e-9, a_min: 1e-12 }
    }
}

impl Floors {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_frac > 0.0 && self.eps_frac < 0.5) {
            return Err(Error::InvalidParameter { name: "eps_frac", reason: "must be in (0, 0.5)".into() });
        }
        if !(self.a_min > 0.0 && self.a_min.is_finite()) {
            return Err(Error::InvalidParameter { name: "a_min", reason: "must be > 0".into() });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureState {
    pub rho: f64,
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    pub a_i: f64,
    pub y: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasicView {
    pub tau1: f64,
    pub tau2: f64,
    pub s_i: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyFractions {
    pub z1: f64,
    pub z2: f64,
    pub z_i: f64,
}

impl MixtureState {
    /// Builds the state whose interfacial entropy per area is `s_i`.
    pub fn from_phasic(rho: f64, y: f64, alpha: f64, a_i: f64, s1: f64, s2: f64, s_i: f64) -> Self {
        let s = y * s1 + (1.0 - y) * s2 + a_i / rho * s_i;
        Self { rho, s, s1, s2, a_i, y, alpha }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.rho, self.s, self.s1, self.s2, self.a_i, self.y, self.alpha];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidState(format!("non-finite component in {self:?}")));
        }
        if !(self.rho > 0.0) {
            return Err(Error::InvalidState(format!("rho = {} must be > 0", self.rho)));
        }
        if !(self.y > 0.0 && self.y < 1.0) {
            return Err(Error::InvalidState(format!("y = {} must lie in (0, 1)", self.y)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidState(format!("alpha = {} must lie in (0, 1)", self.alpha)));
        }
        if !(self.a_i > 0.0) {
            return Err(Error::InvalidState(format!("a_i = {} must be > 0", self.a_i)));
        }
        Ok(())
    }

    /// Whether every fraction and the interfacial area already sit inside the floors.
    pub fn within(&self, floors: &Floors) -> bool {
        let lo = floors.eps_frac;
        let hi = 1.0 - floors.eps_frac;
        (lo..=hi).contains(&self.y) && (lo..=hi).contains(&self.alpha) && self.a_i >= floors.a_min
    }

    /// Clamps `y`, `alpha` and `a_i` onto the floors. Returns the number of clamped components.
    pub fn clamp(&mut self, floors: &Floors) -> usize {
        let lo = floors.eps_frac;
        let hi = 1.0 - floors.eps_frac;
        let mut count = 0;
        for v in [&mut self.y, &mut self.alpha] {
            let c = v.clamp(lo, hi);
            if c != *v {
                *v = c;
                count += 1;
            }
        }
        if !(self.a_i >= floors.a_min) {
            self.a_i = floors.a_min;
            count += 1;
        }
        count
    }

    pub fn interfacial_entropy(&self) -> f64 {
        (self.s - self.y * self.s1 - (1.0 - self.y) * self.s2) * self.rho / self.a_i
    }

    pub fn phasic_view(&self) -> Result<PhasicView> {
        self.validate()?;
        let s_i = self.interfacial_entropy();
        if !s_i.is_finite() {
            return Err(Error::InvalidState(format!("interfacial entropy is not finite for {self:?}")));
        }
        Ok(PhasicView {
            tau1: self.alpha / (self.y * self.rho),
            tau2: (1.0 - self.alpha) / ((1.0 - self.y) * self.rho),
            s_i,
        })
    }

    pub fn entropy_fractions(&self) -> Result<EntropyFractions> {
        let view = self.phasic_view()?;
        if self.s == 0.0 {
            return Err(Error::ZeroMixtureEntropy);
        }
        Ok(EntropyFractions {
            z1: self.y * self.s1 / self.s,
            z2: (1.0 - self.y) * self.s2 / self.s,
            z_i: self.a_i * view.s_i / (self.rho * self.s),
        })
    }

    /// Exchanges the roles of the two phases.
    pub fn swapped(&self) -> Self {
        Self {
            rho: self.rho,
            s: self.s,
            s1: self.s2,
            s2: self.s1,
            a_i: self.a_i,
            y: 1.0 - self.y,
            alpha: 1.0 - self.alpha,
        }
    }
}

/// Mixture temperature, pressure, chemical potential and grand potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixturePotentials {
    pub e: f64,
    /// `None` when the mixture entropy vanishes.
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub p: f64,
    pub mu: f64,
    pub omega: f64,
}

impl MixturePotentials {
    pub fn temperature(&self) -> Result<f64> {
        self.t.ok_or(Error::ZeroMixtureEntropy)
    }
}

/// Everything computed while evaluating a mixture state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureEvaluation {
    pub view: PhasicView,
    pub phase1: PhasePotentials,
    pub phase2: PhasePotentials,
    pub interface: InterfacePotentials,
    pub mixture: MixturePotentials,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrandPotentialTerms {
    pub omega1: f64,
    pub omega2: f64,
    pub omega_i: f64,
}

impl GrandPotentialTerms {
    /// `alpha omega1 + (1 - alpha) omega2 + a_i omega_i`.
    pub fn weighted_sum(&self, state: &MixtureState) -> f64 {
        state.alpha * self.omega1 + (1.0 - state.alpha) * self.omega2 + state.a_i * self.omega_i
    }
}

/// Partial derivatives of the volumic energy `rho e` with respect to each state variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGradient {
    pub d_rho: f64,
    pub d_s: f64,
    pub d_s1: f64,
    pub d_s2: f64,
    pub d_ai: f64,
    pub d_y: f64,
    pub d_alpha: f64,
}

/// The two bulk equations of state and the interfacial one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fluids {
    pub phase1: PhaseEos,
    pub phase2: PhaseEos,
    pub interface: InterfaceEos,
}

impl Fluids {
    pub fn new(phase1: PhaseEos, phase2: PhaseEos, interface: InterfaceEos) -> Result<Self> {
        phase1.validate()?;
        phase2.validate()?;
        interface.validate()?;
        Ok(Self { phase1, phase2, interface })
    }

    pub fn swapped(&self) -> Self {
        Self { phase1: self.phase2, phase2: self.phase1, interface: self.interface }
    }

    pub fn evaluate(&self, state: &MixtureState) -> Result<MixtureEvaluation> {
        let view = state.phasic_view()?;
        let ph1 = self.phase1.potentials(view.tau1, state.s1)?;
        let ph2 = self.phase2.potentials(view.tau2, state.s2)?;
        let int = self.interface.potentials(view.s_i)?;
        let (y, alpha, a_i, rho) = (state.y, state.alpha, state.a_i, state.rho);

        let e = y * ph1.e + (1.0 - y) * ph2.e + a_i / rho * int.e_i;
        let t = (state.s != 0.0).then(|| {
            (y * state.s1 * ph1.t + (1.0 - y) * state.s2 * ph2.t + a_i / rho * view.s_i * int.t_i)
                / state.s
        });
        let p = alpha * ph1.p + (1.0 - alpha) * ph2.p - a_i * int.gamma_i;
        let mu = y * ph1.mu + (1.0 - y) * ph2.mu;
        let omega = -alpha * ph1.p - (1.0 - alpha) * ph2.p + a_i * int.gamma_i;

        Ok(MixtureEvaluation {
            view,
            phase1: ph1,
            phase2: ph2,
            interface: int,
            mixture: MixturePotentials { e, t, p, mu, omega },
        })
    }

    pub fn potentials(&self, state: &MixtureState) -> Result<MixturePotentials> {
        Ok(self.evaluate(state)?.mixture)
    }

    /// Volumic energy `rho e`.
    pub fn energy_density(&self, state: &MixtureState) -> Result<f64> {
        Ok(state.rho * self.potentials(state)?.e)
    }

    /// Phasic and interfacial grand potentials, each evaluated through its Legendre transform.
    pub fn grand_potential_terms(&self, state: &MixtureState) -> Result<GrandPotentialTerms> {
        let ev = self.evaluate(state)?;
        let (ph1, ph2, int) = (ev.phase1, ev.phase2, ev.interface);
        Ok(GrandPotentialTerms {
            omega1: (ph1.e - ph1.t * state.s1 - ph1.mu) / ev.view.tau1,
            omega2: (ph2.e - ph2.t * state.s2 - ph2.mu) / ev.view.tau2,
            omega_i: int.e_i - int.t_i * ev.view.s_i,
        })
    }

    pub fn energy_gradient(&self, state: &MixtureState) -> Result<EnergyGradient> {
        let ev = self.evaluate(state)?;
        let (ph1, ph2, int) = (ev.phase1, ev.phase2, ev.interface);
        let (rho, y) = (state.rho, state.y);
        let enthalpy_like1 = ph1.e + ph1.p * ev.view.tau1 - int.t_i * state.s1;
        let enthalpy_like2 = ph2.e + ph2.p * ev.view.tau2 - int.t_i * state.s2;
        Ok(EnergyGradient {
            d_rho: ev.mixture.e + ev.mixture.p / rho,
            d_s: rho * int.t_i,
            d_s1: rho * y * (ph1.t - int.t_i),
            d_s2: rho * (1.0 - y) * (ph2.t - int.t_i),
            d_ai: int.gamma_i,
            d_y: rho * (enthalpy_like1 - enthalpy_like2),
            d_alpha: -(ph1.p - ph2.p),
        })
    }

    /// `(d(rho e)/d alpha, d(rho e)/d a_i) = (-(p1 - p2), +gamma_i)` at fixed `rho, s, s1, s2, y`.
    pub fn d_energy_d_alpha_ai(&self, state: &MixtureState) -> Result<(f64, f64)> {
        let g = self.energy_gradient(state)?;
        Ok((g.d_alpha, g.d_ai))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn air() -> PhaseEos {
        PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0).unwrap()
    }

    pub(crate) fn water() -> PhaseEos {
        PhaseEos::new(4.4, 1816.0, 6.0e8, -1.167e6, 1.0e-3, 300.0, 0.0).unwrap()
    }

    pub(crate) fn fluids() -> Fluids {
        Fluids::new(air(), water(), InterfaceEos::new(0.072, 300.0, 1.0).unwrap()).unwrap()
    }

    fn bubbly() -> MixtureState {
        MixtureState::from_phasic(500.0, 6e-4, 0.5, 300.0, 80.0, 10.0, 0.02)
    }

    #[test]
    fn symmetric_split_has_equal_volumes() {
        let st = MixtureState { rho: 1.0, s: 1.0, s1: 1.0, s2: 1.0, a_i: 1.0, y: 0.5, alpha: 0.5 };
        let v = st.phasic_view().unwrap();
        assert_eq!(v.tau1, 1.0);
        assert_eq!(v.tau2, 1.0);
    }

    #[test]
    fn phasic_volumes_by_hand() {
        let st = MixtureState { rho: 2.0, s: 1.0, s1: 1.0, s2: 1.0, a_i: 1.0, y: 0.25, alpha: 0.5 };
        let v = st.phasic_view().unwrap();
        assert!((v.tau1 - 1.0).abs() < 1e-15);
        assert!((v.tau2 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_interfacial_entropy_when_bulk_carries_all() {
        let st = MixtureState::from_phasic(3.0, 0.3, 0.4, 2.0, 5.0, 7.0, 0.0);
        assert!(st.phasic_view().unwrap().s_i.abs() < 1e-14);
    }

    #[test]
    fn entropy_fractions_sum_to_one() {
        let st = bubbly();
        let z = st.entropy_fractions().unwrap();
        assert!((z.z1 + z.z2 + z.z_i - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_entropy_has_no_temperature() {
        let st = MixtureState::from_phasic(500.0, 0.1, 0.5, 10.0, 1.0, -1.0 / 9.0, 0.0);
        let st = MixtureState { s: 0.0, ..st };
        assert_eq!(st.entropy_fractions(), Err(Error::ZeroMixtureEntropy));
        let pot = fluids().potentials(&st).unwrap();
        assert_eq!(pot.t, None);
        assert_eq!(pot.temperature(), Err(Error::ZeroMixtureEntropy));
        assert!(pot.p.is_finite() && pot.e.is_finite());
    }

    #[test]
    fn tension_free_pressure_is_volume_weighted() {
        let fl = Fluids { interface: InterfaceEos::new(0.0, 300.0, 1.0).unwrap(), ..fluids() };
        let st = MixtureState::from_phasic(500.0, 6e-4, 0.5, 300.0, 80.0, 10.0, 0.0);
        let ev = fl.evaluate(&st).unwrap();
        let expect = st.alpha * ev.phase1.p + (1.0 - st.alpha) * ev.phase2.p;
        assert!((ev.mixture.p - expect).abs() <= 1e-12 * expect.abs());
    }

    #[test]
    fn equal_temperatures_give_that_temperature() {
        let fl = fluids();
        let t0 = 300.0;
        let rho = 500.0;
        let (y, alpha) = (6e-4, 0.5);
        let tau1 = alpha / (y * rho);
        let tau2 = (1.0 - alpha) / ((1.0 - y) * rho);
        let s1 = fl.phase1.entropy_at(tau1, t0).unwrap();
        let s2 = fl.phase2.entropy_at(tau2, t0).unwrap();
        let s_i = fl.interface.entropy_at(t0).unwrap();
        let exact = MixtureState::from_phasic(rho, y, alpha, 300.0, s1, s2, s_i);
        let t = fl.potentials(&exact).unwrap().t.unwrap();
        assert!((t - t0).abs() < 1e-9 * t0, "{t}");
    }

    #[test]
    fn grand_potential_terms_match_pressures() {
        let fl = fluids();
        let st = bubbly();
        let ev = fl.evaluate(&st).unwrap();
        let g = fl.grand_potential_terms(&st).unwrap();
        assert!((g.omega1 + ev.phase1.p).abs() <= 1e-9 * ev.phase1.p.abs());
        assert!((g.omega2 + ev.phase2.p).abs() <= 1e-9 * ev.phase2.p.abs());
        assert_eq!(g.omega_i, ev.interface.gamma_i);
        let sum = g.weighted_sum(&st);
        assert!((sum - ev.mixture.omega).abs() <= 1e-9 * ev.mixture.p.abs());
    }

    #[test]
    fn mechanical_symmetry_zeroes_alpha_derivative() {
        let fl = Fluids { phase2: air(), ..fluids() };
        let st = MixtureState::from_phasic(2.0, 0.5, 0.5, 1.0, 100.0, 100.0, 0.1);
        let (da, _) = fl.d_energy_d_alpha_ai(&st).unwrap();
        assert_eq!(da, 0.0);
    }

    fn central<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn alpha_and_area_derivatives_match_finite_differences() {
        let fl = fluids();
        let st = bubbly();
        let (da, dai) = fl.d_energy_d_alpha_ai(&st).unwrap();
        let ev = fl.evaluate(&st).unwrap();
        let fd_a = central(|a| fl.energy_density(&MixtureState { alpha: a, ..st }).unwrap(), st.alpha, 1e-6);
        // a_i enters both the prefactor and s_i at fixed s
        let fd_ai = central(|a| fl.energy_density(&MixtureState { a_i: a, ..st }).unwrap(), st.a_i, 1.0);
        assert!((fd_a - da).abs() <= 1e-6 * da.abs(), "{fd_a} vs {da}");
        assert!((fd_ai - dai).abs() <= 1e-6 * dai.abs(), "{fd_ai} vs {dai}");
        assert_eq!(dai, ev.interface.gamma_i);
    }

    #[test]
    fn relabeling_leaves_temperature_and_pressure_unchanged() {
        let fl = fluids();
        let st = bubbly();
        let a = fl.potentials(&st).unwrap();
        let b = fl.swapped().potentials(&st.swapped()).unwrap();
        assert!((a.t.unwrap() - b.t.unwrap()).abs() < 1e-9 * a.t.unwrap());
        assert!((a.p - b.p).abs() < 1e-9 * a.p.abs());
        assert!((a.e - b.e).abs() < 1e-9 * a.e.abs().max(1.0));
    }

    #[test]
    fn clamp_counts_each_component() {
        let mut st = MixtureState { rho: 1.0, s: 0.0, s1: 0.0, s2: 0.0, a_i: 0.0, y: 1.0, alpha: -0.1 };
        let floors = Floors::default();
        assert_eq!(st.clamp(&floors), 3);
        assert!(st.within(&floors));
        assert_eq!(st.clamp(&floors), 0);
    }

    #[test]
    fn invalid_states_are_rejected() {
        let st = bubbly();
        assert!(MixtureState { rho: 0.0, ..st }.validate().is_err());
        assert!(MixtureState { y: 1.0, ..st }.validate().is_err());
        assert!(MixtureState { alpha: 0.0, ..st }.validate().is_err());
        assert!(MixtureState { a_i: 0.0, ..st }.validate().is_err());
        assert!(MixtureState { s: f64::NAN, ..st }.validate().is_err());
    }
}
