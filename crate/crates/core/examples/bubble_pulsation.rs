//! Volume-fraction oscillations driven by a pressure mismatch, with and without damping.

use capillar::mixture::{Fluids, MixtureState};
use capillar::model::{CellEvaluation, ModelParams, PrimCell};
use capillar::solver1d::LinearOscillator;
use capillar::thermo::{InterfaceEos, PhaseEos};

fn main() -> capillar::Result<()> {
    let air = PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0)?;
    let water = PhaseEos::new(4.4, 1816.0, 6.0e8, -1.167e6, 1.0e-3, 300.0, 0.0)?;
    let fluids = Fluids::new(air, water, InterfaceEos::new(0.072, 300.0, 1.0)?)?;
    let mut params = ModelParams::new(1e-2, 1.0, fluids)?;

    let (t, p, alpha) = (300.0, 1e5, 0.2);
    let tau1 = air.volume_at(p, t)?;
    let tau2 = water.volume_at(p, t)?;
    let rho = alpha / tau1 + (1.0 - alpha) / tau2;
    let st = MixtureState::from_phasic(
        rho,
        alpha / (tau1 * rho),
        alpha,
        30.0,
        air.entropy_at(tau1, t)?,
        water.entropy_at(tau2, t)?,
        0.0,
    );
    let cell = PrimCell::from_mixture(&st, 0.0, 0.0, 0.0);

    for lambda in [0.0, 1e5] {
        params.lambda_w = lambda;
        let osc = LinearOscillator::linearize(&CellEvaluation::new(&cell, &params)?, &params);
        let h = osc.period() / 200.0;
        let mut x = [osc.alpha_star + 1e-4, 0.0];
        let e0 = osc.energy(&x);
        println!("lambda_w = {lambda:.0e}: omega = {:.4e} rad/s, period = {:.4e} s", osc.omega(), osc.period());
        println!("{:>8} {:>14} {:>14} {:>12}", "periods", "alpha", "w", "E / E0");
        for k in 0..=8 {
            println!("{:>8.2} {:>14.8} {:>14.6e} {:>12.6}", k as f64 / 4.0, x[0], x[1], osc.energy(&x) / e0);
            x = osc.integrate(x, h, 50);
        }
    }
    Ok(())
}
