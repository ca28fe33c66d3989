//! First-order convergence of the energy residual for a smooth periodic wave.

use std::f64::consts::PI;

use capillar::mixture::{Fluids, MixtureState};
use capillar::model::{ModelParams, PrimCell};
use capillar::solver1d::{advance, Boundary, Fields, Grid1D, SolverConfig};
use capillar::thermo::{InterfaceEos, PhaseEos};

fn main() -> capillar::Result<()> {
    let air = PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0)?;
    let params = ModelParams::new(1.0, 1.0, Fluids::new(air, air, InterfaceEos::new(0.0, 300.0, 1.0)?)?)?;
    let s = air.entropy_at(1.0 / 1.2, 1e5 / (1.2 * 0.4 * 718.0))?;

    let mut previous: Option<f64> = None;
    println!("{:>6} {:>14} {:>8}", "cells", "|dE|", "ratio");
    for n in [50, 100, 200, 400, 800] {
        let grid = Grid1D::new(0.0, 1.0, n, Boundary::Periodic)?;
        let initial = Fields::from_fn(&grid, |x| {
            let rho = 1.2 * (1.0 + 0.01 * (2.0 * PI * x).sin());
            PrimCell::from_mixture(&MixtureState::from_phasic(rho, 0.5, 0.5, 1.0, s, s, 0.0), 10.0, 0.0, 0.0)
        });
        let config = SolverConfig { enable_sources: false, output_every: u64::MAX, ..SolverConfig::new(0.8, 2e-3)? };
        let tr = advance(&initial, &grid, &params, &config, None).map_err(|a| a.error)?;
        let drift = tr.monitors.last().expect("final monitors").energy_residual_p_hat.abs();
        let ratio = previous.map(|p| format!("{:.3}", p / drift)).unwrap_or_default();
        println!("{n:>6} {drift:>14.6e} {ratio:>8}");
        previous = Some(drift);
    }
    Ok(())
}
