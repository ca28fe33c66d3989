//! Sod shock tube for a gas/gas mixture, written as CSV to stdout.

use capillar::mixture::{Fluids, MixtureState};
use capillar::model::{ModelParams, PrimCell};
use capillar::solver1d::{advance, Boundary, Fields, Grid1D, SolverConfig};
use capillar::thermo::{InterfaceEos, PhaseEos};

fn main() -> capillar::Result<()> {
    let air = PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0)?;
    let fluids = Fluids::new(air, air, InterfaceEos::new(0.0, 300.0, 1.0)?)?;
    let params = ModelParams::new(1.0, 1.0, fluids)?;
    let grid = Grid1D::new(0.0, 1.0, 400, Boundary::Transmissive)?;

    let entropy = |rho: f64, p: f64| {
        let tau = 1.0 / rho;
        air.entropy_at(tau, p * tau / (0.4 * 718.0))
    };
    let (sl, sr) = (entropy(1.0, 1e5)?, entropy(0.125, 1e4)?);
    let initial = Fields::from_fn(&grid, |x| {
        let (rho, s) = if x < 0.5 { (1.0, sl) } else { (0.125, sr) };
        PrimCell::from_mixture(&MixtureState::from_phasic(rho, 0.5, 0.5, 1.0, s, s, 0.0), 0.0, 0.0, 0.0)
    });

    let config = SolverConfig { enable_sources: false, ..SolverConfig::new(0.8, 5e-4)? };
    let tr = advance(&initial, &grid, &params, &config, None).map_err(|a| a.error)?;
    eprintln!("{} steps to t = {:.3e} s", tr.steps, tr.t);

    println!("x,rho,u,p");
    for (x, cell) in grid.centers().iter().zip(&tr.fields.cells) {
        let p = fluids.potentials(&cell.mixture())?.p;
        println!("{x},{},{},{}", cell.rho, cell.u, p);
    }
    Ok(())
}
