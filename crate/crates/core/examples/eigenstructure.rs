//! Analytic and numerical spectra of the quasilinear matrix for a bubbly cell.

use capillar::mixture::{Fluids, MixtureState};
use capillar::model::{assemble_quasilinear, eigen_analytic, eigen_numeric, ModelParams, PrimCell};
use capillar::thermo::{InterfaceEos, PhaseEos};

fn main() -> capillar::Result<()> {
    let air = PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0)?;
    let water = PhaseEos::new(4.4, 1816.0, 6.0e8, -1.167e6, 1.0e-3, 300.0, 0.0)?;
    let params = ModelParams::new(2.0, 0.5, Fluids::new(air, water, InterfaceEos::new(0.072, 300.0, 1.0)?)?)?;

    println!("{:>6} {:>12} {:>12} {:>12} {:>10} {:>10}", "alpha", "c_eff", "u - c", "u + c", "deviation", "cond");
    for alpha in [0.001, 0.01, 0.1, 0.5, 0.9, 0.99] {
        let (t, p, u) = (300.0, 1e5, 12.0);
        let tau1 = air.volume_at(p, t)?;
        let tau2 = water.volume_at(p, t)?;
        let rho = alpha / tau1 + (1.0 - alpha) / tau2;
        let st = MixtureState::from_phasic(
            rho,
            alpha / (tau1 * rho),
            alpha,
            100.0,
            air.entropy_at(tau1, t)?,
            water.entropy_at(tau2, t)?,
            0.0,
        );
        let cell = PrimCell::from_mixture(&st, u, 0.3, -0.2);
        let ana = eigen_analytic(&cell, &params)?;
        let num = eigen_numeric(&assemble_quasilinear(&cell, &params)?.matrix)?;
        let c = ana.c_eff.expect("stiffened gas mixtures are hyperbolic");
        let dev = num
            .eigenvalues
            .iter()
            .zip(&ana.eigenvalues)
            .map(|(a, b)| (a.re - b.re).abs().max(a.im.abs()))
            .fold(0.0, f64::max)
            / (u.abs() + c);
        println!(
            "{alpha:>6} {c:>12.4} {:>12.4} {:>12.4} {dev:>10.1e} {:>10.1e}",
            u - c,
            u + c,
            num.basis_condition.unwrap_or(f64::INFINITY)
        );
    }
    Ok(())
}
