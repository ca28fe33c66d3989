//! Equilibrium of an air bubble population in water, compared with Young-Laplace.

use std::f64::consts::PI;

use capillar::equilibrium::{
    solve_equilibrium, young_laplace_radius, EquilibriumMode, EquilibriumProblem, GeometricClosure,
};
use capillar::mixture::{Fluids, MixtureState};
use capillar::thermo::{InterfaceEos, PhaseEos};

fn main() -> capillar::Result<()> {
    let air = PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0)?;
    let water = PhaseEos::new(4.4, 1816.0, 6.0e8, -1.167e6, 1.0e-3, 300.0, 0.0)?;
    let fluids = Fluids::new(air, water, InterfaceEos::new(0.072, 300.0, 1.0)?)?;

    println!("{:>10} {:>6} {:>14} {:>14} {:>10}", "R [m]", "iters", "p1 - p2", "2 gamma / R", "rel. err");
    for r in [1e-2, 1e-3, 1e-4, 1e-5] {
        let alpha = 0.05;
        let t = 300.0;
        // build the exact state, then forget it and start Newton from a perturbed guess
        let s_i = fluids.interface.entropy_at(t)?;
        let gamma = fluids.interface.tension(s_i);
        let tau1 = air.volume_at(1e5 + 2.0 * gamma / r, t)?;
        let tau2 = water.volume_at(1e5, t)?;
        let rho = alpha / tau1 + (1.0 - alpha) / tau2;
        let y = alpha / (tau1 * rho);
        let exact = MixtureState::from_phasic(
            rho,
            y,
            alpha,
            3.0 * alpha / r,
            air.entropy_at(tau1, t)?,
            water.entropy_at(tau2, t)?,
            s_i,
        );
        let closure = GeometricClosure::Spherical { n_b: alpha / (4.0 / 3.0 * PI * r.powi(3)) };
        let mut problem = EquilibriumProblem::new(1.0 / rho, exact.s, closure, EquilibriumMode::FrozenY(y));
        problem.tol = 1e-12;

        let guess_alpha = 1.05 * alpha;
        let guess = MixtureState { alpha: guess_alpha, a_i: closure.area(guess_alpha, 0.0), s1: exact.s1 + 20.0, ..exact };
        let sol = solve_equilibrium(&problem, &guess, &fluids)?;
        let ev = fluids.evaluate(&sol.state)?;
        let jump = ev.phase1.p - ev.phase2.p;
        let laplace = 2.0 * ev.interface.gamma_i / young_laplace_radius(&sol.state);
        println!(
            "{r:>10.1e} {:>6} {jump:>14.6e} {laplace:>14.6e} {:>10.2e}",
            sol.iterations,
            (jump - laplace).abs() / ev.phase1.p
        );
    }
    Ok(())
}
