//! Finite-difference check of the Gibbs relations for a few equations of state.

use capillar::thermo::{InterfaceEos, PhaseEos};

fn main() -> capillar::Result<()> {
    let fluids = [
        ("air", PhaseEos::new(1.4, 718.0, 0.0, 0.0, 0.8, 300.0, 0.0)?),
        ("water", PhaseEos::new(4.4, 1816.0, 6.0e8, -1.167e6, 1.0e-3, 300.0, 0.0)?),
        ("helium", PhaseEos::new(5.0 / 3.0, 3116.0, 0.0, 0.0, 6.0, 300.0, 0.0)?),
    ];
    println!("{:<8} {:>6} {:>14} {:>14}", "phase", "points", "dp residual", "dT residual");
    for (name, eos) in fluids {
        let sweep = eos.gibbs_sweep(10, 1e-6)?;
        println!(
            "{name:<8} {:>6} {:>14.3e} {:>14.3e}",
            sweep.points, sweep.max_pressure_residual, sweep.max_temperature_residual
        );
    }

    // a large theta keeps the tension parabola flat over tens of kelvin
    let iface = InterfaceEos::new(0.072, 300.0, 1.0e5)?;
    let sweep = iface.gibbs_duhem_sweep(-5e-4, 5e-4, 101, 1e-10)?;
    println!(
        "interface: {} points, d(gamma)/dT + s_i = {:.3e}, de/ds - T = {:.3e}",
        sweep.points, sweep.max_gibbs_duhem_residual, sweep.max_energy_slope_residual
    );
    for t in [250.0, 280.0, 300.0, 320.0, 350.0] {
        println!("  T_i = {t} K  gamma_i = {:.6} N/m", iface.tension_at_temperature(t)?);
    }
    Ok(())
}
