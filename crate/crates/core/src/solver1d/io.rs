//! CSV output with shortest round-trip float formatting.

use std::io::Write;

use super::{Fields, Grid1D, Monitors};
use crate::error::Result;
use crate::model::{CellEvaluation, ModelParams};

pub const SNAPSHOT_HEADER: &str = "x,rho,u,y,alpha,a_i,w,n,s,s1,s2,p,p_hat,E";
pub const MONITOR_HEADER: &str = "t,mass,y_mass,momentum,energy,ai_si,clamp_count";

/// Shortest decimal string that parses back to `v`.
pub fn fmt_f64(v: f64) -> String {
    ryu::Buffer::new().format(v).to_owned()
}

fn write_row<W: Write>(out: &mut W, values: &[f64]) -> Result<()> {
    let row: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    writeln!(out, "{}", row.join(","))?;
    Ok(())
}

pub fn write_snapshot<W: Write>(out: &mut W, grid: &Grid1D, fields: &Fields, params: &ModelParams) -> Result<()> {
    writeln!(out, "{SNAPSHOT_HEADER}")?;
    for (i, cell) in fields.cells.iter().enumerate() {
        let ev = CellEvaluation::new(cell, params)?;
        let mut row = vec![grid.center(i)];
        row.extend(cell.to_array());
        row.extend([ev.thermo.mixture.p, ev.p_hat(params), ev.total_energy_density()]);
        write_row(out, &row)?;
    }
    Ok(())
}

pub fn write_monitors<W: Write>(out: &mut W, monitors: &[Monitors]) -> Result<()> {
    writeln!(out, "{MONITOR_HEADER}")?;
    for m in monitors {
        let vals = [m.t, m.mass, m.y_mass, m.momentum, m.energy, m.ai_si];
        let row: Vec<String> = vals.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(out, "{},{}", row.join(","), m.clamp_count)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver1d::tests::{gas_cell, gas_params};
    use crate::solver1d::{compute_monitors, Boundary};

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 6e8, -1.167e6, 5e-324, 1e300] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn snapshot_layout() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 3, Boundary::Periodic).unwrap();
        let f = Fields::uniform(3, gas_cell(1.2, 1.0, 0.5, 10.0));
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &grid, &f, &pr).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SNAPSHOT_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 14));
    }

    #[test]
    fn monitor_layout() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 3, Boundary::Periodic).unwrap();
        let m = compute_monitors(&Fields::uniform(3, gas_cell(1.0, 0.0, 0.5, 10.0)), &grid, &pr).unwrap();
        let mut buf = Vec::new();
        write_monitors(&mut buf, &[m]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), MONITOR_HEADER);
        assert!(text.lines().nth(1).unwrap().ends_with(",0"));
    }
}
