//! First-order finite-volume solver on a uniform 1D grid.
//!
//! `(rho, rho y, rho u)` are updated with a Rusanov flux built on
//! `(rho u, rho y u, rho u^2 + p_hat)`; `(alpha, a_i, w, n, s, s1, s2)` are
//! transported by velocity upwinding. Relaxation sources are split off with
//! Strang splitting: half source step, hyperbolic step, half source step.

pub mod io;
pub mod monitors;
pub mod source;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::Floors;
use crate::model::{CellEvaluation, ModelParams, PrimCell};

pub use monitors::{compute_monitors, Monitors, ScalarRange};
pub use source::{rk2_step, source_step, LinearOscillator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Transmissive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1D {
    pub x0: f64,
    pub x1: f64,
    pub n_cells: usize,
    pub bc: Boundary,
}

impl Grid1D {
    pub fn new(x0: f64, x1: f64, n_cells: usize, bc: Boundary) -> Result<Self> {
        let g = Self { x0, x1, n_cells, bc };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x0.is_finite() && self.x1.is_finite() && self.x1 > self.x0) {
            return Err(Error::InvalidParameter { name: "x1", reason: "grid needs x1 > x0".into() });
        }
        if self.n_cells < 2 {
            return Err(Error::InvalidParameter { name: "n_cells", reason: "must be > 1".into() });
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.n_cells as f64
    }

    pub fn length(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Index of the left and right neighbours of cell `i`, ghost cells copying the boundary cell.
    fn neighbours(&self, i: usize) -> (usize, usize) {
        let n = self.n_cells;
        match self.bc {
            Boundary::Periodic => ((i + n - 1) % n, (i + 1) % n),
            Boundary::Transmissive => (i.saturating_sub(1), (i + 1).min(n - 1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceIntegrator {
    #[default]
    Rk2,
    SubcycledRk2,
}

fn default_subcycle_fraction() -> f64 {
    0.1
}

fn default_output_every() -> u64 {
    10
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_end: f64,
    #[serde(default)]
    pub source_integrator: SourceIntegrator,
    /// Largest source substep as a fraction of the fastest local relaxation time.
    #[serde(default = "default_subcycle_fraction")]
    pub subcycle_max_dt_fraction: f64,
    /// Monitor interval in steps.
    #[serde(default = "default_output_every")]
    pub output_every: u64,
    #[serde(default = "default_true")]
    pub enable_sources: bool,
    #[serde(default)]
    pub max_steps: Option<u64>,
    #[serde(default)]
    pub floors: Floors,
}

impl SolverConfig {
    pub fn new(cfl: f64, t_end: f64) -> Result<Self> {
        let c = Self {
            cfl,
            t_end,
            source_integrator: SourceIntegrator::default(),
            subcycle_max_dt_fraction: default_subcycle_fraction(),
            output_every: default_output_every(),
            enable_sources: true,
            max_steps: None,
            floors: Floors::default(),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter { name: "cfl", reason: format!("{} not in (0, 1]", self.cfl) });
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter { name: "t_end", reason: format!("{} must be > 0", self.t_end) });
        }
        if !(self.subcycle_max_dt_fraction > 0.0 && self.subcycle_max_dt_fraction.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "subcycle_max_dt_fraction",
                reason: "must be > 0".into(),
            });
        }
        if self.output_every == 0 {
            return Err(Error::InvalidParameter { name: "output_every", reason: "must be >= 1".into() });
        }
        self.floors.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fields {
    pub cells: Vec<PrimCell>,
}

impl Fields {
    pub fn uniform(n: usize, cell: PrimCell) -> Self {
        Self { cells: vec![cell; n] }
    }

    pub fn from_fn(grid: &Grid1D, f: impl Fn(f64) -> PrimCell) -> Self {
        Self { cells: grid.centers().into_iter().map(f).collect() }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn evaluate(&self, params: &ModelParams) -> Result<Vec<CellEvaluation>> {
        self.cells
            .par_iter()
            .enumerate()
            .map(|(i, c)| CellEvaluation::new(c, params).map_err(|e| at_cell(i, e)))
            .collect()
    }
}

fn at_cell(i: usize, e: Error) -> Error {
    match e {
        Error::InvalidState(msg) => Error::InvalidState(format!("cell {i}: {msg}")),
        other => other,
    }
}

/// `sqrt(d p_hat / d rho)`, or an error where the acoustic pair is complex.
pub fn effective_sound_speed(ev: &CellEvaluation, params: &ModelParams) -> Result<f64> {
    let g = ev.dp_hat_drho(params);
    if g > 0.0 && g.is_finite() {
        Ok(g.sqrt())
    } else {
        Err(Error::InvalidState(format!("d p_hat/d rho = {g}: acoustic eigenvalues are not real")))
    }
}

/// Largest `|u| + c_eff` over the cells.
pub fn max_wave_speed(evals: &[CellEvaluation], params: &ModelParams) -> Result<f64> {
    let mut smax: f64 = 0.0;
    for (i, ev) in evals.iter().enumerate() {
        let c = effective_sound_speed(ev, params).map_err(|e| at_cell(i, e))?;
        smax = smax.max(ev.cell.u.abs() + c);
    }
    Ok(smax)
}

/// `cfl dx / max(|u| + c_eff)`.
pub fn stable_dt(fields: &Fields, grid: &Grid1D, params: &ModelParams, cfl: f64) -> Result<f64> {
    let evals = fields.evaluate(params)?;
    Ok(cfl * grid.dx() / max_wave_speed(&evals, params)?)
}

#[derive(Debug, Clone, Copy)]
struct Face {
    flux: [f64; 3],
    u: f64,
}

fn physical_flux(ev: &CellEvaluation, params: &ModelParams) -> [f64; 3] {
    let c = &ev.cell;
    let m = c.rho * c.u;
    [m, m * c.y, m * c.u + ev.p_hat(params)]
}

fn conserved(c: &PrimCell) -> [f64; 3] {
    [c.rho, c.rho * c.y, c.rho * c.u]
}

fn transported(c: &PrimCell) -> [f64; 7] {
    [c.alpha, c.a_i, c.w, c.n, c.s, c.s1, c.s2]
}

/// Result of one hyperbolic update.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicOutcome {
    pub fields: Fields,
    pub clamp_count: u64,
}

/// One Rusanov / upwind step of length `dt`.
pub fn hyperbolic_step(
    fields: &Fields,
    grid: &Grid1D,
    params: &ModelParams,
    dt: f64,
    cfl: f64,
    floors: &Floors,
) -> Result<HyperbolicOutcome> {
    let n = grid.n_cells;
    if fields.len() != n {
        return Err(Error::InvalidState(format!("{} cells for a grid of {n}", fields.len())));
    }
    let evals = fields.evaluate(params)?;
    let speeds: Vec<f64> = evals
        .par_iter()
        .enumerate()
        .map(|(i, ev)| effective_sound_speed(ev, params).map(|c| ev.cell.u.abs() + c).map_err(|e| at_cell(i, e)))
        .collect::<Result<_>>()?;
    let smax = speeds.iter().cloned().fold(0.0, f64::max);
    let limit = cfl * grid.dx() / smax;
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let fluxes: Vec<[f64; 3]> = evals.par_iter().map(|ev| physical_flux(ev, params)).collect();

    // face k sits between cell k and its right neighbour
    let faces: Vec<Face> = (0..n)
        .into_par_iter()
        .map(|k| {
            let (_, r) = grid.neighbours(k);
            let (cl, cr) = (&fields.cells[k], &fields.cells[r]);
            let a = speeds[k].max(speeds[r]);
            let (ul, ur) = (conserved(cl), conserved(cr));
            let mut flux = [0.0; 3];
            for q in 0..3 {
                flux[q] = 0.5 * (fluxes[k][q] + fluxes[r][q]) - 0.5 * a * (ur[q] - ul[q]);
            }
            Face { flux, u: 0.5 * (cl.u + cr.u) }
        })
        .collect();
    let boundary_left = match grid.bc {
        Boundary::Periodic => faces[n - 1],
        Boundary::Transmissive => Face { flux: fluxes[0], u: fields.cells[0].u },
    };

    let lam = dt / grid.dx();
    let updated: Vec<(PrimCell, u64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let left = if i == 0 { boundary_left } else { faces[i - 1] };
            let right = faces[i];
            let (l, r) = grid.neighbours(i);
            let c = &fields.cells[i];
            let u0 = conserved(c);
            let mut u = [0.0; 3];
            for q in 0..3 {
                u[q] = u0[q] - lam * (right.flux[q] - left.flux[q]);
            }
            let (pl, pc, pr) =
                (transported(&fields.cells[l]), transported(c), transported(&fields.cells[r]));
            let (up, um) = (left.u.max(0.0), right.u.min(0.0));
            let mut phi = [0.0; 7];
            for q in 0..7 {
                phi[q] = pc[q] - lam * (um * (pr[q] - pc[q]) + up * (pc[q] - pl[q]));
            }
            let rho = u[0];
            let next = PrimCell {
                rho,
                u: u[2] / rho,
                y: u[1] / rho,
                alpha: phi[0],
                a_i: phi[1],
                w: phi[2],
                n: phi[3],
                s: phi[4],
                s1: phi[5],
                s2: phi[6],
            };
            clamp_cell(next, floors, i)
        })
        .collect::<Result<_>>()?;
    let clamp_count = updated.iter().map(|(_, k)| k).sum();
    Ok(HyperbolicOutcome { fields: Fields { cells: updated.into_iter().map(|(c, _)| c).collect() }, clamp_count })
}

pub(crate) fn clamp_cell(cell: PrimCell, floors: &Floors, i: usize) -> Result<(PrimCell, u64)> {
    let mut st = cell.mixture();
    let k = st.clamp(floors) as u64;
    let out = PrimCell::from_mixture(&st, cell.u, cell.w, cell.n);
    out.validate().map_err(|e| at_cell(i, e))?;
    Ok((out, k))
}

/// Net outflow of total energy through the two boundary faces, with `E + p_hat` and with `E + p`.
pub fn boundary_energy_outflow(evals: &[CellEvaluation], grid: &Grid1D, params: &ModelParams) -> (f64, f64) {
    match grid.bc {
        Boundary::Periodic => (0.0, 0.0),
        Boundary::Transmissive => {
            let flux = |ev: &CellEvaluation| {
                let e = ev.total_energy_density();
                let u = ev.cell.u;
                ((e + ev.p_hat(params)) * u, (e + ev.thermo.mixture.p) * u)
            };
            let (l, r) = (flux(&evals[0]), flux(&evals[evals.len() - 1]));
            (r.0 - l.0, r.1 - l.1)
        }
    }
}

const MAX_CFL_RETRIES: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub t: f64,
    pub fields: Fields,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    TEnd,
    MaxSteps,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub t: f64,
    pub steps: u64,
    pub stop: StopReason,
    pub fields: Fields,
    pub snapshots: Vec<Snapshot>,
    pub monitors: Vec<Monitors>,
    pub clamp_count: u64,
}

/// A failed run, with the last accepted fields for diagnosis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("run aborted at step {step} (t = {t:e}): {error}")]
pub struct Abort {
    pub error: Error,
    pub step: u64,
    pub t: f64,
    pub fields: Fields,
    pub monitors: Vec<Monitors>,
}

#[derive(Debug, Clone, Copy, Default)]
struct EnergyLedger {
    e0: f64,
    outflow_p_hat: f64,
    outflow_p: f64,
}

struct Driver<'a> {
    grid: &'a Grid1D,
    params: &'a ModelParams,
    config: &'a SolverConfig,
}

impl Driver<'_> {
    fn sources(&self, fields: &Fields, dt: f64) -> Result<(Fields, u64)> {
        if !self.config.enable_sources {
            return Ok((fields.clone(), 0));
        }
        source_step(fields, self.params, dt, self.config)
    }

    fn step(&self, fields: &Fields, dt: f64) -> Result<(Fields, u64)> {
        let (f1, k1) = self.sources(fields, 0.5 * dt)?;
        let h = hyperbolic_step(&f1, self.grid, self.params, dt, self.config.cfl, &self.config.floors)?;
        let (f2, k2) = self.sources(&h.fields, 0.5 * dt)?;
        Ok((f2, k1 + h.clamp_count + k2))
    }

    fn monitor(&self, fields: &Fields, t: f64, clamps: u64, ledger: &EnergyLedger) -> Result<Monitors> {
        let mut m = compute_monitors(fields, self.grid, self.params)?;
        m.t = t;
        m.clamp_count = clamps;
        m.energy_residual_p_hat = m.energy - ledger.e0 + ledger.outflow_p_hat;
        m.energy_residual_p = m.energy - ledger.e0 + ledger.outflow_p;
        Ok(m)
    }
}

/// Integrates from `t = 0` to `config.t_end` (or `config.max_steps`).
///
/// Monitors are recorded every `config.output_every` steps and snapshots every
/// `snapshot_every` steps; both always include the initial and final states.
pub fn advance(
    initial: &Fields,
    grid: &Grid1D,
    params: &ModelParams,
    config: &SolverConfig,
    snapshot_every: Option<u64>,
) -> std::result::Result<Trajectory, Box<Abort>> {
    let drv = Driver { grid, params, config };
    let mut fields = initial.clone();
    let mut t = 0.0;
    let mut step = 0u64;
    let mut clamps = 0u64;
    let mut monitors = Vec::new();
    let mut snapshots = Vec::new();
    let abort = |error: Error, step: u64, t: f64, fields: &Fields, monitors: &Vec<Monitors>| {
        Box::new(Abort { error, step, t, fields: fields.clone(), monitors: monitors.clone() })
    };

    let setup = (|| {
        params.validate()?;
        grid.validate()?;
        config.validate()?;
        if fields.len() != grid.n_cells {
            return Err(Error::InvalidState(format!("{} cells for a grid of {}", fields.len(), grid.n_cells)));
        }
        compute_monitors(&fields, grid, params)
    })();
    let m0 = setup.map_err(|e| abort(e, 0, 0.0, &fields, &monitors))?;
    let mut ledger = EnergyLedger { e0: m0.energy, ..Default::default() };
    monitors.push(drv.monitor(&fields, t, clamps, &ledger).map_err(|e| abort(e, 0, 0.0, &fields, &monitors))?);
    if snapshot_every.is_some() {
        snapshots.push(Snapshot { step, t, fields: fields.clone() });
    }

    let stop = loop {
        if t >= config.t_end {
            break StopReason::TEnd;
        }
        if config.max_steps.is_some_and(|k| step >= k) {
            break StopReason::MaxSteps;
        }
        let attempt = (|| {
            let evals = fields.evaluate(params)?;
            let smax = max_wave_speed(&evals, params)?;
            let mut dt = config.cfl * grid.dx() / smax;
            let last = t + dt >= config.t_end;
            if last {
                dt = config.t_end - t;
            }
            let (out_hat, out_p) = boundary_energy_outflow(&evals, grid, params);
            // the half source step can raise c_eff; shrink dt until the hyperbolic step accepts it
            let mut retries = 0;
            let mut last = last;
            loop {
                match drv.step(&fields, dt) {
                    Err(Error::CflViolation { limit, .. }) if retries < MAX_CFL_RETRIES => {
                        dt = 0.95 * limit.min(dt);
                        last = false;
                        retries += 1;
                    }
                    Err(e) => return Err(e),
                    Ok((next, k)) => return Ok((next, k, dt, last, out_hat, out_p)),
                }
            }
        })();
        let (next, k, dt, last, out_hat, out_p) = attempt.map_err(|e| abort(e, step, t, &fields, &monitors))?;
        fields = next;
        clamps += k;
        t = if last { config.t_end } else { t + dt };
        step += 1;
        ledger.outflow_p_hat += dt * out_hat;
        ledger.outflow_p += dt * out_p;

        let done = t >= config.t_end || config.max_steps.is_some_and(|m| step >= m);
        if step.is_multiple_of(config.output_every) || done {
            let m = drv.monitor(&fields, t, clamps, &ledger).map_err(|e| abort(e, step, t, &fields, &monitors))?;
            monitors.push(m);
        }
        if let Some(every) = snapshot_every {
            if every > 0 && (step.is_multiple_of(every) || done) {
                snapshots.push(Snapshot { step, t, fields: fields.clone() });
            }
        }
    };
    Ok(Trajectory { t, steps: step, stop, fields, snapshots, monitors, clamp_count: clamps })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::mixture::tests::{air, fluids};
    use crate::mixture::{Fluids, MixtureState};
    use crate::thermo::InterfaceEos;

    pub(crate) fn gas_params() -> ModelParams {
        let fl = Fluids { phase1: air(), phase2: air(), interface: InterfaceEos::new(0.0, 300.0, 1.0).unwrap() };
        ModelParams::new(1.0, 1.0, fl).unwrap()
    }

    pub(crate) fn gas_cell(rho: f64, u: f64, y: f64, s1: f64) -> PrimCell {
        let st = MixtureState::from_phasic(rho, y, y, 1.0, s1, s1, 0.0);
        PrimCell::from_mixture(&st, u, 0.0, 0.0)
    }

    fn no_sources(cfl: f64, t_end: f64) -> SolverConfig {
        SolverConfig { enable_sources: false, ..SolverConfig::new(cfl, t_end).unwrap() }
    }

    #[test]
    fn uniform_state_is_preserved() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 20, Boundary::Periodic).unwrap();
        let f = Fields::uniform(20, gas_cell(1.2, 30.0, 0.4, 10.0));
        let dt = stable_dt(&f, &grid, &pr, 0.9).unwrap();
        let out = hyperbolic_step(&f, &grid, &pr, dt, 0.9, &Floors::default()).unwrap();
        for (a, b) in out.fields.cells.iter().zip(&f.cells) {
            for (x, y) in a.to_array().iter().zip(b.to_array()) {
                assert!((x - y).abs() <= 1e-13 * y.abs().max(1.0));
            }
        }
        assert_eq!(out.clamp_count, 0);
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 10, Boundary::Transmissive).unwrap();
        let f = Fields::uniform(10, gas_cell(1.2, 0.0, 0.4, 10.0));
        let dt = stable_dt(&f, &grid, &pr, 0.5).unwrap();
        let err = hyperbolic_step(&f, &grid, &pr, 1.1 * dt, 0.5, &Floors::default()).unwrap_err();
        assert!(matches!(err, Error::CflViolation { .. }));
    }

    #[test]
    fn mass_fraction_obeys_max_principle() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 50, Boundary::Periodic).unwrap();
        let mut f = Fields::from_fn(&grid, |x| {
            let y = if (0.3..0.6).contains(&x) { 0.8 } else { 0.2 };
            gas_cell(1.2, 50.0, y, 10.0)
        });
        let range = |f: &Fields| {
            let ys = f.cells.iter().map(|c| c.y);
            (ys.clone().fold(f64::MAX, f64::min), ys.fold(f64::MIN, f64::max))
        };
        let (mut lo, mut hi) = range(&f);
        for _ in 0..40 {
            let dt = stable_dt(&f, &grid, &pr, 0.8).unwrap();
            f = hyperbolic_step(&f, &grid, &pr, dt, 0.8, &Floors::default()).unwrap().fields;
            let (l, h) = range(&f);
            assert!(l >= lo - 1e-14 && h <= hi + 1e-14, "{l} {h}");
            (lo, hi) = (l, h);
        }
        assert!(hi < 0.8 && lo > 0.2);
    }

    #[test]
    fn periodic_run_conserves_mass_and_momentum() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 64, Boundary::Periodic).unwrap();
        let f = Fields::from_fn(&grid, |x| {
            let bump = (2.0 * std::f64::consts::PI * x).sin();
            gas_cell(1.2 + 0.2 * bump, 20.0, 0.5 + 0.2 * bump, 10.0)
        });
        let cfg = SolverConfig { max_steps: Some(100), output_every: 100, ..no_sources(0.8, 1.0) };
        let tr = advance(&f, &grid, &pr, &cfg, None).unwrap();
        assert_eq!(tr.stop, StopReason::MaxSteps);
        let (a, b) = (&tr.monitors[0], tr.monitors.last().unwrap());
        assert!((a.mass - b.mass).abs() <= 1e-13 * a.mass);
        assert!((a.y_mass - b.y_mass).abs() <= 1e-13 * a.y_mass);
        assert!((a.momentum - b.momentum).abs() <= 1e-13 * a.momentum.abs());
        assert!(b.energy_residual_p_hat.abs() <= 1e-2 * a.energy);
        assert_eq!(b.energy_residual_p_hat, b.energy_residual_p);
    }

    #[test]
    fn run_reaches_t_end_exactly() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 16, Boundary::Transmissive).unwrap();
        let f = Fields::uniform(16, gas_cell(1.2, 10.0, 0.5, 10.0));
        let tr = advance(&f, &grid, &pr, &no_sources(0.9, 1e-3), Some(1)).unwrap();
        assert_eq!(tr.t, 1e-3);
        assert_eq!(tr.stop, StopReason::TEnd);
        assert_eq!(tr.snapshots.len() as u64, tr.steps + 1);
        assert!(tr.monitors.last().unwrap().energy_residual_p_hat.abs() <= 1e-9 * tr.monitors[0].energy);
    }

    #[test]
    fn invalid_config_aborts_before_stepping() {
        let pr = gas_params();
        let grid = Grid1D::new(0.0, 1.0, 4, Boundary::Periodic).unwrap();
        let f = Fields::uniform(4, gas_cell(1.2, 0.0, 0.5, 10.0));
        let cfg = SolverConfig { cfl: 1.5, ..no_sources(0.5, 1.0) };
        let err = advance(&f, &grid, &pr, &cfg, None).unwrap_err();
        assert_eq!(err.step, 0);
        assert!(err.error.to_string().contains("cfl"));
        assert!(SolverConfig::new(0.5, 0.0).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1, Boundary::Periodic).is_err());
    }

    #[test]
    fn advance_is_deterministic() {
        let pr = ModelParams::new(2.0, 0.5, fluids()).unwrap();
        let grid = Grid1D::new(0.0, 1.0, 32, Boundary::Transmissive).unwrap();
        let f = Fields::from_fn(&grid, |x| {
            let st = MixtureState::from_phasic(500.0, 6e-4, 0.5, 300.0, 80.0, 10.0, 0.02);
            PrimCell::from_mixture(&st, if x < 0.5 { 5.0 } else { -5.0 }, 0.0, 0.0)
        });
        let cfg = SolverConfig { max_steps: Some(20), ..SolverConfig::new(0.5, 1.0).unwrap() };
        let a = advance(&f, &grid, &pr, &cfg, Some(5)).unwrap();
        let b = advance(&f, &grid, &pr, &cfg, Some(5)).unwrap();
        assert_eq!(a, b);
    }
}
