//! Configuration schema and the four batch subcommands behind the `capillar` binary.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::equilibrium::{
    grand_potential_slope, solve_equilibrium, young_laplace_radius, EquilibriumProblem, GeometricClosure,
};
use crate::error::{Error, Result};
use crate::mixture::{Fluids, MixtureState};
use crate::model::eigen::analytic_eigenvectors;
use crate::model::{assemble_quasilinear, eigen_analytic, eigen_numeric, ModelParams, PrimCell, SourceSign};
use crate::solver1d::io::{write_monitors, write_snapshot};
use crate::solver1d::{advance, Abort, Fields, Grid1D, SolverConfig, Trajectory};
use crate::thermo::{InterfaceEos, PhaseEos};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Config = 1,
    Numerical = 2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Command {
    Run,
    CheckThermo { tol: Option<f64>, h: Option<f64> },
    Equilibrium,
    Eigen,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::CheckThermo { .. } => "check_thermo",
            Command::Equilibrium => "equilibrium",
            Command::Eigen => "eigen",
        }
    }
}

/// A thermodynamic state given through its phasic variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    pub y: f64,
    pub alpha: f64,
    pub a_i: f64,
    pub s1: f64,
    pub s2: f64,
    #[serde(default)]
    pub s_i: f64,
}

impl StateSpec {
    pub fn state(&self) -> MixtureState {
        MixtureState::from_phasic(self.rho, self.y, self.alpha, self.a_i, self.s1, self.s2, self.s_i)
    }
}

/// A full cell given through its phasic variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub rho: f64,
    #[serde(default)]
    pub u: f64,
    pub y: f64,
    pub alpha: f64,
    pub a_i: f64,
    #[serde(default)]
    pub w: f64,
    #[serde(default)]
    pub n: f64,
    pub s1: f64,
    pub s2: f64,
    #[serde(default)]
    pub s_i: f64,
}

impl CellSpec {
    pub fn cell(&self) -> PrimCell {
        let st = MixtureState::from_phasic(self.rho, self.y, self.alpha, self.a_i, self.s1, self.s2, self.s_i);
        PrimCell::from_mixture(&st, self.u, self.w, self.n)
    }

    fn field_mut(&mut self, f: SineField) -> &mut f64 {
        match f {
            SineField::Rho => &mut self.rho,
            SineField::U => &mut self.u,
            SineField::Y => &mut self.y,
            SineField::Alpha => &mut self.alpha,
            SineField::AI => &mut self.a_i,
            SineField::W => &mut self.w,
            SineField::N => &mut self.n,
            SineField::S1 => &mut self.s1,
            SineField::S2 => &mut self.s2,
            SineField::SI => &mut self.s_i,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SineField {
    #[serde(rename = "rho")]
    Rho,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "a_i")]
    AI,
    #[serde(rename = "w")]
    W,
    #[serde(rename = "n")]
    N,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "s2")]
    S2,
    #[serde(rename = "s_i")]
    SI,
}

fn default_wavenumber() -> u32 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    Uniform {
        state: CellSpec,
    },
    TwoState {
        x_split: f64,
        left: CellSpec,
        right: CellSpec,
    },
    /// `base` with `field += amplitude sin(2 pi k (x - x0) / L)`.
    SmoothSine {
        base: CellSpec,
        amplitude: f64,
        field: SineField,
        #[serde(default = "default_wavenumber")]
        wavenumber: u32,
    },
}

impl InitialCondition {
    pub fn cell_at(&self, x: f64, grid: &Grid1D) -> PrimCell {
        match *self {
            InitialCondition::Uniform { state } => state.cell(),
            InitialCondition::TwoState { x_split, left, right } => {
                if x < x_split {
                    left.cell()
                } else {
                    right.cell()
                }
            }
            InitialCondition::SmoothSine { base, amplitude, field, wavenumber } => {
                let mut spec = base;
                let phase = 2.0 * std::f64::consts::PI * wavenumber as f64 * (x - grid.x0) / grid.length();
                *spec.field_mut(field) += amplitude * phase.sin();
                spec.cell()
            }
        }
    }

    pub fn fields(&self, grid: &Grid1D) -> Fields {
        Fields::from_fn(grid, |x| self.cell_at(x, grid))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsBlock {
    pub m: f64,
    pub nu: f64,
    #[serde(default)]
    pub lambda_w: f64,
    #[serde(default)]
    pub lambda_n: f64,
    #[serde(default)]
    pub source_sign: SourceSign,
}

fn default_directory() -> PathBuf {
    PathBuf::from("out")
}

fn default_prefix() -> String {
    "capillar".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_prefix")]
    pub prefix: String,
    /// Snapshot interval in steps; initial and final states are always written.
    #[serde(default)]
    pub every: Option<u64>,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { directory: default_directory(), prefix: default_prefix(), every: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumBlock {
    pub problem: EquilibriumProblem,
    pub guess: StateSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenBlock {
    pub cell: CellSpec,
}

fn default_check_step() -> f64 {
    1e-6
}

fn default_grid_points() -> usize {
    10
}

fn default_interface_points() -> usize {
    101
}

fn default_s_i_range() -> [f64; 2] {
    [-5.0, 5.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckBlock {
    #[serde(default = "default_check_step")]
    pub tol: f64,
    #[serde(default = "default_check_step")]
    pub h: f64,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "default_interface_points")]
    pub interface_points: usize,
    #[serde(default = "default_s_i_range")]
    pub s_i_range: [f64; 2],
}

impl Default for CheckBlock {
    fn default() -> Self {
        Self {
            tol: default_check_step(),
            h: default_check_step(),
            grid_points: default_grid_points(),
            interface_points: default_interface_points(),
            s_i_range: default_s_i_range(),
        }
    }
}

/// Configuration shared by every subcommand. Each subcommand requires its own blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub eos1: PhaseEos,
    pub eos2: PhaseEos,
    pub interface: InterfaceEos,
    #[serde(default)]
    pub params: Option<ParamsBlock>,
    #[serde(default)]
    pub grid: Option<Grid1D>,
    #[serde(default)]
    pub ic: Option<InitialCondition>,
    #[serde(default)]
    pub time: Option<SolverConfig>,
    #[serde(default)]
    pub output: OutputBlock,
    #[serde(default)]
    pub equilibrium: Option<EquilibriumBlock>,
    #[serde(default)]
    pub eigen: Option<EigenBlock>,
    #[serde(default)]
    pub check: CheckBlock,
}

fn in_block<T>(block: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::InvalidParameter { name, reason } => Error::ConfigInvalid(format!("{block}.{name}: {reason}")),
        other => Error::ConfigInvalid(format!("{block}: {other}")),
    })
}

fn require<T: Copy>(v: &Option<T>, key: &str) -> Result<T> {
    v.ok_or_else(|| Error::ConfigInvalid(format!("missing `{key}` block")))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Validates every block present.
    pub fn validate(&self) -> Result<()> {
        in_block("eos1", self.eos1.validate())?;
        in_block("eos2", self.eos2.validate())?;
        in_block("interface", self.interface.validate())?;
        if self.params.is_some() {
            self.model_params()?;
        }
        if let Some(g) = &self.grid {
            in_block("grid", g.validate())?;
        }
        if let Some(t) = &self.time {
            in_block("time", t.validate())?;
        }
        if let (Some(ic), Some(g)) = (&self.ic, &self.grid) {
            for (i, c) in ic.fields(g).cells.iter().enumerate() {
                in_block("ic", c.validate()).map_err(|e| Error::ConfigInvalid(format!("{e} (cell {i})")))?;
            }
        }
        if self.output.prefix.is_empty() || self.output.prefix.contains(['/', '\\']) {
            return Err(Error::ConfigInvalid("output.prefix must be a plain non-empty file stem".into()));
        }
        if self.output.every == Some(0) {
            return Err(Error::ConfigInvalid("output.every must be >= 1".into()));
        }
        if let Some(eq) = &self.equilibrium {
            in_block("equilibrium.problem", eq.problem.validate())?;
            in_block("equilibrium.guess", eq.guess.state().validate())?;
        }
        if let Some(e) = &self.eigen {
            in_block("eigen.cell", e.cell.cell().validate())?;
        }
        let c = &self.check;
        if !(c.tol > 0.0 && c.h > 0.0 && c.grid_points >= 2 && c.interface_points >= 2 && c.s_i_range[0] < c.s_i_range[1]) {
            return Err(Error::ConfigInvalid(
                "check: tol and h must be > 0, point counts >= 2, s_i_range increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn fluids(&self) -> Fluids {
        Fluids { phase1: self.eos1, phase2: self.eos2, interface: self.interface }
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        let p = require(&self.params, "params")?;
        let mp = ModelParams {
            m: p.m,
            nu: p.nu,
            fluids: self.fluids(),
            lambda_w: p.lambda_w,
            lambda_n: p.lambda_n,
            source_sign: p.source_sign,
        };
        in_block("params", mp.validate())?;
        Ok(mp)
    }
}

/// What a subcommand printed and how the process should exit.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: ExitCode,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn config_error(e: &Error) -> Self {
        Self { code: ExitCode::Config, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values are serializable");
    s.push('\n');
    s
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Loads `config_path`, runs `command` and reports the outcome. Nothing is printed here.
pub fn execute(command: Command, config_path: &Path, out: Option<&Path>) -> Outcome {
    let cfg = match RunConfig::load(config_path) {
        Ok(c) => c,
        Err(e) => return Outcome::config_error(&e),
    };
    let result = match command {
        Command::Run => run(&cfg, out),
        Command::CheckThermo { tol, h } => check_thermo(&cfg, tol, h),
        Command::Equilibrium => equilibrium(&cfg),
        Command::Eigen => eigen(&cfg),
    };
    let (code, report) = match result {
        Ok(r) => r,
        Err(e @ (Error::ConfigInvalid(_) | Error::Io(_))) => return Outcome::config_error(&e),
        Err(e) => (ExitCode::Numerical, json!({ "error": e.to_string() })),
    };
    if command != Command::Run {
        if let Some(dir) = out {
            let name = format!("{}_{}.json", cfg.output.prefix, command.name());
            if let Err(e) = write_file(dir, &name, pretty(&report).as_bytes()) {
                return Outcome::config_error(&e);
            }
        }
    }
    let stderr = match code {
        ExitCode::Ok => String::new(),
        _ => format!("{} failed; see report\n", command.name()),
    };
    Outcome { code, stdout: pretty(&report), stderr }
}

type Report = (ExitCode, serde_json::Value);

fn run(cfg: &RunConfig, out: Option<&Path>) -> Result<Report> {
    let params = cfg.model_params()?;
    let grid = require(&cfg.grid, "grid")?;
    let ic = require(&cfg.ic, "ic")?;
    let time = require(&cfg.time, "time")?;
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.directory.clone());
    let prefix = &cfg.output.prefix;
    let initial = ic.fields(&grid);

    match advance(&initial, &grid, &params, &time, Some(cfg.output.every.unwrap_or(u64::MAX))) {
        Ok(tr) => {
            let files = write_run_files(&dir, prefix, &grid, &params, &tr)?;
            let summary = json!({
                "status": "completed",
                "config": cfg,
                "steps": tr.steps,
                "t": tr.t,
                "stop": tr.stop,
                "clamp_count": tr.clamp_count,
                "initial_monitors": tr.monitors.first(),
                "final_monitors": tr.monitors.last(),
                "files": files,
            });
            write_file(&dir, &format!("{prefix}_summary.json"), pretty(&summary).as_bytes())?;
            Ok((ExitCode::Ok, summary))
        }
        Err(abort) => {
            let report = dump_abort(&dir, prefix, &grid, &params, cfg, &abort)?;
            Ok((ExitCode::Numerical, report))
        }
    }
}

fn write_run_files(
    dir: &Path,
    prefix: &str,
    grid: &Grid1D,
    params: &ModelParams,
    tr: &Trajectory,
) -> Result<Vec<String>> {
    let mut files = Vec::new();
    for snap in &tr.snapshots {
        let mut buf = Vec::new();
        write_snapshot(&mut buf, grid, &snap.fields, params)?;
        let name = format!("{prefix}_step{:08}.csv", snap.step);
        write_file(dir, &name, &buf)?;
        files.push(name);
    }
    let mut buf = Vec::new();
    write_monitors(&mut buf, &tr.monitors)?;
    let name = format!("{prefix}_monitors.csv");
    write_file(dir, &name, &buf)?;
    files.push(name);
    Ok(files)
}

fn dump_abort(
    dir: &Path,
    prefix: &str,
    grid: &Grid1D,
    params: &ModelParams,
    cfg: &RunConfig,
    abort: &Abort,
) -> Result<serde_json::Value> {
    let mut buf = Vec::new();
    write_monitors(&mut buf, &abort.monitors)?;
    write_file(dir, &format!("{prefix}_monitors.csv"), &buf)?;
    // raw cell values; the failing state may not be evaluable
    let cells = serde_json::to_value(&abort.fields.cells).expect("cells are serializable");
    let report = json!({
        "status": "aborted",
        "error": abort.error.to_string(),
        "step": abort.step,
        "t": abort.t,
        "config": cfg,
        "x": grid.centers(),
        "cells": cells,
    });
    let mut snap = Vec::new();
    if write_snapshot(&mut snap, grid, &abort.fields, params).is_ok() {
        write_file(dir, &format!("{prefix}_abort_fields.csv"), &snap)?;
    }
    write_file(dir, &format!("{prefix}_abort.json"), pretty(&report).as_bytes())?;
    Ok(report)
}

fn check_thermo(cfg: &RunConfig, tol: Option<f64>, h: Option<f64>) -> Result<Report> {
    let mut check = cfg.check;
    if let Some(t) = tol {
        check.tol = t;
    }
    if let Some(h) = h {
        check.h = h;
    }
    if !(check.tol > 0.0 && check.h > 0.0) {
        return Err(Error::ConfigInvalid("--tol and --h must be > 0".into()));
    }
    let sweep = |eos: &PhaseEos| eos.gibbs_sweep(check.grid_points, check.h);
    let (p1, p2) = (sweep(&cfg.eos1)?, sweep(&cfg.eos2)?);
    let [lo, hi] = check.s_i_range;
    let iface = cfg.interface.gibbs_duhem_sweep(lo, hi, check.interface_points, check.h);
    let phases_pass = p1.max() < check.tol && p2.max() < check.tol;
    let (iface_json, iface_pass) = match iface {
        Ok(sw) => {
            let ok = sw.max_gibbs_duhem_residual < check.tol && sw.max_energy_slope_residual < check.tol;
            (json!({ "sweep": sw, "pass": ok }), ok)
        }
        Err(e) => (json!({ "error": e.to_string(), "pass": false }), false),
    };
    let pass = phases_pass && iface_pass;
    let report = json!({
        "tol": check.tol,
        "h": check.h,
        "phase1": { "sweep": p1, "pass": p1.max() < check.tol },
        "phase2": { "sweep": p2, "pass": p2.max() < check.tol },
        "interface": iface_json,
        "pass": pass,
    });
    Ok((if pass { ExitCode::Ok } else { ExitCode::Numerical }, report))
}

fn equilibrium(cfg: &RunConfig) -> Result<Report> {
    let block = require(&cfg.equilibrium, "equilibrium")?;
    let fluids = cfg.fluids();
    let sol = match solve_equilibrium(&block.problem, &block.guess.state(), &fluids) {
        Ok(s) => s,
        Err(e) => {
            let report = json!({ "problem": block.problem, "error": e.to_string() });
            return Ok((ExitCode::Numerical, report));
        }
    };
    let ev = fluids.evaluate(&sol.state)?;
    let mut report = json!({
        "problem": block.problem,
        "solution": sol,
        "phases": {
            "T1": ev.phase1.t, "T2": ev.phase2.t, "T_i": ev.interface.t_i,
            "p1": ev.phase1.p, "p2": ev.phase2.p,
            "mu1": ev.phase1.mu, "mu2": ev.phase2.mu,
            "gamma_i": ev.interface.gamma_i,
            "p": ev.mixture.p,
        },
        "grand_potential_slope": grand_potential_slope(&sol.state, &block.problem.closure, &fluids, 1e-6)?,
    });
    if let GeometricClosure::Spherical { .. } = block.problem.closure {
        let r = young_laplace_radius(&sol.state);
        let dp = ev.phase1.p - ev.phase2.p;
        let laplace = 2.0 * ev.interface.gamma_i / r;
        report["young_laplace"] = json!({
            "R": r,
            "p1_minus_p2": dp,
            "two_gamma_over_R": laplace,
            "residual": dp - laplace,
            "relative_residual": (dp - laplace).abs() / ev.phase1.p.abs().max(ev.phase2.p.abs()),
        });
    }
    Ok((ExitCode::Ok, report))
}

fn eigen(cfg: &RunConfig) -> Result<Report> {
    let params = cfg.model_params()?;
    let block = require(&cfg.eigen, "eigen")?;
    let cell = block.cell.cell();
    let analytic = eigen_analytic(&cell, &params)?;
    let system = assemble_quasilinear(&cell, &params)?;
    let numeric = eigen_numeric(&system.matrix);
    let scale = cell.u.abs() + analytic.c_eff.unwrap_or(0.0);
    let (numeric_json, deviation) = match &numeric {
        Ok(n) => {
            let dev = n
                .eigenvalues
                .iter()
                .zip(&analytic.eigenvalues)
                .map(|(a, b)| ((a.re - b.re).abs()).max((a.im - b.im).abs()))
                .fold(0.0, f64::max);
            (serde_json::to_value(n).expect("spectrum is serializable"), Some(dev / scale.max(f64::MIN_POSITIVE)))
        }
        Err(e) => (json!({ "error": e.to_string() }), None),
    };
    let c = analytic.c_eff;
    let rho_scaled_deviation = c.map(|c| (analytic.rho_scaled_acoustic[1] - (cell.u + c)).abs() / scale);
    let basis_condition = analytic_eigenvectors(&cell, &params)
        .ok()
        .map(|v| {
            let sv = v.svd(false, false).singular_values;
            sv.max() / sv.min()
        });
    let report = json!({
        "cell": cell,
        "analytic": analytic,
        "numeric": numeric_json,
        "relative_deviation": deviation,
        "rho_scaled_formula_relative_deviation": rho_scaled_deviation,
        "analytic_basis_condition": basis_condition,
        "hyperbolic_analytic": analytic.hyperbolic,
        "hyperbolic_numeric": numeric.as_ref().map(|n| n.hyperbolic).unwrap_or(false),
    });
    Ok((ExitCode::Ok, report))
}
