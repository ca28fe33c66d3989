//! Eigenstructure of the quasilinear matrix, in closed form and by a generic numerical route.
//!
//! The matrix has `u` on the diagonal, `rho` in entry `(0, 1)` and the scaled
//! gradient of the effective pressure in row 1. Its characteristic polynomial
//! is `(u - lambda)^8 ((u - lambda)^2 - d p_hat / d rho)`.

use nalgebra::{Complex, SMatrix, Schur, SVD};
use serde::{Deserialize, Serialize};

use super::{CellEvaluation, ModelParams, PrimCell, NVARS};
use crate::error::{Error, Result};

type Mat = SMatrix<f64, NVARS, NVARS>;

/// Bound on the condition number of a complete eigenbasis.
pub const MAX_BASIS_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.total_cmp(&other.re).then(self.im.total_cmp(&other.im))
    }
}

impl From<Complex<f64>> for Eigenvalue {
    fn from(c: Complex<f64>) -> Self {
        Self { re: c.re, im: c.im }
    }
}

pub fn sort_eigenvalues(v: &mut [Eigenvalue]) {
    v.sort_by(Eigenvalue::cmp);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSpectrum {
    pub u: f64,
    /// `d p_hat / d rho`, the squared effective sound speed when positive.
    pub dp_hat_drho: f64,
    pub c_eff: Option<f64>,
    /// All ten eigenvalues in ascending order.
    pub eigenvalues: Vec<Eigenvalue>,
    pub hyperbolic: bool,
    /// `u -/+ rho sqrt(y c1^2 + (1 - y) c2^2 + m (y w)^2 + nu (y n)^2)`.
    pub rho_scaled_acoustic: [f64; 2],
    /// `u -/+ sqrt(rho dp_hat/drho)`, obtained when row 1 is not divided by `rho`.
    pub unscaled_acoustic: Option<[f64; 2]>,
}

/// The two eigenvalues `u -/+ sqrt(dp_drho)`, complex when `dp_drho < 0`.
pub fn acoustic_pair(u: f64, dp_drho: f64) -> [Eigenvalue; 2] {
    if dp_drho >= 0.0 {
        let c = dp_drho.sqrt();
        [Eigenvalue::real(u - c), Eigenvalue::real(u + c)]
    } else {
        let c = (-dp_drho).sqrt();
        [Eigenvalue { re: u, im: -c }, Eigenvalue { re: u, im: c }]
    }
}

pub fn eigen_analytic(cell: &PrimCell, params: &ModelParams) -> Result<AnalyticSpectrum> {
    let ev = CellEvaluation::new(cell, params)?;
    let g0 = ev.dp_hat_drho(params);
    let u = cell.u;
    let mut eigenvalues = vec![Eigenvalue::real(u); NVARS - 2];
    eigenvalues.extend(acoustic_pair(u, g0));
    sort_eigenvalues(&mut eigenvalues);

    let (y, w, n) = (cell.y, cell.w, cell.n);
    let scaled = cell.rho
        * (y * ev.thermo.phase1.c2
            + (1.0 - y) * ev.thermo.phase2.c2
            + params.m * (y * w).powi(2)
            + params.nu * (y * n).powi(2))
        .sqrt();
    let unscaled = (g0 > 0.0).then(|| {
        let c = (cell.rho * g0).sqrt();
        [u - c, u + c]
    });
    Ok(AnalyticSpectrum {
        u,
        dp_hat_drho: g0,
        c_eff: (g0 > 0.0).then(|| g0.sqrt()),
        eigenvalues,
        hyperbolic: g0 > 0.0,
        rho_scaled_acoustic: [u - scaled, u + scaled],
        unscaled_acoustic: unscaled,
    })
}

/// Closed-form right eigenvectors, one per column, ordered as
/// `u - c`, `u + c`, then the eight `u` vectors for columns 2..10.
pub fn analytic_eigenvectors(cell: &PrimCell, params: &ModelParams) -> Result<Mat> {
    let ev = CellEvaluation::new(cell, params)?;
    let grad = ev.p_hat_gradient(params)?;
    let g0 = grad[0];
    if g0 <= 0.0 {
        return Err(Error::InvalidState(format!("d p_hat/d rho = {g0} is not positive")));
    }
    let c = g0.sqrt();
    let mut v = Mat::zeros();
    v[(0, 0)] = cell.rho;
    v[(1, 0)] = -c;
    v[(0, 1)] = cell.rho;
    v[(1, 1)] = c;
    for j in 2..NVARS {
        v[(j, j)] = 1.0;
        v[(0, j)] = -grad[j] / g0;
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSpectrum {
    /// Eigenvalues in ascending order of real, then imaginary part.
    pub eigenvalues: Vec<Eigenvalue>,
    pub max_abs_imag: f64,
    pub all_real: bool,
    /// Condition number of the unit-column real eigenbasis, when one was assembled.
    pub basis_condition: Option<f64>,
    pub complete_basis: bool,
    pub hyperbolic: bool,
}

/// Power-of-two diagonal similarity `D^-1 A D` reducing row/column norm disparity.
fn balance(a: &Mat) -> (Mat, [f64; NVARS]) {
    const RADIX: f64 = 2.0;
    let mut b = *a;
    let mut d = [1.0; NVARS];
    let mut done = false;
    while !done {
        done = true;
        for i in 0..NVARS {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..NVARS {
                if j != i {
                    c += b[(j, i)].abs();
                    r += b[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                d[i] *= f;
                for j in 0..NVARS {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
    }
    (b, d)
}

fn ascending_singular(svd: &SVD<f64, nalgebra::Const<NVARS>, nalgebra::Const<NVARS>>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..NVARS).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    idx
}

/// Numerical eigen-decomposition through a real Schur form.
///
/// Eigenvalues within `1e-6 |B|` of each other are grouped and each group's
/// null space is taken from an SVD; the basis is complete when every group
/// has the geometric multiplicity of its size and the assembled basis has
/// condition number below [`MAX_BASIS_CONDITION`].
pub fn eigen_numeric(c: &Mat) -> Result<NumericSpectrum> {
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidState("non-finite quasilinear matrix".into()));
    }
    let (b, d) = balance(c);
    let schur = Schur::try_new(b, f64::EPSILON, 1000 * NVARS).ok_or(Error::ConvergenceFailure)?;
    let mut eigenvalues: Vec<Eigenvalue> =
        schur.complex_eigenvalues().iter().map(|z| Eigenvalue::from(*z)).collect();
    sort_eigenvalues(&mut eigenvalues);

    let norm = b.norm().max(f64::MIN_POSITIVE);
    let tol = 1e-6 * norm;
    let max_abs_imag = eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let all_real = max_abs_imag <= tol;

    let (basis_condition, complete_basis) = if all_real {
        real_basis(&b, &d, &eigenvalues, tol)
    } else {
        (None, false)
    };
    Ok(NumericSpectrum {
        eigenvalues,
        max_abs_imag,
        all_real,
        basis_condition,
        complete_basis,
        hyperbolic: all_real && complete_basis,
    })
}

fn real_basis(b: &Mat, d: &[f64; NVARS], eigenvalues: &[Eigenvalue], tol: f64) -> (Option<f64>, bool) {
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for z in eigenvalues {
        match clusters.last_mut() {
            Some(cl) if z.re - cl[cl.len() - 1] <= tol => cl.push(z.re),
            _ => clusters.push(vec![z.re]),
        }
    }
    let mut v = Mat::zeros();
    let mut col = 0;
    let mut complete = true;
    for cl in &clusters {
        let k = cl.len();
        let lambda = cl.iter().sum::<f64>() / k as f64;
        let shifted = b - Mat::identity() * lambda;
        let svd = SVD::new(shifted, false, true);
        let v_t = match svd.v_t {
            Some(v_t) => v_t,
            None => return (None, false),
        };
        let idx = ascending_singular(&svd);
        if svd.singular_values[idx[k - 1]] > tol {
            complete = false;
        }
        for &i in idx.iter().take(k) {
            for r in 0..NVARS {
                v[(r, col)] = d[r] * v_t[(i, r)];
            }
            let norm = v.column(col).norm();
            v.column_mut(col).scale_mut(1.0 / norm);
            col += 1;
        }
    }
    let sv = SVD::new(v, false, false).singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let cond_out = cond.is_finite().then_some(cond);
    (cond_out, complete && cond < MAX_BASIS_CONDITION)
}
