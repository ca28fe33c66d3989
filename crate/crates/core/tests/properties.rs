mod common;

use capillar::mixture::{Fluids, MixtureState};
use capillar::model::{
    assemble_quasilinear, eigen_analytic, eigen_numeric, legendre_energy, source_terms, total_energy_density,
    CellEvaluation, ModelParams, PrimCell, NVARS,
};
use capillar::solver1d::{advance, Boundary, Fields, Grid1D, SolverConfig};
use common::*;
use proptest::prelude::*;

prop_compose! {
    fn air_water_state()(
        alpha in 0.02..0.98f64,
        log_p in 4.5..7.0f64,
        dp_frac in -0.2..0.2f64,
        t1 in 270.0..400.0f64,
        t2 in 270.0..400.0f64,
        log_a in -1.0..4.0f64,
        s_i in -0.3..0.3f64,
    ) -> MixtureState {
        let p = 10f64.powf(log_p);
        phasic_state(&air_water(), p, dp_frac * p, t1, t2, alpha, 10f64.powf(log_a), s_i)
    }
}

prop_compose! {
    fn air_water_cell()(
        st in air_water_state(),
        u in -200.0..200.0f64,
        w in -1.0..1.0f64,
        n in -1.0..1.0f64,
        log_m in -2.0..2.0f64,
        log_nu in -2.0..2.0f64,
    ) -> (PrimCell, ModelParams) {
        let params = ModelParams::new(10f64.powf(log_m), 10f64.powf(log_nu), air_water()).unwrap();
        (PrimCell::from_mixture(&st, u, w, n), params)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn numeric_spectrum_matches_analytic((cell, params) in air_water_cell()) {
        let ana = eigen_analytic(&cell, &params).unwrap();
        let num = eigen_numeric(&assemble_quasilinear(&cell, &params).unwrap().matrix).unwrap();
        let scale = cell.u.abs() + ana.c_eff.unwrap();
        for (a, b) in num.eigenvalues.iter().zip(&ana.eigenvalues) {
            prop_assert!((a.re - b.re).abs() <= 1e-8 * scale);
            prop_assert!(a.im.abs() <= 1e-8 * scale);
        }
        prop_assert!(num.complete_basis);
    }

    #[test]
    fn galilean_shift_moves_every_eigenvalue((cell, params) in air_water_cell(), du in -500.0..500.0f64) {
        let base = eigen_analytic(&cell, &params).unwrap();
        let shifted = eigen_analytic(&PrimCell { u: cell.u + du, ..cell }, &params).unwrap();
        prop_assert_eq!(base.c_eff, shifted.c_eff);
        for (a, b) in base.eigenvalues.iter().zip(&shifted.eigenvalues) {
            prop_assert!((b.re - a.re - du).abs() <= 1e-12 * (cell.u.abs() + du.abs() + base.c_eff.unwrap()));
        }
    }

    #[test]
    fn legendre_transform_gives_total_energy((cell, params) in air_water_cell()) {
        let e = total_energy_density(&cell, &params).unwrap();
        let h = legendre_energy(&cell, &params).unwrap();
        let scale = params.fluids.energy_density(&cell.mixture()).unwrap().abs() + 0.5 * cell.rho * cell.u * cell.u;
        prop_assert!((e - h).abs() <= 1e-12 * scale);
    }

    #[test]
    fn p_hat_gradient_matches_finite_differences((cell, params) in air_water_cell()) {
        let ev = CellEvaluation::new(&cell, &params).unwrap();
        let grad = ev.p_hat_gradient(&params).unwrap();
        let f = |v: [f64; NVARS]| CellEvaluation::new(&PrimCell::from_array(v), &params).unwrap().p_hat_quasilinear(&params);
        let x = cell.to_array();
        for k in 0..NVARS {
            let h = 1e-5 * x[k].abs().max(1e-2);
            let (mut lo, mut hi) = (x, x);
            lo[k] -= h;
            hi[k] += h;
            let fd = (f(hi) - f(lo)) / (2.0 * h);
            let scale = f(x).abs() / x[k].abs().max(1e-2);
            prop_assert!((fd - grad[k]).abs() <= 1e-5 * scale.max(grad[k].abs()), "k={} fd={} grad={}", k, fd, grad[k]);
        }
    }

    #[test]
    fn grand_potential_density_is_minus_pressure(st in air_water_state()) {
        let fl = air_water();
        let ev = fl.evaluate(&st).unwrap();
        let scale = st.alpha * ev.phase1.p.abs() + (1.0 - st.alpha) * ev.phase2.p.abs() + st.a_i * ev.interface.gamma_i.abs();
        prop_assert!((ev.mixture.omega + ev.mixture.p).abs() <= 1e-12 * scale);
        let summed = fl.grand_potential_terms(&st).unwrap().weighted_sum(&st);
        prop_assert!((summed + ev.mixture.p).abs() <= 1e-12 * scale);
    }

    #[test]
    fn relabelling_phases_leaves_mixture_unchanged(st in air_water_state()) {
        let fl = air_water();
        let a = fl.evaluate(&st).unwrap().mixture;
        let b = fl.swapped().evaluate(&st.swapped()).unwrap().mixture;
        prop_assert!(rel(a.p, b.p) <= 1e-12);
        prop_assert!((a.e - b.e).abs() <= 1e-12 * (a.e.abs() + a.p.abs() / st.rho));
        prop_assert!(rel(a.omega, b.omega) <= 1e-12);
    }

    #[test]
    fn sources_vanish_at_mechanical_and_capillary_rest(
        alpha in 0.05..0.95f64,
        log_p in 4.5..7.0f64,
        t1 in 270.0..400.0f64,
        t2 in 270.0..400.0f64,
        a_i in 0.1..100.0f64,
    ) {
        // zero tension at s_i = 0 when gamma0 = 0
        let fl = Fluids::new(air(), water(), interface(0.0)).unwrap();
        let st = phasic_state(&fl, 10f64.powf(log_p), 0.0, t1, t2, alpha, a_i, 0.0);
        let mut params = ModelParams::new(1.0, 1.0, fl).unwrap();
        params.lambda_w = 10.0;
        params.lambda_n = 10.0;
        let rates = source_terms(&PrimCell::from_mixture(&st, 3.0, 0.0, 0.0), &params).unwrap();
        let p = 10f64.powf(log_p);
        prop_assert_eq!(rates.alpha, 0.0);
        prop_assert_eq!(rates.a_i, 0.0);
        prop_assert!(rates.w.abs() <= 1e-9 * p);
        prop_assert_eq!(rates.n, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transported_fractions_obey_a_maximum_principle(
        seeds in prop::collection::vec((0.1..0.9f64, 0.5..2.0f64, -30.0..30.0f64), 40),
    ) {
        let fl = single_gas();
        let params = ModelParams::new(1.0, 1.0, fl).unwrap();
        let grid = Grid1D::new(0.0, 1.0, seeds.len(), Boundary::Periodic).unwrap();
        let s = air_entropy(1.2, 1e5);
        let cells: Vec<PrimCell> = seeds
            .iter()
            .map(|&(frac, rho, u)| {
                let st = MixtureState::from_phasic(rho, frac, frac, 1.0, s, s, 0.0);
                PrimCell::from_mixture(&st, u, 0.0, 0.0)
            })
            .collect();
        let fields = Fields { cells };
        let cfg = SolverConfig { enable_sources: false, max_steps: Some(20), ..SolverConfig::new(0.45, 1.0).unwrap() };
        let tr = advance(&fields, &grid, &params, &cfg, None).unwrap();
        let (lo, hi) = seeds.iter().fold((1.0f64, 0.0f64), |(lo, hi), s| (lo.min(s.0), hi.max(s.0)));
        let tol = 1e-12;
        for c in &tr.fields.cells {
            prop_assert!(c.y >= lo - tol && c.y <= hi + tol, "y = {} outside [{}, {}]", c.y, lo, hi);
            prop_assert!(c.alpha >= lo - tol && c.alpha <= hi + tol, "alpha = {} outside [{}, {}]", c.alpha, lo, hi);
        }
    }
}
