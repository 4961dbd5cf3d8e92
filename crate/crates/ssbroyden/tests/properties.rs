//! Property-based invariants for the linear algebra kernels, the
//! Broyden-family updates, and the shipped objectives.

#![cfg(not(feature = "single"))]

use proptest::prelude::*;
use ssbroyden::linalg::{
    dot, rank1_sym_update, spd_factor, sym_matvec, DenseVector, SymmetricMatrix,
};
use ssbroyden::neuralnet::SeededRng;
use ssbroyden::optimizers::{
    bfgs_inverse_update, dfp_inverse_update, minimize, ssbroyden_inverse_update,
    broyden_scaling_chain, ConvergenceCriteria, Method, OptimizerConfig, ScalingQuantities,
};
use ssbroyden::testfns::{grad_check, rosenbrock};
use ssbroyden::trace::{Event, TraceRecord};
use ssbroyden::{Objective, Real};

/// `MᵀM + εI` from a flat coefficient list: SPD by construction.
fn spd_from(m_entries: &[Real], dim: usize, eps: Real) -> SymmetricMatrix {
    let mut a = SymmetricMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..=i {
            let mut v = 0.0;
            for k in 0..dim {
                v += m_entries[k * dim + i] * m_entries[k * dim + j];
            }
            if i == j {
                v += eps;
            }
            a.set(i, j, v);
        }
    }
    a
}

/// Shift `y` along `s` until `yᵀs ≥ 0.3·‖y‖·‖s‖`, keeping the curvature
/// condition comfortably true so every update under test is applicable.
fn enforce_curvature(s: &DenseVector, y: &DenseVector) -> DenseVector {
    let target = 0.3 * y.norm_l2() * s.norm_l2() + 1e-3;
    let ys = dot(y, s);
    if ys >= target {
        return y.clone();
    }
    let shift = (target - ys) / dot(s, s);
    y.add_scaled(shift, s)
}

fn max_elementwise_diff(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Real {
    let mut worst = 0.0;
    for i in 0..a.dim() {
        for j in 0..=i {
            worst = Real::max(worst, (a.get(i, j) - b.get(i, j)).abs());
        }
    }
    worst
}

proptest! {
    #[test]
    fn spd_factor_reconstructs_and_solves(
        dim in 1usize..=6,
        m in prop::collection::vec(-1.5f64..1.5, 36),
        eps in 0.5f64..1.5,
        rhs in prop::collection::vec(-3.0f64..3.0, 6),
    ) {
        let a = spd_from(&m[..dim * dim], dim, eps);
        let chol = spd_factor(&a).expect("MᵀM + εI is SPD");
        let rebuilt = chol.reconstruct();
        let bound = 1e-12 * a.max_abs();
        prop_assert!(max_elementwise_diff(&rebuilt, &a) <= bound);

        let b = DenseVector::new(rhs[..dim].to_vec());
        let x = chol.solve(&b);
        let residual = sym_matvec(&a, &x).sub(&b).norm_l2();
        prop_assert!(residual <= 1e-8 * (1.0 + b.norm_l2()));
    }

    #[test]
    fn sym_matvec_identity_is_exact(
        v in prop::collection::vec(-1e6f64..1e6, 1..=8),
    ) {
        let x = DenseVector::new(v);
        let out = sym_matvec(&SymmetricMatrix::identity(x.len()), &x);
        for i in 0..x.len() {
            prop_assert_eq!(out[i], x[i]);
        }
    }

    #[test]
    fn secant_holds_for_every_update(
        dim in 2usize..=6,
        m in prop::collection::vec(-1.5f64..1.5, 36),
        eps in 0.5f64..1.5,
        s_raw in prop::collection::vec(-2.0f64..2.0, 6),
        y_raw in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let h = spd_from(&m[..dim * dim], dim, eps);
        let mut s = DenseVector::new(s_raw[..dim].to_vec());
        if s.norm_l2() < 0.5 {
            s = s.add_scaled(1.0, &DenseVector::filled(dim, 0.7));
        }
        let mut y = DenseVector::new(y_raw[..dim].to_vec());
        if y.norm_l2() < 0.5 {
            y = y.add_scaled(1.0, &DenseVector::filled(dim, -0.6));
        }
        let y = enforce_curvature(&s, &y);

        // sᵀBs with B = H⁻¹, as trust-region mode would supply it.
        let sbs = dot(&s, &spd_factor(&h).unwrap().solve(&s));
        let yhy = dot(&y, &sym_matvec(&h, &y));
        let ys = dot(&y, &s);
        let q = broyden_scaling_chain(sbs, yhy, ys, dim);

        for h_plus in [
            bfgs_inverse_update(&h, &s, &y),
            dfp_inverse_update(&h, &s, &y),
            ssbroyden_inverse_update(&h, &s, &y, &q),
        ] {
            let gap = sym_matvec(&h_plus, &y).sub(&s).norm_l2();
            // The identity is algebraic; the measured gap also contains the
            // audit matvec's own roundoff, which grows with ‖H⁺‖·‖y‖.
            let bound = 1e-12 * (1.0 + s.norm_l2())
                + 1e-13 * h_plus.norm_fro() * y.norm_l2();
            prop_assert!(gap <= bound, "secant gap {} exceeds {}", gap, bound);
        }
    }

    #[test]
    fn family_corners_match_the_standalone_updates(
        dim in 2usize..=6,
        m in prop::collection::vec(-1.5f64..1.5, 36),
        eps in 0.5f64..1.5,
        s_raw in prop::collection::vec(-2.0f64..2.0, 6),
        y_raw in prop::collection::vec(-2.0f64..2.0, 6),
    ) {
        let h = spd_from(&m[..dim * dim], dim, eps);
        let mut s = DenseVector::new(s_raw[..dim].to_vec());
        if s.norm_l2() < 0.5 {
            s = s.add_scaled(1.0, &DenseVector::filled(dim, 0.7));
        }
        let mut y = DenseVector::new(y_raw[..dim].to_vec());
        if y.norm_l2() < 0.5 {
            y = y.add_scaled(1.0, &DenseVector::filled(dim, -0.6));
        }
        let y = enforce_curvature(&s, &y);
        let ys = dot(&y, &s);
        let sbs = dot(&s, &spd_factor(&h).unwrap().solve(&s));
        let yhy = dot(&y, &sym_matvec(&h, &y));
        let (b, hh) = (sbs / ys, yhy / ys);

        let bfgs = bfgs_inverse_update(&h, &s, &y);
        let family_bfgs =
            ssbroyden_inverse_update(&h, &s, &y, &ScalingQuantities::forced(b, hh, 0.0, 1.0));
        let scale = Real::max(1.0, bfgs.max_abs());
        prop_assert!(max_elementwise_diff(&bfgs, &family_bfgs) <= 1e-14 * scale);

        let dfp = dfp_inverse_update(&h, &s, &y);
        let family_dfp =
            ssbroyden_inverse_update(&h, &s, &y, &ScalingQuantities::forced(b, hh, 1.0, 1.0));
        let scale = Real::max(1.0, dfp.max_abs());
        prop_assert!(max_elementwise_diff(&dfp, &family_dfp) <= 1e-13 * scale);
    }

    #[test]
    fn trace_rows_round_trip_losslessly(
        iter in 1u64..100_000,
        f in -1e30f64..1e30,
        gl2 in 0.0f64..1e20,
        ginf in 0.0f64..1e20,
        alpha in proptest::num::f64::POSITIVE,
        n_fev in 0u64..1_000_000,
        n_gev in 0u64..1_000_000,
        elapsed in 0.0f64..1e6,
    ) {
        let rec = TraceRecord {
            iter,
            f,
            gnorm_l2: gl2,
            gnorm_inf: ginf,
            alpha,
            n_fev,
            n_gev,
            elapsed_s: elapsed,
            event: Event::Normal,
        };
        let row = rec.csv_row();
        let fields: Vec<&str> = row.split(',').collect();
        prop_assert_eq!(fields.len(), 9);
        prop_assert_eq!(fields[0].parse::<u64>().unwrap(), iter);
        // Shortest round-trip serialization: parsing recovers the exact bits.
        prop_assert_eq!(fields[1].parse::<Real>().unwrap().to_bits(), f.to_bits());
        prop_assert_eq!(fields[2].parse::<Real>().unwrap().to_bits(), gl2.to_bits());
        prop_assert_eq!(fields[4].parse::<Real>().unwrap().to_bits(), alpha.to_bits());
        prop_assert_eq!(fields[7].parse::<Real>().unwrap().to_bits(), elapsed.to_bits());
    }

    #[test]
    fn reported_counters_match_the_problem(
        x0 in prop::collection::vec(-1.0f64..1.0, 2),
        method_pick in 0usize..3,
    ) {
        let method = [Method::Bfgs, Method::SsBroyden, Method::Lbfgs][method_pick];
        let mut problem = rosenbrock(2);
        let config = OptimizerConfig {
            method,
            criteria: ConvergenceCriteria { max_iters: 60, ..Default::default() },
            ..Default::default()
        };
        let result = minimize(&mut problem, &config, &DenseVector::new(x0)).unwrap();
        if let Some(last) = result.trace.last() {
            prop_assert_eq!(last.n_fev, problem.counters().n_fev);
            prop_assert_eq!(last.n_gev, problem.counters().n_gev);
        }
    }
}

#[test]
fn rank1_updates_never_break_stored_symmetry() {
    let mut rng = SeededRng::new(11);
    let dim = 5;
    let mut a = SymmetricMatrix::identity(dim);
    for _ in 0..1000 {
        let u = DenseVector::new((0..dim).map(|_| rng.uniform(-2.0, 2.0)).collect());
        let c = rng.uniform(-1.0, 1.0);
        a = rank1_sym_update(&a, c, &u);
        assert!(a.all_finite());
        for i in 0..dim {
            for j in 0..dim {
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
    }
}

#[test]
fn gradients_check_out_at_random_points() {
    // 100 uniform points in [−2, 2]^n per shipped objective; the analytic
    // gradients must agree with central differences everywhere.
    for n in [2, 5, 10, 20] {
        let mut problem = rosenbrock(n);
        let mut rng = SeededRng::new(100 + n as u64);
        let mut worst = 0.0;
        for _ in 0..100 {
            let x = DenseVector::new((0..n).map(|_| rng.uniform(-2.0, 2.0)).collect());
            worst = Real::max(worst, grad_check(&mut problem, &x, 1e-6));
        }
        assert!(worst <= 1e-6, "rosenbrock({n}) worst grad check {worst:e}");
    }
    let mut problem = ssbroyden::testfns::quadratic_xy();
    let mut rng = SeededRng::new(99);
    for _ in 0..100 {
        let x = DenseVector::new((0..2).map(|_| rng.uniform(-2.0, 2.0)).collect());
        assert!(grad_check(&mut problem, &x, 1e-6) <= 1e-6);
    }
}
