//! Cross-method convergence behavior and trajectory-level identities that
//! need a full optimizer run to observe.

#![cfg(not(feature = "single"))]

use ssbroyden::linalg::{dot, quad_form, DenseVector, SymmetricMatrix};
use ssbroyden::neuralnet::poisson_pinnlite;
use ssbroyden::optimizers::{
    minimize, minimize_with_observer, ConvergenceCriteria, Globalization, InitialScaling, Method,
    OptimizerConfig, Status,
};
use ssbroyden::testfns::{quadratic_xy, rosenbrock, AnalyticProblem};
use ssbroyden::Real;

fn quasi_newton_config(method: Method, globalization: Globalization) -> OptimizerConfig {
    OptimizerConfig {
        method,
        globalization,
        criteria: ConvergenceCriteria {
            gtol: 1e-6,
            max_iters: 500,
            ..Default::default()
        },
        ..Default::default()
    }
}

#[test]
fn every_quasi_newton_combination_solves_rosenbrock_2d() {
    let x0 = DenseVector::filled(2, 0.5);
    let mut combos: Vec<(Method, Globalization)> = Vec::new();
    for method in [Method::Bfgs, Method::SsBfgs, Method::SsBroyden] {
        for glob in [
            Globalization::Wolfe,
            Globalization::Backtracking,
            Globalization::TrustRegion,
        ] {
            combos.push((method, glob));
        }
    }
    combos.push((Method::Lbfgs, Globalization::Wolfe));
    combos.push((Method::Lbfgs, Globalization::Backtracking));

    for (method, glob) in combos {
        let mut problem = rosenbrock(2);
        let result = minimize(&mut problem, &quasi_newton_config(method, glob), &x0).unwrap();
        assert_eq!(
            result.status,
            Status::GradTol,
            "{method:?}+{glob:?} ended {}",
            result.status
        );
        assert!(
            result.f_star <= 1e-10,
            "{method:?}+{glob:?} final f {:e}",
            result.f_star
        );
        for i in 0..2 {
            assert!((result.x_star[i] - 1.0).abs() <= 1e-4);
        }
    }
}

/// In line-search mode the driver computes sᵀBs through the identity
/// `B_k s_k = −α_k ∇f_k` without forming B. With `track_direct` the same
/// quantity is available explicitly; along short well-conditioned runs the
/// two agree to 1e−10 relative to the natural scale ‖B‖_F·‖s‖².
#[test]
fn direction_consistency_identity_vs_explicit() {
    for (label, mut problem) in [
        ("quadratic_xy", quadratic_xy()),
        ("rosenbrock(2)", rosenbrock(2)),
    ] {
        let config = OptimizerConfig {
            method: Method::SsBroyden,
            track_direct: true,
            criteria: ConvergenceCriteria {
                gtol: 1e-6,
                max_iters: 200,
                ..Default::default()
            },
            ..Default::default()
        };
        let x0 = DenseVector::filled(2, 0.5);
        let mut prev_g: Option<DenseVector> = None;
        let mut prev_b: Option<SymmetricMatrix> = None;
        let mut worst_ratio = 0.0f64;
        minimize_with_observer(&mut problem, &config, &x0, &mut |info| {
            if let (Some(g0), Some(b0), Some(s)) = (prev_g.as_ref(), prev_b.as_ref(), info.s) {
                let explicit = quad_form(b0, s);
                let identity = -info.alpha * dot(s, g0);
                let scale = Real::max(b0.norm_fro() * dot(s, s), 1e-300);
                worst_ratio = Real::max(worst_ratio, (explicit - identity).abs() / scale);
            }
            prev_g = Some(info.g.clone());
            prev_b = info.b_direct.cloned();
        })
        .unwrap();
        assert!(
            worst_ratio <= 1e-10,
            "{label}: sᵀBs mismatch ratio {worst_ratio:e}"
        );
    }
}

/// L-BFGS with memory covering the whole run and identity initial scaling
/// takes the same steps as dense BFGS on small problems.
#[test]
fn unbounded_memory_lbfgs_walks_the_dense_bfgs_path() {
    for (label, factory) in [
        ("quadratic_xy", quadratic_xy as fn() -> AnalyticProblem),
        ("rosenbrock(2)", || rosenbrock(2)),
    ] {
        let criteria = ConvergenceCriteria {
            gtol: 1e-6,
            max_iters: 100,
            ..Default::default()
        };
        let x0 = DenseVector::filled(2, 0.5);

        let mut dense_steps: Vec<DenseVector> = Vec::new();
        let mut problem = factory();
        let config = OptimizerConfig {
            method: Method::Bfgs,
            criteria,
            ..Default::default()
        };
        minimize_with_observer(&mut problem, &config, &x0, &mut |info| {
            if let Some(s) = info.s {
                dense_steps.push(s.clone());
            }
        })
        .unwrap();

        let mut lbfgs_steps: Vec<DenseVector> = Vec::new();
        let mut problem = factory();
        let config = OptimizerConfig {
            method: Method::Lbfgs,
            lbfgs_memory: 200,
            lbfgs_scaling: InitialScaling::Identity,
            criteria,
            ..Default::default()
        };
        minimize_with_observer(&mut problem, &config, &x0, &mut |info| {
            if let Some(s) = info.s {
                lbfgs_steps.push(s.clone());
            }
        })
        .unwrap();

        assert_eq!(dense_steps.len(), lbfgs_steps.len(), "{label}");
        let mut worst = 0.0f64;
        for (a, b) in dense_steps.iter().zip(&lbfgs_steps) {
            worst = Real::max(worst, a.sub(b).norm_l2() / (1.0 + a.norm_l2()));
        }
        assert!(worst <= 1e-10, "{label}: L-BFGS diverged from BFGS: {worst:e}");
    }
}

#[test]
fn pinn_loss_decreases_monotonically_under_line_search() {
    let mut problem = poisson_pinnlite(&[1, 16, 16, 1], 64, 1e-4, 1.0, 100.0, 7);
    let x0 = problem.initial_params();
    let config = OptimizerConfig {
        method: Method::SsBroyden,
        criteria: ConvergenceCriteria {
            gtol: 1e-10,
            max_iters: 150,
            ..Default::default()
        },
        ..Default::default()
    };
    let result = minimize(&mut problem, &config, &x0).unwrap();
    assert!(result.trace.len() >= 50, "run ended after {}", result.trace.len());
    let mut prev = Real::INFINITY;
    for rec in &result.trace {
        assert!(
            rec.f < prev,
            "loss rose at iteration {}: {} -> {}",
            rec.iter,
            prev,
            rec.f
        );
        prev = rec.f;
    }
}

#[test]
fn pinn_reruns_are_bit_identical_for_ten_iterations() {
    let run = || {
        let mut problem = poisson_pinnlite(&[1, 16, 16, 1], 64, 1e-4, 1.0, 100.0, 13);
        let x0 = problem.initial_params();
        let config = OptimizerConfig {
            method: Method::Bfgs,
            criteria: ConvergenceCriteria {
                max_iters: 10,
                ..Default::default()
            },
            ..Default::default()
        };
        minimize(&mut problem, &config, &x0).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.trace.len(), b.trace.len());
    for (ra, rb) in a.trace.iter().zip(&b.trace) {
        assert_eq!(ra.f.to_bits(), rb.f.to_bits());
        assert_eq!(ra.gnorm_l2.to_bits(), rb.gnorm_l2.to_bits());
        assert_eq!(ra.alpha.to_bits(), rb.alpha.to_bits());
    }
    for i in 0..a.x_star.len() {
        assert_eq!(a.x_star[i].to_bits(), b.x_star[i].to_bits());
    }
}
