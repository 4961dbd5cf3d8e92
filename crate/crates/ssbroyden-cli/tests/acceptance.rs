//! Acceptance suite: eleven end-to-end checks, one per release criterion.
//!
//! Each test is independently runnable and prints the measured margins with
//! `--nocapture`. The checks cover benchmark-table parity against published
//! reference step counts, the first-order baseline gap, Broyden-family
//! algebra, the scaling-chain reference values, in-flight secant/SPD/Wolfe/
//! trust-region audits, backprop fidelity against finite differences,
//! collocation-problem quality, limited-memory equivalence, and bitwise CLI
//! determinism.

use std::process::Command;
use std::time::Instant;

use ssbroyden::linalg::{dot, quad_form, spd_factor, sym_matvec};
use ssbroyden::linesearch::{backtracking, LineRestriction, LineSearchConfig};
use ssbroyden::neuralnet::{
    poisson_pinnlite, regression_problem, sin_2pi, MlpProblem, SeededRng, DEFAULT_FD_H,
    DEFAULT_LAMBDA_BC, DEFAULT_LAMBDA_PDE, DEFAULT_N_COLLOC, DEFAULT_PINN_ARCH,
};
use ssbroyden::optimizers::{
    bfgs_inverse_update, broyden_scaling_chain, dfp_inverse_update, minimize,
    minimize_with_observer, ssbroyden_inverse_update, ConvergenceCriteria, Globalization, GradNorm,
    InitialScaling, Method, OptimizerConfig, ScalingQuantities, Status,
};
use ssbroyden::testfns::{quadratic_xy, rosenbrock};
use ssbroyden::trace::Event;
use ssbroyden::trustregion::dogleg;
use ssbroyden::{DenseVector, Objective, Real, SymmetricMatrix};

/// Benchmark-table protocol: strong-Wolfe line search, start at 0.5·𝟙,
/// stop when the Euclidean gradient norm falls below 1e-6, cap at 5000.
fn table_config(method: Method) -> OptimizerConfig {
    OptimizerConfig {
        method,
        globalization: Globalization::Wolfe,
        criteria: ConvergenceCriteria {
            gtol: 1e-6,
            gnorm: GradNorm::L2,
            max_iters: 5000,
            ..ConvergenceCriteria::default()
        },
        ..OptimizerConfig::default()
    }
}

fn half_fill(dim: usize) -> DenseVector {
    DenseVector::filled(dim, 0.5)
}

fn max_abs_diff(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Real {
    assert_eq!(a.dim(), b.dim(), "dimension mismatch in matrix comparison");
    let mut worst: Real = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            worst = worst.max((a.get(i, j) - b.get(i, j)).abs());
        }
    }
    worst
}

/// A = MᵀM + I with M ~ U(−1, 1)ⁿˣⁿ: symmetric positive definite with
/// eigenvalues ≥ 1 and entries of moderate size.
fn random_spd(rng: &mut SeededRng, n: usize) -> SymmetricMatrix {
    let m: Vec<Real> = (0..n * n).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let mut a = SymmetricMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = if i == j { 1.0 } else { 0.0 };
            for k in 0..n {
                acc += m[k * n + i] * m[k * n + j];
            }
            a.set(i, j, acc);
        }
    }
    a
}

fn unit_vec(rng: &mut SeededRng, n: usize) -> DenseVector {
    loop {
        let v = DenseVector::new((0..n).map(|_| rng.uniform(-1.0, 1.0)).collect());
        let norm = v.norm_l2();
        if norm > 0.1 {
            return v.scale(1.0 / norm);
        }
    }
}

// ---------------------------------------------------------------------------
// 1. Rosenbrock table parity.
// ---------------------------------------------------------------------------

/// The three dense quasi-Newton columns of the Rosenbrock benchmark table
/// reach the reference solution in step counts bracketing the published
/// ones. The reference counts were produced by a different strong-Wolfe
/// implementation, so exact step parity is not a meaningful target; the
/// bracket [r − 8, 2r + 10] absorbs line-search internals while the loss
/// and parameter tolerances pin the solution itself.
#[test]
fn criterion_01_rosenbrock_table_parity() {
    let started = Instant::now();
    let dims = [2usize, 5, 10, 20];
    let cases: [(Method, &str, [u64; 4]); 3] = [
        (Method::Bfgs, "bfgs", [17, 26, 43, 60]),
        (Method::SsBfgs, "ssbfgs", [19, 31, 49, 70]),
        (Method::SsBroyden, "ssbroyden", [17, 27, 57, 81]),
    ];
    for (method, name, reference) in &cases {
        for (slot, &dim) in dims.iter().enumerate() {
            let mut problem = rosenbrock(dim);
            let res = minimize(&mut problem, &table_config(*method), &half_fill(dim))
                .expect("table cell run");
            assert_eq!(
                res.status,
                Status::GradTol,
                "{name} dim {dim}: expected gradient-norm convergence, got {:?}",
                res.status
            );
            assert!(
                res.f_star <= 1e-12,
                "{name} dim {dim}: final loss {:.3e} above 1e-12",
                res.f_star
            );
            for i in 0..dim {
                assert!(
                    (res.x_star[i] - 1.0).abs() <= 1e-5,
                    "{name} dim {dim}: x[{i}] = {} is not within 1e-5 of 1",
                    res.x_star[i]
                );
            }
            let r = reference[slot];
            let (lo, hi) = (r - 8, 2 * r + 10);
            let iters = res.iters();
            assert!(
                (lo..=hi).contains(&iters),
                "{name} dim {dim}: {iters} steps outside [{lo}, {hi}] around reference {r}"
            );
            eprintln!(
                "criterion 01: {name:<9} dim {dim:>2}: {iters:>3} steps (reference {r:>3}), \
                 f* = {:.2e}",
                res.f_star
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < 5.0,
        "table reproduction took {elapsed:.2} s, budget is 5 s"
    );
    eprintln!("[PASS] criterion 01: rosenbrock table parity ({elapsed:.2} s)");
}

// ---------------------------------------------------------------------------
// 2. First-order baselines lag by an order of magnitude.
// ---------------------------------------------------------------------------

/// Gradient descent exhausts its 5000-step budget far from the minimizer,
/// and every quasi-Newton variant reaches loss 1e-10 in at most a tenth of
/// the steps Adam needs.
#[test]
fn criterion_02_first_order_baselines_lag() {
    let dim = 2usize;
    let x0 = half_fill(dim);

    let mut gd_config = table_config(Method::Gd);
    gd_config.globalization = Globalization::Backtracking;
    let mut problem = rosenbrock(dim);
    let gd = minimize(&mut problem, &gd_config, &x0).expect("gd run");
    assert_eq!(
        gd.status,
        Status::MaxIters,
        "gradient descent unexpectedly converged: {:?}",
        gd.status
    );
    assert!(
        gd.f_star >= 1e-6,
        "gradient descent got to {:.3e}, closer than the expected stall",
        gd.f_star
    );

    // Adam at its stock settings, run far past the quasi-Newton budgets so
    // the first crossing of 1e-10 is observed rather than censored.
    let mut adam_config = OptimizerConfig {
        method: Method::Adam,
        ..OptimizerConfig::default()
    };
    adam_config.criteria.gtol = 1e-300;
    adam_config.criteria.max_iters = 20_000;
    let mut problem = rosenbrock(dim);
    let adam = minimize(&mut problem, &adam_config, &x0).expect("adam run");
    let adam_steps = adam
        .trace
        .iter()
        .find(|rec| rec.f <= 1e-10)
        .map(|rec| rec.iter)
        .expect("adam never reached loss 1e-10 within 20000 steps");

    for method in [Method::Bfgs, Method::SsBfgs, Method::SsBroyden, Method::Lbfgs] {
        let mut problem = rosenbrock(dim);
        let res = minimize(&mut problem, &table_config(method), &x0).expect("qn run");
        let qn_steps = res
            .trace
            .iter()
            .find(|rec| rec.f <= 1e-10)
            .map(|rec| rec.iter)
            .unwrap_or_else(|| panic!("{method:?} never reached loss 1e-10"));
        assert!(
            10 * qn_steps <= adam_steps,
            "{method:?} took {qn_steps} steps to 1e-10, adam took {adam_steps}: \
             less than a 10x gap"
        );
        eprintln!(
            "criterion 02: {method:?} reached 1e-10 in {qn_steps} steps vs adam's {adam_steps}"
        );
    }
    eprintln!(
        "[PASS] criterion 02: gd stalls at {:.2e}, adam needs {adam_steps} steps to 1e-10",
        gd.f_star
    );
}

// ---------------------------------------------------------------------------
// 3. Family corners recover the classical updates.
// ---------------------------------------------------------------------------

/// Forcing (θ, τ) = (0, 1) must reproduce the BFGS inverse update and
/// (θ, τ) = (1, 1) the DFP inverse update, across 1000 random SPD matrices
/// and curvature-respecting update pairs.
#[test]
fn criterion_03_family_corners_recover_bfgs_and_dfp() {
    let mut rng = SeededRng::new(2024);
    let mut worst_bfgs: Real = 0.0;
    let mut worst_dfp: Real = 0.0;
    for trial in 0..1000 {
        let n = 2 + (rng.next_u64() % 4) as usize;
        let h = random_spd(&mut rng, n);
        // Unit directions with a firm curvature floor keep every update
        // term O(1), so the absolute comparison below measures formula
        // agreement rather than magnitude-amplified roundoff.
        let s = unit_vec(&mut rng, n);
        let y = {
            let raw = unit_vec(&mut rng, n);
            let lift = (0.5 - dot(&raw, &s)).max(0.0);
            let shifted = raw.add_scaled(lift, &s);
            shifted.scale(1.0 / shifted.norm_l2())
        };
        let ys = dot(&y, &s);
        assert!(ys > 0.15, "trial {trial}: sampler lost the curvature floor ({ys})");

        // Scalars b = sᵀBs/yᵀs (B = H⁻¹) and h = yᵀHy/yᵀs feed the forced
        // corners; with θ pinned they only shape bookkeeping, not the step.
        let factor = spd_factor(&h).expect("MᵀM + I is SPD");
        let b_scalar = dot(&s, &factor.solve(&s)) / ys;
        let h_scalar = quad_form(&h, &y) / ys;

        let q_bfgs = ScalingQuantities::forced(b_scalar, h_scalar, 0.0, 1.0);
        let via_family = ssbroyden_inverse_update(&h, &s, &y, &q_bfgs);
        let direct = bfgs_inverse_update(&h, &s, &y);
        let diff = max_abs_diff(&via_family, &direct);
        worst_bfgs = worst_bfgs.max(diff);
        assert!(
            diff <= 1e-14,
            "trial {trial}: forced (0, 1) differs from BFGS by {diff:.3e}"
        );

        let q_dfp = ScalingQuantities::forced(b_scalar, h_scalar, 1.0, 1.0);
        let via_family = ssbroyden_inverse_update(&h, &s, &y, &q_dfp);
        let direct = dfp_inverse_update(&h, &s, &y);
        let diff = max_abs_diff(&via_family, &direct);
        worst_dfp = worst_dfp.max(diff);
        assert!(
            diff <= 1e-13,
            "trial {trial}: forced (1, 1) differs from DFP by {diff:.3e}"
        );
    }
    eprintln!(
        "[PASS] criterion 03: 1000 corner trials, max |Δ| bfgs {worst_bfgs:.3e}, \
         dfp {worst_dfp:.3e}"
    );
}

// ---------------------------------------------------------------------------
// 4. Scaling-chain reference values.
// ---------------------------------------------------------------------------

/// The worked reference case H = ½I₂, s = (1, 0), y = (1, 1): the chain
/// must produce θ = −½, τ = ½, φ = 3 and the update H⁺ = [[3, −2], [−2, 2]].
/// The guide's self-scaling chapter derives every intermediate by hand.
#[test]
fn criterion_04_scaling_chain_reference_values() {
    // sᵀBs = 2 (B = H⁻¹ = 2I), yᵀHy = 1, yᵀs = 1, n = 2.
    let q = broyden_scaling_chain(2.0, 1.0, 1.0, 2);
    assert!(!q.degenerate, "reference case must not trip the degenerate guard");
    assert_eq!(q.b, 2.0, "b = sᵀBs/yᵀs");
    assert_eq!(q.h, 1.0, "h = yᵀHy/yᵀs");
    assert!((q.theta - (-0.5)).abs() <= 1e-14, "θ = {}", q.theta);
    assert!((q.tau - 0.5).abs() <= 1e-14, "τ = {}", q.tau);
    assert!((q.phi - 3.0).abs() <= 1e-14, "φ = {}", q.phi);

    let h = SymmetricMatrix::scaled_identity(2, 0.5);
    let s = DenseVector::new(vec![1.0, 0.0]);
    let y = DenseVector::new(vec![1.0, 1.0]);
    let h_plus = ssbroyden_inverse_update(&h, &s, &y, &q);
    let expected = SymmetricMatrix::from_rows(2, &[3.0, -2.0, -2.0, 2.0]);
    let diff = max_abs_diff(&h_plus, &expected);
    assert!(diff <= 1e-14, "H⁺ deviates from the reference by {diff:.3e}");
    eprintln!(
        "[PASS] criterion 04: θ = {}, τ = {}, φ = {}, max |ΔH⁺| = {diff:.3e}",
        q.theta, q.tau, q.phi
    );
}

// ---------------------------------------------------------------------------
// 5. Secant equation and positive definiteness, audited in flight.
// ---------------------------------------------------------------------------

/// Every accepted iteration of every benchmark-table run keeps the inverse
/// approximation SPD (Cholesky succeeds) and satisfies the secant equation
/// H⁺y = s to 1e-12·(1 + ‖s‖). The collocation run is audited with an
/// extra allowance for the audit matvec's own roundoff, which grows with
/// ‖H‖_F·‖y‖ once the approximation's norm climbs to ~1e9 near the loss
/// floor.
#[test]
fn criterion_05_secant_and_spd_audits() {
    let mut audited = 0u64;
    let mut worst_ratio: Real = 0.0;
    for method in [Method::Bfgs, Method::SsBfgs, Method::SsBroyden] {
        for dim in [2usize, 5, 10, 20] {
            let mut problem = rosenbrock(dim);
            let res = minimize_with_observer(
                &mut problem,
                &table_config(method),
                &half_fill(dim),
                &mut |info| {
                    if !info.accepted {
                        return;
                    }
                    let Some(h) = info.h_inv else { return };
                    spd_factor(h).unwrap_or_else(|_| {
                        panic!(
                            "{method:?} dim {dim}: H lost positive definiteness at \
                             iteration {}",
                            info.iter
                        )
                    });
                    if info.event == Event::SkippedUpdate {
                        return; // no update was applied at this step
                    }
                    if let (Some(s), Some(y)) = (info.s, info.y) {
                        let residual = sym_matvec(h, y).sub(s).norm_l2();
                        let bound = 1e-12 * (1.0 + s.norm_l2());
                        assert!(
                            residual <= bound,
                            "{method:?} dim {dim} iteration {}: ‖H⁺y − s‖ = {residual:.3e} \
                             above {bound:.3e}",
                            info.iter
                        );
                        worst_ratio = worst_ratio.max(residual / (1.0 + s.norm_l2()));
                        audited += 1;
                    }
                },
            )
            .expect("table cell run");
            assert_eq!(res.status, Status::GradTol, "{method:?} dim {dim} diverged");
        }
    }
    assert!(audited >= 400, "only {audited} secant audits ran; expected the full table");

    // Collocation run: same audits, roundoff-aware secant bound.
    let mut problem = poisson_pinnlite(
        &DEFAULT_PINN_ARCH,
        DEFAULT_N_COLLOC,
        DEFAULT_FD_H,
        DEFAULT_LAMBDA_PDE,
        DEFAULT_LAMBDA_BC,
        7,
    );
    let x0 = problem.initial_params();
    let mut config = table_config(Method::SsBroyden);
    config.criteria.gtol = 1e-300;
    config.criteria.max_iters = 2000;
    let mut pinn_audited = 0u64;
    minimize_with_observer(&mut problem, &config, &x0, &mut |info| {
        if !info.accepted {
            return;
        }
        let Some(h) = info.h_inv else { return };
        spd_factor(h).unwrap_or_else(|_| {
            panic!("collocation run: H lost positive definiteness at iteration {}", info.iter)
        });
        if info.event == Event::SkippedUpdate {
            return;
        }
        if let (Some(s), Some(y)) = (info.s, info.y) {
            let residual = sym_matvec(h, y).sub(s).norm_l2();
            let bound = 1e-12 * (1.0 + s.norm_l2()) + 1e-13 * h.norm_fro() * y.norm_l2();
            assert!(
                residual <= bound,
                "collocation iteration {}: ‖H⁺y − s‖ = {residual:.3e} above {bound:.3e} \
                 (‖H‖_F = {:.3e})",
                info.iter,
                h.norm_fro()
            );
            pinn_audited += 1;
        }
    })
    .expect("collocation run");
    assert!(pinn_audited >= 100, "only {pinn_audited} collocation audits ran");
    eprintln!(
        "[PASS] criterion 05: {audited} table audits (worst ratio {worst_ratio:.3e}) + \
         {pinn_audited} collocation audits, SPD everywhere"
    );
}

// ---------------------------------------------------------------------------
// 6. Line-search conditions, re-verified outside the search.
// ---------------------------------------------------------------------------

/// Re-derives both strong-Wolfe inequalities (c₁ = 1e-4, c₂ = 0.9) at every
/// accepted step of the table runs from raw iterates, replays the
/// backtracking ladder to show the accepted α passes Armijo while α/ρ does
/// not, and pins the quadratic hand example that accepts α = ½ exactly.
#[test]
fn criterion_06_line_search_conditions() {
    let cfg = LineSearchConfig::default();
    assert_eq!(cfg.c1, 1e-4, "audit assumes the stock Armijo constant");
    assert_eq!(cfg.c2, 0.9, "audit assumes the stock curvature constant");

    // (a) Strong Wolfe across the twelve table runs. The audit rebuilds
    // the search direction from the previous iterate's H and g — the same
    // deterministic expressions the driver uses — so both inequalities are
    // re-verified bitwise, with no slack.
    let mut wolfe_audits = 0u64;
    for method in [Method::Bfgs, Method::SsBfgs, Method::SsBroyden] {
        for dim in [2usize, 5, 10, 20] {
            let mut problem = rosenbrock(dim);
            let mut prev: Option<(Real, DenseVector, SymmetricMatrix)> = None;
            minimize_with_observer(
                &mut problem,
                &table_config(method),
                &half_fill(dim),
                &mut |info| {
                    if let (Some((pf, pg, ph)), true) = (&prev, info.s.is_some()) {
                        let p = sym_matvec(ph, pg).scale(-1.0);
                        let slope0 = dot(pg, &p);
                        assert!(slope0 < 0.0, "accepted step along a non-descent direction");
                        let alpha = info.alpha;
                        assert!(
                            info.f <= pf + cfg.c1 * alpha * slope0,
                            "{method:?} dim {dim} iteration {}: Armijo fails: \
                             f = {:.17e}, bound = {:.17e}",
                            info.iter,
                            info.f,
                            pf + cfg.c1 * alpha * slope0
                        );
                        // Salvaged steps only guarantee sufficient decrease.
                        if info.event != Event::Fallback {
                            let slope = dot(info.g, &p);
                            assert!(
                                slope.abs() <= cfg.c2 * slope0.abs(),
                                "{method:?} dim {dim} iteration {}: curvature fails: \
                                 |φ'(α)| = {:.17e}, bound = {:.17e}",
                                info.iter,
                                slope.abs(),
                                cfg.c2 * slope0.abs()
                            );
                        }
                        wolfe_audits += 1;
                    }
                    let h = info.h_inv.expect("dense methods carry H");
                    prev = Some((info.f, info.g.clone(), h.clone()));
                },
            )
            .expect("table cell run");
        }
    }
    assert!(wolfe_audits >= 400, "only {wolfe_audits} Wolfe audits ran");

    // (b) Backtracking ladder on gradient descent and BFGS. ρ = ½ is a
    // power of two, so α/ρ reproduces the driver's previous (rejected)
    // trial bitwise and the strict Armijo failure can be asserted exactly.
    let mut ladder_audits = 0u64;
    for method in [Method::Gd, Method::Bfgs] {
        let dim = 2usize;
        let mut problem = rosenbrock(dim);
        let mut audit_problem = rosenbrock(dim);
        let mut config = table_config(method);
        config.globalization = Globalization::Backtracking;
        let mut prev: Option<(Real, DenseVector, DenseVector, SymmetricMatrix)> = None;
        minimize_with_observer(&mut problem, &config, &half_fill(dim), &mut |info| {
            if let (Some((pf, px, pg, ph)), Some(_)) = (&prev, info.s) {
                let p = match method {
                    Method::Gd => pg.scale(-1.0),
                    _ => sym_matvec(ph, pg).scale(-1.0),
                };
                let slope0 = dot(pg, &p);
                let alpha = info.alpha;
                assert!(
                    info.f <= pf + cfg.c1 * alpha * slope0,
                    "backtracking accepted a step violating Armijo at iteration {}",
                    info.iter
                );
                if info.event != Event::Fallback && alpha < cfg.alpha_init {
                    let up = alpha / cfg.rho;
                    let f_up = audit_problem.value(&px.add_scaled(up, &p));
                    assert!(
                        f_up > pf + cfg.c1 * up * slope0,
                        "iteration {}: the rejected trial α/ρ = {up} satisfies Armijo \
                         (f = {f_up:.17e}); the ladder stopped too early",
                        info.iter
                    );
                    ladder_audits += 1;
                }
            }
            let h = info
                .h_inv
                .cloned()
                .unwrap_or_else(|| SymmetricMatrix::identity(info.x.len()));
            prev = Some((info.f, info.x.clone(), info.g.clone(), h));
        })
        .expect("backtracking run");
    }
    assert!(ladder_audits >= 100, "only {ladder_audits} ladder audits ran");

    // (c) Quadratic hand example: from (1, 1) along p = (−3, −3) the first
    // trial α = 1 overshoots (φ(1) = 12 > 3 + c₁·1·(−18)) and the halved
    // trial lands exactly on α = ½ with φ(½) = ¾.
    let mut problem = quadratic_xy();
    let x = DenseVector::new(vec![1.0, 1.0]);
    let p = DenseVector::new(vec![-3.0, -3.0]);
    let mut restriction = LineRestriction::new(&mut problem, &x, &p);
    let out = backtracking(&mut restriction, 3.0, -18.0, &cfg);
    assert_eq!(out.alpha, 0.5, "the quadratic example must accept α = ½ exactly");
    assert_eq!(out.f_new, 0.75, "φ(½) must be ¾ exactly");
    eprintln!(
        "[PASS] criterion 06: {wolfe_audits} Wolfe audits, {ladder_audits} ladder audits, \
         quadratic example accepts α = ½"
    );
}

// ---------------------------------------------------------------------------
// 7. Trust-region step control.
// ---------------------------------------------------------------------------

/// Dogleg steps never exceed the radius, achieve at least the Cauchy model
/// decrease, and rejected steps leave the iterate bitwise untouched. The
/// boundary reference case g = (1, 1), B = I, Δ = 1 lands on
/// (−1/√2, −1/√2).
#[test]
fn criterion_07_trust_region_model_control() {
    let mut step_audits = 0u64;
    let mut rejections = 0u64;

    let mut audit_run = |method: Method, problem_name: &str, dim: usize, delta0: Real| {
        let mut config = table_config(method);
        config.globalization = Globalization::TrustRegion;
        config.trust_region.delta0 = delta0;
        let (mut analytic, x0) = match problem_name {
            "rosenbrock" => (rosenbrock(dim), half_fill(dim)),
            "quadratic-xy" => (quadratic_xy(), DenseVector::new(vec![2.0, 1.0])),
            other => panic!("unknown audit problem {other}"),
        };
        let mut prev: Option<(DenseVector, DenseVector, SymmetricMatrix)> = None;
        let res = minimize_with_observer(&mut analytic, &config, &x0, &mut |info| {
            let b = info.b_direct.expect("trust region maintains B");
            if let Some((px, pg, pb)) = &prev {
                if info.accepted {
                    let s = info.s.expect("accepted steps carry s");
                    let radius = info.alpha;
                    assert!(
                        s.norm_l2() <= radius * (1.0 + 1e-12),
                        "{method:?} {problem_name} iteration {}: ‖s‖ = {:.17e} exceeds \
                         Δ = {radius:.17e}",
                        info.iter,
                        s.norm_l2()
                    );
                    // Model decrease against the Cauchy lower bound
                    // ½‖g‖·min(Δ, ‖g‖/‖B‖): the dogleg path is monotone in
                    // the model, so every returned point must clear it.
                    let predicted = -(dot(pg, s) + 0.5 * quad_form(pb, s));
                    let gnorm = pg.norm_l2();
                    let cauchy = 0.5 * gnorm * (radius.min(gnorm / pb.norm_fro()));
                    assert!(
                        predicted >= cauchy * (1.0 - 1e-9) - 1e-12 * (1.0 + gnorm * s.norm_l2()),
                        "{method:?} {problem_name} iteration {}: model decrease \
                         {predicted:.6e} below the Cauchy bound {cauchy:.6e}",
                        info.iter
                    );
                    step_audits += 1;
                } else {
                    for i in 0..px.len() {
                        assert!(
                            info.x[i].to_bits() == px[i].to_bits()
                                && info.g[i].to_bits() == pg[i].to_bits(),
                            "{method:?} {problem_name} iteration {}: rejected step \
                             moved the iterate at component {i}",
                            info.iter
                        );
                    }
                    rejections += 1;
                }
            }
            prev = Some((info.x.clone(), info.g.clone(), b.clone()));
        })
        .expect("trust-region run");
        res
    };

    for method in [Method::Bfgs, Method::SsBroyden] {
        let res = audit_run(method, "rosenbrock", 2, 1.0);
        assert_eq!(res.status, Status::GradTol, "{method:?} rosenbrock(2) diverged");
        assert!(res.f_star <= 1e-10, "{method:?} rosenbrock(2): f* = {:.3e}", res.f_star);
        let res = audit_run(method, "quadratic-xy", 2, 1.0);
        assert_eq!(res.status, Status::GradTol, "{method:?} quadratic diverged");
        // A deliberately oversized initial radius provokes rejections so
        // the frozen-iterate audit is known to have fired.
        let _ = audit_run(method, "rosenbrock", 5, 25.0);
    }
    assert!(step_audits >= 50, "only {step_audits} accepted-step audits ran");
    assert!(rejections >= 1, "no rejected step was ever observed");

    // Boundary reference case.
    let g = DenseVector::new(vec![1.0, 1.0]);
    let b = SymmetricMatrix::identity(2);
    let sol = dogleg(&g, &b, 1.0);
    let target = -1.0 / (2.0 as Real).sqrt();
    assert!(sol.on_boundary, "the reference case must end on the boundary");
    assert!(
        (sol.p[0] - target).abs() <= 1e-12 && (sol.p[1] - target).abs() <= 1e-12,
        "dogleg boundary step ({}, {}) missed (−1/√2, −1/√2)",
        sol.p[0],
        sol.p[1]
    );
    assert!(sol.p.norm_l2() <= 1.0 + 1e-12, "boundary step exceeds the radius");
    eprintln!(
        "[PASS] criterion 07: {step_audits} step audits, {rejections} rejections frozen, \
         boundary case on target"
    );
}

// ---------------------------------------------------------------------------
// 8. Backprop against central finite differences.
// ---------------------------------------------------------------------------

/// Hand-written backprop matches central finite differences at 20 random
/// parameter points per architecture. The regression losses and the
/// boundary penalty check out at h = 1e-6 / tolerance 1e-6; the full
/// collocation loss is checked on a coarse stencil at 1e-4, because the
/// 1/h² amplification inside its own residuals makes the finite-difference
/// oracle itself too noisy for a 1e-6 comparison.
#[test]
fn criterion_08_backprop_matches_finite_differences() {
    fn fd_worst_rel(problem: &mut MlpProblem, rng: &mut SeededRng, points: usize, h: Real) -> Real {
        let dim = problem.dim();
        let mut worst: Real = 0.0;
        for _ in 0..points {
            let x = DenseVector::new((0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect());
            let grad = problem.gradient(&x);
            for i in 0..dim {
                let mut bumped = x.as_slice().to_vec();
                bumped[i] = x[i] + h;
                let f_hi = problem.value(&DenseVector::new(bumped.clone()));
                bumped[i] = x[i] - h;
                let f_lo = problem.value(&DenseVector::new(bumped));
                let fd = (f_hi - f_lo) / (2.0 * h);
                worst = worst.max((fd - grad[i]).abs() / (1.0 + grad[i].abs()));
            }
        }
        worst
    }

    let mut worsts = Vec::new();
    for arch in [&[1usize, 4, 1][..], &[1, 16, 1], &[1, 16, 16, 1]] {
        let mut problem = regression_problem(arch, 32, sin_2pi, 5);
        let mut rng = SeededRng::new(42 + arch.len() as u64);
        let worst = fd_worst_rel(&mut problem, &mut rng, 20, 1e-6);
        assert!(
            worst <= 1e-6,
            "regression {arch:?}: worst relative gap {worst:.3e} above 1e-6"
        );
        worsts.push(format!("regression {arch:?}: {worst:.2e}"));
    }

    // Boundary term alone (the PDE weight zeroed): same backprop path as
    // the full loss, oracle noise-free at h = 1e-6.
    let mut problem = poisson_pinnlite(&DEFAULT_PINN_ARCH, DEFAULT_N_COLLOC, DEFAULT_FD_H, 0.0,
        DEFAULT_LAMBDA_BC, 3);
    let mut rng = SeededRng::new(7);
    let worst = fd_worst_rel(&mut problem, &mut rng, 20, 1e-6);
    assert!(worst <= 1e-6, "boundary-only loss: worst gap {worst:.3e} above 1e-6");
    worsts.push(format!("poisson boundary-only: {worst:.2e}"));

    // Full collocation loss on a coarse stencil.
    let mut problem = poisson_pinnlite(&DEFAULT_PINN_ARCH, 8, 0.05, DEFAULT_LAMBDA_PDE,
        DEFAULT_LAMBDA_BC, 3);
    let mut rng = SeededRng::new(8);
    let worst = fd_worst_rel(&mut problem, &mut rng, 20, 1e-6);
    assert!(worst <= 1e-4, "collocation loss: worst gap {worst:.3e} above 1e-4");
    worsts.push(format!("poisson full loss (coarse stencil): {worst:.2e}"));

    eprintln!("[PASS] criterion 08: {}", worsts.join("; "));
}

// ---------------------------------------------------------------------------
// 9. Collocation quality and the self-scaling advantage.
// ---------------------------------------------------------------------------

/// The seed-7 collocation run reaches a relative L2 error of 1e-3 against
/// sin(πx) well inside 2000 iterations and one minute, and self-scaled
/// Broyden ends at or below the BFGS loss on at least two of three seeds
/// at an equal iteration budget.
#[test]
fn criterion_09_pinn_quality_and_ssbroyden_advantage() {
    let budget = |method: Method| {
        let mut config = table_config(method);
        config.criteria.gtol = 1e-300; // run to the floating-point floor
        config.criteria.max_iters = 2000;
        config
    };
    let run = |method: Method, seed: u64| {
        let mut problem = poisson_pinnlite(
            &DEFAULT_PINN_ARCH,
            DEFAULT_N_COLLOC,
            DEFAULT_FD_H,
            DEFAULT_LAMBDA_PDE,
            DEFAULT_LAMBDA_BC,
            seed,
        );
        let x0 = problem.initial_params();
        let res = minimize(&mut problem, &budget(method), &x0).expect("collocation run");
        let rel = problem.rel_l2_vs_exact(&res.x_star, 201);
        (res, rel)
    };

    let started = Instant::now();
    let (res, rel) = run(Method::SsBroyden, 7);
    let elapsed = started.elapsed().as_secs_f64();
    assert!(res.iters() <= 2000, "seed-7 run exceeded its iteration budget");
    assert!(
        rel <= 1e-3,
        "seed-7 run: relative L2 error {rel:.3e} against sin(πx) above 1e-3"
    );
    assert!(elapsed < 60.0, "seed-7 run took {elapsed:.1} s, budget is 60 s");
    eprintln!(
        "criterion 09: seed 7 ssbroyden: {} iterations, rel-L2 {rel:.2e}, {elapsed:.1} s",
        res.iters()
    );

    let mut wins = 0;
    for seed in [7u64, 13, 42] {
        let (ss, _) = run(Method::SsBroyden, seed);
        let (bf, _) = run(Method::Bfgs, seed);
        if ss.f_star <= bf.f_star {
            wins += 1;
        }
        eprintln!(
            "criterion 09: seed {seed}: ssbroyden {:.3e} vs bfgs {:.3e}",
            ss.f_star, bf.f_star
        );
    }
    assert!(wins >= 2, "self-scaled Broyden won only {wins}/3 seeds");
    eprintln!("[PASS] criterion 09: rel-L2 {rel:.2e}, ssbroyden wins {wins}/3 seeds");
}

// ---------------------------------------------------------------------------
// 10. Limited memory reduces to dense BFGS.
// ---------------------------------------------------------------------------

/// With memory exceeding the iteration count and identity initial scaling,
/// the two-loop recursion must walk the dense BFGS path: the first 15
/// search directions agree to 1e-10.
#[test]
fn criterion_10_limited_memory_equivalence() {
    let dim = 5usize;
    let collect_directions = |method: Method, memory: usize| {
        let mut config = table_config(method);
        config.lbfgs_memory = memory;
        config.lbfgs_scaling = InitialScaling::Identity;
        let mut problem = rosenbrock(dim);
        let mut dirs: Vec<DenseVector> = Vec::new();
        minimize_with_observer(&mut problem, &config, &half_fill(dim), &mut |info| {
            if let Some(s) = info.s {
                if info.alpha > 0.0 {
                    dirs.push(s.scale(1.0 / info.alpha));
                }
            }
        })
        .expect("equivalence run");
        dirs
    };

    let dense = collect_directions(Method::Bfgs, 10);
    let limited = collect_directions(Method::Lbfgs, 100);
    assert!(dense.len() >= 15, "dense run ended after {} steps", dense.len());
    assert!(limited.len() >= 15, "limited run ended after {} steps", limited.len());
    let mut worst: Real = 0.0;
    for k in 0..15 {
        let gap = dense[k].sub(&limited[k]).norm_l2() / (1.0 + dense[k].norm_l2());
        worst = worst.max(gap);
        assert!(
            gap <= 1e-10,
            "direction {k} differs by {gap:.3e} between dense and limited memory"
        );
    }
    eprintln!("[PASS] criterion 10: 15 directions match, worst gap {worst:.3e}");
}

// ---------------------------------------------------------------------------
// 11. CLI determinism.
// ---------------------------------------------------------------------------

/// Identical CLI invocations produce byte-identical trace CSVs (the wall
/// clock column aside) and byte-identical table CSVs.
#[test]
fn criterion_11_cli_runs_are_deterministic() {
    let bin = env!("CARGO_BIN_EXE_ssbroyden");
    let dir = tempfile::tempdir().expect("tempdir");

    let run_once = |trace_name: &str| {
        let trace = dir.path().join(trace_name);
        let output = Command::new(bin)
            .args([
                "run",
                "--problem",
                "rosenbrock",
                "--dim",
                "5",
                "--optimizer",
                "ssbroyden",
                "--trace",
            ])
            .arg(&trace)
            .output()
            .expect("run invocation");
        assert!(output.status.success(), "run failed: {output:?}");
        let csv = std::fs::read_to_string(&trace).expect("trace file");
        (String::from_utf8(output.stdout).expect("utf8 stdout"), csv)
    };

    let (stdout_a, trace_a) = run_once("a.csv");
    let (stdout_b, trace_b) = run_once("b.csv");

    // Trace rows: every column except the wall-clock one must agree
    // byte-for-byte.
    let rows_a: Vec<&str> = trace_a.lines().collect();
    let rows_b: Vec<&str> = trace_b.lines().collect();
    assert_eq!(rows_a.len(), rows_b.len(), "trace lengths differ");
    assert!(rows_a.len() > 10, "trace is suspiciously short");
    assert_eq!(rows_a[0], rows_b[0], "headers differ");
    let elapsed_col = rows_a[0]
        .split(',')
        .position(|name| name == "elapsed_s")
        .expect("trace has an elapsed_s column");
    for (ra, rb) in rows_a.iter().zip(&rows_b).skip(1) {
        let fa: Vec<&str> = ra.split(',').collect();
        let fb: Vec<&str> = rb.split(',').collect();
        assert_eq!(fa.len(), fb.len(), "column counts differ");
        for (i, (a, b)) in fa.iter().zip(&fb).enumerate() {
            if i != elapsed_col {
                assert_eq!(a, b, "trace column {i} differs between identical runs");
            }
        }
    }

    // Summary lines: identical after dropping the elapsed_s token.
    let strip_elapsed = |s: &str| {
        s.split_whitespace()
            .filter(|tok| !tok.starts_with("elapsed_s="))
            .collect::<Vec<_>>()
            .join(" ")
    };
    assert_eq!(
        strip_elapsed(&stdout_a),
        strip_elapsed(&stdout_b),
        "summary lines differ between identical runs"
    );

    // The table CSV carries no timing column, so it must be literally
    // byte-identical.
    let table_once = |name: &str| {
        let path = dir.path().join(name);
        let output = Command::new(bin)
            .args([
                "table-rosenbrock",
                "--dims",
                "2,5",
                "--optimizers",
                "bfgs,ssbroyden",
                "--out",
            ])
            .arg(&path)
            .output()
            .expect("table invocation");
        assert!(output.status.success(), "table run failed: {output:?}");
        std::fs::read(&path).expect("table file")
    };
    let table_a = table_once("ta.csv");
    let table_b = table_once("tb.csv");
    assert_eq!(table_a, table_b, "table CSVs differ between identical runs");
    eprintln!(
        "[PASS] criterion 11: {} trace rows and {} table bytes reproduce exactly",
        rows_a.len() - 1,
        table_a.len()
    );
}
