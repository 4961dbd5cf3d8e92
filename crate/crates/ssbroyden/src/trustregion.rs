//! Trust-region globalization: dogleg subproblem solves with adaptive radius.
//!
//! Each iteration minimizes the local quadratic model
//! `m(p) = gᵀp + ½ pᵀBp` subject to `‖p‖ ≤ Δ`, then adapts Δ from the ratio
//! of actual to predicted reduction. `B` is the direct quasi-Newton
//! approximation maintained by the optimizer.

use crate::linalg::{dot, quad_form, spd_factor, DenseVector, SymmetricMatrix};
use crate::objective::Objective;
use crate::Real;

/// Radius-adaptation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrustRegionConfig {
    /// Initial radius Δ₀.
    pub delta0: Real,
    /// Hard cap on the radius.
    pub delta_max: Real,
    /// Minimum actual/predicted ratio for accepting a step.
    pub eta_accept: Real,
    /// Ratio below which the radius shrinks.
    pub low: Real,
    /// Ratio above which the radius may grow (boundary steps only).
    pub high: Real,
    pub shrink: Real,
    pub grow: Real,
}

impl Default for TrustRegionConfig {
    fn default() -> Self {
        Self {
            delta0: 1.0,
            delta_max: 100.0,
            eta_accept: 1e-4,
            low: 0.25,
            high: 0.75,
            shrink: 0.25,
            grow: 2.0,
        }
    }
}

impl TrustRegionConfig {
    pub fn validate(&self) {
        assert!(
            0.0 < self.eta_accept && self.eta_accept <= self.low && self.low < self.high && self.high < 1.0,
            "trust region requires 0 < eta_accept <= low < high < 1"
        );
        assert!(
            0.0 < self.shrink && self.shrink < 1.0 && self.grow > 1.0,
            "trust region requires 0 < shrink < 1 < grow"
        );
        assert!(self.delta0 > 0.0 && self.delta_max >= self.delta0);
    }
}

/// Approximate minimizer of the model within the radius.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemSolution {
    pub p: DenseVector,
    /// `m(0) − m(p)`, never negative.
    pub predicted_reduction: Real,
    /// Whether `‖p‖` sits on the radius.
    pub on_boundary: bool,
    /// True when B was not SPD and the solver fell back to the Cauchy point.
    pub used_fallback: bool,
}

fn model_reduction(g: &DenseVector, b: &SymmetricMatrix, p: &DenseVector) -> Real {
    -(dot(g, p) + 0.5 * quad_form(b, p))
}

/// Dogleg solve of `min m(p)` s.t. `‖p‖ ≤ delta`.
///
/// Interior quasi-Newton step when it fits; otherwise the dogleg path point
/// on the boundary. When `B` fails its Cholesky factorization the solver
/// falls back to the Cauchy point along `−g` (flagged in the result).
pub fn dogleg(g: &DenseVector, b: &SymmetricMatrix, delta: Real) -> SubproblemSolution {
    assert_eq!(g.len(), b.dim(), "dogleg: dimension mismatch");
    assert!(delta > 0.0, "dogleg: radius must be positive");

    let gnorm = g.norm_l2();
    if gnorm == 0.0 {
        return SubproblemSolution {
            p: DenseVector::zeros(g.len()),
            predicted_reduction: 0.0,
            on_boundary: false,
            used_fallback: false,
        };
    }

    let solution = match spd_factor(b) {
        Ok(chol) => {
            // Full quasi-Newton step.
            let p_newton = chol.solve(g).scale(-1.0);
            if p_newton.norm_l2() <= delta {
                SubproblemSolution {
                    p: p_newton,
                    predicted_reduction: 0.0, // filled below
                    on_boundary: false,
                    used_fallback: false,
                }
            } else {
                // Unconstrained minimizer along −g.
                let gbg = quad_form(b, g);
                let p_cauchy = g.scale(-(gnorm * gnorm) / gbg);
                let p = if p_cauchy.norm_l2() >= delta {
                    // Even the steepest-descent leg leaves the region.
                    g.scale(-delta / gnorm)
                } else {
                    // Walk the second leg until it hits the boundary:
                    // ‖p_c + t·d‖ = delta with d = p_newton − p_cauchy.
                    let d = p_newton.sub(&p_cauchy);
                    let dd = dot(&d, &d);
                    let pd = dot(&p_cauchy, &d);
                    let pp = dot(&p_cauchy, &p_cauchy);
                    let t = (-pd + (pd * pd + dd * (delta * delta - pp)).sqrt()) / dd;
                    p_cauchy.add_scaled(t, &d)
                };
                SubproblemSolution {
                    p,
                    predicted_reduction: 0.0,
                    on_boundary: true,
                    used_fallback: false,
                }
            }
        }
        Err(_) => {
            // Cauchy point along −g, clipped to the radius.
            let gbg = quad_form(b, g);
            let t_boundary = delta / gnorm;
            let t = if gbg > 0.0 {
                Real::min(t_boundary, gnorm * gnorm / gbg)
            } else {
                t_boundary // model curves down along g: run to the boundary
            };
            SubproblemSolution {
                p: g.scale(-t),
                predicted_reduction: 0.0,
                on_boundary: t == t_boundary,
                used_fallback: true,
            }
        }
    };

    let mut solution = solution;
    solution.predicted_reduction = model_reduction(g, b, &solution.p);
    assert!(
        solution.p.norm_l2() <= delta + 1e-12,
        "dogleg produced a step outside the region"
    );
    solution
}

/// Outcome of one trust-region iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrStepOutcome {
    pub accepted: bool,
    /// New iterate; equals the old `x` when the step was rejected.
    pub x_new: DenseVector,
    /// `f(x + p)` — evaluated for the ratio, reusable by the caller when
    /// the step was accepted.
    pub f_trial: Real,
    pub delta_new: Real,
    pub solution: SubproblemSolution,
}

/// One trust-region step: solve the subproblem, compare actual against
/// predicted reduction, accept or reject, and adapt the radius.
pub fn tr_step<O: Objective>(
    problem: &mut O,
    x: &DenseVector,
    f: Real,
    g: &DenseVector,
    b: &SymmetricMatrix,
    delta: Real,
    cfg: &TrustRegionConfig,
) -> TrStepOutcome {
    cfg.validate();
    let solution = dogleg(g, b, delta);
    if solution.predicted_reduction <= 0.0 {
        assert!(
            g.norm_l2() == 0.0,
            "trust-region model inconsistency: nonpositive predicted reduction with g != 0"
        );
        // Stationary model: nothing to do; the caller's convergence test
        // will have fired already.
        return TrStepOutcome {
            accepted: false,
            x_new: x.clone(),
            f_trial: f,
            delta_new: delta,
            solution,
        };
    }

    let x_trial = x.add_scaled(1.0, &solution.p);
    let f_trial = problem.value(&x_trial);
    let ratio = (f - f_trial) / solution.predicted_reduction;

    let accepted = ratio >= cfg.eta_accept;
    let delta_new = if ratio < cfg.low {
        cfg.shrink * delta
    } else if ratio > cfg.high && solution.on_boundary {
        Real::min(cfg.grow * delta, cfg.delta_max)
    } else {
        delta
    };

    TrStepOutcome {
        accepted,
        x_new: if accepted { x_trial } else { x.clone() },
        f_trial,
        delta_new,
        solution,
    }
}

#[cfg(test)]
#[cfg(not(feature = "single"))]
mod tests {
    use super::*;
    use crate::testfns::quadratic_xy;

    #[test]
    fn zero_gradient_is_stationary() {
        let sol = dogleg(&DenseVector::zeros(2), &SymmetricMatrix::identity(2), 1.0);
        assert_eq!(sol.p, DenseVector::zeros(2));
        assert_eq!(sol.predicted_reduction, 0.0);
        assert!(!sol.on_boundary);
    }

    #[test]
    fn interior_newton_step() {
        let g = DenseVector::new(vec![3.0, 3.0]);
        let sol = dogleg(&g, &SymmetricMatrix::identity(2), 10.0);
        assert!((sol.p[0] + 3.0).abs() < 1e-14);
        assert!((sol.p[1] + 3.0).abs() < 1e-14);
        assert!(!sol.on_boundary);
        // m(p) = −18 + 9 ⇒ reduction 9.
        assert!((sol.predicted_reduction - 9.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_step_along_steepest_descent() {
        let g = DenseVector::new(vec![3.0, 3.0]);
        let sol = dogleg(&g, &SymmetricMatrix::identity(2), 1.0);
        let expect = -1.0 / Real::sqrt(2.0);
        assert!((sol.p[0] - expect).abs() <= 1e-12);
        assert!((sol.p[1] - expect).abs() <= 1e-12);
        assert!(sol.on_boundary);
        assert!(sol.p.norm_l2() <= 1.0 + 1e-12);
    }

    #[test]
    fn dogleg_second_leg_hits_the_radius() {
        // Anisotropic model: Newton and Cauchy points differ in direction.
        let b = SymmetricMatrix::from_rows(2, &[1.0, 0.0, 0.0, 100.0]);
        let g = DenseVector::new(vec![1.0, 1.0]);
        // Newton point (−1, −0.01), norm ≈ 1.00005; Cauchy point
        // −(2/101)g, norm ≈ 0.028. Radius between the two forces leg two.
        let delta = 0.5;
        let sol = dogleg(&g, &b, delta);
        assert!(sol.on_boundary);
        assert!((sol.p.norm_l2() - delta).abs() < 1e-12);
        assert!(sol.predicted_reduction > 0.0);
    }

    #[test]
    fn cauchy_decrease_bound_holds() {
        let cases: Vec<(SymmetricMatrix, DenseVector, Real)> = vec![
            (SymmetricMatrix::identity(2), DenseVector::new(vec![3.0, 3.0]), 1.0),
            (SymmetricMatrix::identity(2), DenseVector::new(vec![3.0, 3.0]), 10.0),
            (
                SymmetricMatrix::from_rows(2, &[1.0, 0.0, 0.0, 100.0]),
                DenseVector::new(vec![1.0, 1.0]),
                0.5,
            ),
            // Indefinite model exercising the Cauchy fallback.
            (
                SymmetricMatrix::from_rows(2, &[1.0, 2.0, 2.0, 1.0]),
                DenseVector::new(vec![1.0, 0.0]),
                1.0,
            ),
        ];
        for (b, g, delta) in cases {
            let sol = dogleg(&g, &b, delta);
            let bound =
                0.5 * g.norm_l2() * Real::min(delta, g.norm_l2() / b.norm_fro());
            assert!(
                sol.predicted_reduction >= bound - 1e-12,
                "predicted {} below Cauchy bound {}",
                sol.predicted_reduction,
                bound
            );
        }
    }

    #[test]
    fn indefinite_model_falls_back_to_cauchy() {
        let b = SymmetricMatrix::from_rows(2, &[1.0, 2.0, 2.0, 1.0]);
        let g = DenseVector::new(vec![1.0, 0.0]);
        let sol = dogleg(&g, &b, 1.0);
        assert!(sol.used_fallback);
        // gᵀBg = 1 > 0, unconstrained minimizer t = 1 = boundary t.
        assert!((sol.p[0] + 1.0).abs() < 1e-14);
        assert_eq!(sol.p[1], 0.0);
        assert!((sol.predicted_reduction - 0.5).abs() < 1e-14);
    }

    #[test]
    fn exact_model_gives_unit_ratio() {
        // B = the true Hessian of quadratic_xy, so predicted == actual.
        let mut problem = quadratic_xy();
        let x = DenseVector::filled(2, 1.0);
        let f = problem.value(&x);
        let g = problem.gradient(&x);
        let b = SymmetricMatrix::from_rows(2, &[2.0, 1.0, 1.0, 2.0]);
        let cfg = TrustRegionConfig::default();
        let out = tr_step(&mut problem, &x, f, &g, &b, 10.0, &cfg);
        assert!(out.accepted);
        // Newton step lands at the origin, up to the factorization's
        // round-off (f is quadratic in that residue).
        assert!(out.x_new.norm_linf() < 1e-14);
        assert!(out.f_trial.abs() < 1e-28);
        // Interior step: ratio 1 > high, but radius must not grow.
        assert_eq!(out.delta_new, 10.0);
    }

    #[test]
    fn poor_model_step_is_rejected_and_radius_shrinks() {
        // With B = I the model ignores the cross term; the full step
        // overshoots and f increases, so the step must be rejected.
        let mut problem = quadratic_xy();
        let x = DenseVector::filled(2, 1.0);
        let f = problem.value(&x);
        let g = problem.gradient(&x);
        let b = SymmetricMatrix::identity(2);
        let cfg = TrustRegionConfig::default();
        let out = tr_step(&mut problem, &x, f, &g, &b, 10.0, &cfg);
        assert!(!out.accepted);
        assert_eq!(out.x_new, x);
        assert_eq!(out.f_trial, 12.0); // f(−2,−2)
        assert_eq!(out.delta_new, 2.5);
    }

    #[test]
    fn radius_grows_only_on_boundary() {
        // Tight radius on a well-modeled problem: boundary step with a good
        // ratio should double the radius.
        let mut problem = quadratic_xy();
        let x = DenseVector::filled(2, 1.0);
        let f = problem.value(&x);
        let g = problem.gradient(&x);
        let b = SymmetricMatrix::from_rows(2, &[2.0, 1.0, 1.0, 2.0]);
        let cfg = TrustRegionConfig::default();
        let out = tr_step(&mut problem, &x, f, &g, &b, 0.5, &cfg);
        assert!(out.solution.on_boundary);
        assert!(out.accepted);
        assert_eq!(out.delta_new, 1.0);
    }
}
