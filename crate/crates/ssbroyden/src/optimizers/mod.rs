//! The iteration engines: dense quasi-Newton methods (BFGS, SSBFGS,
//! SSBroyden), limited-memory L-BFGS, and the first-order baselines
//! (gradient descent, Adam), each composable with a globalization strategy.
//!
//! One [`minimize`] call drives one run: direction, step acceptance,
//! curvature update, convergence tests, trace record — repeated until a
//! stopping criterion fires.

pub mod adam;
pub mod lbfgs;
pub mod updates;

pub use adam::{AdamConfig, AdamDecay, AdamState};
pub use lbfgs::{InitialScaling, LbfgsHistory};
pub use updates::{
    bfgs_inverse_update, broyden_direct_update, broyden_scaling_chain,
    broyden_scaling_chain_mats, curvature_ok, dfp_inverse_update, powell_damp,
    ssbfgs_update, ssbroyden_inverse_update, ScalingQuantities,
};

use crate::linalg::{dot, sym_matvec, DenseVector, SymmetricMatrix};
use crate::linesearch::{
    backtracking, strong_wolfe, LineRestriction, LineSearchConfig, SearchStatus,
};
use crate::objective::Objective;
use crate::trace::{Event, TraceRecord};
use crate::trustregion::{tr_step, TrustRegionConfig};
use crate::Real;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Gd,
    Adam,
    #[default]
    Bfgs,
    SsBfgs,
    SsBroyden,
    Lbfgs,
}

impl Method {
    /// Methods that maintain a dense curvature model.
    pub fn is_dense_quasi_newton(self) -> bool {
        matches!(self, Method::Bfgs | Method::SsBfgs | Method::SsBroyden)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Globalization {
    #[default]
    Wolfe,
    Backtracking,
    TrustRegion,
}

/// Which norm the gradient tolerance applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradNorm {
    /// Euclidean norm (default).
    #[default]
    L2,
    /// Max-magnitude norm.
    Linf,
}

/// Stopping rules. `ftol`/`xtol` at 0 are disabled; the gradient tolerance
/// and the iteration cap are always active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCriteria {
    pub gtol: Real,
    pub gnorm: GradNorm,
    pub ftol: Real,
    pub xtol: Real,
    pub max_iters: u64,
}

impl Default for ConvergenceCriteria {
    fn default() -> Self {
        Self {
            gtol: 1e-6,
            gnorm: GradNorm::L2,
            ftol: 0.0,
            xtol: 0.0,
            max_iters: 5000,
        }
    }
}

impl ConvergenceCriteria {
    fn validate(&self) {
        assert!(self.gtol >= 0.0 && self.ftol >= 0.0 && self.xtol >= 0.0);
        assert!(self.max_iters >= 1, "max_iters must be at least 1");
    }

    fn gnorm_of(&self, g: &DenseVector) -> Real {
        match self.gnorm {
            GradNorm::L2 => g.norm_l2(),
            GradNorm::Linf => g.norm_linf(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// Gradient norm fell below `gtol`.
    GradTol,
    /// Objective change fell below `ftol`.
    FTol,
    /// Step length fell below `xtol`.
    XTol,
    /// Iteration cap reached.
    MaxIters,
    /// No acceptable step existed (non-descent direction or exhausted
    /// search with no Armijo-satisfying trial).
    LineSearchFailure,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::GradTol => "GradTol",
            Status::FTol => "FTol",
            Status::XTol => "XTol",
            Status::MaxIters => "MaxIters",
            Status::LineSearchFailure => "LineSearchFailure",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub globalization: Globalization,
    pub criteria: ConvergenceCriteria,
    pub linesearch: LineSearchConfig,
    pub trust_region: TrustRegionConfig,
    /// Ring size for L-BFGS.
    pub lbfgs_memory: usize,
    /// Initial matrix inside the L-BFGS two-loop recursion.
    pub lbfgs_scaling: InitialScaling,
    pub adam: AdamConfig,
    /// Debug mode: in line-search runs, additionally maintain the direct
    /// approximation `B` and assert that `sᵀBs` computed through the
    /// `B_k s_k = −α_k ∇f_k` identity matches the explicit product to
    /// 1e-10 relative.
    pub track_direct: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::default(),
            globalization: Globalization::default(),
            criteria: ConvergenceCriteria::default(),
            linesearch: LineSearchConfig::default(),
            trust_region: TrustRegionConfig::default(),
            lbfgs_memory: 10,
            lbfgs_scaling: InitialScaling::default(),
            adam: AdamConfig::default(),
            track_direct: false,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) {
        self.criteria.validate();
        if self.globalization == Globalization::TrustRegion {
            assert!(
                self.method.is_dense_quasi_newton(),
                "trust-region globalization requires a method that maintains \
                 a direct Hessian approximation (BFGS, SSBFGS, SSBroyden)"
            );
        }
    }
}

/// Completed run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub x_star: DenseVector,
    pub f_star: Real,
    pub status: Status,
    pub trace: Vec<TraceRecord>,
}

impl RunResult {
    /// Number of completed iterations.
    pub fn iters(&self) -> u64 {
        self.trace.len() as u64
    }
}

/// Abort diagnostics. Non-finite numbers abort the run because every
/// subsequent quantity would be poisoned.
#[derive(Debug, thiserror::Error)]
pub enum OptimizeError {
    #[error("non-finite objective value {value} at iteration {iter}, x = {x}")]
    NonFiniteValue { iter: u64, value: Real, x: String },
    #[error("non-finite gradient component {index} at iteration {iter}, x = {x}")]
    NonFiniteGradient { iter: u64, index: usize, x: String },
}

/// Short, readable rendering of an iterate for diagnostics.
fn format_iterate(x: &DenseVector) -> String {
    const SHOWN: usize = 8;
    let shown: Vec<String> = x.iter().take(SHOWN).map(|v| format!("{v}")).collect();
    if x.len() > SHOWN {
        format!("[{}, … ({} components)]", shown.join(", "), x.len())
    } else {
        format!("[{}]", shown.join(", "))
    }
}

fn check_value(f: Real, iter: u64, x: &DenseVector) -> Result<(), OptimizeError> {
    if f.is_finite() {
        Ok(())
    } else {
        Err(OptimizeError::NonFiniteValue {
            iter,
            value: f,
            x: format_iterate(x),
        })
    }
}

fn check_gradient(g: &DenseVector, iter: u64, x: &DenseVector) -> Result<(), OptimizeError> {
    match g.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(index) => Err(OptimizeError::NonFiniteGradient {
            iter,
            index,
            x: format_iterate(x),
        }),
    }
}

/// Everything an audit hook may want to inspect about one iteration.
///
/// `s`/`y` are the accepted step and the gradient difference the curvature
/// update consumed (`y` is Powell-damped in trust-region mode when damping
/// fired); the secant equation holds for them whenever
/// `event != SkippedUpdate`. `h_inv`/`b_direct` are the approximations
/// after the update.
pub struct IterationInfo<'a> {
    pub iter: u64,
    pub x: &'a DenseVector,
    pub f: Real,
    pub g: &'a DenseVector,
    /// Accepted step length, or this iteration's trust radius.
    pub alpha: Real,
    /// False only for rejected trust-region steps.
    pub accepted: bool,
    pub s: Option<&'a DenseVector>,
    pub y: Option<&'a DenseVector>,
    pub h_inv: Option<&'a SymmetricMatrix>,
    pub b_direct: Option<&'a SymmetricMatrix>,
    pub scaling: Option<&'a ScalingQuantities>,
    pub event: Event,
}

/// Minimize `problem` from `x0` under `config`.
///
/// Resets the problem's evaluation counters, then iterates until a
/// convergence criterion, the iteration cap, or a line-search failure
/// stops the run. Errors only on non-finite objective values or gradients.
pub fn minimize<O: Objective>(
    problem: &mut O,
    config: &OptimizerConfig,
    x0: &DenseVector,
) -> Result<RunResult, OptimizeError> {
    minimize_with_observer(problem, config, x0, &mut |_| {})
}

/// [`minimize`] with a per-iteration hook, called once with the initial
/// state (`iter` 0) and once per iteration. The audit suites use it to
/// re-verify line-search conditions, SPD, and secant equations while a run
/// is in flight.
pub fn minimize_with_observer<O: Objective>(
    problem: &mut O,
    config: &OptimizerConfig,
    x0: &DenseVector,
    observer: &mut dyn FnMut(&IterationInfo<'_>),
) -> Result<RunResult, OptimizeError> {
    let n = problem.dim();
    assert_eq!(x0.len(), n, "x0 has wrong dimension for this problem");
    config.validate();
    problem.reset_counters();
    let started = Instant::now();

    let mut x = x0.clone();
    let (mut f, mut g) = problem.value_grad(&x);
    check_value(f, 0, &x)?;
    check_gradient(&g, 0, &x)?;

    let dense = config.method.is_dense_quasi_newton();
    let tr_mode = config.globalization == Globalization::TrustRegion;
    let mut h_inv = (dense && !tr_mode).then(|| SymmetricMatrix::identity(n));
    // Trust-region mode leads with B (dogleg consumes it) and keeps the
    // inverse alongside via the dual update, which feeds yᵀHy to the
    // scaling chain without extra factorizations.
    let mut b_direct = (dense && (tr_mode || config.track_direct))
        .then(|| SymmetricMatrix::identity(n));
    let mut tr_h_inv = (dense && tr_mode).then(|| SymmetricMatrix::identity(n));
    let mut lbfgs = matches!(config.method, Method::Lbfgs)
        .then(|| LbfgsHistory::new(config.lbfgs_memory, config.lbfgs_scaling));
    let mut adam_state = matches!(config.method, Method::Adam).then(|| AdamState::new(n));
    let mut delta = config.trust_region.delta0;

    let mut trace: Vec<TraceRecord> = Vec::new();

    observer(&IterationInfo {
        iter: 0,
        x: &x,
        f,
        g: &g,
        alpha: 0.0,
        accepted: true,
        s: None,
        y: None,
        h_inv: h_inv.as_ref().or(tr_h_inv.as_ref()),
        b_direct: b_direct.as_ref(),
        scaling: None,
        event: Event::Normal,
    });

    if config.criteria.gnorm_of(&g) <= config.criteria.gtol {
        return Ok(RunResult {
            x_star: x,
            f_star: f,
            status: Status::GradTol,
            trace,
        });
    }

    let mut status = Status::MaxIters;

    for k in 1..=config.criteria.max_iters {
        // ---- Adam: self-contained step, no globalization. ----
        if let Some(adam) = adam_state.as_mut() {
            let lr = adam.effective_lr(&config.adam);
            let x_new = adam.step(&x, &g, &config.adam);
            let (f_new, g_new) = problem.value_grad(&x_new);
            check_value(f_new, k, &x_new)?;
            check_gradient(&g_new, k, &x_new)?;
            let f_prev = f;
            let step_norm = x_new.sub(&x).norm_l2();
            x = x_new;
            f = f_new;
            g = g_new;
            push_record(&mut trace, problem, k, f, &g, lr, &started, Event::Normal);
            observer(&IterationInfo {
                iter: k,
                x: &x,
                f,
                g: &g,
                alpha: lr,
                accepted: true,
                s: None,
                y: None,
                h_inv: None,
                b_direct: None,
                scaling: None,
                event: Event::Normal,
            });
            if let Some(st) = converged(&config.criteria, &g, f_prev, f, step_norm) {
                status = st;
                break;
            }
            continue;
        }

        // ---- Trust region: dogleg step on the direct model. ----
        if tr_mode {
            let b_mat = b_direct.as_mut().expect("trust region maintains B");
            let radius = delta;
            let out = tr_step(problem, &x, f, &g, b_mat, radius, &config.trust_region);
            check_value(out.f_trial, k, &out.x_new)?;
            delta = out.delta_new;
            let base_event = if out.solution.used_fallback {
                Event::Fallback
            } else {
                Event::Normal
            };

            if !out.accepted {
                push_record(&mut trace, problem, k, f, &g, radius, &started, base_event);
                observer(&IterationInfo {
                    iter: k,
                    x: &x,
                    f,
                    g: &g,
                    alpha: radius,
                    accepted: false,
                    s: None,
                    y: None,
                    h_inv: tr_h_inv.as_ref(),
                    b_direct: b_direct.as_ref(),
                    scaling: None,
                    event: base_event,
                });
                continue; // only the iteration cap stops a rejecting streak
            }

            let x_new = out.x_new;
            let f_new = out.f_trial;
            let g_new = problem.gradient(&x_new);
            check_gradient(&g_new, k, &x_new)?;
            let s = x_new.sub(&x);
            let y_raw = g_new.sub(&g);
            // The dogleg step carries no Wolfe guarantee, so curvature is
            // restored by damping rather than by skipping.
            let (y_used, _damped) = powell_damp(b_mat, &s, &y_raw);
            let h_mat = tr_h_inv.as_mut().expect("trust region tracks H");
            let sbs = dot(&s, &sym_matvec(b_mat, &s));
            let yhy = dot(&y_used, &sym_matvec(h_mat, &y_used));
            let ys = dot(&y_used, &s);
            let (q, event) = select_scaling(config.method, sbs, yhy, ys, n, base_event);
            *b_mat = broyden_direct_update(b_mat, &s, &y_used, &q);
            *h_mat = match config.method {
                Method::Bfgs => bfgs_inverse_update(h_mat, &s, &y_used),
                _ => ssbroyden_inverse_update(h_mat, &s, &y_used, &q),
            };

            let f_prev = f;
            let step_norm = s.norm_l2();
            x = x_new;
            f = f_new;
            g = g_new;
            push_record(&mut trace, problem, k, f, &g, radius, &started, event);
            observer(&IterationInfo {
                iter: k,
                x: &x,
                f,
                g: &g,
                alpha: radius,
                accepted: true,
                s: Some(&s),
                y: Some(&y_used),
                h_inv: tr_h_inv.as_ref(),
                b_direct: b_direct.as_ref(),
                scaling: Some(&q),
                event,
            });
            if let Some(st) = converged(&config.criteria, &g, f_prev, f, step_norm) {
                status = st;
                break;
            }
            continue;
        }

        // ---- Line-search modes. ----
        let p = match config.method {
            Method::Gd => g.scale(-1.0),
            Method::Lbfgs => lbfgs.as_ref().expect("lbfgs history").direction(&g),
            _ => sym_matvec(h_inv.as_ref().expect("dense H"), &g).scale(-1.0),
        };
        let slope0 = dot(&g, &p);
        if slope0 >= 0.0 {
            status = Status::LineSearchFailure;
            break;
        }

        let mut restriction = LineRestriction::new(problem, &x, &p);
        let outcome = match config.globalization {
            Globalization::Wolfe => strong_wolfe(&mut restriction, f, slope0, &config.linesearch),
            Globalization::Backtracking => {
                backtracking(&mut restriction, f, slope0, &config.linesearch)
            }
            Globalization::TrustRegion => unreachable!("handled above"),
        };

        let (alpha, f_new, mut event) = match outcome.status {
            SearchStatus::Converged => (outcome.alpha, outcome.f_new, Event::Normal),
            SearchStatus::MaxTrials => match outcome.best_armijo {
                // Salvage the best sufficient-decrease trial seen.
                Some((a, fa)) => (a, fa, Event::Fallback),
                None => {
                    status = Status::LineSearchFailure;
                    break;
                }
            },
            SearchStatus::NonDescent => {
                status = Status::LineSearchFailure;
                break;
            }
        };
        let g_new = restriction.gradient_at(alpha);
        let x_new = restriction.point(alpha);
        check_value(f_new, k, &x_new)?;
        check_gradient(&g_new, k, &x_new)?;

        let s = x_new.sub(&x);
        let y = g_new.sub(&g);
        let mut scaling_used: Option<ScalingQuantities> = None;

        if !curvature_ok(&s, &y) {
            if event == Event::Normal {
                event = Event::SkippedUpdate;
            }
            // History and dense approximations stay as they are.
        } else {
            match config.method {
                Method::Gd => {}
                Method::Lbfgs => lbfgs
                    .as_mut()
                    .expect("lbfgs history")
                    .push(s.clone(), y.clone()),
                method => {
                    let h_mat = h_inv.as_mut().expect("dense H");
                    // sᵀBs through the line-search identity B_k s = −α ∇f_k.
                    let sbs = -alpha * alpha * slope0;
                    let yhy = dot(&y, &sym_matvec(h_mat, &y));
                    let ys = dot(&y, &s);
                    let (q, ev) = select_scaling(method, sbs, yhy, ys, n, event);
                    event = ev;
                    *h_mat = match method {
                        Method::Bfgs => bfgs_inverse_update(h_mat, &s, &y),
                        _ => ssbroyden_inverse_update(h_mat, &s, &y, &q),
                    };
                    if let Some(b_mat) = b_direct.as_mut() {
                        // Debug tracking: verify the identity against the
                        // explicit product before updating B.
                        // Measured against the quadratic form's natural
                        // scale ‖B‖_F‖s‖²: B and H drift apart only at
                        // round-off rate (≈1e−8 after dozens of updates on
                        // ill-conditioned problems), while a structural bug
                        // in the identity shows up at O(1).
                        let explicit = dot(&s, &sym_matvec(b_mat, &s));
                        let scale = (b_mat.norm_fro() * dot(&s, &s)).max(1e-300);
                        assert!(
                            (explicit - sbs).abs() <= 1e-6 * scale,
                            "direction consistency violated at iteration {k}: \
                             identity sᵀBs = {sbs}, explicit = {explicit}"
                        );
                        *b_mat = broyden_direct_update(b_mat, &s, &y, &q);
                    }
                    scaling_used = Some(q);
                }
            }
        }

        let f_prev = f;
        let step_norm = s.norm_l2();
        x = x_new;
        f = f_new;
        g = g_new;
        push_record(&mut trace, problem, k, f, &g, alpha, &started, event);
        observer(&IterationInfo {
            iter: k,
            x: &x,
            f,
            g: &g,
            alpha,
            accepted: true,
            s: Some(&s),
            y: Some(&y),
            h_inv: h_inv.as_ref(),
            b_direct: b_direct.as_ref(),
            scaling: scaling_used.as_ref(),
            event,
        });
        if let Some(st) = converged(&config.criteria, &g, f_prev, f, step_norm) {
            status = st;
            break;
        }
    }

    Ok(RunResult {
        x_star: x,
        f_star: f,
        status,
        trace,
    })
}

/// Pick the (θ, τ) quantities for one update of `method`, upgrading the
/// event when the chain degenerates. Non-positive curvature products (a
/// numerical corner the Wolfe/damping guards should prevent) also fall
/// back to the unscaled update.
fn select_scaling(
    method: Method,
    sbs: Real,
    yhy: Real,
    ys: Real,
    n: usize,
    event: Event,
) -> (ScalingQuantities, Event) {
    let degenerate_fallback = |ev: Event| {
        let q = ScalingQuantities::unscaled_bfgs(1.0, 1.0);
        let ev = if ev == Event::Normal {
            Event::DegenerateScaling
        } else {
            ev
        };
        (q, ev)
    };
    if !(sbs > 0.0 && yhy > 0.0 && ys > 0.0) {
        return degenerate_fallback(event);
    }
    match method {
        Method::Bfgs => (ScalingQuantities::forced(sbs / ys, yhy / ys, 0.0, 1.0), event),
        Method::SsBfgs => (ScalingQuantities::ssbfgs(sbs / ys, yhy / ys), event),
        Method::SsBroyden => {
            let q = broyden_scaling_chain(sbs, yhy, ys, n);
            if q.degenerate {
                let ev = if event == Event::Normal {
                    Event::DegenerateScaling
                } else {
                    event
                };
                (q, ev)
            } else {
                (q, event)
            }
        }
        _ => unreachable!("scaling requested for a non-dense method"),
    }
}

fn converged(
    criteria: &ConvergenceCriteria,
    g: &DenseVector,
    f_prev: Real,
    f_new: Real,
    step_norm: Real,
) -> Option<Status> {
    if criteria.gnorm_of(g) <= criteria.gtol {
        return Some(Status::GradTol);
    }
    if criteria.ftol > 0.0 && (f_prev - f_new).abs() <= criteria.ftol {
        return Some(Status::FTol);
    }
    if criteria.xtol > 0.0 && step_norm <= criteria.xtol {
        return Some(Status::XTol);
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn push_record<O: Objective>(
    trace: &mut Vec<TraceRecord>,
    problem: &O,
    iter: u64,
    f: Real,
    g: &DenseVector,
    alpha: Real,
    started: &Instant,
    event: Event,
) {
    let counters = problem.counters();
    trace.push(TraceRecord {
        iter,
        f,
        gnorm_l2: g.norm_l2(),
        gnorm_inf: g.norm_linf(),
        alpha,
        n_fev: counters.n_fev,
        n_gev: counters.n_gev,
        elapsed_s: started.elapsed().as_secs_f64() as Real,
        event,
    });
}

#[cfg(test)]
#[cfg(not(feature = "single"))]
mod tests {
    use super::*;
    use crate::testfns::{quadratic_xy, rosenbrock};

    fn config(method: Method, globalization: Globalization) -> OptimizerConfig {
        OptimizerConfig {
            method,
            globalization,
            ..Default::default()
        }
    }

    #[test]
    fn quadratic_converges_fast_under_every_quasi_newton() {
        for method in [Method::Bfgs, Method::SsBfgs, Method::SsBroyden] {
            let mut problem = quadratic_xy();
            let result = minimize(
                &mut problem,
                &config(method, Globalization::Wolfe),
                &DenseVector::filled(2, 1.0),
            )
            .unwrap();
            assert_eq!(result.status, Status::GradTol, "{method:?}");
            assert!(result.iters() <= 10, "{method:?} took {}", result.iters());
            assert!(result.f_star <= 1e-10, "{method:?} f = {}", result.f_star);
            assert!(result.x_star.norm_l2() <= 1e-5);
        }
    }

    #[test]
    fn argmin_correct_for_every_method_and_globalization() {
        let combos: Vec<(Method, Globalization)> = vec![
            (Method::Gd, Globalization::Backtracking),
            (Method::Gd, Globalization::Wolfe),
            (Method::Adam, Globalization::Wolfe), // globalization unused
            (Method::Bfgs, Globalization::Wolfe),
            (Method::Bfgs, Globalization::Backtracking),
            (Method::Bfgs, Globalization::TrustRegion),
            (Method::SsBfgs, Globalization::Wolfe),
            (Method::SsBfgs, Globalization::Backtracking),
            (Method::SsBfgs, Globalization::TrustRegion),
            (Method::SsBroyden, Globalization::Wolfe),
            (Method::SsBroyden, Globalization::Backtracking),
            (Method::SsBroyden, Globalization::TrustRegion),
            (Method::Lbfgs, Globalization::Wolfe),
            (Method::Lbfgs, Globalization::Backtracking),
        ];
        for (method, glob) in combos {
            let mut problem = quadratic_xy();
            let mut cfg = config(method, glob);
            cfg.criteria.max_iters = 20_000; // Adam needs room at lr 1e−3
            let result = minimize(&mut problem, &cfg, &DenseVector::filled(2, 1.0)).unwrap();
            assert_eq!(
                result.status,
                Status::GradTol,
                "{method:?}+{glob:?} ended {:?}",
                result.status
            );
            assert!(
                result.x_star.norm_l2() <= 1e-5,
                "{method:?}+{glob:?} stopped at {:?}",
                result.x_star
            );
        }
    }

    #[test]
    fn stationary_start_returns_immediately() {
        let mut problem = quadratic_xy();
        let result = minimize(
            &mut problem,
            &config(Method::Bfgs, Globalization::Wolfe),
            &DenseVector::zeros(2),
        )
        .unwrap();
        assert_eq!(result.status, Status::GradTol);
        assert_eq!(result.iters(), 0);
        assert_eq!(result.f_star, 0.0);
    }

    #[test]
    fn rosenbrock_bfgs_wolfe_reference_run() {
        let mut problem = rosenbrock(2);
        let mut cfg = config(Method::Bfgs, Globalization::Wolfe);
        cfg.criteria.gnorm = GradNorm::Linf;
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(2, 0.5)).unwrap();
        assert_eq!(result.status, Status::GradTol);
        assert!(result.f_star <= 1e-12, "f = {}", result.f_star);
        assert!(result.iters() <= 40, "iters = {}", result.iters());
        for i in 0..2 {
            assert!((result.x_star[i] - 1.0).abs() <= 1e-5);
        }
    }

    #[test]
    fn rosenbrock_ssbroyden_dim20() {
        let mut problem = rosenbrock(20);
        let cfg = config(Method::SsBroyden, Globalization::Wolfe);
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(20, 0.5)).unwrap();
        assert_eq!(result.status, Status::GradTol);
        assert!(result.f_star <= 1e-12, "f = {}", result.f_star);
        assert!(result.iters() <= 200, "iters = {}", result.iters());
    }

    #[test]
    fn gd_stalls_on_rosenbrock() {
        let mut problem = rosenbrock(2);
        let cfg = config(Method::Gd, Globalization::Backtracking);
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(2, 0.5)).unwrap();
        assert_eq!(result.status, Status::MaxIters);
        assert!(result.f_star >= 1e-6, "gd got to {}", result.f_star);
    }

    #[test]
    fn monotone_descent_along_the_trace() {
        let mut problem = rosenbrock(5);
        let cfg = config(Method::SsBroyden, Globalization::Wolfe);
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(5, 0.5)).unwrap();
        let mut prev = Real::INFINITY;
        for rec in &result.trace {
            assert!(rec.f < prev, "f rose at iteration {}", rec.iter);
            prev = rec.f;
        }
    }

    #[test]
    fn trace_counters_match_problem_counters() {
        let mut problem = rosenbrock(5);
        let cfg = config(Method::Bfgs, Globalization::Wolfe);
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(5, 0.5)).unwrap();
        let last = result.trace.last().unwrap();
        let counters = problem.counters();
        assert_eq!(last.n_fev, counters.n_fev);
        assert_eq!(last.n_gev, counters.n_gev);
    }

    #[test]
    fn deterministic_reruns_are_bit_identical() {
        let run = || {
            let mut problem = rosenbrock(10);
            let cfg = config(Method::SsBroyden, Globalization::Wolfe);
            minimize(&mut problem, &cfg, &DenseVector::filled(10, 0.5)).unwrap()
        };
        let a = run();
        let b = run();
        assert_eq!(a.iters(), b.iters());
        for (ra, rb) in a.trace.iter().zip(&b.trace) {
            assert_eq!(ra.f.to_bits(), rb.f.to_bits());
            assert_eq!(ra.gnorm_l2.to_bits(), rb.gnorm_l2.to_bits());
            assert_eq!(ra.alpha.to_bits(), rb.alpha.to_bits());
            assert_eq!(ra.event, rb.event);
        }
        for i in 0..10 {
            assert_eq!(a.x_star[i].to_bits(), b.x_star[i].to_bits());
        }
    }

    #[test]
    fn track_direct_mode_upholds_the_identity() {
        // The assert inside the driver is the test: it fires on violation.
        for method in [Method::Bfgs, Method::SsBfgs, Method::SsBroyden] {
            let mut problem = rosenbrock(5);
            let mut cfg = config(method, Globalization::Wolfe);
            cfg.track_direct = true;
            let result = minimize(&mut problem, &cfg, &DenseVector::filled(5, 0.5)).unwrap();
            assert_eq!(result.status, Status::GradTol);
        }
    }

    #[test]
    fn non_finite_initial_value_aborts_with_iterate_named() {
        use crate::objective::FnObjective;
        let mut problem = FnObjective::new(
            2,
            |x: &DenseVector| x[0].sqrt(),
            |_| DenseVector::new(vec![1.0, 0.0]),
        );
        let cfg = config(Method::Gd, Globalization::Backtracking);
        let err = minimize(&mut problem, &cfg, &DenseVector::filled(2, -1.0)).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("non-finite objective value"), "{message}");
        assert!(message.contains("iteration 0"), "{message}");
        assert!(message.contains("-1"), "{message}");
    }

    #[test]
    fn non_finite_gradient_after_a_step_aborts() {
        use crate::objective::FnObjective;
        // Value stays finite (the searches would filter NaN values), but
        // the gradient blows up once an accepted step crosses x₀ < −0.5.
        let mut problem = FnObjective::new(
            2,
            |x: &DenseVector| 10.0 * x[0],
            |x| {
                if x[0] < -0.5 {
                    DenseVector::new(vec![Real::NAN, 0.0])
                } else {
                    DenseVector::new(vec![10.0, 0.0])
                }
            },
        );
        let cfg = config(Method::Gd, Globalization::Backtracking);
        let err = minimize(&mut problem, &cfg, &DenseVector::zeros(2)).unwrap_err();
        let message = err.to_string();
        assert!(message.contains("non-finite gradient component 0"), "{message}");
    }

    #[test]
    #[should_panic(expected = "trust-region globalization requires")]
    fn trust_region_rejects_memoryless_methods() {
        let mut problem = quadratic_xy();
        let _ = minimize(
            &mut problem,
            &config(Method::Gd, Globalization::TrustRegion),
            &DenseVector::filled(2, 1.0),
        );
    }

    #[test]
    fn observer_sees_every_iteration_plus_start() {
        let mut problem = rosenbrock(2);
        let cfg = config(Method::Bfgs, Globalization::Wolfe);
        let mut iters_seen = Vec::new();
        let result = minimize_with_observer(
            &mut problem,
            &cfg,
            &DenseVector::filled(2, 0.5),
            &mut |info| iters_seen.push(info.iter),
        )
        .unwrap();
        assert_eq!(iters_seen.len() as u64, result.iters() + 1);
        assert_eq!(iters_seen[0], 0);
        assert_eq!(*iters_seen.last().unwrap(), result.iters());
    }

    #[test]
    fn ftol_and_xtol_fire_when_enabled() {
        let mut problem = rosenbrock(2);
        let mut cfg = config(Method::Bfgs, Globalization::Wolfe);
        cfg.criteria.gtol = 0.0; // out of the way
        cfg.criteria.ftol = 1e-9;
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(2, 0.5)).unwrap();
        assert_eq!(result.status, Status::FTol);

        let mut problem = rosenbrock(2);
        let mut cfg = config(Method::Bfgs, Globalization::Wolfe);
        cfg.criteria.gtol = 0.0;
        cfg.criteria.xtol = 1e-8;
        let result = minimize(&mut problem, &cfg, &DenseVector::filled(2, 0.5)).unwrap();
        assert_eq!(result.status, Status::XTol);
    }
}
