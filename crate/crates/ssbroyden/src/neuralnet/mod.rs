//! A small fully connected tanh network with hand-written reverse-mode
//! backpropagation, packaged as [`Objective`] problems: least-squares
//! regression of a scalar function, and a 1D Poisson collocation problem
//! whose loss has the physics-informed shape (PDE residual plus soft
//! boundary penalty).
//!
//! The network maps a scalar input to a scalar output through tanh hidden
//! layers and an identity output layer. Its parameters live in one flat
//! vector with a fixed, documented order — layer by layer, each layer's
//! weight matrix in row-major order (rows indexed by output unit) followed
//! by its bias vector — so optimizer iterates, saved parameter files, and
//! reimplementations agree on meaning.

pub mod rng;

pub use rng::SeededRng;

use crate::linalg::DenseVector;
use crate::objective::{EvalCounters, Objective};
use crate::Real;

const PI: Real = std::f64::consts::PI as Real;

/// Default physics-problem architecture.
pub const DEFAULT_PINN_ARCH: [usize; 4] = [1, 16, 16, 1];
/// Default number of interior collocation points.
pub const DEFAULT_N_COLLOC: usize = 64;
/// Default step for the finite-difference second derivative in the PDE
/// residual.
pub const DEFAULT_FD_H: Real = 1e-4;
/// Default PDE-residual weight.
pub const DEFAULT_LAMBDA_PDE: Real = 1.0;
/// Default boundary-penalty weight.
pub const DEFAULT_LAMBDA_BC: Real = 100.0;

/// Standard regression target for demos and benchmarks.
pub fn sin_2pi(x: Real) -> Real {
    (2.0 * PI * x).sin()
}

/// Architecture of a scalar-to-scalar multilayer perceptron: tanh on every
/// hidden layer, identity on the output layer. Holds no parameters itself;
/// every evaluation takes the flat parameter vector described in the
/// module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mlp {
    layer_sizes: Vec<usize>,
}

impl Mlp {
    pub fn new(layer_sizes: &[usize]) -> Self {
        assert!(
            layer_sizes.len() >= 2,
            "an MLP needs at least input and output layers"
        );
        assert!(
            layer_sizes.iter().all(|&w| w >= 1),
            "layer widths must be positive"
        );
        assert_eq!(layer_sizes[0], 1, "the network input is a scalar");
        assert_eq!(
            *layer_sizes.last().unwrap(),
            1,
            "the network output is a scalar"
        );
        Self {
            layer_sizes: layer_sizes.to_vec(),
        }
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    /// Number of weight layers (connections between consecutive widths).
    fn num_layers(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    /// Length of the flat parameter vector.
    pub fn param_count(&self) -> usize {
        self.layer_sizes
            .windows(2)
            .map(|w| w[0] * w[1] + w[1])
            .sum()
    }

    /// Network output at `x`.
    pub fn forward(&self, params: &[Real], x: Real) -> Real {
        *self.forward_tape(params, x).last().unwrap().first().unwrap()
    }

    /// Forward pass keeping every layer's activations (the "tape" that
    /// backprop consumes). Entry 0 is the input, the last entry is the
    /// one-element output layer.
    fn forward_tape(&self, params: &[Real], x: Real) -> Vec<Vec<Real>> {
        assert_eq!(
            params.len(),
            self.param_count(),
            "parameter vector length does not match the architecture"
        );
        let mut acts: Vec<Vec<Real>> = Vec::with_capacity(self.layer_sizes.len());
        acts.push(vec![x]);
        let mut offset = 0;
        for l in 0..self.num_layers() {
            let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let weights = &params[offset..offset + n_out * n_in];
            let biases = &params[offset + n_out * n_in..offset + n_out * n_in + n_out];
            let prev = acts.last().unwrap();
            let hidden = l + 1 < self.layer_sizes.len() - 1;
            let mut next = Vec::with_capacity(n_out);
            for o in 0..n_out {
                let mut z = biases[o];
                for (i, &a) in prev.iter().enumerate() {
                    z += weights[o * n_in + i] * a;
                }
                next.push(if hidden { z.tanh() } else { z });
            }
            acts.push(next);
            offset += n_out * n_in + n_out;
        }
        acts
    }

    /// Accumulate `upstream · ∂output/∂params` into `grad` by walking the
    /// tape backwards. `tanh' = 1 − tanh²` comes straight from the stored
    /// activations, so no pre-activations are kept.
    fn backprop(&self, params: &[Real], tape: &[Vec<Real>], upstream: Real, grad: &mut [Real]) {
        assert_eq!(grad.len(), self.param_count());
        let mut delta = vec![upstream]; // ∂loss/∂z at the identity output
        let mut offset = self.param_count();
        for l in (0..self.num_layers()).rev() {
            let (n_in, n_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            offset -= n_out * n_in + n_out;
            let prev = &tape[l];
            for o in 0..n_out {
                for (i, &a) in prev.iter().enumerate() {
                    grad[offset + o * n_in + i] += delta[o] * a;
                }
                grad[offset + n_out * n_in + o] += delta[o];
            }
            if l > 0 {
                let weights = &params[offset..offset + n_out * n_in];
                let mut delta_prev = vec![0.0; n_in];
                for (i, dp) in delta_prev.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (o, &d) in delta.iter().enumerate() {
                        acc += weights[o * n_in + i] * d;
                    }
                    let a = prev[i]; // tanh activation of hidden layer l
                    *dp = acc * (1.0 - a * a);
                }
                delta = delta_prev;
            }
        }
    }
}

/// Glorot-uniform parameter vector for `sizes`: each layer's weights drawn
/// from `U(−√(6/(fan_in+fan_out)), +√(6/(fan_in+fan_out)))` in flattening
/// order, biases zero. Same seed, same bits, on every platform.
pub fn init_glorot(sizes: &[usize], seed: u64) -> DenseVector {
    let mlp = Mlp::new(sizes);
    let mut rng = SeededRng::new(seed);
    let mut params = Vec::with_capacity(mlp.param_count());
    for w in sizes.windows(2) {
        let (fan_in, fan_out) = (w[0], w[1]);
        let bound = (6.0 / (fan_in + fan_out) as Real).sqrt();
        for _ in 0..fan_in * fan_out {
            params.push(rng.uniform(-bound, bound));
        }
        params.extend(std::iter::repeat(0.0).take(fan_out));
    }
    DenseVector::new(params)
}

/// Non-finite loss terms, named. The [`Objective`] methods cannot return
/// errors, so they surface a NaN value (which aborts the optimizer run
/// with its own diagnostic) while [`MlpProblem::loss_grad`] reports the
/// offending term precisely.
#[derive(Debug, Clone, thiserror::Error)]
pub enum LossError {
    #[error("non-finite {term} ({value}) at index {index}")]
    NonFiniteTerm {
        term: &'static str,
        index: usize,
        value: Real,
    },
}

#[derive(Debug, Clone)]
enum ProblemKind {
    Regression {
        xs: Vec<Real>,
        targets: Vec<Real>,
    },
    Poisson {
        xs: Vec<Real>,
        fd_h: Real,
        lambda_pde: Real,
        lambda_bc: Real,
    },
}

/// A network architecture bound to a loss — regression or Poisson
/// collocation — exposed through the [`Objective`] trait with the flat
/// parameter vector as the optimization variable.
#[derive(Debug, Clone)]
pub struct MlpProblem {
    mlp: Mlp,
    kind: ProblemKind,
    seed: u64,
    counters: EvalCounters,
}

/// Mean-squared-error regression of `target` over `n_points` equispaced
/// samples of `[0, 1]` (endpoints included). `seed` fixes the Glorot
/// starting point returned by [`MlpProblem::initial_params`].
pub fn regression_problem(
    arch: &[usize],
    n_points: usize,
    target: fn(Real) -> Real,
    seed: u64,
) -> MlpProblem {
    assert!(n_points >= 2, "regression needs at least two sample points");
    let xs: Vec<Real> = (0..n_points)
        .map(|j| j as Real / (n_points - 1) as Real)
        .collect();
    let targets: Vec<Real> = xs.iter().map(|&x| target(x)).collect();
    MlpProblem {
        mlp: Mlp::new(arch),
        kind: ProblemKind::Regression { xs, targets },
        seed,
        counters: EvalCounters::default(),
    }
}

/// Collocation loss for `−u″ = π² sin(πx)` on `[0, 1]` with zero boundary
/// values (exact solution `sin(πx)`):
///
/// ```text
/// loss = λ_pde · mean_i r_i²  +  λ_bc · (u(0)² + u(1)²)
/// r_i  = (u(x_i+h) − 2u(x_i) + u(x_i−h))/h²  +  π² sin(π x_i)
/// ```
///
/// over the uniform interior grid `x_i = i/(n+1)`, `i = 1..n`. The second
/// derivative is a finite difference of three forward passes, so the
/// gradient is plain backprop through those passes; at the default
/// `h = 1e−4` the truncation left in the residual (≈ `h²π⁴/12`) sits far
/// below the training targets.
pub fn poisson_pinnlite(
    arch: &[usize],
    n_colloc: usize,
    fd_h: Real,
    lambda_pde: Real,
    lambda_bc: Real,
    seed: u64,
) -> MlpProblem {
    assert!(n_colloc >= 8, "need at least 8 collocation points");
    assert!(lambda_pde >= 0.0 && lambda_bc >= 0.0);
    let spacing = 1.0 / (n_colloc + 1) as Real;
    assert!(
        fd_h > 0.0 && fd_h < spacing / 2.0,
        "fd_h must be positive and well below the collocation spacing {spacing}"
    );
    let xs: Vec<Real> = (1..=n_colloc)
        .map(|i| i as Real / (n_colloc + 1) as Real)
        .collect();
    MlpProblem {
        mlp: Mlp::new(arch),
        kind: ProblemKind::Poisson {
            xs,
            fd_h,
            lambda_pde,
            lambda_bc,
        },
        seed,
        counters: EvalCounters::default(),
    }
}

/// PDE residuals of an arbitrary function `u` on the same grid and with
/// the same finite-difference stencil the Poisson loss uses. Substituting
/// the exact solution `sin(πx)` isolates the stencil's truncation error.
pub fn poisson_residuals<F: Fn(Real) -> Real>(u: F, n_colloc: usize, fd_h: Real) -> Vec<Real> {
    (1..=n_colloc)
        .map(|i| {
            let x = i as Real / (n_colloc + 1) as Real;
            let second = (u(x + fd_h) - 2.0 * u(x) + u(x - fd_h)) / (fd_h * fd_h);
            second + PI * PI * (PI * x).sin()
        })
        .collect()
}

impl MlpProblem {
    pub fn arch(&self) -> &[usize] {
        self.mlp.layer_sizes()
    }

    /// Glorot starting point for this problem's stored seed.
    pub fn initial_params(&self) -> DenseVector {
        init_glorot(self.mlp.layer_sizes(), self.seed)
    }

    /// Network prediction at `x` under `params`.
    pub fn predict(&self, params: &DenseVector, x: Real) -> Real {
        self.mlp.forward(params.as_slice(), x)
    }

    /// Relative L2 error of the network against the Poisson problem's
    /// exact solution `sin(πx)` on an `n_grid`-point uniform grid over
    /// `[0, 1]`. Panics for regression problems, which have no exact
    /// solution attached.
    pub fn rel_l2_vs_exact(&self, params: &DenseVector, n_grid: usize) -> Real {
        assert!(
            matches!(self.kind, ProblemKind::Poisson { .. }),
            "exact solution is only defined for the Poisson problem"
        );
        assert!(n_grid >= 2);
        let mut num = 0.0;
        let mut den = 0.0;
        for j in 0..n_grid {
            let x = j as Real / (n_grid - 1) as Real;
            let u = self.mlp.forward(params.as_slice(), x);
            let exact = (PI * x).sin();
            num += (u - exact) * (u - exact);
            den += exact * exact;
        }
        (num / den).sqrt()
    }

    /// Loss and exact gradient, with non-finite terms reported by name.
    /// Does not touch the evaluation counters.
    pub fn loss_grad(&self, params: &DenseVector) -> Result<(Real, DenseVector), LossError> {
        let mut grad = vec![0.0; self.mlp.param_count()];
        let f = self.eval(params.as_slice(), Some(&mut grad))?;
        Ok((f, DenseVector::new(grad)))
    }

    /// Single pass computing the loss and, when requested, accumulating
    /// the gradient. Summation runs in a fixed order (collocation points
    /// ascending, then boundaries) so evaluations are bit-reproducible.
    fn eval(&self, params: &[Real], mut grad: Option<&mut [Real]>) -> Result<Real, LossError> {
        match &self.kind {
            ProblemKind::Regression { xs, targets } => {
                let n = xs.len() as Real;
                let mut sum = 0.0;
                for (j, (&x, &t)) in xs.iter().zip(targets).enumerate() {
                    let tape = self.mlp.forward_tape(params, x);
                    let err = tape.last().unwrap()[0] - t;
                    let sq = err * err;
                    if !sq.is_finite() {
                        return Err(LossError::NonFiniteTerm {
                            term: "squared error",
                            index: j,
                            value: sq,
                        });
                    }
                    sum += sq;
                    if let Some(g) = grad.as_deref_mut() {
                        self.mlp.backprop(params, &tape, 2.0 * err / n, g);
                    }
                }
                Ok(sum / n)
            }
            ProblemKind::Poisson {
                xs,
                fd_h,
                lambda_pde,
                lambda_bc,
            } => {
                let n = xs.len() as Real;
                let inv_h2 = 1.0 / (fd_h * fd_h);
                let mut sum_r2 = 0.0;
                for (i, &x) in xs.iter().enumerate() {
                    let tape_p = self.mlp.forward_tape(params, x + fd_h);
                    let tape_c = self.mlp.forward_tape(params, x);
                    let tape_m = self.mlp.forward_tape(params, x - fd_h);
                    let second = (tape_p.last().unwrap()[0] - 2.0 * tape_c.last().unwrap()[0]
                        + tape_m.last().unwrap()[0])
                        * inv_h2;
                    let r = second + PI * PI * (PI * x).sin();
                    if !r.is_finite() {
                        return Err(LossError::NonFiniteTerm {
                            term: "pde residual",
                            index: i,
                            value: r,
                        });
                    }
                    sum_r2 += r * r;
                    if let Some(g) = grad.as_deref_mut() {
                        // ∂r/∂θ is the same stencil applied to ∂u/∂θ.
                        let c = lambda_pde * 2.0 * r / n;
                        self.mlp.backprop(params, &tape_p, c * inv_h2, g);
                        self.mlp.backprop(params, &tape_c, -2.0 * c * inv_h2, g);
                        self.mlp.backprop(params, &tape_m, c * inv_h2, g);
                    }
                }
                let mut bc = 0.0;
                for (idx, xb) in [0.0, 1.0].into_iter().enumerate() {
                    let tape = self.mlp.forward_tape(params, xb);
                    let u = tape.last().unwrap()[0];
                    if !u.is_finite() {
                        return Err(LossError::NonFiniteTerm {
                            term: "boundary value",
                            index: idx,
                            value: u,
                        });
                    }
                    bc += u * u;
                    if let Some(g) = grad.as_deref_mut() {
                        self.mlp.backprop(params, &tape, 2.0 * lambda_bc * u, g);
                    }
                }
                Ok(lambda_pde * sum_r2 / n + lambda_bc * bc)
            }
        }
    }
}

impl Objective for MlpProblem {
    fn dim(&self) -> usize {
        self.mlp.param_count()
    }

    fn value(&mut self, x: &DenseVector) -> Real {
        assert_eq!(x.len(), self.dim(), "parameter vector has wrong length");
        self.counters.n_fev += 1;
        match self.eval(x.as_slice(), None) {
            Ok(f) => f,
            Err(_) => Real::NAN,
        }
    }

    fn gradient(&mut self, x: &DenseVector) -> DenseVector {
        assert_eq!(x.len(), self.dim(), "parameter vector has wrong length");
        self.counters.n_gev += 1;
        let mut grad = vec![0.0; self.dim()];
        match self.eval(x.as_slice(), Some(&mut grad)) {
            Ok(_) => DenseVector::new(grad),
            Err(_) => DenseVector::new(vec![Real::NAN; self.dim()]),
        }
    }

    fn value_grad(&mut self, x: &DenseVector) -> (Real, DenseVector) {
        assert_eq!(x.len(), self.dim(), "parameter vector has wrong length");
        self.counters.n_fev += 1;
        self.counters.n_gev += 1;
        let mut grad = vec![0.0; self.dim()];
        match self.eval(x.as_slice(), Some(&mut grad)) {
            Ok(f) => (f, DenseVector::new(grad)),
            Err(_) => (Real::NAN, DenseVector::new(vec![Real::NAN; self.dim()])),
        }
    }

    fn counters(&self) -> EvalCounters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = EvalCounters::default();
    }
}

#[cfg(test)]
#[cfg(not(feature = "single"))]
mod tests {
    use super::*;
    use crate::testfns::grad_check;

    fn zero_target(_: Real) -> Real {
        0.0
    }

    /// Random full parameter vector (weights and biases) of moderate scale.
    fn random_params(mlp_sizes: &[usize], seed: u64) -> DenseVector {
        let count = Mlp::new(mlp_sizes).param_count();
        let mut rng = SeededRng::new(seed);
        DenseVector::new((0..count).map(|_| rng.uniform(-0.5, 0.5)).collect())
    }

    #[test]
    fn param_count_matches_hand_tally() {
        // 16·1+16, 16·16+16, 1·16+1 → 32 + 272 + 17.
        assert_eq!(Mlp::new(&[1, 16, 16, 1]).param_count(), 321);
        assert_eq!(Mlp::new(&[1, 4, 1]).param_count(), 13);
        assert_eq!(Mlp::new(&[1, 1]).param_count(), 2);
    }

    #[test]
    fn forward_matches_hand_computation() {
        // [1,2,1]: u(x) = w2·tanh(w1·x + b1) + b2 per unit.
        let mlp = Mlp::new(&[1, 2, 1]);
        // Layer 0 weights (2×1) = [0.5, −1.0], biases = [0.1, 0.2];
        // layer 1 weights (1×2) = [2.0, 3.0], bias = [−0.4].
        let params = [0.5, -1.0, 0.1, 0.2, 2.0, 3.0, -0.4];
        let x = 0.7;
        let expected = 2.0 * (0.5 * x + 0.1 as Real).tanh() + 3.0 * (-1.0 * x + 0.2 as Real).tanh()
            - 0.4;
        assert!((mlp.forward(&params, x) - expected).abs() <= 1e-15);
    }

    #[test]
    fn single_layer_network_is_affine() {
        let mlp = Mlp::new(&[1, 1]);
        // No hidden layer: output = w·x + b exactly (identity activation).
        let params = [3.0, -1.0];
        assert_eq!(mlp.forward(&params, 2.0), 5.0);
    }

    #[test]
    fn glorot_init_is_deterministic_with_zero_biases_and_bounded_weights() {
        let a = init_glorot(&[1, 16, 16, 1], 7);
        let b = init_glorot(&[1, 16, 16, 1], 7);
        assert_eq!(a.len(), 321);
        for i in 0..a.len() {
            assert_eq!(a[i].to_bits(), b[i].to_bits());
        }
        let c = init_glorot(&[1, 16, 16, 1], 8);
        assert!((0..c.len()).any(|i| a[i].to_bits() != c[i].to_bits()));

        // Middle layer: fan_in = fan_out = 16 → bound √(6/32) ≈ 0.43301.
        let bound = (6.0 / 32.0 as Real).sqrt();
        assert!((bound - 0.433_012_701_892_219_3).abs() <= 1e-15);
        let mid = &a.as_slice()[32..32 + 256];
        assert!(mid.iter().all(|w| w.abs() < bound));
        assert!(mid.iter().any(|w| w.abs() > 0.9 * bound));
        // Bias blocks: entries 16·1..32, 32+256..304, 304+16..321.
        for range in [16..32, 288..304, 320..321] {
            assert!(a.as_slice()[range].iter().all(|&b| b == 0.0));
        }
    }

    #[test]
    fn zero_network_zero_target_has_zero_loss_and_gradient() {
        let mut problem = regression_problem(&[1, 8, 1], 16, zero_target, 0);
        let zero = DenseVector::zeros(problem.dim());
        assert_eq!(problem.value(&zero), 0.0);
        assert!(problem.gradient(&zero).iter().all(|&g| g == 0.0));
    }

    #[test]
    fn duplicate_evaluations_are_bitwise_identical() {
        let mut problem = poisson_pinnlite(&[1, 8, 1], 16, 1e-4, 1.0, 100.0, 3);
        let x = problem.initial_params();
        let (f1, g1) = problem.value_grad(&x);
        let (f2, g2) = problem.value_grad(&x);
        assert_eq!(f1.to_bits(), f2.to_bits());
        for i in 0..g1.len() {
            assert_eq!(g1[i].to_bits(), g2[i].to_bits());
        }
    }

    #[test]
    fn backprop_matches_finite_differences_on_regression_losses() {
        // MSE losses are numerically benign, so central differences at
        // h = 1e−6 resolve the gradient to far better than 1e−6 relative.
        for arch in [&[1, 4, 1][..], &[1, 8, 8, 1][..], &[1, 16, 16, 1][..]] {
            for seed in [1, 2, 3] {
                let mut problem = regression_problem(arch, 16, sin_2pi, seed);
                let x = random_params(arch, 100 + seed);
                let worst = grad_check(&mut problem, &x, 1e-6);
                assert!(worst <= 1e-6, "{arch:?} seed {seed}: rel err {worst}");
            }
        }
    }

    #[test]
    fn backprop_matches_finite_differences_on_the_boundary_penalty() {
        // λ_pde = 0 leaves only the boundary term, which has no 1/h²
        // amplification, so the tight tolerance applies.
        let mut problem = poisson_pinnlite(&[1, 8, 1], 16, 1e-4, 0.0, 100.0, 5);
        let x = random_params(&[1, 8, 1], 11);
        let worst = grad_check(&mut problem, &x, 1e-6);
        assert!(worst <= 1e-6, "rel err {worst}");
    }

    #[test]
    fn backprop_matches_finite_differences_on_a_coarse_stencil_pde_loss() {
        // The full PDE loss divides by fd_h², which amplifies the
        // round-off the finite-difference probe sees by 1/fd_h². A coarse
        // stencil keeps that amplification small enough for a meaningful
        // check; the default fd_h = 1e−4 loss is validated instead through
        // the boundary-only case above, the stencil oracle below, and the
        // training experiments.
        let mut problem = poisson_pinnlite(&[1, 4, 1], 8, 0.05, 1.0, 100.0, 5);
        let x = random_params(&[1, 4, 1], 12);
        let worst = grad_check(&mut problem, &x, 1e-6);
        assert!(worst <= 1e-4, "rel err {worst}");
    }

    #[test]
    fn exact_solution_leaves_only_truncation_in_the_residuals() {
        let rs = poisson_residuals(|x| (PI * x).sin(), 64, 1e-4);
        let max = rs.iter().fold(0.0 as Real, |m, r| m.max(r.abs()));
        // Truncation ≈ h²π⁴ sin(πx)/12 plus round-off from the 1/h²
        // division: well under h²π⁴ ≈ 9.7e−7, but clearly nonzero.
        assert!(max <= 9.7e-7, "max residual {max}");
        assert!(max >= 1e-9, "suspiciously exact: {max}");
    }

    #[test]
    fn boundary_only_loss_ignores_the_interior() {
        // λ_pde = 0 and a zero network (u ≡ 0 satisfies the boundary
        // conditions) → loss exactly 0 despite nonzero PDE residuals.
        let mut problem = poisson_pinnlite(&[1, 8, 1], 16, 1e-4, 0.0, 100.0, 0);
        let zero = DenseVector::zeros(problem.dim());
        assert_eq!(problem.value(&zero), 0.0);
    }

    #[test]
    fn collocation_grid_is_the_uniform_interior_grid() {
        let rs = poisson_residuals(|_| 0.0, 9, 1e-4);
        // With u ≡ 0 the residual is exactly π² sin(πx_i) at x_i = i/10.
        for (i, r) in rs.iter().enumerate() {
            let x = (i + 1) as Real / 10.0;
            assert!((r - PI * PI * (PI * x).sin()).abs() <= 1e-12);
        }
    }

    #[test]
    fn nonfinite_parameters_name_the_offending_term() {
        let problem = poisson_pinnlite(&[1, 4, 1], 8, 1e-4, 1.0, 100.0, 0);
        let mut params = DenseVector::zeros(problem.dim());
        params[0] = Real::INFINITY;
        let err = problem.loss_grad(&params).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("non-finite"), "{msg}");
        // The Objective view degrades to NaN so the optimizer aborts.
        let mut problem = problem;
        assert!(problem.value(&params).is_nan());
    }

    #[test]
    fn rel_l2_error_of_the_exact_solution_is_tiny_for_a_big_network() {
        // Not trainable to zero exactly, but the metric itself must
        // evaluate to 0 when the prediction equals the exact solution;
        // check via a problem whose predict we bypass.
        let problem = poisson_pinnlite(&[1, 8, 1], 16, 1e-4, 1.0, 100.0, 0);
        let zero = DenseVector::zeros(problem.dim());
        // u ≡ 0 → relative error 1 (numerator equals denominator).
        assert!((problem.rel_l2_vs_exact(&zero, 201) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn counters_track_fused_and_split_evaluations() {
        let mut problem = regression_problem(&[1, 4, 1], 8, sin_2pi, 0);
        let x = problem.initial_params();
        problem.value(&x);
        problem.gradient(&x);
        problem.value_grad(&x);
        let c = problem.counters();
        assert_eq!((c.n_fev, c.n_gev), (2, 2));
        problem.reset_counters();
        let c = problem.counters();
        assert_eq!((c.n_fev, c.n_gev), (0, 0));
    }

    #[test]
    fn bfgs_trains_the_small_regression_network() {
        use crate::optimizers::{minimize, OptimizerConfig};
        // Training to 1e−8 is seed-dependent on a tanh landscape; this
        // seed converges (GradTol, loss ≈ 2e−9) with a 5× margin.
        let mut problem = regression_problem(&[1, 16, 1], 32, sin_2pi, 7);
        let x0 = problem.initial_params();
        let config = OptimizerConfig {
            criteria: crate::optimizers::ConvergenceCriteria {
                max_iters: 500,
                ..Default::default()
            },
            ..Default::default()
        };
        let result = minimize(&mut problem, &config, &x0).unwrap();
        assert!(
            result.f_star <= 1e-8,
            "loss {} after {} iterations",
            result.f_star,
            result.iters()
        );
    }
}
