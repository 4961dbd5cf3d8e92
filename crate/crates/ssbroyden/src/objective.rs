//! Objective-function abstraction shared by every optimizer.
//!
//! An [`Objective`] exposes value, gradient, and fused value-plus-gradient
//! evaluations over flat parameter vectors, and owns its evaluation counters.
//! Optimizers never peek inside a problem; everything they learn comes
//! through these three calls.

use crate::linalg::DenseVector;
use crate::Real;

/// Running tally of oracle calls.
///
/// `n_fev` counts function-value evaluations and `n_gev` gradient
/// evaluations. A fused [`Objective::value_grad`] call increments both by
/// one — it prices one pass that yields both quantities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounters {
    pub n_fev: u64,
    pub n_gev: u64,
}

/// A smooth unconstrained minimization target `f : Rⁿ → R`.
///
/// Implementations must be deterministic: the same `x` always yields the
/// same value and gradient. Counter bookkeeping is the implementor's duty;
/// the provided problems route every evaluation through a shared tally.
pub trait Objective {
    /// Number of optimization variables.
    fn dim(&self) -> usize;

    /// `f(x)`. Increments `n_fev`.
    fn value(&mut self, x: &DenseVector) -> Real;

    /// `∇f(x)`. Increments `n_gev`.
    fn gradient(&mut self, x: &DenseVector) -> DenseVector;

    /// `(f(x), ∇f(x))` in one pass. Increments `n_fev` and `n_gev` once each.
    fn value_grad(&mut self, x: &DenseVector) -> (Real, DenseVector) {
        (self.value(x), self.gradient(x))
    }

    /// Counter snapshot.
    fn counters(&self) -> EvalCounters;

    /// Reset counters to zero (between benchmark runs on a shared problem).
    fn reset_counters(&mut self);
}

/// Objective built from closures; the workhorse for tests and small demos.
pub struct FnObjective<F, G>
where
    F: FnMut(&DenseVector) -> Real,
    G: FnMut(&DenseVector) -> DenseVector,
{
    dim: usize,
    f: F,
    g: G,
    counters: EvalCounters,
}

impl<F, G> FnObjective<F, G>
where
    F: FnMut(&DenseVector) -> Real,
    G: FnMut(&DenseVector) -> DenseVector,
{
    pub fn new(dim: usize, f: F, g: G) -> Self {
        assert!(dim >= 1, "objective must have at least one variable");
        Self {
            dim,
            f,
            g,
            counters: EvalCounters::default(),
        }
    }
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: FnMut(&DenseVector) -> Real,
    G: FnMut(&DenseVector) -> DenseVector,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&mut self, x: &DenseVector) -> Real {
        assert_eq!(x.len(), self.dim, "objective: x has wrong dimension");
        self.counters.n_fev += 1;
        (self.f)(x)
    }

    fn gradient(&mut self, x: &DenseVector) -> DenseVector {
        assert_eq!(x.len(), self.dim, "objective: x has wrong dimension");
        self.counters.n_gev += 1;
        let g = (self.g)(x);
        assert_eq!(g.len(), self.dim, "objective: gradient has wrong dimension");
        g
    }

    fn counters(&self) -> EvalCounters {
        self.counters
    }

    fn reset_counters(&mut self) {
        self.counters = EvalCounters::default();
    }
}
