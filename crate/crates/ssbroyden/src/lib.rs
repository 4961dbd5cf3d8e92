//! Self-scaled Broyden-family quasi-Newton optimizers.
//!
//! This crate implements dense quasi-Newton methods (BFGS, SSBFGS, SSBroyden,
//! L-BFGS) together with two first-order baselines (gradient descent, Adam),
//! composable with three globalization strategies: Strong Wolfe line search,
//! Armijo backtracking, and a dogleg trust region. Everything is built on a
//! small hand-rolled dense linear algebra layer so that runs are
//! bit-reproducible: summation order is fixed and no BLAS is involved.
//!
//! The self-scaled updates multiply the curvature approximation by a scalar
//! `τ_k` each iteration before applying a Broyden-family rank-two correction
//! with parameter `θ_k`, chosen by a closed-form chain of quantities derived
//! from `sᵀBs` and `yᵀHy`. Setting `θ = 0, τ = 1` recovers plain BFGS and
//! `θ = 1, τ = 1` recovers DFP.
//!
//! # Example
//!
//! Minimize the 2-D Rosenbrock function with SSBroyden and a Strong Wolfe
//! line search:
//!
//! ```
//! use ssbroyden::optimizers::{minimize, ConvergenceCriteria, Globalization, Method, OptimizerConfig};
//! use ssbroyden::testfns::rosenbrock;
//! use ssbroyden::linalg::DenseVector;
//!
//! let mut problem = rosenbrock(2);
//! let config = OptimizerConfig {
//!     method: Method::SsBroyden,
//!     globalization: Globalization::Wolfe,
//!     criteria: ConvergenceCriteria { gtol: 1e-6, ..Default::default() },
//!     ..Default::default()
//! };
//! let result = minimize(&mut problem, &config, &DenseVector::filled(2, 0.5)).unwrap();
//! assert!(result.f_star < 1e-12);
//! assert!((result.x_star[0] - 1.0).abs() < 1e-5);
//! ```
//!
//! A narrative guide with worked derivations lives in the `book/` directory
//! of the repository; its code snippets are compiled and run as doc-tests.

pub mod linalg;
pub mod linesearch;
pub mod neuralnet;
pub mod objective;
pub mod optimizers;
pub mod testfns;
pub mod trace;
pub mod trustregion;

/// Scalar type used throughout the crate.
///
/// `f64` by default; the `single` cargo feature switches the whole crate to
/// `f32` to mimic single-precision training runs. The shipped test suite and
/// all stated tolerances assume the default `f64` build.
#[cfg(not(feature = "single"))]
pub type Real = f64;

/// Scalar type used throughout the crate (single-precision build).
#[cfg(feature = "single")]
pub type Real = f32;

pub use linalg::{DenseVector, SymmetricMatrix};
pub use objective::{EvalCounters, Objective};
pub use optimizers::{minimize, Method, OptimizerConfig, RunResult};
pub use trace::{Event, TraceRecord};
