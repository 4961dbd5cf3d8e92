//! Limited-memory BFGS: ring history of curvature pairs and the two-loop
//! recursion producing `p = −H_k g` without a dense matrix.

use crate::linalg::{dot, DenseVector};
use crate::Real;
use std::collections::VecDeque;

/// Choice of the initial matrix `H_k⁰` inside the two-loop recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialScaling {
    /// `H_k⁰ = γ_k·I` with `γ_k = s_{k−1}ᵀy_{k−1} / y_{k−1}ᵀy_{k−1}`, the
    /// standard choice — it sizes the first direction to the most recent
    /// curvature and is the default.
    #[default]
    Gamma,
    /// `H_k⁰ = I`. With memory ≥ iteration count this makes the recursion
    /// reproduce the dense-BFGS direction sequence started from `H₀ = I`.
    Identity,
}

struct Pair {
    s: DenseVector,
    y: DenseVector,
    /// `1/(yᵀs)`.
    rho: Real,
}

/// Ring buffer of the `m` most recent curvature pairs.
pub struct LbfgsHistory {
    memory: usize,
    pairs: VecDeque<Pair>,
    scaling: InitialScaling,
}

impl LbfgsHistory {
    pub fn new(memory: usize, scaling: InitialScaling) -> Self {
        assert!(memory >= 1, "l-bfgs memory must be at least 1");
        Self {
            memory,
            pairs: VecDeque::with_capacity(memory),
            scaling,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Record an accepted curvature pair; the oldest pair falls out when
    /// the ring is full. Requires `yᵀs > 0` (the caller's curvature guard).
    pub fn push(&mut self, s: DenseVector, y: DenseVector) {
        let ys = dot(&y, &s);
        assert!(ys > 0.0, "l-bfgs history requires yᵀs > 0");
        if self.pairs.len() == self.memory {
            self.pairs.pop_front();
        }
        self.pairs.push_back(Pair {
            rho: 1.0 / ys,
            s,
            y,
        });
    }

    /// Two-loop recursion: `p = −H_k g`. Empty history yields `p = −g`.
    pub fn direction(&self, g: &DenseVector) -> DenseVector {
        if self.pairs.is_empty() {
            return g.scale(-1.0);
        }
        let mut q = g.clone();
        let mut alphas = vec![0.0; self.pairs.len()];
        for (idx, pair) in self.pairs.iter().enumerate().rev() {
            let alpha = pair.rho * dot(&pair.s, &q);
            q = q.add_scaled(-alpha, &pair.y);
            alphas[idx] = alpha;
        }
        let gamma = match self.scaling {
            InitialScaling::Identity => 1.0,
            InitialScaling::Gamma => {
                let last = self.pairs.back().unwrap();
                dot(&last.s, &last.y) / dot(&last.y, &last.y)
            }
        };
        let mut r = q.scale(gamma);
        for (idx, pair) in self.pairs.iter().enumerate() {
            let beta = pair.rho * dot(&pair.y, &r);
            r = r.add_scaled(alphas[idx] - beta, &pair.s);
        }
        r.scale(-1.0)
    }
}

#[cfg(test)]
#[cfg(not(feature = "single"))]
mod tests {
    use super::*;
    use crate::linalg::{sym_matvec, SymmetricMatrix};
    use crate::optimizers::updates::bfgs_inverse_update;

    #[test]
    fn empty_history_is_steepest_descent() {
        let hist = LbfgsHistory::new(5, InitialScaling::Gamma);
        let g = DenseVector::new(vec![2.0, -1.0]);
        let p = hist.direction(&g);
        assert_eq!(p, DenseVector::new(vec![-2.0, 1.0]));
    }

    #[test]
    fn y_equals_s_entry_gives_identity_transform() {
        // One pair with y = s has γ = 1 and the two loops cancel on any g
        // orthogonal decomposition: H = I on span(s)ᶜ and 1 on span(s).
        let mut hist = LbfgsHistory::new(5, InitialScaling::Gamma);
        let s = DenseVector::new(vec![1.0, 0.0]);
        hist.push(s.clone(), s);
        let g = DenseVector::new(vec![0.7, -0.3]);
        let p = hist.direction(&g);
        assert!((p[0] + 0.7).abs() < 1e-15);
        assert!((p[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_bfgs_with_identity_scaling() {
        // Same update sequence: dense BFGS from H₀ = I versus the two-loop
        // with H⁰ = I and full memory. Directions must agree to 1e−10.
        let pairs = [
            (vec![0.5, 0.1, -0.2], vec![0.4, 0.3, 0.1]),
            (vec![-0.1, 0.2, 0.3], vec![0.1, 0.25, 0.2]),
            (vec![0.2, -0.1, 0.1], vec![0.15, -0.05, 0.3]),
        ];
        let mut dense = SymmetricMatrix::identity(3);
        let mut hist = LbfgsHistory::new(10, InitialScaling::Identity);
        for (s, y) in &pairs {
            let s = DenseVector::new(s.clone());
            let y = DenseVector::new(y.clone());
            dense = bfgs_inverse_update(&dense, &s, &y);
            hist.push(s, y);
        }
        let g = DenseVector::new(vec![0.3, -0.7, 0.2]);
        let want = sym_matvec(&dense, &g).scale(-1.0);
        let got = hist.direction(&g);
        for i in 0..3 {
            assert!(
                (want[i] - got[i]).abs() <= 1e-10,
                "component {i}: dense {} vs two-loop {}",
                want[i],
                got[i]
            );
        }
    }

    #[test]
    fn ring_evicts_oldest_pair() {
        let mut hist = LbfgsHistory::new(2, InitialScaling::Gamma);
        for k in 0..4 {
            let s = DenseVector::new(vec![1.0 + k as Real, 0.0]);
            let y = DenseVector::new(vec![1.0, 0.5]);
            hist.push(s, y);
        }
        assert_eq!(hist.len(), 2);
    }

    #[test]
    #[should_panic(expected = "yᵀs > 0")]
    fn rejects_nonpositive_curvature() {
        let mut hist = LbfgsHistory::new(2, InitialScaling::Gamma);
        hist.push(
            DenseVector::new(vec![1.0, 0.0]),
            DenseVector::new(vec![-1.0, 0.0]),
        );
    }
}
