//! Adam first-order baseline with bias-corrected moment estimates and an
//! optional stepwise exponential learning-rate decay.

use crate::linalg::DenseVector;
use crate::Real;

/// Stepwise exponential decay: the learning rate is multiplied by `factor`
/// once every `every` iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamDecay {
    pub factor: Real,
    pub every: u64,
}

impl Default for AdamDecay {
    fn default() -> Self {
        Self {
            factor: 0.98,
            every: 1000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: Real,
    pub beta1: Real,
    pub beta2: Real,
    pub eps: Real,
    pub decay: Option<AdamDecay>,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            decay: None,
        }
    }
}

/// First and second moment accumulators.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: DenseVector,
    v: DenseVector,
    t: u64,
}

impl AdamState {
    pub fn new(dim: usize) -> Self {
        Self {
            m: DenseVector::zeros(dim),
            v: DenseVector::zeros(dim),
            t: 0,
        }
    }

    /// The learning rate the next step will use.
    pub fn effective_lr(&self, cfg: &AdamConfig) -> Real {
        match cfg.decay {
            Some(d) => cfg.lr * d.factor.powi((self.t / d.every) as i32),
            None => cfg.lr,
        }
    }

    /// One bias-corrected Adam step; returns the new iterate.
    pub fn step(&mut self, x: &DenseVector, g: &DenseVector, cfg: &AdamConfig) -> DenseVector {
        assert_eq!(x.len(), g.len(), "adam: dimension mismatch");
        assert_eq!(x.len(), self.m.len(), "adam: state dimension mismatch");
        let lr = self.effective_lr(cfg);
        self.t += 1;
        let t = self.t as i32;
        let mut x_new = x.clone();
        let bc1 = 1.0 - cfg.beta1.powi(t);
        let bc2 = 1.0 - cfg.beta2.powi(t);
        for i in 0..x.len() {
            self.m[i] = cfg.beta1 * self.m[i] + (1.0 - cfg.beta1) * g[i];
            self.v[i] = cfg.beta2 * self.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            x_new[i] = x[i] - lr * m_hat / (v_hat.sqrt() + cfg.eps);
        }
        x_new
    }
}
