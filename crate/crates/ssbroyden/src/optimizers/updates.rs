//! Quasi-Newton curvature updates: BFGS and DFP, the general Broyden family,
//! and the self-scaling (θ, τ) selection chain.
//!
//! Notation follows the usual quasi-Newton conventions: `s = x₊ − x` is the
//! accepted step, `y = ∇f₊ − ∇f` the gradient difference, `B` the direct
//! Hessian approximation, `H` the inverse approximation. All updates
//! preserve the secant equation `H⁺y = s` (equivalently `B⁺s = y`) and,
//! given `yᵀs > 0`, positive definiteness.

use crate::linalg::{dot, sym_matvec, DenseVector, SymmetricMatrix};
use crate::Real;

/// Curvature safeguard: updates are skipped when `yᵀs ≤ 1e-14·‖y‖‖s‖`.
pub fn curvature_ok(s: &DenseVector, y: &DenseVector) -> bool {
    dot(y, s) > 1e-14 * y.norm_l2() * s.norm_l2()
}

/// Textbook BFGS update of the inverse approximation:
/// `H⁺ = (I − ρsyᵀ) H (I − ρysᵀ) + ρssᵀ` with `ρ = 1/(yᵀs)`.
///
/// Implemented in the expanded product form
/// `H − ρ(s(Hy)ᵀ + (Hy)sᵀ) + ρ(1 + ρ·yᵀHy)·ssᵀ`, independent of the
/// Broyden-family code path so the two can serve as mutual oracles.
pub fn bfgs_inverse_update(
    h: &SymmetricMatrix,
    s: &DenseVector,
    y: &DenseVector,
) -> SymmetricMatrix {
    let n = h.dim();
    assert_eq!(s.len(), n, "bfgs update: dimension mismatch");
    assert_eq!(y.len(), n, "bfgs update: dimension mismatch");
    let ys = dot(y, s);
    assert!(ys > 0.0, "bfgs update requires yᵀs > 0");
    let rho = 1.0 / ys;
    let hy = sym_matvec(h, y);
    let yhy = dot(y, &hy);
    let ss_coeff = rho * (1.0 + rho * yhy);
    let mut out = h.clone();
    for i in 0..n {
        for j in 0..=i {
            let v = h.get(i, j) - rho * (s[i] * hy[j] + hy[i] * s[j]) + ss_coeff * s[i] * s[j];
            out.set(i, j, v);
        }
    }
    out
}

/// DFP update of the inverse approximation:
/// `H⁺ = H − HyyᵀH/(yᵀHy) + ssᵀ/(yᵀs)`.
///
/// Coded directly from the rank-one-difference form, independent of both
/// the BFGS kernel and the Broyden-family kernel, so it can act as the
/// oracle for the family's θ = 1 member.
pub fn dfp_inverse_update(
    h: &SymmetricMatrix,
    s: &DenseVector,
    y: &DenseVector,
) -> SymmetricMatrix {
    let n = h.dim();
    assert_eq!(s.len(), n, "dfp update: dimension mismatch");
    assert_eq!(y.len(), n, "dfp update: dimension mismatch");
    let ys = dot(y, s);
    assert!(ys > 0.0, "dfp update requires yᵀs > 0");
    let hy = sym_matvec(h, y);
    let yhy = dot(y, &hy);
    let mut out = h.clone();
    for i in 0..n {
        for j in 0..=i {
            let v = h.get(i, j) - hy[i] * hy[j] / yhy + s[i] * s[j] / ys;
            out.set(i, j, v);
        }
    }
    out
}

/// The scalars steering one self-scaled Broyden update.
///
/// `b = sᵀBs/(yᵀs)` and `h = yᵀHy/(yᵀs)` measure the step against the
/// current curvature model from both sides; the chain then selects the
/// family parameter θ (clamped to the SPD-preserving interval [θ⁻, θ⁺]),
/// the scaling factor τ > 0, and the inverse-side parameter φ = (1−θ)/σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingQuantities {
    pub b: Real,
    pub h: Real,
    /// `a = b·h − 1 ≥ 0` (Cauchy–Schwarz when H = B⁻¹).
    pub a: Real,
    pub c: Real,
    pub rho_minus: Real,
    pub theta_minus: Real,
    pub theta_plus: Real,
    /// Selected family parameter: 0 is BFGS, 1 is DFP.
    pub theta: Real,
    pub rho_plus: Real,
    /// `σ = 1 + θ·a`, always positive for θ ∈ [θ⁻, θ⁺].
    pub sigma: Real,
    /// `|σ|^{1/(1−N)}` with N the number of optimization variables.
    pub sigma_pow: Real,
    /// Scaling factor applied to the curvature model before updating.
    pub tau: Real,
    /// Inverse-family parameter matching θ.
    pub phi: Real,
    /// True when `a ≤ 1e-12` forced the plain-BFGS fallback (the chain
    /// divides by `a`).
    pub degenerate: bool,
}

impl ScalingQuantities {
    /// Plain BFGS step: θ = 0, τ = 1 (and hence φ = 1).
    pub fn unscaled_bfgs(b: Real, h: Real) -> Self {
        Self {
            b,
            h,
            a: b * h - 1.0,
            c: 0.0,
            rho_minus: 1.0,
            theta_minus: 0.0,
            theta_plus: 0.0,
            theta: 0.0,
            rho_plus: if b > 0.0 { Real::min(1.0, 1.0 / b) } else { 1.0 },
            sigma: 1.0,
            sigma_pow: 1.0,
            tau: 1.0,
            phi: 1.0,
            degenerate: true,
        }
    }

    /// The SSBFGS choice: θ = 0 with the modified scaling τ = min{1, 1/b}.
    pub fn ssbfgs(b: Real, h: Real) -> Self {
        assert!(b > 0.0, "ssbfgs scaling requires b > 0");
        Self {
            tau: Real::min(1.0, 1.0 / b),
            degenerate: false,
            ..Self::unscaled_bfgs(b, h)
        }
    }

    /// Force a specific (θ, τ) pair, e.g. to reach the DFP corner of the
    /// family; φ is derived consistently.
    pub fn forced(b: Real, h: Real, theta: Real, tau: Real) -> Self {
        assert!(tau > 0.0, "tau must be positive");
        let a = b * h - 1.0;
        let sigma = 1.0 + theta * a;
        Self {
            b,
            h,
            a,
            c: 0.0,
            rho_minus: 1.0,
            theta_minus: theta,
            theta_plus: theta,
            theta,
            rho_plus: if b > 0.0 { Real::min(1.0, 1.0 / b) } else { 1.0 },
            sigma,
            sigma_pow: 1.0,
            tau,
            phi: (1.0 - theta) / sigma,
            degenerate: false,
        }
    }
}

/// The self-scaling selection chain, from the scalar products.
///
/// `sbs = sᵀBs`, `yhy = yᵀHy`, `ys = yᵀs > 0`, `n` the problem dimension.
/// In line-search mode the caller obtains `sᵀBs` as `−α²·pᵀ∇f` via the
/// identity `B_k s_k = −α_k ∇f_k`, never forming `B`.
pub fn broyden_scaling_chain(sbs: Real, yhy: Real, ys: Real, n: usize) -> ScalingQuantities {
    assert!(ys > 0.0, "scaling chain requires yᵀs > 0");
    assert!(sbs > 0.0, "scaling chain requires sᵀBs > 0");
    assert!(yhy > 0.0, "scaling chain requires yᵀHy > 0");
    let b = sbs / ys;
    let h = yhy / ys;
    let a = b * h - 1.0;
    if a <= 1e-12 {
        // b·h → 1 means s and y are already consistent with the model up to
        // scale; the chain divides by a, so fall back to a plain BFGS step.
        return ScalingQuantities::unscaled_bfgs(b, h);
    }
    let c = (a / (1.0 + a)).sqrt();
    let rho_minus = Real::min(1.0, h * (1.0 - c));
    let theta_minus = (rho_minus - 1.0) / a;
    let theta_plus = 1.0 / rho_minus;
    let theta = Real::max(theta_minus, Real::min(theta_plus, (1.0 - b) / b));
    let rho_plus = Real::min(1.0, 1.0 / b);
    let sigma = 1.0 + theta * a;
    let sigma_pow = if n > 1 {
        sigma.abs().powf(1.0 / (1.0 - n as Real))
    } else {
        1.0
    };
    let tau = if theta <= 0.0 {
        Real::min(rho_plus * sigma_pow, sigma)
    } else {
        rho_plus * Real::min(sigma_pow, 1.0 / theta)
    };
    let phi = (1.0 - theta) / sigma;
    ScalingQuantities {
        b,
        h,
        a,
        c,
        rho_minus,
        theta_minus,
        theta_plus,
        theta,
        rho_plus,
        sigma,
        sigma_pow,
        tau,
        phi,
        degenerate: false,
    }
}

/// Convenience wrapper computing the scalar products from explicit matrices
/// (trust-region mode and tests; line-search mode uses the scalar entry
/// point to avoid forming `B`).
pub fn broyden_scaling_chain_mats(
    s: &DenseVector,
    y: &DenseVector,
    b: &SymmetricMatrix,
    h: &SymmetricMatrix,
    n: usize,
) -> ScalingQuantities {
    let sbs = dot(s, &sym_matvec(b, s));
    let yhy = dot(y, &sym_matvec(h, y));
    broyden_scaling_chain(sbs, yhy, dot(y, s), n)
}

/// Self-scaled Broyden-family update of the inverse approximation:
///
/// `H⁺ = (1/τ)·[H − HyyᵀH/(yᵀHy) + φ·(yᵀHy)·vvᵀ] + ssᵀ/(yᵀs)`
///
/// with `v = s/(yᵀs) − Hy/(yᵀHy)`. Since `vᵀy = 0`, the bracketed part
/// annihilates `y` and the secant equation `H⁺y = s` holds for every τ > 0
/// and θ.
pub fn ssbroyden_inverse_update(
    h: &SymmetricMatrix,
    s: &DenseVector,
    y: &DenseVector,
    q: &ScalingQuantities,
) -> SymmetricMatrix {
    let n = h.dim();
    assert_eq!(s.len(), n, "ssbroyden update: dimension mismatch");
    assert_eq!(y.len(), n, "ssbroyden update: dimension mismatch");
    let ys = dot(y, s);
    assert!(ys > 0.0, "ssbroyden update requires yᵀs > 0");
    assert!(q.tau > 0.0 && q.phi.is_finite(), "invalid scaling quantities");
    let hy = sym_matvec(h, y);
    let yhy = dot(y, &hy);
    let inv_tau = 1.0 / q.tau;
    let mut out = h.clone();
    for i in 0..n {
        for j in 0..=i {
            let v_i = s[i] / ys - hy[i] / yhy;
            let v_j = s[j] / ys - hy[j] / yhy;
            let bracket = h.get(i, j) - hy[i] * hy[j] / yhy + q.phi * yhy * v_i * v_j;
            out.set(i, j, inv_tau * bracket + s[i] * s[j] / ys);
        }
    }
    out
}

/// SSBFGS inverse update: the family at θ = 0 with τ = min{1, 1/b}.
///
/// `sbs = sᵀBs` feeds the scaling factor; in line-search mode it comes from
/// the `B_k s_k = −α_k ∇f_k` identity.
pub fn ssbfgs_update(
    h: &SymmetricMatrix,
    s: &DenseVector,
    y: &DenseVector,
    sbs: Real,
) -> SymmetricMatrix {
    let ys = dot(y, s);
    assert!(ys > 0.0, "ssbfgs update requires yᵀs > 0");
    assert!(sbs > 0.0, "ssbfgs update requires sᵀBs > 0");
    let yhy = dot(y, &sym_matvec(h, y));
    let q = ScalingQuantities::ssbfgs(sbs / ys, yhy / ys);
    ssbroyden_inverse_update(h, s, y, &q)
}

/// Direct-side Broyden-family update (trust-region mode maintains `B`):
///
/// `B⁺ = τ·[B − BssᵀB/(sᵀBs) + θ·(sᵀBs)·wwᵀ] + yyᵀ/(yᵀs)`
///
/// with `w = y/(yᵀs) − Bs/(sᵀBs)`. Dual to [`ssbroyden_inverse_update`]:
/// applying both with the same (θ, τ) keeps `B` and `H` mutual inverses.
pub fn broyden_direct_update(
    b: &SymmetricMatrix,
    s: &DenseVector,
    y: &DenseVector,
    q: &ScalingQuantities,
) -> SymmetricMatrix {
    let n = b.dim();
    assert_eq!(s.len(), n, "direct update: dimension mismatch");
    assert_eq!(y.len(), n, "direct update: dimension mismatch");
    let ys = dot(y, s);
    assert!(ys > 0.0, "direct update requires yᵀs > 0");
    let bs = sym_matvec(b, s);
    let sbs = dot(s, &bs);
    assert!(sbs > 0.0, "direct update requires sᵀBs > 0");
    let mut out = b.clone();
    for i in 0..n {
        for j in 0..=i {
            let w_i = y[i] / ys - bs[i] / sbs;
            let w_j = y[j] / ys - bs[j] / sbs;
            let bracket = b.get(i, j) - bs[i] * bs[j] / sbs + q.theta * sbs * w_i * w_j;
            out.set(i, j, q.tau * bracket + y[i] * y[j] / ys);
        }
    }
    out
}

/// Powell damping for trust-region mode: when `yᵀs < 0.2·sᵀBs`, blend
/// `y ← θ_d·y + (1−θ_d)·Bs` with `θ_d = 0.8·sᵀBs/(sᵀBs − yᵀs)`, which
/// restores `yᵀs = 0.2·sᵀBs > 0` so the update keeps `B` SPD.
///
/// Returns the (possibly damped) gradient difference and whether damping
/// fired.
pub fn powell_damp(
    b: &SymmetricMatrix,
    s: &DenseVector,
    y: &DenseVector,
) -> (DenseVector, bool) {
    let bs = sym_matvec(b, s);
    let sbs = dot(s, &bs);
    assert!(sbs > 0.0, "powell damping requires sᵀBs > 0 (B SPD)");
    let ys = dot(y, s);
    if ys >= 0.2 * sbs {
        return (y.clone(), false);
    }
    let theta_d = 0.8 * sbs / (sbs - ys);
    let damped = y.scale(theta_d).add_scaled(1.0 - theta_d, &bs);
    (damped, true)
}

#[cfg(test)]
#[cfg(not(feature = "single"))]
mod tests {
    use super::*;

    fn vec2(a: Real, b: Real) -> DenseVector {
        DenseVector::new(vec![a, b])
    }

    fn assert_close(got: Real, want: Real, tol: Real) {
        assert!(
            (got - want).abs() <= tol,
            "got {got}, want {want} (tol {tol})"
        );
    }

    fn max_elem_diff(a: &SymmetricMatrix, b: &SymmetricMatrix) -> Real {
        let mut worst: Real = 0.0;
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                worst = worst.max((a.get(i, j) - b.get(i, j)).abs());
            }
        }
        worst
    }

    #[test]
    fn bfgs_fixed_point_when_y_equals_s() {
        let h = SymmetricMatrix::identity(2);
        let s = vec2(1.0, 0.0);
        let up = bfgs_inverse_update(&h, &s, &s);
        assert!(max_elem_diff(&up, &h) == 0.0);
    }

    #[test]
    fn bfgs_hand_example() {
        // H=I, s=(1,0), y=(1,1): ρ=1, Hy=y, yᵀHy=2,
        // H⁺ = H − (syᵀ+ysᵀ) + 3ssᵀ = [[2,−1],[−1,1]].
        let up = bfgs_inverse_update(&SymmetricMatrix::identity(2), &vec2(1.0, 0.0), &vec2(1.0, 1.0));
        let want = SymmetricMatrix::from_rows(2, &[2.0, -1.0, -1.0, 1.0]);
        assert!(max_elem_diff(&up, &want) <= 1e-15);
        // secant: H⁺y = s
        let hy = sym_matvec(&up, &vec2(1.0, 1.0));
        assert!((hy[0] - 1.0).abs() <= 1e-15 && hy[1].abs() <= 1e-15);
    }

    #[test]
    fn dfp_hand_example() {
        // H=I, s=(1,0), y=(1,1): H⁺ = I − yyᵀ/2 + ssᵀ = [[1.5,−0.5],[−0.5,0.5]].
        let up = dfp_inverse_update(&SymmetricMatrix::identity(2), &vec2(1.0, 0.0), &vec2(1.0, 1.0));
        let want = SymmetricMatrix::from_rows(2, &[1.5, -0.5, -0.5, 0.5]);
        assert!(max_elem_diff(&up, &want) <= 1e-15);
        let hy = sym_matvec(&up, &vec2(1.0, 1.0));
        assert!((hy[0] - 1.0).abs() <= 1e-15 && hy[1].abs() <= 1e-15);
    }

    #[test]
    fn chain_reduces_to_bfgs_when_step_fits() {
        // B = H = I, s=(1,0), y=(1,1): b=1, h=2, a=1, and the preferred
        // value (1−b)/b = 0 lies inside [θ⁻, θ⁺], so θ=0, σ=1, τ=1.
        let q = broyden_scaling_chain(1.0, 2.0, 1.0, 2);
        assert!(!q.degenerate);
        assert_close(q.b, 1.0, 0.0);
        assert_close(q.h, 2.0, 0.0);
        assert_close(q.a, 1.0, 0.0);
        assert_close(q.c, Real::sqrt(0.5), 1e-15);
        assert_close(q.rho_minus, 2.0 * (1.0 - Real::sqrt(0.5)), 1e-15);
        assert_close(q.theta_minus, 2.0 * (1.0 - Real::sqrt(0.5)) - 1.0, 1e-15);
        assert_close(q.theta_plus, 1.0 / (2.0 * (1.0 - Real::sqrt(0.5))), 1e-15);
        assert_close(q.theta, 0.0, 0.0);
        assert_close(q.sigma, 1.0, 0.0);
        assert_close(q.tau, 1.0, 0.0);
        assert_close(q.phi, 1.0, 0.0);
    }

    #[test]
    fn chain_reference_vector() {
        // B=2I, H=0.5I, s=(1,0), y=(1,1), N=2: the worked reference case.
        let q = broyden_scaling_chain(2.0, 1.0, 1.0, 2);
        assert_close(q.b, 2.0, 0.0);
        assert_close(q.h, 1.0, 0.0);
        assert_close(q.a, 1.0, 0.0);
        assert_close(q.rho_minus, 1.0 - Real::sqrt(0.5), 1e-15); // ≈ 0.29289
        assert_close(q.theta, -0.5, 1e-15);
        assert_close(q.rho_plus, 0.5, 0.0);
        assert_close(q.sigma, 0.5, 1e-15);
        assert_close(q.sigma_pow, 2.0, 1e-14); // |0.5|^{1/(1−2)}
        assert_close(q.tau, 0.5, 1e-15); // min(0.5·2, 0.5)
        assert_close(q.phi, 3.0, 1e-14);
    }

    #[test]
    fn chain_degenerate_guard() {
        // y = s with B = H = I: b = h = 1, a = 0 → plain BFGS fallback.
        let q = broyden_scaling_chain(1.0, 1.0, 1.0, 2);
        assert!(q.degenerate);
        assert_close(q.theta, 0.0, 0.0);
        assert_close(q.tau, 1.0, 0.0);
        assert_close(q.phi, 1.0, 0.0);
    }

    #[test]
    fn ssbroyden_reference_update() {
        // Reference vector: H⁺ = [[3,−2],[−2,2]] with secant H⁺y = s.
        let q = broyden_scaling_chain(2.0, 1.0, 1.0, 2);
        let h = SymmetricMatrix::scaled_identity(2, 0.5);
        let s = vec2(1.0, 0.0);
        let y = vec2(1.0, 1.0);
        let up = ssbroyden_inverse_update(&h, &s, &y, &q);
        let want = SymmetricMatrix::from_rows(2, &[3.0, -2.0, -2.0, 2.0]);
        assert!(max_elem_diff(&up, &want) <= 1e-14);
        let hy = sym_matvec(&up, &y);
        assert!((hy[0] - 1.0).abs() <= 1e-14 && hy[1].abs() <= 1e-14);
    }

    #[test]
    fn family_theta_zero_matches_bfgs() {
        let h = SymmetricMatrix::from_rows(2, &[1.2, 0.3, 0.3, 0.9]);
        let s = vec2(0.7, -0.2);
        let y = vec2(0.5, 0.1);
        let q = ScalingQuantities::forced(1.3, 1.1, 0.0, 1.0);
        let fam = ssbroyden_inverse_update(&h, &s, &y, &q);
        let bfgs = bfgs_inverse_update(&h, &s, &y);
        assert!(max_elem_diff(&fam, &bfgs) <= 1e-14);
    }

    #[test]
    fn family_theta_one_matches_dfp() {
        let h = SymmetricMatrix::from_rows(2, &[1.2, 0.3, 0.3, 0.9]);
        let s = vec2(0.7, -0.2);
        let y = vec2(0.5, 0.1);
        // θ=1 in the direct family corresponds to φ=0 on the inverse side.
        let q = ScalingQuantities::forced(1.3, 1.1, 1.0, 1.0);
        assert_close(q.phi, 0.0, 1e-15);
        let fam = ssbroyden_inverse_update(&h, &s, &y, &q);
        let dfp = dfp_inverse_update(&h, &s, &y);
        assert!(max_elem_diff(&fam, &dfp) <= 1e-13);
    }

    #[test]
    fn ssbfgs_scaling_factor() {
        // b = 1 → τ = 1 (plain BFGS); b = 2 → τ = 0.5.
        assert_close(ScalingQuantities::ssbfgs(1.0, 1.5).tau, 1.0, 0.0);
        assert_close(ScalingQuantities::ssbfgs(2.0, 1.5).tau, 0.5, 0.0);

        let h = SymmetricMatrix::identity(2);
        let s = vec2(1.0, 0.0);
        let y = vec2(1.0, 1.0);
        // With sᵀBs = yᵀs (b=1) the SSBFGS update IS the BFGS update.
        let up = ssbfgs_update(&h, &s, &y, 1.0);
        let bfgs = bfgs_inverse_update(&h, &s, &y);
        assert!(max_elem_diff(&up, &bfgs) <= 1e-14);
    }

    #[test]
    fn direct_and_inverse_updates_stay_mutual_inverses() {
        // Reference pair B=2I, H=0.5I: direct gives [[1,1],[1,1.5]],
        // inverse gives [[3,−2],[−2,2]]; their product is I.
        let q = broyden_scaling_chain(2.0, 1.0, 1.0, 2);
        let b = SymmetricMatrix::scaled_identity(2, 2.0);
        let h = SymmetricMatrix::scaled_identity(2, 0.5);
        let s = vec2(1.0, 0.0);
        let y = vec2(1.0, 1.0);
        let b_up = broyden_direct_update(&b, &s, &y, &q);
        let h_up = ssbroyden_inverse_update(&h, &s, &y, &q);
        let want_b = SymmetricMatrix::from_rows(2, &[1.0, 1.0, 1.0, 1.5]);
        assert!(max_elem_diff(&b_up, &want_b) <= 1e-14);
        // B⁺ H⁺ = I, checked columnwise.
        for col in 0..2 {
            let e = {
                let mut v = DenseVector::zeros(2);
                v[col] = 1.0;
                v
            };
            let he = sym_matvec(&h_up, &e);
            let bhe = sym_matvec(&b_up, &he);
            for row in 0..2 {
                let want = if row == col { 1.0 } else { 0.0 };
                assert_close(bhe[row], want, 1e-13);
            }
        }
        // secant on the direct side: B⁺s = y.
        let bs = sym_matvec(&b_up, &s);
        assert!((bs[0] - 1.0).abs() <= 1e-14 && (bs[1] - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn curvature_guard_thresholds() {
        let s = vec2(1.0, 0.0);
        assert!(curvature_ok(&s, &vec2(1.0, 1.0)));
        assert!(!curvature_ok(&s, &vec2(-1.0, 0.5))); // yᵀs < 0
        assert!(!curvature_ok(&s, &vec2(0.0, 1.0))); // yᵀs = 0
        assert!(!curvature_ok(&s, &vec2(1e-15, 1.0))); // below threshold
    }

    #[test]
    fn powell_damping_restores_curvature() {
        let b = SymmetricMatrix::identity(2);
        let s = vec2(1.0, 0.0);
        // Healthy curvature: untouched.
        let (y1, damped1) = powell_damp(&b, &s, &vec2(1.0, 1.0));
        assert!(!damped1);
        assert_eq!(y1, vec2(1.0, 1.0));
        // yᵀs = −0.5 < 0.2·sᵀBs = 0.2: damping must fire and land exactly
        // on the 0.2 boundary: θ_d = 0.8/1.5, yᵀs → 0.2.
        let (y2, damped2) = powell_damp(&b, &s, &vec2(-0.5, 1.0));
        assert!(damped2);
        assert_close(dot(&y2, &s), 0.2, 1e-15);
    }
}
