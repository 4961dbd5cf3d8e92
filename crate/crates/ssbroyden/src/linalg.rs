//! Minimal dense linear algebra: vectors, symmetric matrices, symmetric
//! rank-one updates, and an SPD Cholesky factorization.
//!
//! Reference kernels use fixed left-to-right summation so that traces are
//! bit-reproducible across runs and platforms. Dimension mismatches are
//! programmer errors and panic; loss of positive definiteness is an expected
//! runtime outcome and is reported as a value ([`NotSpd`]).

use crate::Real;

/// Dense column vector of [`Real`]s.
///
/// Houses iterates, gradients, steps and gradient differences. Entries are
/// expected to be finite on entry to any optimizer step.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<Real>,
}

impl DenseVector {
    pub fn new(data: Vec<Real>) -> Self {
        assert!(!data.is_empty(), "DenseVector must have at least one entry");
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self::filled(len, 0.0)
    }

    /// Constant vector of the given length.
    pub fn filled(len: usize, value: Real) -> Self {
        Self::new(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // len >= 1 by construction
    }

    pub fn as_slice(&self) -> &[Real] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Real] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Real> {
        self.data.iter()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self + c * other`, elementwise.
    pub fn add_scaled(&self, c: Real, other: &DenseVector) -> DenseVector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        DenseVector::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }

    /// `self - other`, elementwise.
    pub fn sub(&self, other: &DenseVector) -> DenseVector {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, c: Real) -> DenseVector {
        DenseVector::new(self.data.iter().map(|a| c * a).collect())
    }

    /// Euclidean norm.
    pub fn norm_l2(&self) -> Real {
        dot(self, self).sqrt()
    }

    /// Max-magnitude norm.
    pub fn norm_linf(&self) -> Real {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = Real;
    fn index(&self, i: usize) -> &Real {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut Real {
        &mut self.data[i]
    }
}

impl From<Vec<Real>> for DenseVector {
    fn from(data: Vec<Real>) -> Self {
        Self::new(data)
    }
}

/// Dot product with fixed left-to-right summation.
pub fn dot(a: &DenseVector, b: &DenseVector) -> Real {
    assert_eq!(a.len(), b.len(), "dot: vector length mismatch");
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += a.data[i] * b.data[i];
    }
    acc
}

/// Dense symmetric matrix.
///
/// The lower triangle (row-major, `i >= j`) is the authoritative storage;
/// reads of the upper triangle mirror it, so `A[i][j] == A[j][i]` holds
/// exactly by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    /// Packed lower triangle: row i holds entries (i,0)..=(i,i).
    lower: Vec<Real>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymmetricMatrix must have dim >= 1");
        Self {
            dim,
            lower: vec![0.0; dim * (dim + 1) / 2],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Diagonal matrix `c * I`.
    pub fn scaled_identity(dim: usize, c: Real) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, c);
        }
        m
    }

    /// Build from row-major dense data; the strict upper triangle must match
    /// the lower one to within nothing at all (exact equality), since the
    /// caller is asserting the matrix is symmetric.
    pub fn from_rows(dim: usize, rows: &[Real]) -> Self {
        assert_eq!(rows.len(), dim * dim, "from_rows: wrong element count");
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..=i {
                assert!(
                    rows[i * dim + j] == rows[j * dim + i],
                    "from_rows: input not symmetric at ({i},{j})"
                );
                m.set(i, j, rows[i * dim + j]);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= j);
        i * (i + 1) / 2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Real {
        if i >= j {
            self.lower[self.idx(i, j)]
        } else {
            self.lower[self.idx(j, i)]
        }
    }

    /// Write entry (i,j); the mirrored entry is the same storage slot.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Real) {
        let k = if i >= j { self.idx(i, j) } else { self.idx(j, i) };
        self.lower[k] = v;
    }

    pub fn all_finite(&self) -> bool {
        self.lower.iter().all(|v| v.is_finite())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> Real {
        self.lower.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm (counts mirrored entries twice, as it must).
    pub fn norm_fro(&self) -> Real {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.get(i, j);
                acc += v * v;
            }
        }
        acc.sqrt()
    }

    /// Scale every entry in place.
    pub fn scale_in_place(&mut self, c: Real) {
        for v in &mut self.lower {
            *v *= c;
        }
    }
}

/// Symmetric matrix-vector product, fixed summation order.
pub fn sym_matvec(a: &SymmetricMatrix, v: &DenseVector) -> DenseVector {
    assert_eq!(a.dim(), v.len(), "sym_matvec: dimension mismatch");
    let n = a.dim();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            acc += a.get(i, j) * v[j];
        }
        out[i] = acc;
    }
    DenseVector::new(out)
}

/// Quadratic form `vᵀ A v`.
pub fn quad_form(a: &SymmetricMatrix, v: &DenseVector) -> Real {
    dot(v, &sym_matvec(a, v))
}

/// Symmetric rank-one update `A + c · u uᵀ`, writing only the lower triangle.
pub fn rank1_sym_update(a: &SymmetricMatrix, c: Real, u: &DenseVector) -> SymmetricMatrix {
    assert_eq!(a.dim(), u.len(), "rank1_sym_update: dimension mismatch");
    assert!(c.is_finite(), "rank1_sym_update: coefficient must be finite");
    let mut out = a.clone();
    rank1_sym_update_in_place(&mut out, c, u);
    out
}

/// In-place variant of [`rank1_sym_update`].
pub fn rank1_sym_update_in_place(a: &mut SymmetricMatrix, c: Real, u: &DenseVector) {
    assert_eq!(a.dim(), u.len(), "rank1_sym_update: dimension mismatch");
    assert!(c.is_finite(), "rank1_sym_update: coefficient must be finite");
    let n = a.dim();
    for i in 0..n {
        for j in 0..=i {
            let v = a.get(i, j) + c * u[i] * u[j];
            a.set(i, j, v);
        }
    }
}

/// Signal that a matrix handed to [`spd_factor`] is not positive definite.
///
/// This is an ordinary value, not an error: callers decide policy (fall back
/// to a gradient step, damp the update, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotSpd;

/// Lower-triangular Cholesky factor, `L Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    dim: usize,
    /// Packed lower triangle, same layout as `SymmetricMatrix`.
    lower: Vec<Real>,
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Real {
        if i >= j {
            self.lower[i * (i + 1) / 2 + j]
        } else {
            0.0
        }
    }

    /// Solve `A x = b` via forward/backward substitution with `A = L Lᵀ`.
    pub fn solve(&self, b: &DenseVector) -> DenseVector {
        assert_eq!(self.dim, b.len(), "cholesky solve: dimension mismatch");
        let n = self.dim;
        // L y = b
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = b[i];
            for k in 0..i {
                acc -= self.get(i, k) * y[k];
            }
            y[i] = acc / self.get(i, i);
        }
        // Lᵀ x = y
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            for k in (i + 1)..n {
                acc -= self.get(k, i) * x[k];
            }
            x[i] = acc / self.get(i, i);
        }
        DenseVector::new(x)
    }

    /// Reassemble `L Lᵀ` (test support).
    pub fn reconstruct(&self) -> SymmetricMatrix {
        let n = self.dim;
        let mut a = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut acc = 0.0;
                for k in 0..=j {
                    acc += self.get(i, k) * self.get(j, k);
                }
                a.set(i, j, acc);
            }
        }
        a
    }
}

/// Cholesky factorization of a symmetric matrix.
///
/// Returns `Err(NotSpd)` as soon as a pivot falls at or below
/// `1e-14 · max_i |A_ii|` — the matrix is then not usefully positive
/// definite at working precision.
pub fn spd_factor(a: &SymmetricMatrix) -> Result<CholeskyFactor, NotSpd> {
    let n = a.dim();
    let mut max_diag = 0.0;
    for i in 0..n {
        max_diag = Real::max(max_diag, a.get(i, i).abs());
    }
    let tol = 1e-14 * max_diag;

    let mut l = vec![0.0; n * (n + 1) / 2];
    let at = |l: &[Real], i: usize, j: usize| l[i * (i + 1) / 2 + j];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = a.get(i, j);
            for k in 0..j {
                acc -= at(&l, i, k) * at(&l, j, k);
            }
            if i == j {
                if !(acc > tol) {
                    return Err(NotSpd);
                }
                l[i * (i + 1) / 2 + j] = acc.sqrt();
            } else {
                l[i * (i + 1) / 2 + j] = acc / at(&l, j, j);
            }
        }
    }
    Ok(CholeskyFactor { dim: n, lower: l })
}

#[cfg(test)]
#[cfg(not(feature = "single"))]
mod tests {
    use super::*;

    fn vec2(a: Real, b: Real) -> DenseVector {
        DenseVector::new(vec![a, b])
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(&vec2(1.0, 0.0), &vec2(1.0, 1.0)), 1.0);
        assert_eq!(dot(&vec2(1.0, 1.0), &vec2(1.0, 1.0)), 2.0);
        assert_eq!(dot(&vec2(0.5, 0.5), &vec2(3.0, 3.0)), 3.0);
    }

    #[test]
    #[should_panic(expected = "length mismatch")]
    fn dot_dimension_mismatch_panics() {
        dot(&vec2(1.0, 0.0), &DenseVector::new(vec![1.0, 2.0, 3.0]));
    }

    #[test]
    fn matvec_identity_is_exact() {
        let a = SymmetricMatrix::identity(2);
        let v = vec2(3.0, -2.0);
        assert_eq!(sym_matvec(&a, &v), v);
    }

    #[test]
    fn matvec_secant_checks() {
        // These two matrices are quasi-Newton updates from the worked
        // examples elsewhere in the suite; both must map y = (1,1) to (1,0).
        let dfp = SymmetricMatrix::from_rows(2, &[1.5, -0.5, -0.5, 0.5]);
        let y = vec2(1.0, 1.0);
        assert_eq!(sym_matvec(&dfp, &y), vec2(1.0, 0.0));

        let ssb = SymmetricMatrix::from_rows(2, &[3.0, -2.0, -2.0, 2.0]);
        assert_eq!(sym_matvec(&ssb, &y), vec2(1.0, 0.0));
    }

    #[test]
    fn rank1_update_examples() {
        let i2 = SymmetricMatrix::identity(2);
        let up = rank1_sym_update(&i2, 1.0, &vec2(1.0, 0.0));
        assert_eq!(up, SymmetricMatrix::from_rows(2, &[2.0, 0.0, 0.0, 1.0]));

        let up = rank1_sym_update(&i2, -0.5, &vec2(1.0, 1.0));
        assert_eq!(up, SymmetricMatrix::from_rows(2, &[0.5, -0.5, -0.5, 0.5]));

        let up = rank1_sym_update(&i2, 0.0, &vec2(7.0, -3.0));
        assert_eq!(up, i2);
    }

    #[test]
    fn cholesky_identity() {
        let l = spd_factor(&SymmetricMatrix::identity(3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(l.get(i, j), expect);
            }
        }
    }

    #[test]
    fn cholesky_hand_example() {
        // [[4,2],[2,3]] = L Lᵀ with L = [[2,0],[1,√2]]
        let a = SymmetricMatrix::from_rows(2, &[4.0, 2.0, 2.0, 3.0]);
        let l = spd_factor(&a).unwrap();
        assert!((l.get(0, 0) - 2.0).abs() < 1e-15);
        assert!((l.get(1, 0) - 1.0).abs() < 1e-15);
        assert!((l.get(1, 1) - Real::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(l.get(0, 1), 0.0);
    }

    #[test]
    fn cholesky_indefinite_is_a_value() {
        // Eigenvalues 3 and -1.
        let a = SymmetricMatrix::from_rows(2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(spd_factor(&a), Err(NotSpd));
    }

    #[test]
    fn cholesky_solve_roundtrip() {
        let a = SymmetricMatrix::from_rows(2, &[4.0, 2.0, 2.0, 3.0]);
        let l = spd_factor(&a).unwrap();
        let b = vec2(10.0, 8.0);
        let x = l.solve(&b);
        let back = sym_matvec(&a, &x);
        assert!((back[0] - 10.0).abs() < 1e-12);
        assert!((back[1] - 8.0).abs() < 1e-12);
    }
}
