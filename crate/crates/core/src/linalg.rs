//! Dense complex linear algebra kernel.
//!
//! Every operator in this crate is a [`ComplexMatrix`]. The heavy lifting
//! (Hessenberg/QR Schur iteration, SVD, LU) is delegated to `nalgebra`; this
//! module adds what the spectral code needs on top of it: eigenvectors from
//! the triangular factor, reordering of the Schur form so that a selected
//! group of eigenvalues leads, and rank/null-space queries with explicit
//! thresholds.
//!
//! Norms are Frobenius norms unless stated otherwise. Condition numbers are
//! the usual 2-norm ratio `σ_max / σ_min`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Complex column vector.
pub type ComplexVector = DVector<C64>;

/// Shorthand for building a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{got} entries cannot fill a {rows}x{cols} matrix")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular to working precision (condition estimate {condition:e})")]
    Singular { condition: f64 },
    #[error("{0} did not converge within the iteration budget")]
    NoConvergence(&'static str),
}

/// Dense complex matrix. Thin wrapper over `nalgebra::DMatrix<C64>`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape { rows, cols, got: entries.len() });
        }
        let m = Self(DMatrix::from_row_slice(rows, cols, &entries));
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_row_slice(diag)))
    }

    /// Wraps an `nalgebra` matrix without validation.
    pub fn from_dmatrix(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn from_columns(cols: &[ComplexVector]) -> Self {
        Self(DMatrix::from_columns(cols))
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.0.is_square()
    }

    pub fn ensure_square(&self) -> Result<usize, LinalgError> {
        if self.is_square() {
            Ok(self.nrows())
        } else {
            Err(LinalgError::NotSquare { rows: self.nrows(), cols: self.ncols() })
        }
    }

    pub fn check_finite(&self) -> Result<(), LinalgError> {
        for j in 0..self.ncols() {
            for i in 0..self.nrows() {
                let z = self.0[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch in max_abs_diff");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        self.0.column(j).into_owned()
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        &self.0 * v
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.nrows() * self.ncols());
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Block-diagonal direct sum of square blocks.
    pub fn block_diag(blocks: &[ComplexMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.nrows()).sum();
        let m: usize = blocks.iter().map(|b| b.ncols()).sum();
        let mut out = DMatrix::zeros(n, m);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(&b.0);
            r += b.nrows();
            c += b.ncols();
        }
        Self(out)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0.$method(rhs.0))
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0.$method(&rhs.0))
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Mul, mul);
binop!(Add, add);
binop!(Sub, sub);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

/// Pauli matrices and other fixed 2×2 operators.
pub mod pauli {
    use super::{c64, ComplexMatrix};

    pub fn sigma1() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn sigma3() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    /// `exp(i·θ·σ₃) = diag(e^{iθ}, e^{-iθ})`.
    pub fn exp_i_sigma3(theta: f64) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[c64(0.0, theta).exp(), c64(0.0, -theta).exp()])
    }
}

/// A value together with a unit-norm eigenvector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: C64,
    pub vector: ComplexVector,
}

/// Complex Schur form `M = Q T Q†` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurForm {
    q: DMatrix<C64>,
    t: DMatrix<C64>,
}

impl SchurForm {
    pub fn compute(m: &ComplexMatrix) -> Result<Self, LinalgError> {
        let n = m.ensure_square()?;
        let budget = 200 * n.max(4);
        let schur = m
            .0
            .clone()
            .try_schur(f64::EPSILON, budget)
            .ok_or(LinalgError::NoConvergence("Schur QR iteration"))?;
        let (q, mut t) = schur.unpack();
        for j in 0..n {
            for i in (j + 1)..n {
                t[(i, j)] = C64::new(0.0, 0.0);
            }
        }
        Ok(Self { q, t })
    }

    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.q
    }

    pub fn triangular(&self) -> &DMatrix<C64> {
        &self.t
    }

    pub fn eigenvalues(&self) -> Vec<C64> {
        (0..self.t.nrows()).map(|i| self.t[(i, i)]).collect()
    }

    /// Moves every diagonal position flagged in `selected` to the leading
    /// block, preserving relative order on both sides. Returns the size of the
    /// leading block.
    pub fn reorder_to_front(&mut self, selected: &[bool]) -> usize {
        let n = self.t.nrows();
        assert_eq!(selected.len(), n);
        let mut flags = selected.to_vec();
        let mut dest = 0;
        for i in 0..n {
            if flags[i] {
                let mut k = i;
                while k > dest {
                    self.swap_adjacent(k - 1);
                    flags.swap(k - 1, k);
                    k -= 1;
                }
                dest += 1;
            }
        }
        dest
    }

    /// Exchanges the diagonal entries at `k` and `k + 1` with a Givens rotation.
    fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.nrows();
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        let t12 = self.t[(k, k + 1)];
        let x = t22 - t11;
        let r = (t12.norm_sqr() + x.norm_sqr()).sqrt();
        if r == 0.0 {
            return;
        }
        // First column of G is the eigenvector of the 2×2 block for t22.
        let c = t12 / r;
        let s = x / r;
        // G = [[c, -s̄], [s, c̄]]
        for j in 0..n {
            let a = self.t[(k, j)];
            let b = self.t[(k + 1, j)];
            self.t[(k, j)] = c.conj() * a + s.conj() * b;
            self.t[(k + 1, j)] = -s * a + c * b;
        }
        for i in 0..n {
            let a = self.t[(i, k)];
            let b = self.t[(i, k + 1)];
            self.t[(i, k)] = a * c + b * s;
            self.t[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
        for i in 0..n {
            let a = self.q[(i, k)];
            let b = self.q[(i, k + 1)];
            self.q[(i, k)] = a * c + b * s;
            self.q[(i, k + 1)] = -a * s.conj() + b * c.conj();
        }
        self.t[(k + 1, k)] = C64::new(0.0, 0.0);
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
    }
}

/// Eigenvalues and unit eigenvectors from a unitary triangularization.
///
/// Vectors come from back-substitution on the triangular factor; for
/// defective input several returned vectors may coincide up to rounding.
pub fn eigen_decompose(m: &ComplexMatrix) -> Result<Vec<EigenPair>, LinalgError> {
    let n = m.ensure_square()?;
    m.check_finite()?;
    let schur = SchurForm::compute(m)?;
    let t = &schur.t;
    let tnorm = t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let small = f64::EPSILON * tnorm.max(f64::MIN_POSITIVE);
    let mut pairs = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = t[(i, i)];
        let mut y = DVector::<C64>::zeros(n);
        y[i] = C64::new(1.0, 0.0);
        for j in (0..i).rev() {
            let mut s = C64::new(0.0, 0.0);
            for k in (j + 1)..=i {
                s += t[(j, k)] * y[k];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            y[j] = -s / d;
            let big = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                y /= C64::new(big, 0.0);
            }
        }
        let mut v = &schur.q * y;
        let nv = v.norm();
        v /= C64::new(nv, 0.0);
        pairs.push(EigenPair { value: lambda, vector: v });
    }
    Ok(pairs)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let svd = m
        .0
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(LinalgError::NoConvergence("SVD"))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Default relative rank tolerance: `max(rows, cols) · ε`.
pub fn default_rank_tol(m: &ComplexMatrix) -> f64 {
    m.nrows().max(m.ncols()) as f64 * f64::EPSILON
}

/// Number of singular values exceeding `tol_rank · σ_max`. Zero for the zero matrix.
pub fn numerical_rank(m: &ComplexMatrix, tol_rank: f64) -> Result<usize, LinalgError> {
    assert!(tol_rank >= 0.0, "rank tolerance must be non-negative");
    let s = singular_values(m)?;
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.iter().filter(|&&x| x > tol_rank * smax).count())
}

/// Number of singular values exceeding the absolute threshold `tol · scale`.
///
/// Used when the reference scale is known from context, e.g. powers of a
/// shifted operator whose nonzero part may itself be rounding noise.
pub fn numerical_rank_scaled(m: &ComplexMatrix, tol: f64, scale: f64) -> Result<usize, LinalgError> {
    let s = singular_values(m)?;
    Ok(s.iter().filter(|&&x| x > tol * scale).count())
}

/// Orthonormal basis (as columns) of the numerical null space: right singular
/// vectors whose singular value is at most `threshold`.
pub fn null_space(m: &DMatrix<C64>, threshold: f64) -> Result<DMatrix<C64>, LinalgError> {
    let (rows, cols) = m.shape();
    // Pad to square so that the full right singular basis is available.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or(LinalgError::NoConvergence("SVD"))?;
    let v_t = svd.v_t.expect("requested right singular vectors");
    let basis: Vec<ComplexVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if basis.is_empty() {
        Ok(DMatrix::zeros(cols, 0))
    } else {
        Ok(DMatrix::from_columns(&basis))
    }
}

/// 2-norm condition number `σ_max / σ_min` (infinite when singular).
pub fn condition_number(m: &ComplexMatrix) -> Result<f64, LinalgError> {
    m.ensure_square()?;
    let s = singular_values(m)?;
    let smax = s[0];
    let smin = *s.last().unwrap();
    Ok(if smin == 0.0 { f64::INFINITY } else { smax / smin })
}

/// Inverse of a square matrix.
///
/// Refuses matrices whose smallest singular value is below `10³·ε·σ_max`;
/// the error carries the condition estimate. For accepted input the residual
/// `‖M M⁻¹ − I‖` is of order `ε·cond(M)`.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    m.ensure_square()?;
    let s = singular_values(m)?;
    let smax = s[0];
    let smin = *s.last().unwrap();
    let condition = if smin == 0.0 { f64::INFINITY } else { smax / smin };
    if smax == 0.0 || smin <= 1e3 * f64::EPSILON * smax {
        return Err(LinalgError::Singular { condition });
    }
    m.0.clone()
        .try_inverse()
        .map(ComplexMatrix)
        .ok_or(LinalgError::Singular { condition })
}
