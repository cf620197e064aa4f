//! Antilinear operators `v ↦ K·conj(v)`.
//!
//! An antilinear operator is stored through its matrix part `K`. Composition
//! is typed: two antilinear maps compose to a linear [`ComplexMatrix`], a
//! linear and an antilinear map compose to an [`AntilinearOp`]. There is
//! deliberately no sum of antilinear operators.
//!
//! The adjoint is defined by `⟨ξ, L†ζ⟩ = ⟨ζ, Lξ⟩` and has matrix part `Kᵀ`
//! (transpose, no conjugation).

use std::ops::Mul;

use crate::linalg::{inverse, ComplexMatrix, ComplexVector, LinalgError};

#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    k: ComplexMatrix,
}

/// Outcome of a predicate test together with the residual it was based on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

impl Check {
    fn new(residual: f64, tol: f64) -> Self {
        Self { holds: residual <= tol, residual }
    }
}

fn same_dim(a: usize, b: usize, what: &str) -> Result<(), LinalgError> {
    if a == b {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch(format!("{what}: {a} vs {b}")))
    }
}

impl AntilinearOp {
    /// Wraps a square, finite matrix part.
    pub fn new(k: ComplexMatrix) -> Result<Self, LinalgError> {
        k.ensure_square()?;
        k.check_finite()?;
        Ok(Self { k })
    }

    /// Componentwise complex conjugation.
    pub fn conjugation(n: usize) -> Self {
        Self { k: ComplexMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.k
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.k.nrows()
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector, LinalgError> {
        same_dim(self.dim(), v.len(), "antilinear apply")?;
        Ok(self.k.mul_vec(&v.map(|z| z.conj())))
    }

    pub fn adjoint(&self) -> Self {
        Self { k: self.k.transpose() }
    }

    /// Inverse map, matrix part `conj(K⁻¹)`.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        Ok(Self { k: inverse(&self.k)?.conj() })
    }

    /// `‖K − Kᵀ‖ / ‖K‖`.
    pub fn is_hermitian(&self, tol: f64) -> Check {
        let scale = self.k.frobenius_norm();
        let r = (&self.k - self.k.transpose()).frobenius_norm();
        Check::new(if scale == 0.0 { 0.0 } else { r / scale }, tol)
    }

    /// `‖K·conj(K) − I‖`.
    pub fn is_involution(&self, tol: f64) -> Check {
        let r = (&self.k * self.k.conj() - ComplexMatrix::identity(self.dim())).frobenius_norm();
        Check::new(r, tol)
    }

    /// `‖K†K − I‖`.
    pub fn is_antiunitary(&self, tol: f64) -> Check {
        let r = (self.k.adjoint() * &self.k - ComplexMatrix::identity(self.dim())).frobenius_norm();
        Check::new(r, tol)
    }
}

/// `L1 ∘ L2`, a linear map with matrix `K₁·conj(K₂)`.
pub fn compose_antilinear_antilinear(
    l1: &AntilinearOp,
    l2: &AntilinearOp,
) -> Result<ComplexMatrix, LinalgError> {
    same_dim(l1.dim(), l2.dim(), "antilinear composition")?;
    Ok(&l1.k * l2.k.conj())
}

/// `M ∘ L`, matrix part `M·K`.
pub fn compose_linear_antilinear(m: &ComplexMatrix, l: &AntilinearOp) -> Result<AntilinearOp, LinalgError> {
    same_dim(m.ncols(), l.dim(), "linear∘antilinear")?;
    m.ensure_square()?;
    Ok(AntilinearOp { k: m * &l.k })
}

/// `L ∘ M`, matrix part `K·conj(M)`.
pub fn compose_antilinear_linear(l: &AntilinearOp, m: &ComplexMatrix) -> Result<AntilinearOp, LinalgError> {
    same_dim(l.dim(), m.nrows(), "antilinear∘linear")?;
    m.ensure_square()?;
    Ok(AntilinearOp { k: &l.k * m.conj() })
}

// Operator sugar for internal use; dimensions are asserted.

impl Mul<&AntilinearOp> for &ComplexMatrix {
    type Output = AntilinearOp;
    fn mul(self, rhs: &AntilinearOp) -> AntilinearOp {
        compose_linear_antilinear(self, rhs).expect("dimension mismatch")
    }
}

impl Mul<&ComplexMatrix> for &AntilinearOp {
    type Output = AntilinearOp;
    fn mul(self, rhs: &ComplexMatrix) -> AntilinearOp {
        compose_antilinear_linear(self, rhs).expect("dimension mismatch")
    }
}

impl Mul<&AntilinearOp> for &AntilinearOp {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &AntilinearOp) -> ComplexMatrix {
        compose_antilinear_antilinear(self, rhs).expect("dimension mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, pauli, C64};
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn vec2(a: C64, b: C64) -> ComplexVector {
        DVector::from_vec(vec![a, b])
    }

    #[test]
    fn apply_examples() {
        let t = AntilinearOp::conjugation(2);
        let out = t.apply(&vec2(c64(0.0, 1.0), c64(1.0, 0.0))).unwrap();
        assert_eq!(out, vec2(c64(0.0, -1.0), c64(1.0, 0.0)));

        let s = AntilinearOp::new(pauli::sigma1()).unwrap();
        let out = s.apply(&vec2(c64(1.0, 0.0), c64(0.0, 0.0))).unwrap();
        assert_eq!(out, vec2(c64(0.0, 0.0), c64(1.0, 0.0)));
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let t = AntilinearOp::conjugation(3);
        assert!(t.apply(&vec2(c64(1.0, 0.0), c64(0.0, 0.0))).is_err());
    }

    #[test]
    fn squares_of_conjugations() {
        let t = AntilinearOp::conjugation(2);
        assert_eq!(&t * &t, ComplexMatrix::identity(2));
        let s = AntilinearOp::new(pauli::sigma1()).unwrap();
        assert_eq!(&s * &s, ComplexMatrix::identity(2));
    }

    #[test]
    fn sandwich_of_conjugation_by_scattering_basis() {
        // A = e^{-ikxσ₃}[[1,1],[-1,0]]; A·conj(A⁻¹) = e^{-2ikxσ₃}.
        let kx = 0.37;
        let base = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[-1.0, 0.0]]).unwrap();
        let a = pauli::exp_i_sigma3(-kx) * base;
        let x = &(&a * &AntilinearOp::conjugation(2)) * &inverse(&a).unwrap();
        assert!(x.matrix().max_abs_diff(&pauli::exp_i_sigma3(-2.0 * kx)) < 1e-14);
    }

    #[test]
    fn adjoint_examples() {
        let t = AntilinearOp::conjugation(2);
        assert_eq!(t.adjoint(), t);
        let s = AntilinearOp::new(pauli::sigma1()).unwrap();
        assert_eq!(s.adjoint(), s);
        assert!(s.is_hermitian(0.0).holds);
    }

    #[test]
    fn predicates_on_conjugation() {
        let t = AntilinearOp::conjugation(3);
        for c in [t.is_hermitian(0.0), t.is_involution(0.0), t.is_antiunitary(0.0)] {
            assert!(c.holds);
            assert_eq!(c.residual, 0.0);
        }
    }

    #[test]
    fn twisted_conjugation_is_involution_for_every_phase() {
        for kx in [0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.0, 2.5] {
            let x = AntilinearOp::new(pauli::exp_i_sigma3(-2.0 * kx)).unwrap();
            assert!(x.is_involution(1e-14).holds);
        }
    }

    #[test]
    fn inverse_of_conjugation() {
        let t = AntilinearOp::conjugation(2);
        assert_eq!(t.inverse().unwrap(), t);
    }

    fn arb_c64() -> impl Strategy<Value = C64> {
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| c64(a, b))
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec(arb_c64(), n * n)
            .prop_map(move |e| ComplexMatrix::from_row_major(n, n, e).unwrap())
    }

    fn arb_vector(n: usize) -> impl Strategy<Value = ComplexVector> {
        prop::collection::vec(arb_c64(), n).prop_map(DVector::from_vec)
    }

    fn inner(a: &ComplexVector, b: &ComplexVector) -> C64 {
        a.dotc(b)
    }

    proptest! {
        #[test]
        fn antilinearity(k in arb_matrix(4), u in arb_vector(4), v in arb_vector(4),
                         a in arb_c64(), b in arb_c64()) {
            let l = AntilinearOp::new(k).unwrap();
            let lhs = l.apply(&(&u * a + &v * b)).unwrap();
            let rhs = l.apply(&u).unwrap() * a.conj() + l.apply(&v).unwrap() * b.conj();
            prop_assert!((lhs - rhs).norm() < 1e-14);
        }

        #[test]
        fn composition_matches_application(k1 in arb_matrix(3), k2 in arb_matrix(3),
                                           m in arb_matrix(3), v in arb_vector(3)) {
            let l1 = AntilinearOp::new(k1).unwrap();
            let l2 = AntilinearOp::new(k2).unwrap();
            let lin = compose_antilinear_antilinear(&l1, &l2).unwrap();
            let direct = l1.apply(&l2.apply(&v).unwrap()).unwrap();
            prop_assert!((lin.mul_vec(&v) - direct).norm() < 1e-14);

            let ml = compose_linear_antilinear(&m, &l1).unwrap();
            prop_assert!((ml.apply(&v).unwrap() - m.mul_vec(&l1.apply(&v).unwrap())).norm() < 1e-14);

            let lm = compose_antilinear_linear(&l1, &m).unwrap();
            prop_assert!((lm.apply(&v).unwrap() - l1.apply(&m.mul_vec(&v)).unwrap()).norm() < 1e-14);
        }

        #[test]
        fn adjoint_pairing(k in arb_matrix(4), xi in arb_vector(4), zeta in arb_vector(4)) {
            let l = AntilinearOp::new(k).unwrap();
            let lhs = inner(&xi, &l.adjoint().apply(&zeta).unwrap());
            let rhs = inner(&zeta, &l.apply(&xi).unwrap());
            prop_assert!((lhs - rhs).norm() < 1e-14);
            prop_assert_eq!(l.adjoint().adjoint(), l);
        }

        #[test]
        fn adjoint_of_sandwich(k in arb_matrix(3), m in arb_matrix(3)) {
            let l = AntilinearOp::new(k).unwrap();
            let lhs = compose_linear_antilinear(&m, &l).unwrap().adjoint();
            let rhs = compose_antilinear_linear(&l.adjoint(), &m.adjoint()).unwrap();
            prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()) < 1e-14);
        }

        #[test]
        fn inverse_round_trip(k in arb_matrix(4)) {
            let shifted = k + ComplexMatrix::identity(4).scale(c64(3.0, 0.0));
            let l = AntilinearOp::new(shifted).unwrap();
            let inv = l.inverse().unwrap();
            let id = compose_antilinear_antilinear(&inv, &l).unwrap();
            prop_assert!(id.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-10);
        }

        #[test]
        fn involution_is_its_own_inverse(m in arb_matrix(3)) {
            // M·conj(M⁻¹) is always an antilinear involution.
            let m = m + ComplexMatrix::identity(3).scale(c64(3.0, 0.0));
            let k = &m * inverse(&m).unwrap().conj();
            let l = AntilinearOp::new(k).unwrap();
            prop_assert!(l.is_involution(1e-12).holds);
            prop_assert!(l.inverse().unwrap().matrix().max_abs_diff(l.matrix()) < 1e-12);
        }
    }
}
