//! One-dimensional real-potential scattering as a two-level evolution.
//!
//! `H(x) = v(x)/(2k)·[[1, e^{-2ikx}], [-e^{2ikx}, -1]]` is traceless and
//! nilpotent at every `x`. Its evolution operator `U(x₊, x₋)`, solution of
//! `i∂ₓU = H U` with `U(x₋, x₋) = I`, is the transfer matrix of the part of
//! the potential between `x₋` and `x₊`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antilinear::AntilinearOp;
use crate::linalg::{c64, pauli, ComplexMatrix, C64};
use crate::symmetry::SymmetryOperators;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScatteringError {
    #[error("wavenumber must be positive and finite, got {0}")]
    Wavenumber(f64),
    #[error("rectangular potential needs x_start < x_end, got [{0}, {1}]")]
    EmptyBarrier(f64, f64),
    #[error("sampled potential needs at least two points with strictly increasing, finite x")]
    BadGrid,
    #[error("x = {x} lies outside the sampled grid [{lo}, {hi}]")]
    Extrapolation { x: f64, lo: f64, hi: f64 },
    #[error("integration interval must satisfy x_minus < x_plus, got [{0}, {1}]")]
    Interval(f64, f64),
    #[error("step count must be positive")]
    Steps,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    /// `v0` on `[x_start, x_end]`, zero elsewhere.
    Rectangular { v0: f64, x_start: f64, x_end: f64 },
    /// Piecewise-linear interpolation of `(x, v)` samples.
    Sampled { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialSpec {
    pub potential: Potential,
    pub k: f64,
}

impl PotentialSpec {
    pub fn new(potential: Potential, k: f64) -> Result<Self, ScatteringError> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(ScatteringError::Wavenumber(k));
        }
        match &potential {
            Potential::Rectangular { v0, x_start, x_end } => {
                if !(x_start < x_end) || !v0.is_finite() || !x_end.is_finite() || !x_start.is_finite() {
                    return Err(ScatteringError::EmptyBarrier(*x_start, *x_end));
                }
            }
            Potential::Sampled { points } => {
                let ok = points.len() >= 2
                    && points.iter().all(|(x, v)| x.is_finite() && v.is_finite())
                    && points.windows(2).all(|w| w[0].0 < w[1].0);
                if !ok {
                    return Err(ScatteringError::BadGrid);
                }
            }
        }
        Ok(Self { potential, k })
    }

    pub fn rectangular(v0: f64, x_start: f64, x_end: f64, k: f64) -> Result<Self, ScatteringError> {
        Self::new(Potential::Rectangular { v0, x_start, x_end }, k)
    }

    /// Potential value at `x`.
    pub fn value(&self, x: f64) -> Result<f64, ScatteringError> {
        match &self.potential {
            Potential::Rectangular { v0, x_start, x_end } => {
                Ok(if x >= *x_start && x <= *x_end { *v0 } else { 0.0 })
            }
            Potential::Sampled { points } => {
                let (lo, hi) = (points[0].0, points[points.len() - 1].0);
                if !(x >= lo && x <= hi) {
                    return Err(ScatteringError::Extrapolation { x, lo, hi });
                }
                let j = points.partition_point(|p| p.0 <= x).clamp(1, points.len() - 1);
                let ((x0, v0), (x1, v1)) = (points[j - 1], points[j]);
                Ok(v0 + (v1 - v0) * (x - x0) / (x1 - x0))
            }
        }
    }

    /// Points inside `(a, b)` where the potential jumps.
    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        match &self.potential {
            Potential::Rectangular { x_start, x_end, .. } => {
                [*x_start, *x_end].into_iter().filter(|&x| x > a && x < b).collect()
            }
            Potential::Sampled { .. } => Vec::new(),
        }
    }
}

fn h2(x: f64, k: f64, v: f64) -> Matrix2<C64> {
    let s = v / (2.0 * k);
    let e = c64(0.0, -2.0 * k * x).exp();
    Matrix2::new(c64(s, 0.0), e * s, -e.conj() * s, c64(-s, 0.0))
}

/// `H(x)` for the given potential.
pub fn hamiltonian_at(x: f64, spec: &PotentialSpec) -> Result<ComplexMatrix, ScatteringError> {
    let v = spec.value(x)?;
    Ok(from_m2(&h2(x, spec.k, v)))
}

fn from_m2(m: &Matrix2<C64>) -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, 2, vec![m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
        .expect("finite 2x2")
}

#[derive(Debug, Clone)]
pub struct TransferResult {
    pub u: ComplexMatrix,
    /// `|det U − 1|`.
    pub det_drift: f64,
    pub steps: usize,
}

/// Splits `steps` over segments proportionally to their lengths, at least
/// one step each.
fn distribute(lengths: &[f64], steps: usize) -> Vec<usize> {
    let total: f64 = lengths.iter().sum();
    let raw: Vec<f64> = lengths.iter().map(|l| steps as f64 * l / total).collect();
    let mut out: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let mut left = steps.saturating_sub(out.iter().sum());
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&i, &j| (raw[j] - raw[j].floor()).total_cmp(&(raw[i] - raw[i].floor())).then(i.cmp(&j)));
    for &i in &order {
        if left == 0 {
            break;
        }
        out[i] += 1;
        left -= 1;
    }
    for s in &mut out {
        *s = (*s).max(1);
    }
    out
}

/// Fixed-step classical Runge–Kutta integration of `U' = −i H(x) U`.
///
/// The interval is cut at jumps of the potential and the steps are shared
/// among the pieces in proportion to their lengths; each piece uses its own
/// interior potential value, so the integrand is smooth on every piece.
pub fn evolve_transfer(
    spec: &PotentialSpec,
    x_minus: f64,
    x_plus: f64,
    steps: usize,
) -> Result<TransferResult, ScatteringError> {
    if !(x_minus < x_plus) {
        return Err(ScatteringError::Interval(x_minus, x_plus));
    }
    if steps == 0 {
        return Err(ScatteringError::Steps);
    }
    if let Potential::Sampled { .. } = spec.potential {
        spec.value(x_minus)?;
        spec.value(x_plus)?;
    }
    let mut cuts = vec![x_minus];
    cuts.extend(spec.breakpoints(x_minus, x_plus));
    cuts.push(x_plus);
    let lengths: Vec<f64> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
    let counts = distribute(&lengths, steps);
    let k = spec.k;
    let minus_i = c64(0.0, -1.0);
    let mut u = Matrix2::<C64>::identity();
    for (w, &n) in cuts.windows(2).zip(&counts) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / n as f64;
        let piecewise = matches!(spec.potential, Potential::Rectangular { .. });
        let mid = spec.value(0.5 * (a + b))?;
        let rhs = |x: f64, y: &Matrix2<C64>| -> Result<Matrix2<C64>, ScatteringError> {
            let v = if piecewise { mid } else { spec.value(x.clamp(a, b))? };
            Ok(h2(x, k, v) * y * minus_i)
        };
        let hc = c64(h, 0.0);
        for s in 0..n {
            let x = a + s as f64 * h;
            let k1 = rhs(x, &u)?;
            let k2 = rhs(x + 0.5 * h, &(u + k1 * (hc * 0.5)))?;
            let k3 = rhs(x + 0.5 * h, &(u + k2 * (hc * 0.5)))?;
            let k4 = rhs(x + h, &(u + k3 * hc))?;
            u += (k1 + (k2 + k3) * c64(2.0, 0.0) + k4) * (hc / 6.0);
        }
    }
    let det_drift = (u.determinant() - c64(1.0, 0.0)).norm();
    Ok(TransferResult { u: from_m2(&u), det_drift, steps: counts.iter().sum() })
}

/// Reflection and transmission amplitudes read off a transfer matrix with
/// the usual conventions (`t = 1/M₂₂`, `r_left = −M₂₁/M₂₂`,
/// `r_right = M₁₂/M₂₂`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitudes {
    pub transmission: C64,
    pub reflection_left: C64,
    pub reflection_right: C64,
}

pub fn amplitudes(m: &ComplexMatrix) -> Amplitudes {
    let m22 = m[(1, 1)];
    Amplitudes {
        transmission: C64::new(1.0, 0.0) / m22,
        reflection_left: -m[(1, 0)] / m22,
        reflection_right: m[(0, 1)] / m22,
    }
}

/// Jordan basis `e^{-ikxσ₃}[[1, 2k/v], [-1, 0]]` of `H(x)` for potential value `v ≠ 0`.
pub fn closed_form_jordan_basis(x: f64, k: f64, v: f64) -> ComplexMatrix {
    let base = ComplexMatrix::from_real_rows(&[&[1.0, 2.0 * k / v], &[-1.0, 0.0]]).unwrap();
    pauli::exp_i_sigma3(-k * x) * base
}

/// Closed-form operators of `H(x)` in the basis `e^{-ikxσ₃}[[1,1],[-1,0]]`
/// (the basis above with `v = 2k`).
///
/// The antilinear metric is `(A·σ₁·Aᵀ)⁻¹` conjugated, which evaluates to
/// `[[0, −1], [−1, −2e^{2ikx}]]`. [`displayed_antilinear_metric`] gives a
/// different, non-symmetric matrix that does not intertwine `H` and `H†`.
pub fn closed_form_operators(x: f64, k: f64) -> SymmetryOperators {
    let kx = k * x;
    let e2 = c64(0.0, 2.0 * kx).exp();
    let one = c64(1.0, 0.0);
    let zero = c64(0.0, 0.0);
    let tau = ComplexMatrix::from_rows(&[vec![zero, -one], vec![-one, -e2 * 2.0]]).unwrap();
    let eta = ComplexMatrix::from_rows(&[vec![zero, -e2.conj()], vec![-e2, c64(-2.0, 0.0)]]).unwrap();
    let s = pauli::sigma1();
    SymmetryOperators {
        chain_reversal: s.clone(),
        conjugation: AntilinearOp::conjugation(2),
        canonical_antilinear_metric: AntilinearOp::new(s.clone()).unwrap(),
        antilinear_metric: AntilinearOp::new(tau).unwrap(),
        pair_exchange: ComplexMatrix::identity(2),
        canonical_metric: s,
        canonical_pt_symmetry: AntilinearOp::conjugation(2),
        pt_symmetry: AntilinearOp::new(pauli::exp_i_sigma3(-2.0 * kx)).unwrap(),
        metric: eta,
    }
}

/// `[[e^{-2ikx}, 0], [−1, −e^{2ikx}]]`, as printed alongside the closed forms.
pub fn displayed_antilinear_metric(x: f64, k: f64) -> AntilinearOp {
    let e2 = c64(0.0, 2.0 * k * x).exp();
    let m = ComplexMatrix::from_rows(&[vec![e2.conj(), c64(0.0, 0.0)], vec![c64(-1.0, 0.0), -e2]]).unwrap();
    AntilinearOp::new(m).unwrap()
}
