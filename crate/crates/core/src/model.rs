//! Truncated two-component model `H = (1/2ϖ)(Λ𝒦 − 2ϖ²σ₃)` on `ℂ² ⊗ ℂᴸ`.
//!
//! `Λ = diag(λ₁ < … < λ_L)`, all positive. Coordinates are interleaved: index
//! `2(ℓ−1)` is the upper slot of level `ℓ` and `2(ℓ−1)+1` the lower one.
//! Level `ℓ` contributes the eigenvalues `±E_ℓ` with `E_ℓ = √(ϖ²−λ_ℓ)` when
//! `λ_ℓ ≤ ϖ²` and `E_ℓ = i√(λ_ℓ−ϖ²)` otherwise. At `ϖ = √λ_ℓ` the level
//! collapses to a 2×2 Jordan block.
//!
//! Levels are 1-based in this module's public API.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antilinear::AntilinearOp;
use crate::linalg::{c64, pauli, ComplexMatrix, C64};
use crate::symmetry::SymmetryOperators;

/// Relative tolerance for deciding `ϖ = √λ_ℓ`.
pub const DEFAULT_EP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("level values must be positive, finite and strictly increasing")]
    Lambdas,
    #[error("frequency parameter must be positive and finite, got {0}")]
    Varpi(f64),
    #[error("the parameter sits on the exceptional point of level {0}; use the exceptional-point basis")]
    AtExceptionalPoint(usize),
    #[error("level {level} is not exceptional at this parameter (|ϖ − √λ| = {gap:e})")]
    NotExceptional { level: usize, gap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub lambdas: Vec<f64>,
    pub varpi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regime {
    /// `ϖ < √λ₁`: every eigenvalue is imaginary.
    NoneReal,
    /// `√λ_m < ϖ < √λ_{m+1}`: `2m` real eigenvalues.
    Mixed { real_levels: usize },
    /// `ϖ > √λ_L`: every eigenvalue is real.
    AllReal,
    /// `ϖ = √λ_level`.
    Exceptional { level: usize },
}

impl Regime {
    pub fn label(&self) -> String {
        match self {
            Self::NoneReal => "none_real".into(),
            Self::Mixed { real_levels } => format!("{}_real", 2 * real_levels),
            Self::AllReal => "all_real".into(),
            Self::Exceptional { level } => format!("exceptional_{level}"),
        }
    }
}

impl ModelSpec {
    pub fn new(lambdas: Vec<f64>, varpi: f64) -> Result<Self, ModelError> {
        let ok = !lambdas.is_empty()
            && lambdas.iter().all(|l| l.is_finite() && *l > 0.0)
            && lambdas.windows(2).all(|w| w[0] < w[1]);
        if !ok {
            return Err(ModelError::Lambdas);
        }
        if !(varpi > 0.0 && varpi.is_finite()) {
            return Err(ModelError::Varpi(varpi));
        }
        Ok(Self { lambdas, varpi })
    }

    pub fn levels(&self) -> usize {
        self.lambdas.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.levels()
    }

    /// `E_ℓ` with the positive-imaginary branch below the threshold.
    pub fn level_energy(&self, level: usize) -> C64 {
        let d = self.varpi * self.varpi - self.lambdas[level - 1];
        if d >= 0.0 {
            c64(d.sqrt(), 0.0)
        } else {
            c64(0.0, (-d).sqrt())
        }
    }

    /// `E_ℓ² = ϖ² − λ_ℓ`, always real.
    fn level_energy_sq(&self, level: usize) -> f64 {
        self.varpi * self.varpi - self.lambdas[level - 1]
    }

    /// Level whose threshold `√λ` matches `ϖ` to relative accuracy `tol`.
    pub fn exceptional_level(&self, tol: f64) -> Option<usize> {
        self.lambdas
            .iter()
            .position(|l| (self.varpi - l.sqrt()).abs() <= tol * (1.0 + self.varpi))
            .map(|i| i + 1)
    }

    pub fn regime(&self, tol: f64) -> Regime {
        if let Some(level) = self.exceptional_level(tol) {
            return Regime::Exceptional { level };
        }
        let m = self.real_levels(tol);
        if m == 0 {
            Regime::NoneReal
        } else if m == self.levels() {
            Regime::AllReal
        } else {
            Regime::Mixed { real_levels: m }
        }
    }

    /// Number of levels with `√λ_ℓ ≤ ϖ` (thresholds within `tol` count).
    pub fn real_levels(&self, tol: f64) -> usize {
        self.lambdas.iter().filter(|l| l.sqrt() <= self.varpi + tol * (1.0 + self.varpi)).count()
    }
}

/// Thresholds `√λ_ℓ` at which levels coalesce.
pub fn exceptional_set(lambdas: &[f64]) -> Vec<f64> {
    lambdas.iter().map(|l| l.sqrt()).collect()
}

/// Whether `varpi` lies within `tol` (absolute) of a threshold.
pub fn is_exceptional(lambdas: &[f64], varpi: f64, tol: f64) -> bool {
    exceptional_set(lambdas).iter().any(|e| (e - varpi).abs() <= tol)
}

fn per_level(spec: &ModelSpec, block: impl Fn(usize) -> ComplexMatrix) -> ComplexMatrix {
    let blocks: Vec<ComplexMatrix> = (1..=spec.levels()).map(block).collect();
    ComplexMatrix::block_diag(&blocks)
}

fn m2(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix::from_row_major(2, 2, vec![a, b, c, d]).expect("finite 2x2")
}

fn r(x: f64) -> C64 {
    c64(x, 0.0)
}

pub fn build_h(spec: &ModelSpec) -> ComplexMatrix {
    let w = spec.varpi;
    per_level(spec, |l| {
        let lam = spec.lambdas[l - 1];
        let s = 1.0 / (2.0 * w);
        m2(r(s * (lam - 2.0 * w * w)), r(s * lam), r(-s * lam), r(s * (-lam + 2.0 * w * w)))
    })
}

/// `±E_ℓ` per level, in coordinate order.
pub fn closed_form_eigenvalues(spec: &ModelSpec) -> Vec<C64> {
    (1..=spec.levels()).flat_map(|l| {
        let e = spec.level_energy(l);
        [e, -e]
    }).collect()
}

fn check_regular(spec: &ModelSpec) -> Result<(), ModelError> {
    match spec.exceptional_level(DEFAULT_EP_TOL) {
        Some(level) => Err(ModelError::AtExceptionalPoint(level)),
        None => Ok(()),
    }
}

fn a_block(spec: &ModelSpec, l: usize) -> ComplexMatrix {
    let q = spec.level_energy(l) / spec.varpi;
    let (p, m) = ((r(1.0) - q) * 0.5, (r(1.0) + q) * 0.5);
    m2(p, m, m, p)
}

fn a_inv_block(spec: &ModelSpec, l: usize) -> ComplexMatrix {
    let q = r(spec.varpi) / spec.level_energy(l);
    let (p, m) = ((r(1.0) - q) * 0.5, (r(1.0) + q) * 0.5);
    m2(p, m, m, p)
}

fn star_block(level_lambda: f64) -> ComplexMatrix {
    m2(r(0.5), r(-1.0 / level_lambda.sqrt()), r(0.5), r(0.0))
}

fn star_inv_block(level_lambda: f64) -> ComplexMatrix {
    let s = level_lambda.sqrt();
    m2(r(0.0), r(2.0), r(-s), r(s))
}

fn check_star(spec: &ModelSpec, level: usize) -> Result<(), ModelError> {
    if level == 0 || level > spec.levels() {
        return Err(ModelError::NotExceptional { level, gap: f64::INFINITY });
    }
    let gap = (spec.varpi - spec.lambdas[level - 1].sqrt()).abs();
    if gap > DEFAULT_EP_TOL * (1.0 + spec.varpi) {
        return Err(ModelError::NotExceptional { level, gap });
    }
    Ok(())
}

/// Eigenvector basis `½[[1−E/ϖ, 1+E/ϖ], [1+E/ϖ, 1−E/ϖ]]` per level.
pub fn closed_form_a(spec: &ModelSpec) -> Result<ComplexMatrix, ModelError> {
    check_regular(spec)?;
    Ok(per_level(spec, |l| a_block(spec, l)))
}

/// `½[[1−ϖ/E, 1+ϖ/E], [1+ϖ/E, 1−ϖ/E]]` per level.
pub fn closed_form_a_inverse(spec: &ModelSpec) -> Result<ComplexMatrix, ModelError> {
    check_regular(spec)?;
    Ok(per_level(spec, |l| a_inv_block(spec, l)))
}

/// Jordan basis at `ϖ = √λ_level`: the coalescing level uses
/// `½[[1, −2/√λ], [1, 0]]`, the others the regular blocks.
pub fn closed_form_a_star(spec: &ModelSpec, level: usize) -> Result<ComplexMatrix, ModelError> {
    check_star(spec, level)?;
    Ok(per_level(spec, |l| if l == level { star_block(spec.lambdas[l - 1]) } else { a_block(spec, l) }))
}

/// Inverse of [`closed_form_a_star`]; the coalescing block is `[[0, 2], [−√λ, √λ]]`.
pub fn closed_form_a_star_inverse(spec: &ModelSpec, level: usize) -> Result<ComplexMatrix, ModelError> {
    check_star(spec, level)?;
    Ok(per_level(spec, |l| if l == level { star_inv_block(spec.lambdas[l - 1]) } else { a_inv_block(spec, l) }))
}

/// The Jordan basis appropriate to the parameter (regular or exceptional).
pub fn closed_form_basis(spec: &ModelSpec) -> (ComplexMatrix, ComplexMatrix) {
    match spec.exceptional_level(DEFAULT_EP_TOL) {
        Some(level) => (
            closed_form_a_star(spec, level).expect("level checked"),
            closed_form_a_star_inverse(spec, level).expect("level checked"),
        ),
        None => (
            closed_form_a(spec).expect("regular"),
            closed_form_a_inverse(spec).expect("regular"),
        ),
    }
}

/// Matrix part of the printed symmetry operator: conjugation on the levels
/// with `√λ_ℓ ≤ ϖ`, `σ₁` followed by conjugation on the others.
pub fn closed_form_x(spec: &ModelSpec) -> AntilinearOp {
    AntilinearOp::new(closed_form_pair_exchange(spec)).expect("permutation")
}

/// `C₀`: identity on levels with real (or coalesced) eigenvalues, `σ₁` on
/// levels with an imaginary pair.
pub fn closed_form_pair_exchange(spec: &ModelSpec) -> ComplexMatrix {
    let m = spec.real_levels(DEFAULT_EP_TOL);
    per_level(spec, |l| if l <= m { ComplexMatrix::identity(2) } else { pauli::sigma1() })
}

/// Regular levels: `A⁻² = ½[[1+ϖ²/E², 1−ϖ²/E²], [1−ϖ²/E², 1+ϖ²/E²]]`.
/// Coalescing level: `−2√λ·[[0, 1], [1, −2]]`.
pub fn closed_form_tau(spec: &ModelSpec) -> AntilinearOp {
    let star = spec.exceptional_level(DEFAULT_EP_TOL);
    let w2 = spec.varpi * spec.varpi;
    let k = per_level(spec, |l| {
        if Some(l) == star {
            let s = spec.lambdas[l - 1].sqrt();
            m2(r(0.0), r(-2.0 * s), r(-2.0 * s), r(4.0 * s))
        } else {
            let q = w2 / spec.level_energy_sq(l);
            m2(r(0.5 * (1.0 + q)), r(0.5 * (1.0 - q)), r(0.5 * (1.0 - q)), r(0.5 * (1.0 + q)))
        }
    });
    AntilinearOp::new(k).expect("finite")
}

/// All closed-form operators in the coordinate ordering.
///
/// The symmetry operator field holds the printed form ([`closed_form_x`]);
/// the metric is `A^{-†}η₀A⁻¹` evaluated with the closed-form basis.
pub fn closed_form_operators(spec: &ModelSpec) -> SymmetryOperators {
    let star = spec.exceptional_level(DEFAULT_EP_TOL);
    let s = per_level(spec, |l| if Some(l) == star { pauli::sigma1() } else { ComplexMatrix::identity(2) });
    let c0 = closed_form_pair_exchange(spec);
    let m = spec.real_levels(DEFAULT_EP_TOL);
    let upto = if star.is_some() { m - 1 } else { m };
    let eta0 = per_level(spec, |l| if l <= upto { ComplexMatrix::identity(2) } else { pauli::sigma1() });
    let (_, a_inv) = closed_form_basis(spec);
    let metric = &(a_inv.adjoint() * &eta0) * &a_inv;
    let x = closed_form_x(spec);
    SymmetryOperators {
        chain_reversal: s.clone(),
        conjugation: AntilinearOp::conjugation(spec.dim()),
        canonical_antilinear_metric: AntilinearOp::new(s).expect("permutation"),
        antilinear_metric: closed_form_tau(spec),
        pair_exchange: c0,
        canonical_metric: eta0,
        canonical_pt_symmetry: x.clone(),
        pt_symmetry: x,
        metric,
    }
}

/// Symmetry operator obtained by transporting the canonical one through the
/// closed-form basis: `A·C₀·conj(A⁻¹)`.
pub fn transported_x(spec: &ModelSpec) -> AntilinearOp {
    let (a, a_inv) = closed_form_basis(spec);
    let c0 = closed_form_pair_exchange(spec);
    AntilinearOp::new(&(&a * &c0) * a_inv.conj()).expect("finite")
}
