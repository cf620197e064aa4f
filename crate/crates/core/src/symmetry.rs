//! Spectral labeling, the conjugate-pairing test, and construction of the
//! antilinear and linear symmetry operators of a block-diagonalized matrix.
//!
//! All "canonical" operators act in the Jordan basis (the columns of `A`);
//! the others are transported to the original coordinates through `A`.
//!
//! | field                      | built from                        | matrix part                  |
//! |----------------------------|-----------------------------------|------------------------------|
//! | `chain_reversal`           | chain lengths                     | permutation `i ↦ p − i + 1`  |
//! | `conjugation`              | dimension                         | `I`                          |
//! | `canonical_antilinear_metric` | chain reversal ∘ conjugation   | `S`                          |
//! | `antilinear_metric`        | `(A τ₀ A†)⁻¹`                     | `A^{-†}·S·conj(A⁻¹)`         |
//! | `pair_exchange`            | conjugate pairs                   | swaps paired slots           |
//! | `canonical_metric`         | `S·C₀`                            |                              |
//! | `canonical_pt_symmetry`    | `η₀ ∘ τ₀`                         | `C₀`                         |
//! | `pt_symmetry`              | `A 𝒳₀ A⁻¹`                        | `A·C₀·conj(A⁻¹)`             |
//! | `metric`                   | `A^{-†} η₀ A⁻¹`                   |                              |

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::antilinear::AntilinearOp;
use crate::blockdiag::{BlockDiagonalization, JordanLabel, SpectralTable};
use crate::linalg::{condition_number, ComplexMatrix, LinalgError, C64};

/// Partition of cluster indices into real clusters, conjugate pairs and
/// leftovers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralLabeling {
    pub real: Vec<usize>,
    /// `(plus, minus)` with `Im E_plus > 0`.
    pub pairs: Vec<(usize, usize)>,
    pub unpaired: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairingViolation {
    /// A non-real cluster without a conjugate partner.
    Unpaired { cluster: usize, value: C64 },
    /// Conjugate clusters whose Jordan structure differs.
    MismatchedChains { plus: usize, minus: usize, plus_p_list: Vec<usize>, minus_p_list: Vec<usize> },
}

impl fmt::Display for PairingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Unpaired { cluster, value } => {
                write!(f, "cluster {cluster} at {value} has no complex-conjugate partner")
            }
            Self::MismatchedChains { plus, minus, plus_p_list, minus_p_list } => write!(
                f,
                "conjugate clusters {plus} and {minus} have different Jordan chain lengths {plus_p_list:?} and {minus_p_list:?}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub ok: bool,
    pub violation: Option<PairingViolation>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("pairing condition violated: {0}")]
    Pairing(PairingViolation),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Splits clusters into real ones (`|Im E| ≤ real_tol·(1+|E|)`), conjugate
/// pairs matched greedily by distance (`|E₊ − conj(E₋)| ≤ pair_tol·(1+|E₊|)`,
/// ties to the smaller index) and unpaired ones.
pub fn classify_spectrum(table: &SpectralTable, real_tol: f64, pair_tol: f64) -> SpectralLabeling {
    let values: Vec<C64> = table.clusters.iter().map(|c| c.value).collect();
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, e) in values.iter().enumerate() {
        if e.im.abs() <= real_tol * (1.0 + e.norm()) {
            real.push(i);
        } else if e.im > 0.0 {
            upper.push(i);
        } else {
            lower.push(i);
        }
    }
    let mut used = vec![false; values.len()];
    let mut pairs = Vec::new();
    let mut unpaired = Vec::new();
    for &p in &upper {
        let target = values[p].conj();
        let best = lower
            .iter()
            .filter(|&&m| !used[m])
            .map(|&m| (m, (values[m] - target).norm()))
            .filter(|&(_, d)| d <= pair_tol * (1.0 + values[p].norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        match best {
            Some((m, _)) => {
                used[m] = true;
                pairs.push((p, m));
            }
            None => unpaired.push(p),
        }
    }
    unpaired.extend(lower.into_iter().filter(|&m| !used[m]));
    unpaired.sort_unstable();
    SpectralLabeling { real, pairs, unpaired }
}

/// Conjugate clusters must carry identical chain-length multisets.
pub fn check_pairing(labeling: &SpectralLabeling, table: &SpectralTable) -> PairingReport {
    let mut first: Option<(usize, PairingViolation)> = None;
    let mut note = |pos: usize, v: PairingViolation| {
        if first.as_ref().is_none_or(|(p, _)| pos < *p) {
            first = Some((pos, v));
        }
    };
    for &u in &labeling.unpaired {
        note(u, PairingViolation::Unpaired { cluster: u, value: table.clusters[u].value });
    }
    for &(p, m) in &labeling.pairs {
        let (pp, mp) = (&table.clusters[p].p_list, &table.clusters[m].p_list);
        let (mut a, mut b) = (pp.clone(), mp.clone());
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            note(
                p.min(m),
                PairingViolation::MismatchedChains { plus: p, minus: m, plus_p_list: pp.clone(), minus_p_list: mp.clone() },
            );
        }
    }
    match first {
        None => PairingReport { ok: true, violation: None },
        Some((_, v)) => PairingReport { ok: false, violation: Some(v) },
    }
}

fn chain_offsets(labels: &[JordanLabel]) -> HashMap<(usize, usize), usize> {
    let mut out = HashMap::new();
    for (col, l) in labels.iter().enumerate() {
        if l.index == 0 {
            out.insert((l.cluster, l.chain), col);
        }
    }
    out
}

fn permutation(n: usize, image: impl Fn(usize) -> usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        m[(image(j), j)] = C64::new(1.0, 0.0);
    }
    m
}

/// Permutation reversing every Jordan chain.
pub fn build_chain_reversal(table: &SpectralTable) -> ComplexMatrix {
    let labels = table.labels();
    permutation(labels.len(), |j| {
        let l = labels[j];
        j - l.index + (l.length - 1 - l.index)
    })
}

/// Componentwise conjugation in the Jordan basis.
pub fn build_conjugation(dim: usize) -> AntilinearOp {
    AntilinearOp::conjugation(dim)
}

/// Chain reversal composed with conjugation; its matrix part is the chain
/// reversal itself.
pub fn build_canonical_antilinear_metric(table: &SpectralTable) -> AntilinearOp {
    AntilinearOp::new(build_chain_reversal(table)).expect("permutation is square and finite")
}

/// Hermitian antilinear bijection intertwining `H` and `H†`. Exists for every
/// block-diagonalizable input, whatever its spectrum.
pub fn build_antilinear_metric(bd: &BlockDiagonalization) -> Result<AntilinearOp, LinalgError> {
    let s = build_chain_reversal(&bd.table);
    // (A·S·Aᵀ)⁻¹ conjugated, written without a second inversion.
    let k = &(bd.a_inv.adjoint() * s) * bd.a_inv.conj();
    AntilinearOp::new(k)
}

/// Permutation swapping each chain slot of a cluster with the matching slot
/// of its conjugate partner; identity on real clusters.
pub fn build_pair_exchange(labeling: &SpectralLabeling, table: &SpectralTable) -> Result<ComplexMatrix, SynthError> {
    let report = check_pairing(labeling, table);
    if let Some(v) = report.violation {
        return Err(SynthError::Pairing(v));
    }
    let labels = table.labels();
    let offsets = chain_offsets(&labels);
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for &(p, m) in &labeling.pairs {
        partner.insert(p, m);
        partner.insert(m, p);
    }
    Ok(permutation(labels.len(), |j| {
        let l = labels[j];
        match partner.get(&l.cluster) {
            Some(&other) => offsets[&(other, l.chain)] + l.index,
            None => j,
        }
    }))
}

/// `η₀ = S·C₀`.
pub fn build_canonical_metric(chain_reversal: &ComplexMatrix, pair_exchange: &ComplexMatrix) -> ComplexMatrix {
    chain_reversal * pair_exchange
}

/// `𝒳₀ = η₀ ∘ τ₀`.
pub fn build_canonical_pt_symmetry(canonical_metric: &ComplexMatrix, canonical_antilinear_metric: &AntilinearOp) -> AntilinearOp {
    canonical_metric * canonical_antilinear_metric
}

/// `𝒳 = A ∘ 𝒳₀ ∘ A⁻¹`.
pub fn build_pt_symmetry(bd: &BlockDiagonalization, canonical_pt_symmetry: &AntilinearOp) -> AntilinearOp {
    &(&bd.a * canonical_pt_symmetry) * &bd.a_inv
}

/// `η = A^{-†}·η₀·A⁻¹`, Hermitian by construction.
pub fn build_metric(bd: &BlockDiagonalization, canonical_metric: &ComplexMatrix) -> ComplexMatrix {
    &(bd.a_inv.adjoint() * canonical_metric) * &bd.a_inv
}

/// Linear intertwiner `γ = τ ∘ 𝒳`.
pub fn intertwiner(antilinear_metric: &AntilinearOp, pt_symmetry: &AntilinearOp) -> Result<ComplexMatrix, LinalgError> {
    for k in [antilinear_metric.matrix(), pt_symmetry.matrix()] {
        let c = condition_number(k)?;
        if !(c < 1e15) {
            return Err(LinalgError::Singular { condition: c });
        }
    }
    crate::antilinear::compose_antilinear_antilinear(antilinear_metric, pt_symmetry)
}

/// Every synthesized operator for one pseudo-Hermitian input.
#[derive(Debug, Clone)]
pub struct SymmetryOperators {
    pub chain_reversal: ComplexMatrix,
    pub conjugation: AntilinearOp,
    pub canonical_antilinear_metric: AntilinearOp,
    pub antilinear_metric: AntilinearOp,
    pub pair_exchange: ComplexMatrix,
    pub canonical_metric: ComplexMatrix,
    pub canonical_pt_symmetry: AntilinearOp,
    pub pt_symmetry: AntilinearOp,
    pub metric: ComplexMatrix,
}

impl SymmetryOperators {
    /// Named matrix parts in a fixed order, for serialization.
    pub fn named_matrices(&self) -> Vec<(&'static str, &ComplexMatrix)> {
        vec![
            ("S", &self.chain_reversal),
            ("Theta", self.conjugation.matrix()),
            ("tau0", self.canonical_antilinear_metric.matrix()),
            ("tau", self.antilinear_metric.matrix()),
            ("C0", &self.pair_exchange),
            ("eta0", &self.canonical_metric),
            ("X0", self.canonical_pt_symmetry.matrix()),
            ("X", self.pt_symmetry.matrix()),
            ("eta", &self.metric),
        ]
    }
}

/// Runs every builder in order. Fails only if the pairing condition fails.
pub fn synthesize(bd: &BlockDiagonalization, labeling: &SpectralLabeling) -> Result<SymmetryOperators, SynthError> {
    let table = &bd.table;
    let chain_reversal = build_chain_reversal(table);
    let conjugation = build_conjugation(table.dimension());
    let canonical_antilinear_metric = build_canonical_antilinear_metric(table);
    let antilinear_metric = build_antilinear_metric(bd)?;
    let pair_exchange = build_pair_exchange(labeling, table)?;
    let canonical_metric = build_canonical_metric(&chain_reversal, &pair_exchange);
    let canonical_pt_symmetry = build_canonical_pt_symmetry(&canonical_metric, &canonical_antilinear_metric);
    let pt_symmetry = build_pt_symmetry(bd, &canonical_pt_symmetry);
    let metric = build_metric(bd, &canonical_metric);
    Ok(SymmetryOperators {
        chain_reversal,
        conjugation,
        canonical_antilinear_metric,
        antilinear_metric,
        pair_exchange,
        canonical_metric,
        canonical_pt_symmetry,
        pt_symmetry,
        metric,
    })
}
