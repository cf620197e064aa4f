//! Jordan structure of a square matrix: eigenvalue clusters, Jordan chains,
//! and the factorization `H = A·H₀·A⁻¹` with `H₀` in block Jordan form.
//!
//! Canonical basis order: clusters sorted by real part then imaginary part,
//! chains within a cluster by descending length (ties by the pivot index of
//! the eigenvector), and chain index ascending from the eigenvector.
//!
//! Gauge: each chain is scaled so that its eigenvector has unit norm and its
//! first non-negligible component real positive. The remaining members of a
//! chain are then shifted along the chain (which leaves `H₀` unchanged) so
//! that they are orthogonal to the eigenvector.
//!
//! Chains are computed on the invariant subspace of each cluster, taken from
//! a reordered Schur form, so that nearby clusters do not leak into each
//! other's kernel computations.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    condition_number, inverse, null_space, ComplexMatrix, ComplexVector, LinalgError, SchurForm, C64,
};

/// Tolerances steering the block-diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockTolerances {
    /// Eigenvalues closer than `cluster_tol·‖H‖` are merged into one cluster.
    pub cluster_tol: f64,
    /// Singular values of `(H − E)ˡ` at most `rank_tol·‖H‖ˡ` count as zero.
    pub rank_tol: f64,
    /// Largest acceptable condition number of `A`.
    pub max_cond: f64,
}

impl Default for BlockTolerances {
    fn default() -> Self {
        // Rounding splits a Jordan block of size p by about ε^{1/p}·‖H‖, so
        // the clustering radius must sit well above ε^{1/3}.
        Self { cluster_tol: 1e-5, rank_tol: 1e-8, max_cond: 1e12 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlockDiagError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("inconsistent kernel staircase for cluster {cluster} (E = {center}) at power {power}: {detail}")]
    Staircase { cluster: usize, center: C64, power: usize, detail: String },
    #[error("Jordan basis is ill-conditioned (condition number {cond:e} exceeds {limit:e})")]
    IllConditioned { cond: f64, limit: f64 },
    #[error("no eigenvalue of the matrix lies within the clustering radius of {0}")]
    NotAnEigenvalue(C64),
    #[error("basis change does not commute with the Jordan form (relative residual {0:e})")]
    GaugeMismatch(f64),
}

/// Raw eigenvalues grouped into clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueClusters {
    /// Cluster centers (means of members) in canonical order.
    pub centers: Vec<C64>,
    /// Indices into the raw list, per cluster.
    pub members: Vec<Vec<usize>>,
    /// Absolute radius used.
    pub tol: f64,
    /// Set when everything merged into a single cluster despite a raw spread
    /// much larger than the radius.
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenCluster {
    pub value: C64,
    /// Geometric multiplicity.
    pub d: usize,
    /// Jordan chain lengths, descending.
    pub p_list: Vec<usize>,
    pub algebraic_mult: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralTable {
    pub clusters: Vec<EigenCluster>,
    /// Absolute clustering radius that produced the table.
    pub cluster_tol: f64,
    pub warning: Option<String>,
}

impl SpectralTable {
    pub fn dimension(&self) -> usize {
        self.clusters.iter().map(|c| c.algebraic_mult).sum()
    }

    /// Canonical basis labels implied by the table.
    pub fn labels(&self) -> Vec<JordanLabel> {
        let mut out = Vec::with_capacity(self.dimension());
        for (n, c) in self.clusters.iter().enumerate() {
            for (a, &p) in c.p_list.iter().enumerate() {
                for i in 0..p {
                    out.push(JordanLabel { cluster: n, chain: a, index: i, length: p });
                }
            }
        }
        out
    }

    /// Block Jordan matrix with this table's eigenvalues and chain lengths.
    pub fn jordan_form(&self) -> ComplexMatrix {
        let labels = self.labels();
        let n = labels.len();
        let mut h0 = ComplexMatrix::zeros(n, n);
        for (col, l) in labels.iter().enumerate() {
            h0[(col, col)] = self.clusters[l.cluster].value;
            if l.index > 0 {
                h0[(col - 1, col)] = C64::new(1.0, 0.0);
            }
        }
        h0
    }
}

/// Position of a basis vector: cluster `n`, chain `a`, index `i` (all zero
/// based) inside a chain of the given length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanLabel {
    pub cluster: usize,
    pub chain: usize,
    pub index: usize,
    pub length: usize,
}

#[derive(Debug, Clone)]
pub struct BlockDiagonalization {
    pub a: ComplexMatrix,
    pub a_inv: ComplexMatrix,
    pub h0: ComplexMatrix,
    pub table: SpectralTable,
    pub labels: Vec<JordanLabel>,
    /// Per cluster, `dim ker (H−E)ˡ` on the cluster's invariant subspace.
    pub kernel_dims: Vec<Vec<usize>>,
    /// `‖H − A·H₀·A⁻¹‖ / ‖H‖`.
    pub reconstruction_residual: f64,
    pub cond_a: f64,
}

fn lex_cmp(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Orders values by real part, treating real parts within `tol` of their
/// predecessor as equal and breaking those ties by imaginary part.
fn canonical_order(values: &[C64], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| lex_cmp(&values[i], &values[j]));
    let mut out = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && values[idx[end]].re - values[idx[end - 1]].re <= tol {
            end += 1;
        }
        let mut run = idx[start..end].to_vec();
        run.sort_by(|&i, &j| values[i].im.total_cmp(&values[j].im));
        out.extend(run);
        start = end;
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Single-linkage clustering of raw eigenvalues with absolute radius `tol`.
///
/// Clusters whose centers end up within `2·tol` are merged as well, so the
/// returned centers are pairwise more than `2·tol` apart.
pub fn cluster_eigenvalues(raw: &[C64], tol: f64) -> EigenvalueClusters {
    assert!(!raw.is_empty(), "cannot cluster an empty spectrum");
    let n = raw.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| lex_cmp(&raw[i], &raw[j]));
    let mut parent: Vec<usize> = (0..n).collect();
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if (raw[i] - raw[j]).norm() <= tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for &i in &order {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    let mean = |g: &Vec<usize>| g.iter().map(|&i| raw[i]).sum::<C64>() / g.len() as f64;
    loop {
        let centers: Vec<C64> = groups.iter().map(mean).collect();
        let mut merged = false;
        'outer: for a in 0..groups.len() {
            for b in (a + 1)..groups.len() {
                if (centers[a] - centers[b]).norm() <= 2.0 * tol {
                    let moved = groups.remove(b);
                    groups[a].extend(moved);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    let centers: Vec<C64> = groups.iter().map(mean).collect();
    let perm = canonical_order(&centers, tol);
    let centers: Vec<C64> = perm.iter().map(|&i| centers[i]).collect();
    let mut members: Vec<Vec<usize>> = perm.iter().map(|&i| groups[i].clone()).collect();
    for m in &mut members {
        m.sort_unstable();
    }
    let spread = order
        .iter()
        .flat_map(|&i| order.iter().map(move |&j| (raw[i] - raw[j]).norm()))
        .fold(0.0, f64::max);
    let warning = (centers.len() == 1 && n > 1 && spread > 1e3 * tol).then(|| {
        format!("all {n} eigenvalues merged into one cluster although their spread {spread:e} exceeds 1e3 times the radius {tol:e}")
    });
    EigenvalueClusters { centers, members, tol, warning }
}

/// Jordan chains of one cluster, expressed in full-space coordinates.
#[derive(Debug, Clone)]
pub struct ClusterChains {
    /// Each chain lists `v₁, v₂, …` with `(H−E)v₁ ≈ 0` and `(H−E)vᵢ = vᵢ₋₁`.
    pub chains: Vec<Vec<ComplexVector>>,
    /// `dim ker (H−E)ˡ` restricted to the cluster, for `l = 1, 2, …`.
    pub kernel_dims: Vec<usize>,
}

/// Orthonormal basis of the column span (singular values above `rel·σ_max`).
fn column_basis(m: &DMatrix<C64>, rel: f64) -> Result<DMatrix<C64>, LinalgError> {
    if m.ncols() == 0 {
        return Ok(DMatrix::zeros(m.nrows(), 0));
    }
    let svd = m.clone().try_svd(true, false, f64::EPSILON, 0).ok_or(LinalgError::NoConvergence("SVD"))?;
    let u = svd.u.expect("requested left singular vectors");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<DVector<C64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > rel * smax && s > 0.0)
        .map(|(i, _)| u.column(i).into_owned())
        .collect();
    Ok(if cols.is_empty() { DMatrix::zeros(m.nrows(), 0) } else { DMatrix::from_columns(&cols) })
}

/// Chains of the nearly nilpotent `n` (size `m`), built top-down from the
/// kernels of its powers. `scale` is the reference norm for rank decisions.
fn nilpotent_chains(
    n: &DMatrix<C64>,
    scale: f64,
    rank_tol: f64,
    cluster: usize,
    center: C64,
) -> Result<Chains, BlockDiagError> {
    let m = n.nrows();
    let staircase = |power: usize, detail: String| BlockDiagError::Staircase { cluster, center, power, detail };
    let mut kernels: Vec<DMatrix<C64>> = vec![DMatrix::zeros(m, 0)];
    let mut dims = vec![0usize];
    let mut power = DMatrix::<C64>::identity(m, m);
    let mut l = 0;
    while *dims.last().unwrap() < m {
        l += 1;
        if l > m {
            return Err(staircase(m, format!("kernel dimensions {:?} never reach {m}", &dims[1..])));
        }
        power = n * power;
        let threshold = rank_tol * scale.powi(l as i32);
        let k = null_space(&power, threshold)?;
        let d = k.ncols();
        let prev = dims[l - 1];
        if d <= prev {
            return Err(staircase(l, format!("kernel dimension stalls at {d} below {m}")));
        }
        if l >= 2 && d - prev > prev - dims[l - 2] {
            return Err(staircase(l, format!("kernel growth {} exceeds previous growth {}", d - prev, prev - dims[l - 2])));
        }
        kernels.push(k);
        dims.push(d);
    }
    let q = l;
    // count_ge[l] = number of chains of length at least l.
    let count_ge = |l: usize| if l > q { 0 } else { dims[l] - dims[l - 1] };
    // Chains stored as their top vector and length; expanded afterwards.
    let mut tops: Vec<(DVector<C64>, usize)> = Vec::new();
    for level in (1..=q).rev() {
        let wanted = count_ge(level) - count_ge(level + 1);
        if wanted == 0 {
            continue;
        }
        // Subspace already accounted for at this level.
        let mut cols: Vec<DVector<C64>> =
            kernels[level - 1].column_iter().map(|c| c.into_owned()).collect();
        for (top, len) in &tops {
            let mut w = top.clone();
            for _ in 0..(len - level) {
                w = n * w;
            }
            cols.push(w);
        }
        let known = if cols.is_empty() { DMatrix::zeros(m, 0) } else { DMatrix::from_columns(&cols) };
        let basis = column_basis(&known, 1e-10)?;
        let k = &kernels[level];
        let projected = k - &basis * (basis.adjoint() * k);
        let svd = projected
            .try_svd(false, true, f64::EPSILON, 0)
            .ok_or(LinalgError::NoConvergence("SVD"))?;
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
        idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        if idx.len() < wanted || svd.singular_values[idx[wanted - 1]] < 1e-6 {
            return Err(staircase(level, "cannot extend the chain basis at this level".into()));
        }
        for &i in idx.iter().take(wanted) {
            let coeffs: DVector<C64> = v_t.row(i).adjoint();
            tops.push((k * coeffs, level));
        }
    }
    let chains = tops
        .into_iter()
        .map(|(top, len)| {
            let mut chain = vec![top];
            for _ in 1..len {
                let next = n * chain.last().unwrap();
                chain.push(next);
            }
            chain.reverse();
            chain
        })
        .collect();
    Ok((chains, dims[1..].to_vec()))
}

/// Threshold multipliers tried after the nominal rank threshold produced an
/// inconsistent staircase. Ill-conditioned chains lift the zero singular
/// values of `Nˡ` above the nominal threshold.
const RANK_FALLBACK: [f64; 6] = [1e1, 1e2, 1e3, 1e4, 1e-1, 1e-2];

type Chains = (Vec<Vec<DVector<C64>>>, Vec<usize>);

/// Largest `‖N v₁‖ / ‖v₁‖` over chain heads.
fn head_residual(n: &DMatrix<C64>, chains: &[Vec<DVector<C64>>]) -> f64 {
    chains.iter().map(|c| (n * &c[0]).norm() / c[0].norm()).fold(0.0, f64::max)
}

/// Runs the staircase at the nominal rank threshold. If that fails, or its
/// chain heads are not annihilated to `rank_tol·scale`, the fallback
/// thresholds are tried as well and the candidate with the smallest head
/// residual wins.
fn staircase_with_fallback(
    n: &DMatrix<C64>,
    scale: f64,
    rank_tol: f64,
    cluster: usize,
    center: C64,
) -> Result<Chains, BlockDiagError> {
    let nominal = nilpotent_chains(n, scale, rank_tol, cluster, center);
    let first_err = match nominal {
        Ok(ok) if head_residual(n, &ok.0) <= rank_tol * scale => return Ok(ok),
        Ok(ok) => Ok(ok),
        Err(e @ BlockDiagError::Staircase { .. }) => Err(e),
        Err(e) => return Err(e),
    };
    let mut candidates: Vec<Chains> = RANK_FALLBACK
        .iter()
        .filter_map(|f| nilpotent_chains(n, scale, rank_tol * f, cluster, center).ok())
        .collect();
    let err = match first_err {
        Ok(ok) => {
            candidates.insert(0, ok);
            None
        }
        Err(e) => Some(e),
    };
    candidates
        .into_iter()
        .min_by(|a, b| head_residual(n, &a.0).total_cmp(&head_residual(n, &b.0)))
        .ok_or_else(|| err.expect("no candidate implies the nominal attempt failed"))
}

fn pivot_index(v: &DVector<C64>) -> usize {
    let mut best = 0;
    for i in 0..v.len() {
        if v[i].norm() > v[best].norm() {
            best = i;
        }
    }
    best
}

/// Applies the frozen gauge to one chain in place.
fn gauge_chain(chain: &mut [DVector<C64>]) {
    let head = &chain[0];
    let norm = head.norm();
    let big = head.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let first = head.iter().find(|z| z.norm() > 1e-8 * big).copied().unwrap_or(C64::new(1.0, 0.0));
    let phase = first / first.norm();
    let scale = phase.conj() / norm;
    for v in chain.iter_mut() {
        *v *= scale;
    }
    // Shift along the chain: v'ᵢ = Σⱼ tⱼ vᵢ₋ⱼ with t₀ = 1, chosen so that
    // ⟨v₁, v'ᵢ⟩ = 0 for i ≥ 2. The shift commutes with the Jordan block.
    let p = chain.len();
    if p < 2 {
        return;
    }
    let head = chain[0].clone();
    let hh = head.dotc(&head);
    let mut t = vec![C64::new(1.0, 0.0)];
    for i in 1..p {
        let s: C64 = (0..i).map(|j| t[j] * head.dotc(&chain[i - j])).sum();
        t.push(-s / hh);
    }
    let original = chain.to_vec();
    for i in 1..p {
        let mut v = DVector::zeros(head.len());
        for j in 0..=i {
            v += &original[i - j] * t[j];
        }
        chain[i] = v;
    }
}

struct ClusterWork {
    center: C64,
    chains: Vec<Vec<ComplexVector>>,
    kernel_dims: Vec<usize>,
}

fn chains_for_cluster(
    schur: &SchurForm,
    membership: &[bool],
    center: C64,
    cluster: usize,
    hnorm: f64,
    tol: &BlockTolerances,
) -> Result<ClusterWork, BlockDiagError> {
    let mut schur = schur.clone();
    let m = schur.reorder_to_front(membership);
    let t = schur.triangular();
    let q1 = schur.unitary().columns(0, m).into_owned();
    let mut nil = t.view((0, 0), (m, m)).into_owned();
    for i in 0..m {
        nil[(i, i)] -= center;
    }
    let (local, kernel_dims) = staircase_with_fallback(&nil, hnorm, tol.rank_tol, cluster, center)?;
    let mut chains: Vec<Vec<ComplexVector>> = local
        .into_iter()
        .map(|c| c.into_iter().map(|v| &q1 * v).collect::<Vec<_>>())
        .collect();
    for c in &mut chains {
        gauge_chain(c);
    }
    // Stable sort keeps top-down order among equal keys.
    chains.sort_by_key(|c| (std::cmp::Reverse(c.len()), pivot_index(&c[0])));
    Ok(ClusterWork { center, chains, kernel_dims })
}

fn cluster_membership(schur: &SchurForm, hnorm: f64, tol: &BlockTolerances) -> (EigenvalueClusters, Vec<C64>) {
    let raw = schur.eigenvalues();
    (cluster_eigenvalues(&raw, tol.cluster_tol * hnorm), raw)
}

/// Jordan chains of `h` for the cluster centered at `center`.
pub fn jordan_chains(h: &ComplexMatrix, center: C64, tol: &BlockTolerances) -> Result<ClusterChains, BlockDiagError> {
    h.ensure_square()?;
    h.check_finite()?;
    let hnorm = h.frobenius_norm();
    let schur = SchurForm::compute(h)?;
    let (clusters, raw) = cluster_membership(&schur, hnorm, tol);
    let radius = 2.0 * clusters.tol.max(f64::EPSILON * hnorm);
    let which = clusters
        .centers
        .iter()
        .enumerate()
        .filter(|(_, c)| (*c - center).norm() <= radius)
        .min_by(|a, b| (a.1 - center).norm().total_cmp(&(b.1 - center).norm()))
        .map(|(i, _)| i)
        .ok_or(BlockDiagError::NotAnEigenvalue(center))?;
    let mut flags = vec![false; raw.len()];
    for &i in &clusters.members[which] {
        flags[i] = true;
    }
    let work = chains_for_cluster(&schur, &flags, clusters.centers[which], which, hnorm, tol)?;
    Ok(ClusterChains { chains: work.chains, kernel_dims: work.kernel_dims })
}

/// Computes `A`, `H₀` and the spectral table of `h`.
pub fn block_diagonalize(h: &ComplexMatrix, tol: &BlockTolerances) -> Result<BlockDiagonalization, BlockDiagError> {
    let dim = h.ensure_square()?;
    h.check_finite()?;
    let hnorm = h.frobenius_norm();
    let schur = SchurForm::compute(h)?;
    let (clusters, raw) = cluster_membership(&schur, hnorm, tol);
    let mut works = Vec::with_capacity(clusters.centers.len());
    for (ci, (center, members)) in clusters.centers.iter().zip(&clusters.members).enumerate() {
        let mut flags = vec![false; raw.len()];
        for &i in members {
            flags[i] = true;
        }
        works.push(chains_for_cluster(&schur, &flags, *center, ci, hnorm, tol)?);
    }
    let table = SpectralTable {
        clusters: works
            .iter()
            .map(|w| {
                let p_list: Vec<usize> = w.chains.iter().map(Vec::len).collect();
                EigenCluster {
                    value: w.center,
                    d: p_list.len(),
                    algebraic_mult: p_list.iter().sum(),
                    p_list,
                }
            })
            .collect(),
        cluster_tol: clusters.tol,
        warning: clusters.warning.clone(),
    };
    let kernel_dims = works.iter().map(|w| w.kernel_dims.clone()).collect();
    let columns: Vec<ComplexVector> = works.into_iter().flat_map(|w| w.chains.into_iter().flatten()).collect();
    debug_assert_eq!(columns.len(), dim);
    let a = ComplexMatrix::from_columns(&columns);
    finish(h, a, table, kernel_dims, tol.max_cond)
}

fn finish(
    h: &ComplexMatrix,
    a: ComplexMatrix,
    table: SpectralTable,
    kernel_dims: Vec<Vec<usize>>,
    limit: f64,
) -> Result<BlockDiagonalization, BlockDiagError> {
    let cond_a = condition_number(&a)?;
    if !(cond_a <= limit) {
        return Err(BlockDiagError::IllConditioned { cond: cond_a, limit });
    }
    let a_inv = inverse(&a)?;
    let h0 = table.jordan_form();
    let hnorm = h.frobenius_norm();
    let rec = (h - &(&a * &h0) * &a_inv).frobenius_norm();
    let labels = table.labels();
    Ok(BlockDiagonalization {
        a,
        a_inv,
        h0,
        table,
        labels,
        kernel_dims,
        reconstruction_residual: if hnorm == 0.0 { rec } else { rec / hnorm },
        cond_a,
    })
}

impl BlockDiagonalization {
    /// Replaces `A` by another Jordan basis for the same `H₀`.
    ///
    /// `target = A·T` must hold with `T` commuting with `H₀`, checked to
    /// relative accuracy `tol`.
    pub fn regauge(&self, h: &ComplexMatrix, target: &ComplexMatrix, tol: f64) -> Result<Self, BlockDiagError> {
        let t = &self.a_inv * target;
        let comm = (&t * &self.h0 - &self.h0 * &t).frobenius_norm();
        let scale = t.frobenius_norm() * self.h0.frobenius_norm().max(1.0);
        let rel = comm / scale;
        if rel > tol {
            return Err(BlockDiagError::GaugeMismatch(rel));
        }
        finish(h, target.clone(), self.table.clone(), self.kernel_dims.clone(), f64::INFINITY)
    }
}

/// Brings an arbitrary Jordan basis (columns ordered by `labels`) into the
/// frozen chain gauge.
pub fn canonical_gauge(a: &ComplexMatrix, labels: &[JordanLabel]) -> ComplexMatrix {
    let mut out = a.clone();
    let mut start = 0;
    while start < labels.len() {
        let p = labels[start].length;
        let mut chain: Vec<ComplexVector> = (start..start + p).map(|j| a.column(j)).collect();
        gauge_chain(&mut chain);
        for (off, v) in chain.into_iter().enumerate() {
            for i in 0..a.nrows() {
                out[(i, start + off)] = v[i];
            }
        }
        start += p;
    }
    out
}

/// Columns of `A^{-†}`, the biorthonormal partners of the columns of `A`.
pub fn biorthonormal_complement(bd: &BlockDiagonalization) -> ComplexMatrix {
    bd.a_inv.adjoint()
}
