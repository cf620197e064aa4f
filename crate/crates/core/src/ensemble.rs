//! Seeded random instances: matrices with a prescribed Jordan structure and
//! admissible level lists for the truncated model.

use nalgebra::DMatrix;
use rand::Rng;

use crate::blockdiag::{EigenCluster, SpectralTable};
use crate::linalg::{c64, inverse, ComplexMatrix, C64};

/// Minimum distance between distinct eigenvalues (and their conjugates).
pub const SEPARATION: f64 = 0.5;

/// Eigenvalues are drawn with `|Re| ≤ BOX` and `|Im| ≤ BOX`.
pub const BOX: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct Instance {
    pub h: ComplexMatrix,
    pub basis: ComplexMatrix,
    pub table: SpectralTable,
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    // Box-Muller keeps this free of a distributions dependency.
    let mut normal = || {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen();
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    };
    ComplexMatrix::from_dmatrix(DMatrix::from_fn(rows, cols, |_, _| c64(normal(), normal()) * std::f64::consts::FRAC_1_SQRT_2))
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase-fixed `R`).
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n).into_dmatrix();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else if i == j {
            c64(1.0, 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    ComplexMatrix::from_dmatrix(q * phases)
}

/// `U·diag(s)·V` with singular values `s` log-uniform in `[1, max_cond]`,
/// so that `cond ≤ max_cond`.
pub fn random_basis(rng: &mut impl Rng, n: usize, max_cond: f64) -> ComplexMatrix {
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let s: Vec<C64> = (0..n).map(|_| c64(max_cond.powf(rng.gen::<f64>()), 0.0)).collect();
    &(&u * &ComplexMatrix::from_diagonal(&s)) * &v
}

fn far_from(z: C64, taken: &[C64]) -> bool {
    taken.iter().all(|w| (z - w).norm() >= SEPARATION && (z.conj() - w).norm() >= SEPARATION)
}

fn draw_value(rng: &mut impl Rng, taken: &[C64], real: bool) -> C64 {
    loop {
        let re = rng.gen_range(-BOX..BOX);
        let z = if real { c64(re, 0.0) } else { c64(re, rng.gen_range(SEPARATION / 2.0..BOX)) };
        if far_from(z, taken) {
            return z;
        }
    }
}

/// Chain lengths in `1..=3`, descending, with total at most `budget`.
fn draw_p_list(rng: &mut impl Rng, budget: usize) -> Vec<usize> {
    let chains = rng.gen_range(1..=2usize);
    let mut out = Vec::new();
    let mut left = budget;
    for _ in 0..chains {
        if left == 0 {
            break;
        }
        let p = rng.gen_range(1..=left.min(3));
        out.push(p);
        left -= p;
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

fn cluster(value: C64, p_list: Vec<usize>) -> EigenCluster {
    EigenCluster { value, d: p_list.len(), algebraic_mult: p_list.iter().sum(), p_list }
}

fn table(clusters: Vec<EigenCluster>) -> SpectralTable {
    SpectralTable { clusters, cluster_tol: 0.0, warning: None }
}

/// Real clusters and conjugate pairs with matching chains; dimension in `1..=max_dim`.
pub fn paired_table(rng: &mut impl Rng, max_dim: usize) -> SpectralTable {
    let target = rng.gen_range(1..=max_dim);
    let mut clusters = Vec::new();
    let mut taken = Vec::new();
    let mut left = target;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.5) {
            let p = draw_p_list(rng, left / 2);
            let z = draw_value(rng, &taken, false);
            taken.extend([z, z.conj()]);
            left -= 2 * p.iter().sum::<usize>();
            clusters.push(cluster(z, p.clone()));
            clusters.push(cluster(z.conj(), p));
        } else {
            let p = draw_p_list(rng, left);
            let z = draw_value(rng, &taken, true);
            taken.push(z);
            left -= p.iter().sum::<usize>();
            clusters.push(cluster(z, p));
        }
    }
    table(clusters)
}

/// A paired table of dimension at most `max_dim − 1` plus one non-real
/// cluster whose conjugate is not an eigenvalue.
pub fn unpaired_table(rng: &mut impl Rng, max_dim: usize) -> SpectralTable {
    let mut t = if max_dim > 1 { paired_table(rng, max_dim - 1) } else { table(Vec::new()) };
    let used = t.dimension();
    let taken: Vec<C64> = t.clusters.iter().map(|c| c.value).collect();
    let z = draw_value(rng, &taken, false);
    let z = if rng.gen_bool(0.5) { z } else { z.conj() };
    t.clusters.push(cluster(z, draw_p_list(rng, max_dim - used)));
    t
}

/// `A·J·A⁻¹` for the Jordan matrix of `table` and a random basis.
pub fn instance(rng: &mut impl Rng, table: SpectralTable, max_cond: f64) -> Instance {
    let n = table.dimension();
    let basis = random_basis(rng, n, max_cond);
    let inv = inverse(&basis).expect("bounded condition number");
    let h = &(&basis * &table.jordan_form()) * &inv;
    Instance { h, basis, table }
}

/// Strictly increasing positive levels, `1 ≤ L ≤ max_levels`, with
/// consecutive gaps of at least `min_gap`.
pub fn admissible_lambdas(rng: &mut impl Rng, max_levels: usize, min_gap: f64) -> Vec<f64> {
    let l = rng.gen_range(1..=max_levels);
    let mut out = Vec::with_capacity(l);
    let mut acc = 0.0;
    for _ in 0..l {
        acc += rng.gen_range(min_gap..min_gap + 3.0);
        out.push(acc);
    }
    out
}

/// Frequencies covering every regime: one below all thresholds, one between
/// each pair of consecutive thresholds, one above all of them, and every
/// threshold itself (flagged `true`).
pub fn regime_frequencies(lambdas: &[f64]) -> Vec<(f64, bool)> {
    let t: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let mut out = vec![(0.5 * t[0], false)];
    for w in t.windows(2) {
        out.push((0.5 * (w[0] + w[1]), false));
    }
    out.push((t[t.len() - 1] + 0.5, false));
    out.extend(t.iter().map(|&x| (x, true)));
    out
}
