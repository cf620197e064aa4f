//! Residual checks and the pseudo-Hermiticity decision.
//!
//! The verdict comes from the conjugate-pairing test on the spectral table.
//! Synthesized witnesses only confirm it: if they miss their tolerances the
//! outcome is downgraded to [`Verdict::Inconclusive`], never flipped.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::antilinear::AntilinearOp;
use crate::blockdiag::{block_diagonalize, BlockDiagonalization, BlockTolerances, SpectralTable};
use crate::linalg::{ComplexMatrix, C64};
use crate::symmetry::{
    build_antilinear_metric, check_pairing, classify_spectrum, intertwiner, synthesize, PairingReport,
    SpectralLabeling, SymmetryOperators,
};

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// `‖H†K − K·conj(H)‖ / (‖H‖‖K‖)`: zero iff `H† = L H L⁻¹`.
pub fn residual_intertwine_antilinear(h: &ComplexMatrix, l: &AntilinearOp) -> f64 {
    let k = l.matrix();
    ratio((h.adjoint() * k - k * h.conj()).frobenius_norm(), h.frobenius_norm() * k.frobenius_norm())
}

/// `‖H K − K·conj(H)‖ / (‖H‖‖K‖)`: zero iff `L` commutes with `H`.
pub fn residual_commute_antilinear(h: &ComplexMatrix, l: &AntilinearOp) -> f64 {
    let k = l.matrix();
    ratio((h * k - k * h.conj()).frobenius_norm(), h.frobenius_norm() * k.frobenius_norm())
}

/// `‖K·conj(K) − I‖`.
pub fn residual_involution(l: &AntilinearOp) -> f64 {
    l.is_involution(0.0).residual
}

/// `(‖η − η†‖/‖η‖, ‖H†η − ηH‖/(‖H‖‖η‖))`.
pub fn residual_hermitian_metric(h: &ComplexMatrix, eta: &ComplexMatrix) -> (f64, f64) {
    let en = eta.frobenius_norm();
    let herm = ratio((eta - eta.adjoint()).frobenius_norm(), en);
    let inter = ratio((h.adjoint() * eta - eta * h).frobenius_norm(), h.frobenius_norm() * en);
    (herm, inter)
}

/// `‖H†γ − γH‖ / (‖H‖‖γ‖)` for a linear intertwiner.
pub fn residual_intertwine_linear(h: &ComplexMatrix, gamma: &ComplexMatrix) -> f64 {
    ratio((h.adjoint() * gamma - gamma * h).frobenius_norm(), h.frobenius_norm() * gamma.frobenius_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PseudoHermitian,
    NotPseudoHermitian,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PseudoHermitian => "pseudo_hermitian",
            Self::NotPseudoHermitian => "not_pseudo_hermitian",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Every tolerance used by [`decide`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolProfile {
    pub block: BlockTolerances,
    /// Relative to `1 + |E|`.
    pub real_tol: f64,
    /// Relative to `1 + |E|`.
    pub pair_tol: f64,
    pub reconstruction: f64,
    pub involution: f64,
    pub commutation: f64,
    /// Intertwining and Hermiticity residuals of `τ`, `η`, `γ`.
    pub witness: f64,
}

impl Default for TolProfile {
    fn default() -> Self {
        Self {
            block: BlockTolerances::default(),
            real_tol: 1e-8,
            pair_tol: 1e-8,
            reconstruction: 1e-8,
            involution: 1e-8,
            commutation: 1e-8,
            witness: 1e-8,
        }
    }
}

impl TolProfile {
    pub fn as_map(&self) -> BTreeMap<String, f64> {
        [
            ("cluster_tol", self.block.cluster_tol),
            ("rank_tol", self.block.rank_tol),
            ("max_cond", self.block.max_cond),
            ("real_tol", self.real_tol),
            ("pair_tol", self.pair_tol),
            ("reconstruction", self.reconstruction),
            ("involution", self.involution),
            ("commutation", self.commutation),
            ("witness", self.witness),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    /// Tolerance that applies to a named residual.
    pub fn limit_for(&self, residual: &str) -> f64 {
        match residual {
            "reconstruction" => self.reconstruction,
            "X_involution" => self.involution,
            "X_commute" => self.commutation,
            _ => self.witness,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub verdict: Verdict,
    pub pairing_ok: bool,
    pub pairing: Option<PairingReport>,
    pub labeling: Option<SpectralLabeling>,
    pub table: Option<SpectralTable>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    /// Present exactly when the verdict is pseudo-Hermitian.
    pub witnesses: Option<SymmetryOperators>,
    pub cond_a: Option<f64>,
    pub diagnostics: Vec<String>,
    pub decomposition: Option<BlockDiagonalization>,
}

impl Certificate {
    fn bare(verdict: Verdict, profile: &TolProfile) -> Self {
        Self {
            verdict,
            pairing_ok: false,
            pairing: None,
            labeling: None,
            table: None,
            residuals: BTreeMap::new(),
            tolerances: profile.as_map(),
            witnesses: None,
            cond_a: None,
            diagnostics: Vec::new(),
            decomposition: None,
        }
    }
}

/// Residuals of a full witness set against `h`.
pub fn witness_residuals(h: &ComplexMatrix, ops: &SymmetryOperators) -> BTreeMap<String, f64> {
    let mut r = BTreeMap::new();
    r.insert("anti_ph".into(), residual_intertwine_antilinear(h, &ops.antilinear_metric));
    r.insert("X_involution".into(), residual_involution(&ops.pt_symmetry));
    r.insert("X_commute".into(), residual_commute_antilinear(h, &ops.pt_symmetry));
    let (herm, inter) = residual_hermitian_metric(h, &ops.metric);
    r.insert("eta_hermitian".into(), herm);
    r.insert("eta_intertwine".into(), inter);
    let gamma = match intertwiner(&ops.antilinear_metric, &ops.pt_symmetry) {
        Ok(g) => residual_intertwine_linear(h, &g),
        Err(_) => f64::INFINITY,
    };
    r.insert("gamma_intertwine".into(), gamma);
    r
}

/// Decides whether `h` is pseudo-Hermitian and, if so, attaches witnesses.
pub fn decide(h: &ComplexMatrix, profile: &TolProfile) -> Certificate {
    let mut cert = Certificate::bare(Verdict::Inconclusive, profile);
    if let Err(e) = h.ensure_square().and_then(|_| h.check_finite()) {
        cert.diagnostics.push(format!("invalid input: {e}"));
        return cert;
    }
    let bd = match block_diagonalize(h, &profile.block) {
        Ok(bd) => bd,
        Err(e) => {
            cert.diagnostics.push(format!("block-diagonalization failed: {e}"));
            return cert;
        }
    };
    cert.tolerances.insert("cluster_radius".into(), bd.table.cluster_tol);
    cert.cond_a = Some(bd.cond_a);
    cert.table = Some(bd.table.clone());
    if let Some(w) = &bd.table.warning {
        cert.diagnostics.push(w.clone());
    }
    cert.residuals.insert("reconstruction".into(), bd.reconstruction_residual);
    if let Ok(tau) = build_antilinear_metric(&bd) {
        cert.residuals.insert("anti_ph".into(), residual_intertwine_antilinear(h, &tau));
    }
    let labeling = classify_spectrum(&bd.table, profile.real_tol, profile.pair_tol);
    let report = check_pairing(&labeling, &bd.table);
    cert.pairing_ok = report.ok;
    cert.labeling = Some(labeling.clone());
    cert.pairing = Some(report.clone());

    if bd.reconstruction_residual > profile.reconstruction {
        cert.diagnostics.push(format!(
            "reconstruction residual {:e} exceeds {:e}",
            bd.reconstruction_residual, profile.reconstruction
        ));
        cert.decomposition = Some(bd);
        return cert;
    }
    if let Some(v) = &report.violation {
        cert.verdict = Verdict::NotPseudoHermitian;
        cert.diagnostics.push(v.to_string());
        cert.decomposition = Some(bd);
        return cert;
    }
    match synthesize(&bd, &labeling) {
        Ok(ops) => {
            cert.residuals.extend(witness_residuals(h, &ops));
            let failing: Vec<String> = cert
                .residuals
                .iter()
                .filter(|(k, v)| !(**v <= profile.limit_for(k)))
                .map(|(k, v)| format!("{k} = {v:e} exceeds {:e}", profile.limit_for(k)))
                .collect();
            if failing.is_empty() {
                cert.verdict = Verdict::PseudoHermitian;
                cert.witnesses = Some(ops);
            } else {
                cert.diagnostics.push(format!(
                    "pairing holds but witnesses failed confirmation: {}",
                    failing.join("; ")
                ));
            }
        }
        Err(e) => cert.diagnostics.push(format!("synthesis failed: {e}")),
    }
    cert.decomposition = Some(bd);
    cert
}

/// Centers of the clusters in a certificate, if any.
pub fn cluster_values(cert: &Certificate) -> Vec<C64> {
    cert.table.as_ref().map(|t| t.clusters.iter().map(|c| c.value).collect()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, pauli};

    fn re(x: f64) -> C64 {
        c64(x, 0.0)
    }

    fn scattering_h(kx: f64) -> ComplexMatrix {
        let e = c64(0.0, -2.0 * kx).exp();
        ComplexMatrix::from_rows(&[vec![re(1.0), e], vec![-e.conj(), re(-1.0)]]).unwrap()
    }

    #[test]
    fn residual_examples() {
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -3.0]]).unwrap();
        assert_eq!(residual_intertwine_antilinear(&h, &AntilinearOp::conjugation(2)), 0.0);
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.5, -3.0]]).unwrap();
        assert_eq!(residual_commute_antilinear(&h, &AntilinearOp::conjugation(2)), 0.0);
        for kx in [0.0, 0.3, 1.0] {
            let (a, b) = residual_hermitian_metric(&scattering_h(kx), &pauli::sigma3());
            assert!(a == 0.0 && b < 1e-16);
        }
    }

    #[test]
    fn residual_grows_linearly_with_perturbation() {
        let h = scattering_h(0.3);
        let e2 = c64(0.0, 0.6).exp();
        let tau = ComplexMatrix::from_rows(&[vec![re(0.0), re(-1.0)], vec![re(-1.0), -e2 * 2.0]]).unwrap();
        let dir = ComplexMatrix::from_rows(&[vec![c64(0.3, -0.2), re(0.7)], vec![c64(0.1, 0.4), re(-0.5)]]).unwrap();
        let r = |d: f64| residual_intertwine_antilinear(&h, &AntilinearOp::new(&tau + dir.scale(re(d))).unwrap());
        assert!(r(0.0) < 1e-15);
        let (r1, r2) = (r(1e-6), r(2e-6));
        assert!(r1 > 0.0);
        assert!(((r2 / r1) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn hermitian_matrix_is_pseudo_hermitian() {
        let h = ComplexMatrix::from_rows(&[vec![re(2.0), c64(0.0, 1.0)], vec![c64(0.0, -1.0), re(-1.0)]]).unwrap();
        let c = decide(&h, &TolProfile::default());
        assert_eq!(c.verdict, Verdict::PseudoHermitian);
        assert!(c.witnesses.is_some());
    }

    #[test]
    fn scattering_hamiltonian_is_pseudo_hermitian_and_defective() {
        for kx in [0.0, 0.3, 1.0] {
            let c = decide(&scattering_h(kx), &TolProfile::default());
            assert_eq!(c.verdict, Verdict::PseudoHermitian);
            let t = c.table.unwrap();
            assert_eq!(t.clusters.len(), 1);
            assert_eq!(t.clusters[0].p_list, vec![2]);
            assert!(t.clusters[0].value.norm() < 1e-10);
        }
    }

    #[test]
    fn unpaired_complex_value_is_rejected() {
        let h = ComplexMatrix::from_diagonal(&[c64(1.0, 1.0), re(2.0)]);
        let c = decide(&h, &TolProfile::default());
        assert_eq!(c.verdict, Verdict::NotPseudoHermitian);
        assert!(!c.pairing_ok);
        assert!(c.witnesses.is_none());
        assert!(c.diagnostics[0].contains("no complex-conjugate partner"));
        assert!(c.residuals["anti_ph"] < 1e-14);
    }

    #[test]
    fn breakdown_is_inconclusive() {
        let h = ComplexMatrix::from_diagonal(&[re(0.0), re(1e-3)]);
        let profile = TolProfile { block: BlockTolerances { cluster_tol: 10.0, ..Default::default() }, ..Default::default() };
        let c = decide(&h, &profile);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.diagnostics[0].contains("staircase"));
    }

    #[test]
    fn rectangular_input_is_inconclusive() {
        let c = decide(&ComplexMatrix::zeros(2, 3), &TolProfile::default());
        assert_eq!(c.verdict, Verdict::Inconclusive);
    }
}
