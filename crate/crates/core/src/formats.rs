//! JSON documents: matrices and certificates.
//!
//! Complex numbers are `[re, im]` pairs. Non-finite residuals are written as
//! `null`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{Certificate, Verdict};
use crate::linalg::{c64, ComplexMatrix};
use crate::symmetry::{intertwiner, PairingViolation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("matrix file declares {rows}x{cols} but holds {got} entries")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("matrix file declares an empty matrix")]
    Empty,
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries: m.row_major().into_iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let f: Self = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), FormatError> {
        if self.rows == 0 || self.cols == 0 {
            return Err(FormatError::Empty);
        }
        if self.entries.len() != self.rows * self.cols {
            return Err(FormatError::Shape { rows: self.rows, cols: self.cols, got: self.entries.len() });
        }
        if let Some(index) = self.entries.iter().position(|[a, b]| !a.is_finite() || !b.is_finite()) {
            return Err(FormatError::NonFinite { index });
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, FormatError> {
        self.validate()?;
        let data = self.entries.iter().map(|[a, b]| c64(*a, *b)).collect();
        ComplexMatrix::from_row_major(self.rows, self.cols, data)
            .map_err(|_| FormatError::Shape { rows: self.rows, cols: self.cols, got: self.entries.len() })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("finite entries serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    #[serde(rename = "E")]
    pub value: [f64; 2],
    pub d: usize,
    pub p_list: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingSection {
    pub ok: bool,
    pub real: Vec<usize>,
    pub pairs: Vec<[usize; 2]>,
    pub unpaired: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<PairingViolation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub verdict: String,
    pub spectral_table: Vec<TableEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingSection>,
    pub residuals: BTreeMap<String, Option<f64>>,
    pub tolerances: BTreeMap<String, f64>,
    pub cond_a: Option<f64>,
    pub diagnostics: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<BTreeMap<String, MatrixFile>>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl CertificateReport {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let spectral_table = cert
            .table
            .as_ref()
            .map(|t| {
                t.clusters
                    .iter()
                    .map(|c| TableEntry { value: [c.value.re, c.value.im], d: c.d, p_list: c.p_list.clone() })
                    .collect()
            })
            .unwrap_or_default();
        let pairing = match (&cert.labeling, &cert.pairing) {
            (Some(l), Some(p)) => Some(PairingSection {
                ok: p.ok,
                real: l.real.clone(),
                pairs: l.pairs.iter().map(|&(a, b)| [a, b]).collect(),
                unpaired: l.unpaired.clone(),
                violation: p.violation.clone(),
                message: p.violation.as_ref().map(|v| v.to_string()),
            }),
            _ => None,
        };
        let witnesses = cert.witnesses.as_ref().map(|ops| {
            let mut w: BTreeMap<String, MatrixFile> = ops
                .named_matrices()
                .into_iter()
                .map(|(k, m)| (k.to_string(), MatrixFile::from_matrix(m)))
                .collect();
            if let Ok(g) = intertwiner(&ops.antilinear_metric, &ops.pt_symmetry) {
                w.insert("gamma".into(), MatrixFile::from_matrix(&g));
            }
            w
        });
        Self {
            verdict: cert.verdict.as_str().to_string(),
            spectral_table,
            pairing,
            residuals: cert.residuals.iter().map(|(k, v)| (k.clone(), finite(*v))).collect(),
            tolerances: cert.tolerances.clone(),
            cond_a: cert.cond_a.and_then(finite),
            diagnostics: cert.diagnostics.clone(),
            witnesses,
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        [Verdict::PseudoHermitian, Verdict::NotPseudoHermitian, Verdict::Inconclusive]
            .into_iter()
            .find(|v| v.as_str() == self.verdict)
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
