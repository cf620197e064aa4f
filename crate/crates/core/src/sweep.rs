//! Parameter sweeps over the scattering and truncated models, with their
//! columnar output.

use thiserror::Error;

use crate::certify::{decide, residual_commute_antilinear, residual_intertwine_antilinear, Certificate, TolProfile};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{self, ModelError, ModelSpec, DEFAULT_EP_TOL};
use crate::parallel::{map_ordered, Execution};
use crate::scattering::{evolve_transfer, hamiltonian_at, PotentialSpec, ScatteringError};

/// Residual columns, in output order.
pub const RESIDUAL_KEYS: [&str; 7] =
    ["reconstruction", "anti_ph", "X_involution", "X_commute", "eta_hermitian", "eta_intertwine", "gamma_intertwine"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error(transparent)]
    Scattering(#[from] ScatteringError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("range must satisfy start < end with finite bounds, got [{0}, {1}]")]
    Range(f64, f64),
    #[error("at least two samples are needed, got {0}")]
    Samples(usize),
}

/// `samples` equally spaced points from `a` to `b`, both included.
pub fn linspace(a: f64, b: f64, samples: usize) -> Result<Vec<f64>, SweepError> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(SweepError::Range(a, b));
    }
    if samples < 2 {
        return Err(SweepError::Samples(samples));
    }
    let n = (samples - 1) as f64;
    Ok((0..samples).map(|i| if i + 1 == samples { b } else { a + i as f64 * (b - a) / n }).collect())
}

fn fmt_f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else {
        String::new()
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

/// Per-certificate summary shared by both sweeps.
#[derive(Debug, Clone)]
pub struct Structure {
    pub verdict: String,
    /// Cluster values repeated by algebraic multiplicity, in canonical order.
    pub eigenvalues: Vec<C64>,
    pub p_lists: Vec<Vec<usize>>,
    /// Number of eigenvalues in real clusters.
    pub n_real: Option<usize>,
    pub cond_a: Option<f64>,
    pub residuals: Vec<Option<f64>>,
}

impl Structure {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let (eigenvalues, p_lists) = match &cert.table {
            Some(t) => (
                t.clusters.iter().flat_map(|c| std::iter::repeat(c.value).take(c.algebraic_mult)).collect(),
                t.clusters.iter().map(|c| c.p_list.clone()).collect(),
            ),
            None => (Vec::new(), Vec::new()),
        };
        let n_real = match (&cert.table, &cert.labeling) {
            (Some(t), Some(l)) => Some(l.real.iter().map(|&i| t.clusters[i].algebraic_mult).sum()),
            _ => None,
        };
        Self {
            verdict: cert.verdict.as_str().to_string(),
            eigenvalues,
            p_lists,
            n_real,
            cond_a: cert.cond_a,
            residuals: RESIDUAL_KEYS.iter().map(|k| cert.residuals.get(*k).copied()).collect(),
        }
    }

    /// `2|1,1` for a cluster with one chain of length 2 followed by one with two simple chains.
    pub fn p_list_string(&self) -> String {
        self.p_lists
            .iter()
            .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|")
    }

    fn header(dim: usize) -> Vec<String> {
        let mut h = vec!["verdict".to_string()];
        for i in 1..=dim {
            h.push(format!("E{i}_re"));
            h.push(format!("E{i}_im"));
        }
        h.extend(["p_lists", "n_real", "cond_a"].map(String::from));
        h.extend(RESIDUAL_KEYS.map(String::from));
        h
    }

    fn record(&self, dim: usize) -> Vec<String> {
        let mut r = vec![self.verdict.clone()];
        for i in 0..dim {
            match self.eigenvalues.get(i) {
                Some(z) => {
                    r.push(fmt_f(z.re));
                    r.push(fmt_f(z.im));
                }
                None => r.extend([String::new(), String::new()]),
            }
        }
        r.push(self.p_list_string());
        r.push(self.n_real.map(|n| n.to_string()).unwrap_or_default());
        r.push(fmt_opt(self.cond_a));
        r.extend(self.residuals.iter().map(|x| fmt_opt(*x)));
        r
    }
}

#[derive(Debug, Clone)]
pub struct ScatterSweep {
    pub potential: PotentialSpec,
    pub x_start: f64,
    pub x_end: f64,
    pub samples: usize,
    /// Integration steps for the whole range; each sample gets its share.
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct ScatterRow {
    pub x: f64,
    pub k: f64,
    pub v: f64,
    pub steps: usize,
    /// `U(x, x_start)`, row-major.
    pub u: [C64; 4],
    pub det_drift: f64,
    pub structure: Structure,
}

impl ScatterRow {
    pub fn header() -> Vec<String> {
        let mut h: Vec<String> = ["x", "k", "v", "steps"].map(String::from).to_vec();
        for e in ["u11", "u12", "u21", "u22"] {
            h.push(format!("{e}_re"));
            h.push(format!("{e}_im"));
        }
        h.push("det_drift".into());
        h.extend(Structure::header(2));
        h
    }

    pub fn record(&self) -> Vec<String> {
        let mut r = vec![fmt_f(self.x), fmt_f(self.k), fmt_f(self.v), self.steps.to_string()];
        for z in &self.u {
            r.push(fmt_f(z.re));
            r.push(fmt_f(z.im));
        }
        r.push(fmt_f(self.det_drift));
        r.extend(self.structure.record(2));
        r
    }
}

/// One row per sample; `U` runs from `x_start` to the sample, so the last
/// row holds the transfer matrix of the whole range.
pub fn scatter_sweep(
    cfg: &ScatterSweep,
    profile: &TolProfile,
    exec: Execution,
) -> Result<Vec<ScatterRow>, SweepError> {
    if cfg.steps == 0 {
        return Err(ScatteringError::Steps.into());
    }
    let xs = linspace(cfg.x_start, cfg.x_end, cfg.samples)?;
    let last = (cfg.samples - 1) as f64;
    let idx: Vec<usize> = (0..xs.len()).collect();
    let rows = map_ordered(&idx, exec, |&i| -> Result<ScatterRow, SweepError> {
        let x = xs[i];
        let (u, det_drift, steps) = if i == 0 {
            ([C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)], 0.0, 0)
        } else {
            let n = ((cfg.steps as f64 * i as f64 / last).round() as usize).max(1);
            let t = evolve_transfer(&cfg.potential, cfg.x_start, x, n)?;
            ([t.u[(0, 0)], t.u[(0, 1)], t.u[(1, 0)], t.u[(1, 1)]], t.det_drift, t.steps)
        };
        let h = hamiltonian_at(x, &cfg.potential)?;
        Ok(ScatterRow {
            x,
            k: cfg.potential.k,
            v: cfg.potential.value(x)?,
            steps,
            u,
            det_drift,
            structure: Structure::from_certificate(&decide(&h, profile)),
        })
    });
    rows.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct ModelSweep {
    pub lambdas: Vec<f64>,
    pub varpi_start: f64,
    pub varpi_end: f64,
    pub samples: usize,
    pub compare_closed_form: bool,
}

/// Pipeline output against the closed forms at one parameter value.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormComparison {
    /// Largest entrywise gap between the synthesized symmetry operator and the printed one.
    pub dev_x_printed: Option<f64>,
    /// Same against `A·C₀·conj(A⁻¹)` built from the closed-form basis.
    pub dev_x_transported: Option<f64>,
    pub tau_closed_anti_ph: f64,
    pub x_printed_commute: f64,
}

#[derive(Debug, Clone)]
pub struct ModelRow {
    pub varpi: f64,
    /// Census label from the pipeline: `none_real` or `<n>_real`.
    pub regime: String,
    /// Regime of the closed-form classification.
    pub closed_form_regime: String,
    pub exceptional: bool,
    pub structure: Structure,
    pub comparison: Option<ClosedFormComparison>,
}

impl ModelRow {
    pub fn header(dim: usize, compare: bool) -> Vec<String> {
        let mut h: Vec<String> = ["varpi", "regime", "closed_form_regime", "exceptional"].map(String::from).to_vec();
        h.extend(Structure::header(dim));
        if compare {
            h.extend(["dev_x_printed", "dev_x_transported", "tau_closed_anti_ph", "x_printed_commute"].map(String::from));
        }
        h
    }

    pub fn record(&self, dim: usize, compare: bool) -> Vec<String> {
        let mut r = vec![fmt_f(self.varpi), self.regime.clone(), self.closed_form_regime.clone(), self.exceptional.to_string()];
        r.extend(self.structure.record(dim));
        if compare {
            match &self.comparison {
                Some(c) => r.extend([
                    fmt_opt(c.dev_x_printed),
                    fmt_opt(c.dev_x_transported),
                    fmt_f(c.tau_closed_anti_ph),
                    fmt_f(c.x_printed_commute),
                ]),
                None => r.extend(std::iter::repeat(String::new()).take(4)),
            }
        }
        r
    }
}

pub fn census_label(n_real: Option<usize>) -> String {
    match n_real {
        Some(0) => "none_real".into(),
        Some(n) => format!("{n}_real"),
        None => "unknown".into(),
    }
}

/// Compares a certificate of `build_h(spec)` with the closed forms.
pub fn compare_closed_form(spec: &ModelSpec, h: &ComplexMatrix, cert: &Certificate) -> ClosedFormComparison {
    let printed = model::closed_form_x(spec);
    let transported = model::transported_x(spec);
    let pipeline = cert.witnesses.as_ref().map(|w| w.pt_symmetry.matrix());
    ClosedFormComparison {
        dev_x_printed: pipeline.map(|k| k.max_abs_diff(printed.matrix())),
        dev_x_transported: pipeline.map(|k| k.max_abs_diff(transported.matrix())),
        tau_closed_anti_ph: residual_intertwine_antilinear(h, &model::closed_form_tau(spec)),
        x_printed_commute: residual_commute_antilinear(h, &printed),
    }
}

pub fn model_row(spec: &ModelSpec, profile: &TolProfile, compare: bool) -> ModelRow {
    let h = model::build_h(spec);
    let cert = decide(&h, profile);
    let structure = Structure::from_certificate(&cert);
    ModelRow {
        varpi: spec.varpi,
        regime: census_label(structure.n_real),
        closed_form_regime: spec.regime(DEFAULT_EP_TOL).label(),
        exceptional: spec.exceptional_level(DEFAULT_EP_TOL).is_some(),
        comparison: compare.then(|| compare_closed_form(spec, &h, &cert)),
        structure,
    }
}

pub fn model_sweep(cfg: &ModelSweep, profile: &TolProfile, exec: Execution) -> Result<Vec<ModelRow>, SweepError> {
    let ws = linspace(cfg.varpi_start, cfg.varpi_end, cfg.samples)?;
    let specs = ws
        .iter()
        .map(|&w| ModelSpec::new(cfg.lambdas.clone(), w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(map_ordered(&specs, exec, |s| model_row(s, profile, cfg.compare_closed_form)))
}
