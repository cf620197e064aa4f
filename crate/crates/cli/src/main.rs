//! `pseudospec` command line.
//!
//! Exit codes: 0 pseudo-Hermitian (or sweep written), 1 not pseudo-Hermitian,
//! 2 inconclusive, 3 input or usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pseudospec::certify::{decide, TolProfile, Verdict};
use pseudospec::formats::{CertificateReport, MatrixFile};
use pseudospec::parallel::{threads_from_env, with_threads, Execution};
use pseudospec::scattering::{Potential, PotentialSpec};
use pseudospec::sweep::{model_sweep, scatter_sweep, ModelRow, ModelSweep, ScatterRow, ScatterSweep};

const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "pseudospec", version, about = "Pseudo-Hermiticity certificates and symmetry synthesis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix is pseudo-Hermitian and emit a certificate.
    Analyze(AnalyzeArgs),
    /// Sweep the transfer matrix and local Hamiltonian of a 1D real potential.
    ScatterSweep(ScatterArgs),
    /// Sweep the truncated two-component model over the frequency parameter.
    ModelSweep(ModelArgs),
}

#[derive(Args)]
struct ToleranceArgs {
    /// Eigenvalue clustering radius relative to the Frobenius norm.
    #[arg(long)]
    tol_cluster: Option<f64>,
    /// Conjugate-pair matching tolerance relative to 1 + |E|.
    #[arg(long)]
    tol_pair: Option<f64>,
    /// Realness tolerance relative to 1 + |E|.
    #[arg(long)]
    tol_real: Option<f64>,
}

impl ToleranceArgs {
    fn profile(&self) -> Result<TolProfile, String> {
        let mut p = TolProfile::default();
        for (name, v, slot) in [
            ("--tol-cluster", self.tol_cluster, &mut p.block.cluster_tol),
            ("--tol-pair", self.tol_pair, &mut p.pair_tol),
            ("--tol-real", self.tol_real, &mut p.real_tol),
        ] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(format!("{name} must be a non-negative number, got {v}"));
                }
                *slot = v;
            }
        }
        Ok(p)
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Matrix file: {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major.
    input: PathBuf,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScatterArgs {
    /// `rectangular:v0,a,b` or `sampled:path` (CSV with columns x,v).
    #[arg(long, allow_hyphen_values = true)]
    potential: String,
    /// Wavenumber.
    #[arg(long)]
    k: f64,
    /// `start,end`.
    #[arg(long, allow_hyphen_values = true)]
    x_range: String,
    #[arg(long, default_value_t = 11)]
    samples: usize,
    /// Integration steps over the whole range.
    #[arg(long, default_value_t = 2000)]
    steps: usize,
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[command(flatten)]
    tol: ToleranceArgs,
}

#[derive(Args)]
struct ModelArgs {
    /// Comma-separated, strictly increasing positive levels.
    #[arg(long)]
    lambdas: String,
    /// `start,end`.
    #[arg(long, allow_hyphen_values = true)]
    varpi_range: String,
    #[arg(long, default_value_t = 11)]
    samples: usize,
    #[arg(long)]
    csv_out: Option<PathBuf>,
    /// Add deviations from the closed-form operators.
    #[arg(long)]
    compare_closed_form: bool,
    #[command(flatten)]
    tol: ToleranceArgs,
}

fn numbers(s: &str, what: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("{what}: cannot parse {t:?} as a number")))
        .collect()
}

fn range(s: &str, what: &str) -> Result<(f64, f64), String> {
    match numbers(s, what)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("{what} expects `start,end`, got {s:?}")),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn csv_text(header: Vec<String>, records: impl Iterator<Item = Vec<String>>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).map_err(|e| e.to_string())?;
    for r in records {
        w.write_record(&r).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn analyze(args: &AnalyzeArgs) -> Result<u8, String> {
    let profile = args.tol.profile()?;
    let text = read(&args.input)?;
    let file = MatrixFile::parse(&text).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let h = file.to_matrix().map_err(|e| e.to_string())?;
    if !h.is_square() {
        return Err(format!("matrix must be square, got {}x{}", h.nrows(), h.ncols()));
    }
    let cert = decide(&h, &profile);
    let mut json = CertificateReport::from_certificate(&cert).to_json_pretty();
    json.push('\n');
    emit(args.json_out.as_deref(), &json)?;
    Ok(match cert.verdict {
        Verdict::PseudoHermitian => 0,
        Verdict::NotPseudoHermitian => 1,
        Verdict::Inconclusive => 2,
    })
}

fn sampled_potential(path: &Path) -> Result<Potential, String> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut points = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        let field = |j: usize| -> Result<f64, String> {
            rec.get(j)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| format!("{}: data row {} needs two numeric columns x,v", path.display(), i + 1))
        };
        points.push((field(0)?, field(1)?));
    }
    Ok(Potential::Sampled { points })
}

fn potential(spec: &str) -> Result<Potential, String> {
    match spec.split_once(':') {
        Some(("rectangular", rest)) => match numbers(rest, "--potential")?.as_slice() {
            [v0, a, b] => Ok(Potential::Rectangular { v0: *v0, x_start: *a, x_end: *b }),
            _ => Err(format!("rectangular potential expects v0,a,b, got {rest:?}")),
        },
        Some(("sampled", path)) => sampled_potential(Path::new(path)),
        _ => Err(format!("--potential must be rectangular:v0,a,b or sampled:path, got {spec:?}")),
    }
}

fn scatter(args: &ScatterArgs, exec: Execution) -> Result<u8, String> {
    let profile = args.tol.profile()?;
    let (x_start, x_end) = range(&args.x_range, "--x-range")?;
    let spec = PotentialSpec::new(potential(&args.potential)?, args.k).map_err(|e| e.to_string())?;
    let cfg = ScatterSweep { potential: spec, x_start, x_end, samples: args.samples, steps: args.steps };
    let rows = scatter_sweep(&cfg, &profile, exec).map_err(|e| e.to_string())?;
    let text = csv_text(ScatterRow::header(), rows.iter().map(|r| r.record()))?;
    emit(args.csv_out.as_deref(), &text)?;
    Ok(0)
}

fn model(args: &ModelArgs, exec: Execution) -> Result<u8, String> {
    let profile = args.tol.profile()?;
    let lambdas = numbers(&args.lambdas, "--lambdas")?;
    let (varpi_start, varpi_end) = range(&args.varpi_range, "--varpi-range")?;
    let cfg = ModelSweep {
        lambdas,
        varpi_start,
        varpi_end,
        samples: args.samples,
        compare_closed_form: args.compare_closed_form,
    };
    let rows = model_sweep(&cfg, &profile, exec).map_err(|e| e.to_string())?;
    let dim = 2 * cfg.lambdas.len();
    let compare = cfg.compare_closed_form;
    let text = csv_text(ModelRow::header(dim, compare), rows.iter().map(|r| r.record(dim, compare)))?;
    emit(args.csv_out.as_deref(), &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = match threads_from_env() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let outcome = with_threads(threads, || match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::ScatterSweep(a) => scatter(a, Execution::Parallel),
        Command::ModelSweep(a) => model(a, Execution::Parallel),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
