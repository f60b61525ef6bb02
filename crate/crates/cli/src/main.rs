#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matmean::exact::{certify_direction_one, certify_direction_two, float_shadow, CertificateReport};
use matmean::linalg::{CMatrix, HermitianMatrix, MatrixJson, PdMatrix};
use matmean::majorization::{self, MajorizationVerdict, SpectrumVector};
use matmean::means::{self, MeanWeights};
use matmean::suite::{run_suite, HeavyTail, RunReport, SuiteConfig};
use matmean::Error;

#[derive(Parser)]
#[command(
    name = "matmean",
    version,
    about = "Matrix means, majorization checks and exact certificates"
)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also print a human-readable summary on stderr.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a mean or Heron expression of two PD matrices.
    Compute {
        #[arg(value_enum)]
        mean: MeanKind,
        /// First matrix (JSON matrix file).
        a_path: PathBuf,
        /// Second matrix (JSON matrix file).
        b_path: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        b: f64,
        /// Cross-term coefficient; defaults to 2ab.
        #[arg(long, allow_negative_numbers = true)]
        c: Option<f64>,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        t: f64,
    },
    /// Test a majorization relation between two spectra or matrices.
    Check {
        #[arg(value_enum)]
        relation: Relation,
        /// Matrix file or JSON array of reals.
        x_path: PathBuf,
        /// Matrix file or JSON array of reals.
        y_path: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run the randomized theorem suite.
    Suite {
        #[arg(long, env = "MATMEAN_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Dimensions as `lo..hi` (inclusive) or a comma list.
        #[arg(long, default_value = "1..8")]
        dims: String,
        #[arg(long, default_value_t = 1e4)]
        cond: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Trials in the ill-conditioned sub-run; 0 skips it.
        #[arg(long, default_value_t = 100)]
        heavy_trials: usize,
    },
    /// Replay the exact incomparability certificates.
    Certify {
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum MeanKind {
    Geo,
    GeoT,
    Spectral,
    SpectralT,
    Wasserstein,
    Geodesic,
    HeronSpectral,
    HeronKubo,
    Riccati,
    ProductSqrt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relation {
    Weak,
    Major,
    Log,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Which {
    Dir1,
    Dir2,
    All,
}

/// Exit status plus the message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_)
            | Error::DimensionMismatch(..)
            | Error::NotSquare { .. }
            | Error::EmptyDimension
            | Error::LengthMismatch(..)
            | Error::InvalidConfig(_) => 2,
            Error::NotHermitian { .. }
            | Error::NotPositiveDefinite { .. }
            | Error::NotPositiveSemidefinite { .. }
            | Error::NonPositiveEntry { .. }
            | Error::Singular
            | Error::NotSymmetric => 3,
            Error::InvalidWeight(_) => 4,
            Error::NumericalFailure { .. }
            | Error::NoConvergence(_)
            | Error::CertificateUnverified(_)
            | Error::IntegrationMismatch { .. } => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

/// Command output: JSON document, success flag and summary lines.
struct Outcome {
    json: Value,
    ok: bool,
    summary: Vec<String>,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<CMatrix, Failure> {
    MatrixJson::parse(&read_text(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_pd(path: &Path) -> Result<PdMatrix, Failure> {
    PdMatrix::from_matrix(read_matrix(path)?).map_err(Failure::from)
}

fn matrix_json(m: &CMatrix) -> Value {
    json!(MatrixJson::from_matrix(m))
}

fn compute(
    mean: MeanKind,
    a_path: &Path,
    b_path: &Path,
    a: f64,
    b: f64,
    c: Option<f64>,
    t: f64,
) -> Result<Outcome, Failure> {
    let c = c.unwrap_or(2.0 * a * b);
    let weights = MeanWeights::new(a, b, c, t)?;
    let (pa, pb) = (read_pd(a_path)?, read_pd(b_path)?);
    let mut residuals = serde_json::Map::new();
    let (result, extra): (CMatrix, Option<(&str, CMatrix)>) = match mean {
        MeanKind::Geo => (means::geometric_mean(&pa, &pb)?.matrix().clone(), None),
        MeanKind::GeoT => (means::geometric_mean_weighted(&pa, &pb, t)?.matrix().clone(), None),
        MeanKind::Spectral => (means::spectral_mean(&pa, &pb)?.matrix().clone(), None),
        MeanKind::SpectralT => (means::spectral_mean_weighted(&pa, &pb, t)?.matrix().clone(), None),
        MeanKind::Wasserstein => {
            let v = means::wasserstein_checked(&pa, &pb, a, b)?;
            residuals.insert("formula_gap".into(), json!(v.formula_gap));
            residuals.insert("riccati".into(), json!(v.riccati_residual));
            (v.w.into_matrix(), None)
        }
        MeanKind::Geodesic => (means::bw_geodesic(&pa, &pb, t)?.into_matrix(), None),
        MeanKind::HeronSpectral => (means::heron_spectral(&pa, &pb, &weights)?.matrix().clone(), None),
        MeanKind::HeronKubo => (means::heron_kubo(&pa, &pb, a, b, c)?.matrix().clone(), None),
        MeanKind::Riccati => {
            let sol = means::riccati_mean_checked(&pa, &pb)?;
            residuals.insert("riccati".into(), json!(sol.residual));
            (sol.x.matrix().clone(), None)
        }
        MeanKind::ProductSqrt => {
            let (ax, xa) = means::product_sqrt_pair(&pa, &pb)?;
            (ax, Some(("reverse", xa)))
        }
    };
    let name = mean
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let trace = result.trace();
    let mut doc = json!({
        "mean": name,
        "weights": { "a": a, "b": b, "c": c, "t": t },
        "result": matrix_json(&result),
        "trace": { "re": trace.re, "im": trace.im },
        "residuals": residuals,
    });
    if let Some((key, m)) = extra {
        doc[key] = matrix_json(&m);
    }
    Ok(Outcome {
        json: doc,
        ok: true,
        summary: vec![format!("{name}: dim {}, trace {:.12}", result.nrows(), trace.re)],
    })
}

/// A JSON array is a spectrum; anything else must be a matrix file.
fn read_spectrum(path: &Path) -> Result<SpectrumVector, Failure> {
    let text = read_text(path)?;
    let parsed: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if parsed.is_array() {
        let values: Vec<f64> = serde_json::from_value(parsed).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        return SpectrumVector::new(values).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let m = MatrixJson::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let h = HermitianMatrix::new(m).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    majorization::spectrum(&h).map_err(Failure::from)
}

fn check(relation: Relation, x_path: &Path, y_path: &Path, tol: f64) -> Result<Outcome, Failure> {
    if !(tol >= 0.0) {
        return Err(usage(format!("--tol must be nonnegative, got {tol}")));
    }
    let (x, y) = (read_spectrum(x_path)?, read_spectrum(y_path)?);
    if x.len() != y.len() {
        return Err(usage(format!("spectra have lengths {} and {}", x.len(), y.len())));
    }
    let verdict: MajorizationVerdict = match relation {
        Relation::Weak => majorization::weak_majorization(&x, &y, tol),
        Relation::Major => majorization::majorization(&x, &y, tol),
        Relation::Log => majorization::log_majorization(&x, &y, tol),
    }
    .map_err(|e| match e {
        Error::NonPositiveEntry { .. } => usage(e.to_string()),
        other => Failure::from(other),
    })?;
    let summary = verdict
        .per_k_margins
        .iter()
        .enumerate()
        .map(|(k, m)| format!("k={:<3} margin {m:+.6e}", k + 1))
        .chain([format!("holds: {}", verdict.holds)])
        .collect();
    Ok(Outcome {
        ok: verdict.holds,
        json: json!(verdict),
        summary,
    })
}

fn parse_dims(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || usage(format!("--dims: cannot parse `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

fn suite(seed: u64, trials: usize, dims: &str, cond: f64, tol: f64, heavy_trials: usize) -> Result<Outcome, Failure> {
    let defaults = SuiteConfig::default();
    let heavy_tail = defaults
        .heavy_tail
        .clone()
        .filter(|_| heavy_trials > 0)
        .map(|h| HeavyTail {
            trials: heavy_trials,
            ..h
        });
    let cfg = SuiteConfig {
        seed,
        trials,
        dims: parse_dims(dims)?,
        cond_max: cond,
        tol,
        heavy_tail,
        ..defaults
    };
    let report: RunReport = run_suite(&cfg)?;
    let summary = report
        .checks
        .iter()
        .map(|c| {
            let margin = c.min_margin.map_or("-".to_string(), |m| format!("{m:+.3e}"));
            format!(
                "{:<42} {:>7} {:>11} {:>6}",
                c.name,
                c.instances,
                margin,
                c.failures.len()
            )
        })
        .chain([format!("ok: {}", report.ok)])
        .collect();
    Ok(Outcome {
        ok: report.ok,
        json: json!(report),
        summary,
    })
}

fn certify(which: Which) -> Result<Outcome, Failure> {
    let mut certificates: Vec<CertificateReport> = Vec::new();
    if which != Which::Dir2 {
        certificates.push(certify_direction_one());
    }
    if which != Which::Dir1 {
        certificates.push(certify_direction_two());
    }
    let mut verdict = true;
    let mut shadows = Vec::new();
    let mut summary = Vec::new();
    for cert in &certificates {
        let mismatches = cert.mismatches();
        verdict &= cert.verdict;
        summary.push(format!(
            "{}: {}",
            cert.name,
            if cert.verdict { "verified" } else { "MISMATCH" }
        ));
        summary.extend(mismatches.iter().map(|l| format!("  mismatch: {l}")));
        match float_shadow(cert) {
            Ok(r) => shadows.push(json!(r)),
            Err(e) => {
                verdict = false;
                summary.push(format!("  float shadow: {e}"));
                shadows.push(json!({ "name": cert.name, "error": e.to_string() }));
            }
        }
    }
    Ok(Outcome {
        json: json!({ "certificates": certificates, "float_shadow": shadows, "verdict": verdict }),
        ok: verdict,
        summary,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Compute {
            mean,
            a_path,
            b_path,
            a,
            b,
            c,
            t,
        } => compute(*mean, a_path, b_path, *a, *b, *c, *t),
        Command::Check {
            relation,
            x_path,
            y_path,
            tol,
        } => check(*relation, x_path, y_path, *tol),
        Command::Suite {
            seed,
            trials,
            dims,
            cond,
            tol,
            heavy_trials,
        } => suite(*seed, *trials, dims, *cond, *tol, *heavy_trials),
        Command::Certify { which } => certify(*which),
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(&outcome.json).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    match &cli.out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => println!("{text}"),
    }
    if cli.pretty {
        for line in &outcome.summary {
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        emit(&cli, &outcome)?;
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("matmean: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
