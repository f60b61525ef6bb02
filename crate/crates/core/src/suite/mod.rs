//! Randomized and fixed-instance checkers for every inequality, aggregated
//! into one deterministic run report.
//!
//! Trial `i` of a run draws its matrices from `seeded_rng(seed, stream)` with
//! `stream = (tag << 32) | i`, one tag per instance family, so any failing
//! instance can be regenerated from `(seed, tag, i)` alone.

pub mod checks;
pub mod fixed;
mod pair;

pub use checks::*;
pub use fixed::{check_incomparability_float, check_sharpness_scalar, direction_one_pair, direction_two_pair};
pub use pair::Pair;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{
    random_commuting_pair, random_contraction, random_hermitian, random_pd_from, random_psd_with_rank, seeded_rng,
    HermitianMatrix, SuiteRng,
};
use crate::report::CheckReport;
use crate::schur::pinching_map;

const TAG_PAIR: u64 = 0;
const TAG_COMMUTING: u64 = 1;
const TAG_PINCHING: u64 = 2;
const TAG_SEMIDEFINITE: u64 = 3;
const TAG_ORACLE: u64 = 4;
const TAG_HEAVY: u64 = 5;

pub fn stream(tag: u64, trial: u64) -> u64 {
    (tag << 32) | trial
}

/// Separate pass over badly conditioned pairs with a looser tolerance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeavyTail {
    pub trials: usize,
    pub cond_max: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub cond_max: f64,
    pub tol: f64,
    pub weight_grid: Vec<(f64, f64)>,
    /// Cross-term coefficients as fractions of `2ab` (or `2t(1 − t)`).
    pub c_fractions: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub eps_sequence: Vec<f64>,
    pub heavy_tail: Option<HeavyTail>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 1000,
            dims: (1..=8).collect(),
            cond_max: 1e4,
            tol: 1e-8,
            weight_grid: vec![(1.0, 1.0), (0.5, 0.5), (0.3, 0.7), (2.0, 0.5)],
            c_fractions: vec![0.0, 0.5, 1.0],
            t_grid: (1..=9).map(|k| k as f64 / 10.0).collect(),
            eps_sequence: checks::EPS_SEQUENCE.to_vec(),
            heavy_tail: Some(HeavyTail {
                trials: 100,
                cond_max: 1e8,
                tol: 1e-6,
            }),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: &f64| (0.0..=1.0).contains(v);
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(invalid("dims must be a nonempty list of positive integers"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid("tol must be positive"));
        }
        if !(self.cond_max.is_finite() && self.cond_max >= 1.0) {
            return Err(invalid("cond_max must be at least 1"));
        }
        if self.weight_grid.is_empty()
            || self
                .weight_grid
                .iter()
                .any(|&(a, b)| !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()))
        {
            return Err(invalid("weight_grid must be a nonempty list of positive (a, b) pairs"));
        }
        if self.c_fractions.is_empty() || !self.c_fractions.iter().all(unit) {
            return Err(invalid("c_fractions must be a nonempty subset of [0, 1]"));
        }
        if !self.t_grid.iter().all(unit) {
            return Err(invalid("t_grid must lie in [0, 1]"));
        }
        if self.eps_sequence.len() < 2 || self.eps_sequence.iter().any(|e| !(*e > 0.0)) {
            return Err(invalid("eps_sequence needs at least two positive values"));
        }
        if self.eps_sequence.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("eps_sequence must be strictly decreasing"));
        }
        if let Some(h) = &self.heavy_tail {
            if h.trials == 0 || !(h.tol > 0.0) || !(h.cond_max >= 1.0) {
                return Err(invalid("heavy_tail needs trials >= 1, tol > 0, cond_max >= 1"));
            }
        }
        Ok(())
    }

    fn dim_for(&self, trial: usize) -> usize {
        self.dims[trial % self.dims.len()]
    }
}

/// Serialized as `{"config":…, "checks":[…], "ok":bool}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckReport>,
    pub ok: bool,
}

impl RunReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }
}

/// Folds per-instance reports into one report per check name, in order of
/// first appearance.
#[derive(Default)]
struct Collector {
    reports: Vec<CheckReport>,
    prefix: &'static str,
}

impl Collector {
    fn add(&mut self, mut rep: CheckReport, offset: u64, provenance: &Value) {
        for f in &mut rep.failures {
            if let (Value::Object(m), Value::Object(p)) = (&mut f.instance, provenance) {
                m.extend(p.clone());
            } else {
                f.instance = json!({ "provenance": provenance, "instance": f.instance });
            }
        }
        let name = format!("{}{}", self.prefix, rep.name);
        match self.reports.iter_mut().find(|r| r.name == name) {
            Some(r) => r.absorb(rep, offset),
            None => {
                let mut r = CheckReport::empty(name);
                r.absorb(rep, offset);
                self.reports.push(r);
            }
        }
    }

    fn error(&mut self, name: &str, offset: u64, provenance: &Value, err: &Error) {
        let mut t = crate::report::Tally::new(name, 0.0);
        t.error("instance generation", err);
        self.add(t.finish(|| Value::Null), offset, provenance);
    }
}

fn provenance(seed: u64, tag: u64, trial: usize, dim: usize) -> Value {
    json!({ "source": "random", "seed": seed, "stream": stream(tag, trial as u64), "trial": trial, "dim": dim })
}

fn fixed_provenance(name: &str) -> Value {
    json!({ "source": "fixed", "fixed": name })
}

/// Every pair-based checker over one pair.
fn pair_checks(col: &mut Collector, cfg: &SuiteConfig, pair: &Pair, tol: f64, offset: u64, prov: &Value) {
    for &(a, b) in &cfg.weight_grid {
        for f in &cfg.c_fractions {
            let c = f * 2.0 * a * b;
            col.add(check_spectral_heron(pair, a, b, c, tol), offset, prov);
            col.add(check_kubo_heron(pair, a, b, c, tol), offset, prov);
        }
        col.add(check_wasserstein_formulas(pair, a, b), offset, prov);
        col.add(check_spreading(pair, a, b, tol), offset, prov);
        col.add(check_endpoints(pair, a, b, tol), offset, prov);
        col.add(check_bly(pair, a, b, tol), offset, prov);
        col.add(check_c_monotonicity(pair, a, b, &cfg.c_fractions, tol), offset, prov);
        col.add(check_equality_iff_commuting(pair, a, b, tol), offset, prov);
    }
    for &t in &cfg.t_grid {
        for f in &cfg.c_fractions {
            let c = f * 2.0 * t * (1.0 - t);
            col.add(check_weighted_corollary(pair, t, c, tol), offset, prov);
        }
    }
    col.add(check_log_majorization_means(pair, tol), offset, prov);
}

fn random_pair(rng: &mut SuiteRng, dim: usize, cond: f64) -> Result<Pair> {
    let a = random_pd_from(rng, dim, cond)?;
    let b = random_pd_from(rng, dim, cond)?;
    Pair::new(a, b)
}

fn random_trial(col: &mut Collector, cfg: &SuiteConfig, i: usize) {
    let (seed, tol, dim, off) = (cfg.seed, cfg.tol, cfg.dim_for(i), i as u64);
    let (a, b) = cfg.weight_grid[i % cfg.weight_grid.len()];

    let prov = provenance(seed, TAG_PAIR, i, dim);
    match random_pair(&mut seeded_rng(seed, stream(TAG_PAIR, off)), dim, cfg.cond_max) {
        Ok(pair) => pair_checks(col, cfg, &pair, tol, off, &prov),
        Err(e) => col.error(SPECTRAL_HERON, off, &prov, &e),
    }

    let prov = provenance(seed, TAG_COMMUTING, i, dim);
    let mut rng = seeded_rng(seed, stream(TAG_COMMUTING, off));
    match random_commuting_pair(&mut rng, dim, cfg.cond_max).and_then(|(p, q)| Pair::new(p, q)) {
        Ok(pair) => col.add(check_equality_iff_commuting(&pair, a, b, tol), off, &prov),
        Err(e) => col.error(EQUALITY_IFF_COMMUTING, off, &prov, &e),
    }

    let prov = provenance(seed, TAG_PINCHING, i, dim);
    let mut rng = seeded_rng(seed, stream(TAG_PINCHING, off));
    let inst = (|| -> Result<_> {
        let c = random_pd_from(&mut rng, dim, cfg.cond_max.min(1e4))?;
        let r = random_contraction(&mut rng, dim)?;
        let rank = rng.random_range(0..=dim);
        let bump = random_psd_with_rank(&mut rng, dim, rank).scaled(c.max_eigenvalue());
        Ok((c, r, bump))
    })();
    match inst {
        Ok((c, r, bump)) => {
            col.add(check_pinching(&c, &r, &bump, tol), off, &prov);
            match pinching_map(&c, &r) {
                Ok(d) => col.add(check_quadratic_lifting(&c, d.hermitian(), tol), off, &prov),
                Err(e) => col.error(QUADRATIC_LIFTING, off, &prov, &e),
            }
        }
        Err(e) => col.error(PINCHING, off, &prov, &e),
    }

    let prov = provenance(seed, TAG_SEMIDEFINITE, i, dim);
    let mut rng = seeded_rng(seed, stream(TAG_SEMIDEFINITE, off));
    let ra = rng.random_range(0..=dim);
    let rb = rng.random_range(0..=dim);
    let a0 = random_psd_with_rank(&mut rng, dim, ra);
    let b0 = random_psd_with_rank(&mut rng, dim, rb);
    col.add(
        check_semidefinite_limit(&a0, &b0, a, b, &cfg.eps_sequence, tol),
        off,
        &prov,
    );

    let prov = provenance(seed, TAG_ORACLE, i, dim);
    let mut rng = seeded_rng(seed, stream(TAG_ORACLE, off));
    let rank = rng.random_range(0..=dim);
    let y = random_psd_with_rank(&mut rng, dim, rank);
    col.add(check_ky_fan_threshold(&y), off, &prov);
    let r: Vec<f64> = (0..dim).map(|_| 10f64.powf(rng.random_range(-1.0..1.0))).collect();
    let (ma, mb) = (rng.random_range(0.1..3.0), rng.random_range(0.1..3.0));
    let cf = cfg.c_fractions[i % cfg.c_fractions.len()];
    let cm = random_hermitian(&mut rng, dim);
    col.add(check_schur_multiplier(&r, ma, mb, cf * 2.0 * ma * mb, &cm), off, &prov);
}

fn heavy_trial(col: &mut Collector, cfg: &SuiteConfig, heavy: &HeavyTail, i: usize) {
    let (dim, off) = (cfg.dim_for(i), i as u64);
    let prov = provenance(cfg.seed, TAG_HEAVY, i, dim);
    match random_pair(&mut seeded_rng(cfg.seed, stream(TAG_HEAVY, off)), dim, heavy.cond_max) {
        Ok(pair) => pair_checks(col, cfg, &pair, heavy.tol, off, &prov),
        Err(e) => col.error(SPECTRAL_HERON, off, &prov, &e),
    }
}

fn fixed_instances(col: &mut Collector, cfg: &SuiteConfig) -> Result<()> {
    let tol = cfg.tol;
    for (name, pair) in fixed::fixed_pairs()? {
        pair_checks(col, cfg, &pair, tol, 0, &fixed_provenance(name));
        for &(a, b) in &[(1.0, 0.0), (0.0, 1.0)] {
            col.add(check_endpoints(&pair, a, b, tol), 0, &fixed_provenance(name));
            col.add(check_bly(&pair, a, b, tol), 0, &fixed_provenance(name));
        }
    }
    for (name, a0, b0) in fixed::fixed_semidefinite() {
        col.add(
            check_semidefinite_limit(&a0, &b0, 1.0, 1.0, &cfg.eps_sequence, tol),
            0,
            &fixed_provenance(name),
        );
    }
    let c = crate::linalg::PdMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]])?;
    let half = crate::linalg::PdMatrix::diag(&[0.5, 0.5])?;
    let zero = HermitianMatrix::zeros(2);
    col.add(check_pinching(&c, &half, &zero, tol), 0, &fixed_provenance("R = I/2"));
    let id = crate::linalg::PdMatrix::identity(2);
    let r = crate::linalg::PdMatrix::diag(&[0.3, 0.8])?;
    col.add(check_pinching(&id, &r, &zero, tol), 0, &fixed_provenance("C = I"));
    col.add(
        check_quadratic_lifting(&c, c.hermitian(), tol),
        0,
        &fixed_provenance("D = C"),
    );
    col.add(
        check_quadratic_lifting(&c, &c.hermitian().scaled(0.5), tol),
        0,
        &fixed_provenance("D = C/2"),
    );
    for (a, b, cv) in fixed::SHARPNESS_CASES {
        col.add(
            check_sharpness_scalar(a, b, cv),
            0,
            &fixed_provenance("scalar sharpness"),
        );
    }
    col.add(
        check_incomparability_float(tol),
        0,
        &fixed_provenance("incomparability"),
    );
    Ok(())
}

/// Runs the fixed instances, `trials` random trials and the heavy-tail pass.
pub fn run_suite(cfg: &SuiteConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut col = Collector::default();
    fixed_instances(&mut col, cfg)?;
    for i in 0..cfg.trials {
        random_trial(&mut col, cfg, i);
    }
    if let Some(heavy) = &cfg.heavy_tail {
        col.prefix = "heavy_tail/";
        for i in 0..heavy.trials {
            heavy_trial(&mut col, cfg, heavy, i);
        }
    }
    let ok = col.reports.iter().all(CheckReport::passed);
    Ok(RunReport {
        config: cfg.clone(),
        checks: col.reports,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            trials: 16,
            heavy_tail: Some(HeavyTail {
                trials: 8,
                cond_max: 1e8,
                tol: 1e-6,
            }),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        for bad in [
            SuiteConfig { trials: 0, ..small() },
            SuiteConfig {
                dims: vec![],
                ..small()
            },
            SuiteConfig {
                dims: vec![0],
                ..small()
            },
            SuiteConfig { tol: 0.0, ..small() },
            SuiteConfig {
                c_fractions: vec![1.5],
                ..small()
            },
            SuiteConfig {
                t_grid: vec![-0.1],
                ..small()
            },
            SuiteConfig {
                eps_sequence: vec![1e-2, 1e-1],
                ..small()
            },
        ] {
            assert!(matches!(run_suite(&bad), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let r1 = run_suite(&small()).unwrap();
        let bad: Vec<_> = r1
            .checks
            .iter()
            .flat_map(|c| c.failures.iter().map(move |f| (&c.name, f)))
            .filter(|(name, f)| {
                !(name.as_str() == checks::SEMIDEFINITE_LIMIT && f.condition == checks::EXTRAPOLATION_CONDITION)
            })
            .collect();
        assert!(bad.is_empty(), "{bad:#?}");
        let r2 = run_suite(&small()).unwrap();
        assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
    }

    #[test]
    fn report_schema() {
        let r = run_suite(&SuiteConfig {
            trials: 2,
            heavy_tail: None,
            ..SuiteConfig::default()
        })
        .unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["config"].is_object());
        assert!(v["ok"].is_boolean());
        let first = &v["checks"][0];
        for key in ["name", "instances", "min_margin", "failures"] {
            assert!(!first[key].is_null(), "{key}");
        }
    }

    #[test]
    fn streams_are_disjoint() {
        assert_ne!(stream(TAG_PAIR, 1), stream(TAG_COMMUTING, 0));
        assert_eq!(stream(TAG_PINCHING, 7) & 0xffff_ffff, 7);
    }
}
