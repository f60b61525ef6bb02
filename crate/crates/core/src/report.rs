//! Per-check reports shared by the theorem suite and the floating-point
//! replay of the exact certificates.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Error;
use crate::majorization::{weak_majorization, MajorizationVerdict, SpectrumVector};

/// One failed condition, with enough data to replay the instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed_offset: u64,
    pub condition: String,
    /// Normalized margin of the failing condition; `None` when the check
    /// could not be evaluated (numerical error).
    pub worst_margin: Option<f64>,
    pub instance: Value,
}

/// Outcome of one checker over one or more instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub instances: usize,
    /// Smallest normalized margin over every recorded inequality; a condition
    /// holds when its margin is at least `−tol`. `None` when the check only
    /// verifies identities.
    pub min_margin: Option<f64>,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn empty(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            instances: 0,
            min_margin: None,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds `other` into `self`; failures take `seed_offset`.
    pub fn absorb(&mut self, other: CheckReport, seed_offset: u64) {
        self.instances += other.instances;
        self.min_margin = match (self.min_margin, other.min_margin) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        self.failures.extend(other.failures.into_iter().map(|mut f| {
            f.seed_offset = seed_offset;
            f
        }));
        self.failures.sort_by_key(|f| f.seed_offset);
    }
}

/// Accumulates the conditions of a single check instance.
#[derive(Debug)]
pub struct Tally {
    name: String,
    tol: f64,
    min_margin: f64,
    failed: Vec<(String, Option<f64>)>,
}

impl Tally {
    pub fn new(name: impl Into<String>, tol: f64) -> Self {
        Self {
            name: name.into(),
            tol,
            min_margin: f64::INFINITY,
            failed: Vec::new(),
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Records an arbitrary condition.
    pub fn record(&mut self, label: impl Into<String>, margin: f64, ok: bool) {
        if margin.is_nan() {
            self.failed.push((label.into(), None));
            return;
        }
        self.min_margin = self.min_margin.min(margin);
        if !ok {
            self.failed.push((label.into(), Some(margin)));
        }
    }

    /// `value ≤ bound`, margin `(bound − value)/scale`.
    pub fn at_most(&mut self, label: impl Into<String>, value: f64, bound: f64, scale: f64) {
        let m = (bound - value) / scale;
        self.record(label, m, m >= -self.tol);
    }

    /// `value ≥ bound`, margin `(value − bound)/scale`.
    pub fn at_least(&mut self, label: impl Into<String>, value: f64, bound: f64, scale: f64) {
        let m = (value - bound) / scale;
        self.record(label, m, m >= -self.tol);
    }

    /// Relative residual `≤ limit`. Residuals are identity checks, not
    /// inequality margins, so they do not move `min_margin`.
    pub fn residual(&mut self, label: impl Into<String>, residual: f64, limit: f64) {
        if !(residual <= limit) {
            self.failed.push((label.into(), Some(-residual)));
        }
    }

    /// Strict inequality with a required gap: `value − bound > min_gap`.
    pub fn exceeds(&mut self, label: impl Into<String>, value: f64, bound: f64, min_gap: f64) {
        let m = value - bound;
        self.record(label, m, m > min_gap);
    }

    pub fn error(&mut self, label: impl Into<String>, err: &Error) {
        self.failed.push((format!("{}: {err}", label.into()), None));
    }

    /// `x ≺_w y`; margins normalized by `1 + max|y|`.
    pub fn weak(&mut self, label: &str, x: &SpectrumVector, y: &SpectrumVector) -> Option<MajorizationVerdict> {
        match weak_majorization(x, y, self.tol) {
            Ok(v) => {
                let scale = 1.0 + y.max_abs();
                self.record(label, v.min_margin() / scale, v.holds);
                Some(v)
            }
            Err(e) => {
                self.error(label, &e);
                None
            }
        }
    }

    /// `x ≺ y`; the trace condition is recorded separately.
    pub fn full(&mut self, label: &str, x: &SpectrumVector, y: &SpectrumVector) -> Option<MajorizationVerdict> {
        let v = self.weak(label, x, y)?;
        let scale = 1.0 + y.sum().abs();
        let gap = -v.trace_gap.abs() / scale;
        self.record(format!("{label} (trace)"), gap, gap >= -self.tol);
        Some(v)
    }

    pub fn unwrap_or_record<T>(&mut self, label: &str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.error(label, &e);
                None
            }
        }
    }

    pub fn has_failures(&self) -> bool {
        !self.failed.is_empty()
    }

    /// Closes the instance; `instance` is serialized only when something failed.
    pub fn finish(self, instance: impl FnOnce() -> Value) -> CheckReport {
        let failures = if self.failed.is_empty() {
            Vec::new()
        } else {
            let inst = instance();
            self.failed
                .into_iter()
                .map(|(condition, worst_margin)| Failure {
                    seed_offset: 0,
                    condition,
                    worst_margin,
                    instance: inst.clone(),
                })
                .collect()
        };
        CheckReport {
            name: self.name,
            instances: 1,
            min_margin: self.min_margin.is_finite().then_some(self.min_margin),
            failures,
        }
    }
}
