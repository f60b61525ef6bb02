//! Spectra, Ky Fan sums and the weak / full / log majorization predicates.
//!
//! Every predicate returns a [`MajorizationVerdict`] carrying the per-k
//! margins, so callers can see how much slack an inequality has and not just
//! whether it held.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{positive_part, HermitianMatrix};

/// Real values sorted in decreasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectrumVector(Vec<f64>);

impl SpectrumVector {
    /// Sorts decreasingly. NaN entries are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Parse("spectrum contains NaN".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `Σ_{j≤k} y_j − Σ_{j≤k} x_j` for each k, plus the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    pub per_k_margins: Vec<f64>,
    pub trace_gap: f64,
    pub tolerance_used: f64,
}

impl MajorizationVerdict {
    pub fn min_margin(&self) -> f64 {
        self.per_k_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Decreasing eigenvalues of a Hermitian matrix.
pub fn spectrum(h: &HermitianMatrix) -> Result<SpectrumVector> {
    SpectrumVector::new(h.eigenvalues()?)
}

/// Entry `k − 1` is the sum of the `k` largest values.
pub fn ky_fan_sums(x: &SpectrumVector) -> Vec<f64> {
    x.values()
        .iter()
        .scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        })
        .collect()
}

fn check_lengths(x: &SpectrumVector, y: &SpectrumVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(())
}

/// `x ≺_w y` with additive slack `tol·(1 + max|y|)` on every prefix sum.
pub fn weak_majorization(x: &SpectrumVector, y: &SpectrumVector, tol: f64) -> Result<MajorizationVerdict> {
    check_lengths(x, y)?;
    let slack = tol * (1.0 + y.max_abs());
    let margins: Vec<f64> = ky_fan_sums(y)
        .iter()
        .zip(ky_fan_sums(x))
        .map(|(sy, sx)| sy - sx)
        .collect();
    let holds = margins.iter().all(|m| *m >= -slack);
    Ok(MajorizationVerdict {
        holds,
        trace_gap: y.sum() - x.sum(),
        per_k_margins: margins,
        tolerance_used: slack,
    })
}

/// `x ≺ y`: weak majorization plus `|Σy − Σx| ≤ tol·(1 + |Σy|)`.
pub fn majorization(x: &SpectrumVector, y: &SpectrumVector, tol: f64) -> Result<MajorizationVerdict> {
    let mut v = weak_majorization(x, y, tol)?;
    v.holds = v.holds && v.trace_gap.abs() <= tol * (1.0 + y.sum().abs());
    Ok(v)
}

/// `x ≺_log y` for strictly positive vectors, evaluated on logarithms.
///
/// Margins are `Σ_{j≤k} ln y_j − Σ_{j≤k} ln x_j`; the first `n − 1` must be
/// `≥ −tol` and the last (the log of the product ratio, also reported as
/// `trace_gap`) must be within `tol` of zero.
pub fn log_majorization(x: &SpectrumVector, y: &SpectrumVector, tol: f64) -> Result<MajorizationVerdict> {
    check_lengths(x, y)?;
    for v in [x, y] {
        if let Some((index, &value)) = v.values().iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
            return Err(Error::NonPositiveEntry { index, value });
        }
    }
    let logs = |v: &SpectrumVector| SpectrumVector(v.values().iter().map(|z| z.ln()).collect());
    let margins: Vec<f64> = ky_fan_sums(&logs(y))
        .iter()
        .zip(ky_fan_sums(&logs(x)))
        .map(|(a, b)| a - b)
        .collect();
    let n = margins.len();
    let gap = margins.last().copied().unwrap_or(0.0);
    let holds = margins[..n.saturating_sub(1)].iter().all(|m| *m >= -tol) && gap.abs() <= tol;
    Ok(MajorizationVerdict {
        holds,
        per_k_margins: margins,
        trace_gap: gap,
        tolerance_used: tol,
    })
}

/// `min_{t ≥ 0} { k t + Tr (Y − tI)_+ }`, evaluated at the candidate
/// thresholds `{μ_1, …, μ_n, 0}` where the minimum is attained. The positive
/// part is formed as a matrix, independently of any Ky Fan sum.
pub fn ky_fan_threshold(y: &HermitianMatrix, k: usize) -> Result<f64> {
    let n = y.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidConfig(format!("k = {k} must lie in 1..={n}")));
    }
    let mu = y.eigenvalues()?;
    let lam_min = mu.last().copied().unwrap_or(0.0);
    let psd_tol = 1e-10 * mu[0].abs().max(1.0);
    if lam_min < -psd_tol {
        return Err(Error::NotPositiveSemidefinite { min: lam_min });
    }
    let mut best = f64::INFINITY;
    for t in mu.iter().map(|m| m.max(0.0)).chain(std::iter::once(0.0)) {
        let shifted = y - &HermitianMatrix::identity(n).scaled(t);
        let value = k as f64 * t + positive_part(&shifted)?.trace();
        best = best.min(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_hermitian, seeded_rng};
    use proptest::prelude::*;

    fn sv(v: &[f64]) -> SpectrumVector {
        SpectrumVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn spectrum_sorts() {
        let s = spectrum(&HermitianMatrix::diag(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(s.values(), &[3.0, 2.0, 1.0]);
        assert_eq!(spectrum(&HermitianMatrix::identity(4)).unwrap().values(), &[1.0; 4]);
    }

    #[test]
    fn ky_fan_examples() {
        assert_eq!(ky_fan_sums(&sv(&[3.0, 2.0, 1.0])), vec![3.0, 5.0, 6.0]);
        assert_eq!(ky_fan_sums(&sv(&[0.0, 0.0])), vec![0.0, 0.0]);
    }

    #[test]
    fn weak_examples() {
        let v = weak_majorization(&sv(&[1.0, 1.0]), &sv(&[1.0, 1.0]), 0.0).unwrap();
        assert!(v.holds);
        assert_eq!(v.per_k_margins, vec![0.0, 0.0]);

        let v = weak_majorization(&sv(&[1.0, 1.0]), &sv(&[2.0, 0.0]), 1e-12).unwrap();
        assert!(v.holds);
        assert_eq!(v.per_k_margins, vec![1.0, 0.0]);

        let v = weak_majorization(&sv(&[2.0, 0.0]), &sv(&[1.0, 1.0]), 1e-12).unwrap();
        assert!(!v.holds);
        assert_eq!(v.per_k_margins[0], -1.0);

        assert!(matches!(
            weak_majorization(&sv(&[1.0]), &sv(&[1.0, 2.0]), 0.0),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn full_majorization_needs_trace_equality() {
        assert!(majorization(&sv(&[1.0, 1.0]), &sv(&[2.0, 0.0]), 1e-12).unwrap().holds);
        let v = majorization(&sv(&[1.0, 0.5]), &sv(&[2.0, 0.0]), 1e-12).unwrap();
        assert!(!v.holds);
        assert_eq!(v.trace_gap, 0.5);
    }

    #[test]
    fn log_examples() {
        assert!(
            log_majorization(&sv(&[2.0, 3.0]), &sv(&[2.0, 3.0]), 1e-12)
                .unwrap()
                .holds
        );
        assert!(
            log_majorization(&sv(&[4.0, 1.0]), &sv(&[8.0, 0.5]), 1e-12)
                .unwrap()
                .holds
        );
        assert!(
            !log_majorization(&sv(&[8.0, 0.5]), &sv(&[4.0, 1.0]), 1e-12)
                .unwrap()
                .holds
        );
        assert!(
            !log_majorization(&sv(&[4.0, 1.0]), &sv(&[8.0, 1.0]), 1e-12)
                .unwrap()
                .holds
        );
        assert!(matches!(
            log_majorization(&sv(&[1.0, 0.0]), &sv(&[1.0, 1.0]), 1e-12),
            Err(Error::NonPositiveEntry { index: 1, .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        assert!((ky_fan_threshold(&HermitianMatrix::identity(3), 2).unwrap() - 2.0).abs() < 1e-14);
        let y = HermitianMatrix::diag(&[3.0, 2.0, 1.0]);
        assert!((ky_fan_threshold(&y, 2).unwrap() - 5.0).abs() < 1e-14);
        assert!(ky_fan_threshold(&y, 0).is_err());
        assert!(ky_fan_threshold(&HermitianMatrix::diag(&[1.0, -1.0]), 1).is_err());
    }

    #[test]
    fn threshold_matches_direct_sums_on_random_psd() {
        let mut rng = seeded_rng(77, 0);
        for n in 1..=7 {
            let g = random_hermitian(&mut rng, n);
            let y = HermitianMatrix::hermitian_part(g.matrix() * g.matrix());
            let sums = ky_fan_sums(&spectrum(&y).unwrap());
            for k in 1..=n {
                let t = ky_fan_threshold(&y, k).unwrap();
                assert!((t - sums[k - 1]).abs() <= 1e-9 * (1.0 + y.trace()));
            }
        }
    }

    fn sorted_nonneg(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..10.0, n)
    }

    proptest! {
        #[test]
        fn ky_fan_matches_naive(v in prop::collection::vec(-5.0f64..5.0, 1..10)) {
            let s = SpectrumVector::new(v.clone()).unwrap();
            let mut sorted = v.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let sums = ky_fan_sums(&s);
            for k in 0..sorted.len() {
                let naive: f64 = sorted[..=k].iter().sum();
                prop_assert!((sums[k] - naive).abs() < 1e-12);
            }
        }

        #[test]
        fn verdicts_are_monotone_in_tol(
            x in prop::collection::vec(0.0f64..3.0, 4),
            y in prop::collection::vec(0.0f64..3.0, 4),
            t1 in 0.0f64..0.5, t2 in 0.0f64..0.5,
        ) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let (x, y) = (SpectrumVector::new(x).unwrap(), SpectrumVector::new(y).unwrap());
            if weak_majorization(&x, &y, lo).unwrap().holds {
                prop_assert!(weak_majorization(&x, &y, hi).unwrap().holds);
            }
            if majorization(&x, &y, lo).unwrap().holds {
                prop_assert!(majorization(&x, &y, hi).unwrap().holds);
                prop_assert!(weak_majorization(&x, &y, lo).unwrap().holds);
            }
        }

        #[test]
        fn log_majorization_implies_weak(
            x in prop::collection::vec(0.05f64..4.0, 1..6),
            pert in prop::collection::vec(0.5f64..2.0, 6),
        ) {
            // y is built so that x ≺_log y: scale up the largest, compensate on the smallest.
            let xs = SpectrumVector::new(x.clone()).unwrap();
            let mut y = xs.values().to_vec();
            let n = y.len();
            if n >= 2 {
                let f = pert[0].max(1.0);
                y[0] *= f;
                y[n - 1] /= f;
            }
            let ys = SpectrumVector::new(y).unwrap();
            let lv = log_majorization(&xs, &ys, 1e-12).unwrap();
            if lv.holds {
                prop_assert!(weak_majorization(&xs, &ys, 1e-12).unwrap().holds);
            }
        }

        #[test]
        fn abel_summation_consequence(
            x in sorted_nonneg(6),
            shrink in prop::collection::vec(0.0f64..1.0, 6),
        ) {
            // y ≺_w x by construction: y_j = s_j x_j entrywise with s_j ∈ [0,1].
            let xs = SpectrumVector::new(x).unwrap();
            let y: Vec<f64> = xs.values().iter().zip(&shrink).map(|(a, s)| a * s).collect();
            let ys = SpectrumVector::new(y).unwrap();
            prop_assert!(weak_majorization(&ys, &xs, 1e-12).unwrap().holds);
            for k in 1..=6 {
                let lhs: f64 = (0..k).map(|j| xs.values()[j] * ys.values()[j]).sum();
                let rhs: f64 = (0..k).map(|j| xs.values()[j].powi(2)).sum();
                prop_assert!(lhs <= rhs + 1e-12 * (1.0 + rhs));
            }
        }
    }
}
