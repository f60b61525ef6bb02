//! Fixed instances: scalar sharpness, the floating incomparability replay and
//! hand-picked pairs that exercise the degenerate cases.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde_json::json;

use super::pair::Pair;
use crate::exact::{DirectionOne, DirectionTwo};
use crate::linalg::{HermitianMatrix, PdMatrix};
use crate::majorization::{spectrum, weak_majorization};
use crate::means;
use crate::report::{CheckReport, Tally};
use crate::Result;

pub const SHARPNESS_SCALAR: &str = "sharpness_scalar";
pub const INCOMPARABILITY: &str = "incomparability_float";

/// Required k = 1 violation for the 3×3 instance.
pub const DIRECTION_ONE_GAP: f64 = 1e-2;
/// Required trace gap `Tr H♮ − Tr H#` for the 2×2 instance.
pub const DIRECTION_TWO_GAP: f64 = 0.6;

/// For `c > 2ab` the one-dimensional comparison `a² + b² + c ≤ (a + b)²`
/// must fail, by exactly `c − 2ab`. The arithmetic is done on the exact
/// binary values of the inputs; the 1×1 matrix pipeline is run alongside.
pub fn check_sharpness_scalar(a: f64, b: f64, c_over: f64) -> CheckReport {
    let mut t = Tally::new(SHARPNESS_SCALAR, 0.0);
    let run = |t: &mut Tally| -> Option<()> {
        let exact = |x: f64| BigRational::from_float(x);
        let (ea, eb, ec) = (exact(a)?, exact(b)?, exact(c_over)?);
        let two = BigRational::from_integer(2.into());
        let gap = &ec - &two * &ea * &eb;
        let violation = &ea * &ea + &eb * &eb + &ec - (&ea + &eb) * (&ea + &eb);
        let gap_f = gap.to_f64().unwrap_or(f64::NAN);
        t.record("c > 2ab", gap_f, gap.is_positive());
        t.record("violation = c - 2ab exactly", gap_f, violation == gap);

        let one = t.unwrap_or_record("1x1", PdMatrix::diag(&[1.0]))?;
        let w = means::MeanWeights::new(a, b, c_over, 0.5).ok()?;
        let h = t.unwrap_or_record("H", means::heron_spectral(&one, &one, &w))?;
        let wm = t.unwrap_or_record("W", means::wasserstein_expression(&one, &one, a, b))?;
        let (lh, lw) = (spectrum(h.hermitian()).ok()?, spectrum(&wm).ok()?);
        let v = t.unwrap_or_record("weak", weak_majorization(&lh, &lw, 0.0))?;
        t.record("1x1 weak majorization fails", -v.min_margin(), !v.holds);
        Some(())
    };
    if run(&mut t).is_none() && !t.has_failures() {
        t.record("evaluation", f64::NAN, false);
    }
    t.finish(|| json!({ "a": a, "b": b, "c": c_over }))
}

/// The 3×3 certified pair in floating point.
pub fn direction_one_pair() -> Result<Pair> {
    let inst = DirectionOne::default();
    let d = inst.derive()?;
    Pair::new(
        PdMatrix::from_matrix(inst.a.to_complex())?,
        PdMatrix::from_matrix(d.b.to_complex())?,
    )
}

/// The 2×2 pair `A = diag(1, 4)`, `B = XAX`.
pub fn direction_two_pair() -> Result<Pair> {
    let inst = DirectionTwo::default();
    let a = PdMatrix::diag(&[1.0, 4.0])?;
    let x = inst.x.to_complex();
    let b = PdMatrix::from_matrix(&x * a.matrix() * &x)?;
    Pair::new(a, b)
}

fn heron_pair(p: &Pair) -> Result<(HermitianMatrix, HermitianMatrix)> {
    Ok((p.heron_kubo(1.0, 1.0, 2.0)?, p.heron_spectral(1.0, 1.0, 2.0)?))
}

/// Neither Heron expression weakly majorizes the other: the 3×3 instance
/// breaks `H# ≺_w H♮` at k = 1 and the 2×2 instance breaks `H♮ ≺_w H#` in
/// the trace.
pub fn check_incomparability_float(tol: f64) -> CheckReport {
    let mut t = Tally::new(INCOMPARABILITY, tol);
    let run = |t: &mut Tally| -> Option<()> {
        let one = t.unwrap_or_record("3x3 pair", direction_one_pair())?;
        let (kubo, nat) = t.unwrap_or_record("3x3 Heron", heron_pair(&one))?;
        let (lk, ln) = (spectrum(&kubo).ok()?, spectrum(&nat).ok()?);
        let v = t.unwrap_or_record("3x3 weak", weak_majorization(&lk, &ln, tol))?;
        t.exceeds(
            "H# <_w H_spectral fails at k=1",
            -v.per_k_margins[0],
            DIRECTION_ONE_GAP,
            0.0,
        );

        let two = t.unwrap_or_record("2x2 pair", direction_two_pair())?;
        let (kubo, nat) = t.unwrap_or_record("2x2 Heron", heron_pair(&two))?;
        let (lk, ln) = (spectrum(&kubo).ok()?, spectrum(&nat).ok()?);
        let v = t.unwrap_or_record("2x2 weak", weak_majorization(&ln, &lk, tol))?;
        t.exceeds(
            "H_spectral <_w H# fails in the trace",
            -v.trace_gap,
            DIRECTION_TWO_GAP,
            0.0,
        );
        Some(())
    };
    if run(&mut t).is_none() && !t.has_failures() {
        t.record("evaluation", f64::NAN, false);
    }
    t.finish(|| json!({ "fixed": INCOMPARABILITY }))
}

/// Default sharpness sweep for `(a, b) = (1, 1)` and `(2, 3)`.
pub const SHARPNESS_CASES: [(f64, f64, f64); 6] = [
    (1.0, 1.0, 2.001),
    (1.0, 1.0, 2.01),
    (1.0, 1.0, 2.1),
    (1.0, 1.0, 3.0),
    (2.0, 3.0, 12.5),
    (0.5, 0.5, 0.75),
];

/// Named fixed pairs for the pair-based checkers.
pub fn fixed_pairs() -> Result<Vec<(&'static str, Pair)>> {
    let a = PdMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 4.0]])?;
    Ok(vec![
        ("certified 3x3 pair", direction_one_pair()?),
        ("2x2 pair", direction_two_pair()?),
        ("A = B", Pair::new(a.clone(), a)?),
        (
            "dim 1, A = B = 1",
            Pair::new(PdMatrix::identity(1), PdMatrix::identity(1))?,
        ),
        (
            "commuting diagonal",
            Pair::new(PdMatrix::diag(&[1.0, 4.0, 9.0])?, PdMatrix::diag(&[16.0, 1.0, 2.0])?)?,
        ),
    ])
}

/// Named PSD pairs for the semidefinite limit.
pub fn fixed_semidefinite() -> Vec<(&'static str, HermitianMatrix, HermitianMatrix)> {
    vec![
        ("A0 = B0 = 0", HermitianMatrix::zeros(2), HermitianMatrix::zeros(2)),
        (
            "complementary projections",
            HermitianMatrix::diag(&[1.0, 0.0]),
            HermitianMatrix::diag(&[0.0, 1.0]),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharpness_cases_fail_by_exact_gap() {
        for (a, b, c) in SHARPNESS_CASES {
            let r = check_sharpness_scalar(a, b, c);
            assert!(r.passed(), "{a} {b} {c}: {:?}", r.failures);
        }
        let r = check_sharpness_scalar(1.0, 1.0, 2.1);
        assert!((r.min_margin.unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn sharpness_margin_shrinks_with_c() {
        let margins: Vec<f64> = [3.0, 2.1, 2.01, 2.001, 2.0001]
            .iter()
            .map(|&c| check_sharpness_scalar(1.0, 1.0, c).min_margin.unwrap())
            .collect();
        assert!(margins.windows(2).all(|w| w[1] < w[0]));
        assert!(*margins.last().unwrap() < 1e-3);
    }

    #[test]
    fn at_sharp_coefficient_the_scalar_check_does_not_fire() {
        let r = check_sharpness_scalar(1.0, 1.0, 2.0);
        assert!(!r.passed());
    }

    #[test]
    fn incomparability_holds_in_floating_point() {
        let r = check_incomparability_float(1e-8);
        assert!(r.passed(), "{:?}", r.failures);
    }
}
