use super::certificate::{DirectionOne, DirectionTwo, DIRECTION_ONE, DIRECTION_TWO};
use super::CertificateReport;
use crate::error::{Error, Result};
use crate::linalg::{rel_diff, HermitianMatrix, PdMatrix};
use crate::majorization::{spectrum, weak_majorization};
use crate::means::{geometric_mean, heron_kubo, spectral_mean};
use crate::report::{CheckReport, Tally};

/// Separation required between the top eigenvalues and 41.
const SEPARATION: f64 = 1e-3;
const SHADOW_TOL: f64 = 1e-9;

/// Replays a verified certificate in floating point through the `means` and
/// `majorization` stack. Any disagreement with the exact verdict is an error.
pub fn float_shadow(report: &CertificateReport) -> Result<CheckReport> {
    if !report.verdict {
        return Err(Error::CertificateUnverified(report.name.clone()));
    }
    let name = format!("float_shadow/{}", report.name);
    let mut t = Tally::new(&name, SHADOW_TOL);
    match report.name.as_str() {
        DIRECTION_ONE => direction_one(&mut t)?,
        DIRECTION_TWO => direction_two(&mut t)?,
        other => return Err(Error::InvalidConfig(format!("unknown certificate `{other}`"))),
    }
    let rep = t.finish(|| serde_json::Value::Null);
    if !rep.passed() {
        let detail = rep
            .failures
            .iter()
            .map(|f| format!("{} (margin {:?})", f.condition, f.worst_margin))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::IntegrationMismatch {
            name: report.name.clone(),
            detail,
        });
    }
    Ok(rep)
}

fn direction_one(t: &mut Tally) -> Result<()> {
    let inst = DirectionOne::default();
    let d = inst.derive()?;
    let a = PdMatrix::from_matrix(inst.a.to_complex())?;
    let b = PdMatrix::from_matrix(d.b.to_complex())?;

    let spec = spectral_mean(&a, &b)?;
    t.residual(
        "spectral mean = RAR",
        rel_diff(spec.matrix(), &d.spectral.to_complex()),
        1e-9,
    );

    let geo = geometric_mean(&a, &b)?;
    let kubo = HermitianMatrix::combination(&[(1.0, a.hermitian()), (1.0, b.hermitian()), (2.0, geo.hermitian())])?;
    let natural = HermitianMatrix::combination(&[(1.0, a.hermitian()), (1.0, b.hermitian()), (2.0, spec.hermitian())])?;
    let lk = spectrum(&kubo)?;
    let ln = spectrum(&natural)?;
    t.exceeds("lambda_1(Kubo Heron) > 41", lk.values()[0], 41.0, SEPARATION);
    t.exceeds("41 > lambda_1(spectral Heron)", 41.0, ln.values()[0], SEPARATION);

    // G ≤ A#B in floating point as well.
    let gap = HermitianMatrix::new(geo.matrix() - inst.g.to_complex())?;
    let gmin = *gap.eigenvalues()?.last().unwrap_or(&0.0);
    t.at_least("A#B - G >= 0", gmin, 0.0, 1.0 + geo.max_eigenvalue());

    let v = weak_majorization(&lk, &ln, SHADOW_TOL)?;
    let k1 = v.per_k_margins[0];
    t.record("weak majorization fails at k=1", -k1, !v.holds && k1 < -SEPARATION);
    Ok(())
}

fn direction_two(t: &mut Tally) -> Result<()> {
    let inst = DirectionTwo::default();
    let a = PdMatrix::diag(&[1.0, 4.0])?;
    let x = inst.x.to_complex();
    let b = PdMatrix::from_matrix(&x * a.matrix() * &x)?;

    let geo_tr = geometric_mean(&a, &b)?.trace();
    let expected = 40.0 / 73f64.sqrt();
    t.residual("Tr(A#B) = 40/sqrt(73)", (geo_tr - expected).abs() / expected, 1e-9);
    let spec_tr = spectral_mean(&a, &b)?.trace();
    t.residual("Tr(A natural B) = 5", (spec_tr - 5.0).abs() / 5.0, 1e-9);
    t.exceeds("Tr(A natural B) > Tr(A#B)", spec_tr, geo_tr, SEPARATION);

    let kubo = heron_kubo(&a, &b, 1.0, 1.0, 2.0)?.trace();
    let natural = a.trace() + b.trace() + 2.0 * spec_tr;
    t.exceeds("Heron trace gap > 0.6", natural - kubo, 0.6, 0.0);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{certify_direction_one, certify_direction_two};

    #[test]
    fn both_directions_replay_cleanly() {
        let one = float_shadow(&certify_direction_one()).unwrap();
        assert!(one.passed());
        let two = float_shadow(&certify_direction_two()).unwrap();
        assert!(two.passed());
        assert!(two.min_margin.unwrap() > 0.0);
    }

    #[test]
    fn unverified_certificate_is_refused() {
        let mut rep = certify_direction_one();
        rep.verdict = false;
        assert!(matches!(float_shadow(&rep), Err(Error::CertificateUnverified(_))));
    }

    #[test]
    fn scalar_sharpness_witness() {
        // a = b = 1, c = 2.1 > 2ab: the 1×1 Heron value already beats (a+b)².
        let (a, b, c) = (1.0, 1.0, 2.1);
        assert!(a * a + b * b + c > (a + b) * (a + b));
    }
}
