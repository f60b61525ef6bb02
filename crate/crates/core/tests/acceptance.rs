//! One PASS/FAIL line per acceptance criterion. Runs as a plain binary so the
//! lines reach the terminal; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use matmean::exact::{certify_direction_one, certify_direction_two, CertificateReport};
use matmean::linalg::{
    congruence, frobenius, random_commuting_pair, random_hermitian, random_pd_from, random_psd_with_rank, seeded_rng,
    HermitianMatrix, PdMatrix,
};
use matmean::majorization::spectrum;
use matmean::means;
use matmean::schur::{complement, loewner_gap};
use matmean::suite::checks;
use matmean::suite::{
    check_ky_fan_threshold, check_schur_multiplier, check_sharpness_scalar, commutator_ratio, direction_one_pair,
    direction_two_pair, run_suite, Pair, RunReport, SuiteConfig,
};

/// Streams for the acceptance-only samples, disjoint from the suite's tags.
const STREAM_EQUALITY: u64 = 100 << 32;
const STREAM_SCHUR: u64 = 101 << 32;
const STREAM_KY_FAN: u64 = 102 << 32;
const STREAM_TRACE: u64 = 103 << 32;
const SEED: u64 = 42;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn ratio(p: &str, q: &str) -> BigRational {
    BigRational::new(big(p), big(q))
}

fn pow10(k: u32) -> String {
    format!("1{}", "0".repeat(k as usize))
}

fn expect_values(cert: &CertificateReport, expected: &[(&str, BigRational)]) -> Vec<String> {
    expected
        .iter()
        .filter(|(label, want)| cert.value(label).as_ref() != Some(want))
        .map(|(label, want)| format!("{label}: got {:?}, want {want}", cert.item(label).map(|i| &i.computed)))
        .collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn exact_direction_one() -> Verdict {
    let (cert, elapsed) = timed(certify_direction_one);
    let two = |e: u32| format!("2{}", "0".repeat(e as usize));
    let expected = [
        ("R minor 1", ratio("21", "10")),
        ("R minor 2", ratio("59", "100")),
        ("R minor 3", ratio("3", "2000")),
        ("K minor 1", ratio("1538228131", &two(9))),
        ("K minor 2", ratio("36854830002529581", &format!("8{}", "0".repeat(18)))),
        ("K minor 3", ratio("249208941796751", &two(26))),
        ("det(41I - M_G)", ratio("-2296964316553", &pow10(12))),
        ("41I - M_spectral minor 1", ratio("14747", "5000")),
        ("41I - M_spectral minor 2", ratio("139973371", &pow10(7))),
        ("41I - M_spectral minor 3", ratio("3328064679", &two(10))),
    ];
    let mut bad = expect_values(&cert, &expected);
    bad.extend(cert.mismatches().iter().map(|l| format!("{l}: certificate mismatch")));
    let fast = elapsed < Duration::from_secs(1);
    let ok = bad.is_empty() && cert.verdict && fast;
    verdict(
        ok,
        format!("{} items, {:?}{}", cert.items.len(), elapsed, fmt_bad(&bad)),
    )
}

fn exact_direction_two() -> Verdict {
    let (cert, elapsed) = timed(certify_direction_two);
    let int = |n: &str| ratio(n, "1");
    let expected = [
        ("q", int("40")),
        ("q^2", int("1600")),
        ("Tr(AX)^2 * s", int("1825")),
        ("s", int("73")),
        ("sign(Tr(AX)^2 * s - q^2)", int("1")),
        ("Tr(AX)", int("5")),
        ("Tr D", ratio("49", "16")),
        ("det D", ratio("9", "16")),
    ];
    let mut bad = expect_values(&cert, &expected);
    bad.extend(cert.mismatches().iter().map(|l| format!("{l}: certificate mismatch")));
    let fast = elapsed < Duration::from_millis(100);
    verdict(
        bad.is_empty() && cert.verdict && fast,
        format!("{:?}{}", elapsed, fmt_bad(&bad)),
    )
}

fn top_eigenvalue(h: &HermitianMatrix) -> f64 {
    spectrum(h).unwrap().values()[0]
}

fn floating_shadow() -> Verdict {
    let one = direction_one_pair().unwrap();
    let kubo = top_eigenvalue(&one.heron_kubo(1.0, 1.0, 2.0).unwrap());
    let natural = top_eigenvalue(&one.heron_spectral(1.0, 1.0, 2.0).unwrap());
    let (upper, lower) = (kubo - 41.0, 41.0 - natural);
    let two = direction_two_pair().unwrap();
    let trace = two.geo.trace();
    let target = 40.0 / 73f64.sqrt();
    let rel = (trace - target).abs() / target;
    let ok = upper > 1e-3 && lower > 1e-3 && rel <= 1e-9;
    verdict(
        ok,
        format!("lambda1(H#) - 41 = {upper:.4e}, 41 - lambda1(H_spectral) = {lower:.4e}, Tr(A#B) rel err {rel:.2e}"),
    )
}

const SUITE_CHECKS: [&str; 10] = [
    checks::SPECTRAL_HERON,
    checks::WEIGHTED_COROLLARY,
    checks::SPREADING,
    checks::PINCHING,
    checks::KUBO_HERON,
    checks::ENDPOINTS,
    checks::LOG_MAJORIZATION_MEANS,
    checks::QUADRATIC_LIFTING,
    checks::BLY,
    checks::SEMIDEFINITE_LIMIT,
];

fn theorem_suite(report: &RunReport, elapsed: Duration) -> Verdict {
    let mut failing = Vec::new();
    for name in SUITE_CHECKS {
        match report.check(name) {
            Some(c) if c.instances > 0 && c.failures.is_empty() => {}
            Some(c) => {
                let worst = c
                    .failures
                    .iter()
                    .filter_map(|f| f.worst_margin)
                    .fold(f64::INFINITY, f64::min);
                let mut conditions: Vec<&str> = c.failures.iter().map(|f| f.condition.as_str()).collect();
                conditions.sort_unstable();
                conditions.dedup();
                failing.push(format!(
                    "{name}: {}/{} failed [{}], worst {worst:.3e}",
                    c.failures.len(),
                    c.instances,
                    conditions.join(", ")
                ))
            }
            None => failing.push(format!("{name}: not run")),
        }
    }
    let fast = elapsed < Duration::from_secs(120);
    let instances: usize = report.checks.iter().map(|c| c.instances).sum();
    verdict(
        failing.is_empty() && fast,
        format!("{instances} check instances, {elapsed:?}{}", fmt_bad(&failing)),
    )
}

fn endpoint_majorization(report: &RunReport) -> Verdict {
    let Some(c) = report.check(checks::SPECTRAL_HERON) else {
        return verdict(false, "spectral_heron not run");
    };
    let trace_failures = c.failures.iter().filter(|f| f.condition.contains("(trace)")).count();
    verdict(
        trace_failures == 0 && c.instances > 0,
        format!("{} instances, {trace_failures} trace-equality failures", c.instances),
    )
}

fn heron_gaps(pair: &Pair) -> (f64, f64) {
    let w = pair.wasserstein(1.0, 1.0).unwrap().w;
    let wn = w.frobenius_norm();
    let gap = |h: HermitianMatrix| frobenius(&(h.matrix() - w.matrix())) / wn;
    (
        gap(pair.heron_spectral(1.0, 1.0, 2.0).unwrap()),
        gap(pair.heron_kubo(1.0, 1.0, 2.0).unwrap()),
    )
}

fn equality_iff_commuting() -> Verdict {
    let mut worst_equal: f64 = 0.0;
    for i in 0..200u64 {
        let mut rng = seeded_rng(SEED, STREAM_EQUALITY | i);
        let dim = 1 + (i as usize % 8);
        let (p, q) = random_commuting_pair(&mut rng, dim, 1e4).unwrap();
        let (dn, dg) = heron_gaps(&Pair::new(p, q).unwrap());
        worst_equal = worst_equal.max(dn).max(dg);
    }
    let mut smallest_gap = f64::INFINITY;
    let (mut found, mut drawn) = (0, 0u64);
    while found < 200 {
        let mut rng = seeded_rng(SEED, STREAM_EQUALITY | (1 << 31) | drawn);
        drawn += 1;
        let dim = 2 + (drawn as usize % 7);
        let a = random_pd_from(&mut rng, dim, 1e4).unwrap();
        let b = random_pd_from(&mut rng, dim, 1e4).unwrap();
        let pair = Pair::new(a, b).unwrap();
        if commutator_ratio(&pair) < 1e-3 {
            continue;
        }
        found += 1;
        let (dn, dg) = heron_gaps(&pair);
        smallest_gap = smallest_gap.min(dn).min(dg);
    }
    verdict(
        worst_equal <= 1e-8 && smallest_gap >= 1e-6,
        format!("commuting max gap {worst_equal:.2e}, noncommuting min gap {smallest_gap:.2e}"),
    )
}

fn scalar_sharpness() -> Verdict {
    let mut bad = Vec::new();
    for c in [2.001, 2.01, 2.1, 3.0] {
        let r = check_sharpness_scalar(1.0, 1.0, c);
        if !r.passed() {
            bad.push(format!(
                "c={c}: {:?}",
                r.failures.iter().map(|f| &f.condition).collect::<Vec<_>>()
            ));
        }
    }
    verdict(bad.is_empty(), format!("4 coefficients{}", fmt_bad(&bad)))
}

fn schur_machinery() -> Verdict {
    let mut bad = Vec::new();
    for i in 0..500u64 {
        let mut rng = seeded_rng(SEED, STREAM_SCHUR | i);
        let dim = 1 + (i as usize % 8);
        let r: Vec<f64> = (0..dim).map(|_| 10f64.powf(rng.random_range(-2.0..2.0))).collect();
        let a = rng.random_range(0.1..3.0);
        let b = rng.random_range(0.1..3.0);
        let c = rng.random_range(0.0..=2.0 * a * b);
        let cm = random_hermitian(&mut rng, dim);
        let rep = check_schur_multiplier(&r, a, b, c, &cm);
        if !rep.passed() {
            bad.push(format!("instance {i}: {}", rep.failures[0].condition));
        }
    }
    verdict(bad.is_empty(), format!("500 instances{}", fmt_bad(&bad)))
}

fn oracle_cross_checks(report: &RunReport) -> Verdict {
    let mut bad = Vec::new();
    for i in 0..500u64 {
        let mut rng = seeded_rng(SEED, STREAM_KY_FAN | i);
        let dim = 1 + (i as usize % 8);
        let rank = rng.random_range(0..=dim);
        let y = random_psd_with_rank(&mut rng, dim, rank);
        let rep = check_ky_fan_threshold(&y);
        if !rep.passed() {
            bad.push(format!("Ky Fan {i}: {}", rep.failures[0].condition));
        }
    }
    match report.check(checks::WASSERSTEIN_FORMULAS) {
        Some(c) if c.failures.is_empty() && c.instances > 0 => {}
        Some(c) => bad.push(format!("wasserstein: {} failures", c.failures.len())),
        None => bad.push("wasserstein: not run".into()),
    }
    let mut worst_trace: f64 = 0.0;
    for i in 0..500u64 {
        let mut rng = seeded_rng(SEED, STREAM_TRACE | i);
        let dim = 1 + (i as usize % 8);
        let c = random_pd_from(&mut rng, dim, 1e4).unwrap();
        let r = matmean::linalg::random_contraction(&mut rng, dim).unwrap();
        let s = complement(&r).unwrap();
        let rcr = PdMatrix::new(congruence(r.matrix(), c.hermitian()).unwrap()).unwrap();
        let scs = PdMatrix::new(congruence(s.matrix(), c.hermitian()).unwrap()).unwrap();
        let nat = means::spectral_mean(&rcr, &scs).unwrap();
        let rsc = (r.matrix() * s.matrix() * c.matrix()).trace().re;
        worst_trace = worst_trace.max((nat.trace() - rsc).abs() / rsc.abs());
    }
    if worst_trace > 1e-9 {
        bad.push(format!("pinching trace identity: worst rel err {worst_trace:.2e}"));
    }
    verdict(
        bad.is_empty(),
        format!("trace identity worst {worst_trace:.2e}{}", fmt_bad(&bad)),
    )
}

fn non_loewner_witness() -> Verdict {
    let r = PdMatrix::diag(&[1.0, 2.0]).unwrap();
    let c = HermitianMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 1.0]]).unwrap();
    let ev = spectrum(&loewner_gap(&r, &c).unwrap()).unwrap().values().to_vec();
    let (hi, lo) = (ev[0], ev[ev.len() - 1]);
    verdict(hi >= 0.2 && lo <= -0.2, format!("eigenvalues {hi:.6}, {lo:.6}"))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn fmt_bad(bad: &[String]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        let shown: Vec<&str> = bad.iter().take(5).map(String::as_str).collect();
        format!("; {}", shown.join("; "))
    }
}

fn main() -> ExitCode {
    let cfg = SuiteConfig {
        heavy_tail: None,
        ..SuiteConfig::default()
    };
    let (report, suite_time) = timed(|| run_suite(&cfg).expect("suite runs"));

    let criteria: Vec<Criterion> = vec![
        ("exact certificate, direction one", Box::new(exact_direction_one)),
        ("exact certificate, direction two", Box::new(exact_direction_two)),
        ("floating shadow", Box::new(floating_shadow)),
        ("theorem suite", Box::new(|| theorem_suite(&report, suite_time))),
        ("endpoint majorization", Box::new(|| endpoint_majorization(&report))),
        ("equality iff commuting", Box::new(equality_iff_commuting)),
        ("scalar sharpness", Box::new(scalar_sharpness)),
        ("Schur machinery", Box::new(schur_machinery)),
        ("oracle cross-checks", Box::new(|| oracle_cross_checks(&report))),
        ("non-Loewner witness", Box::new(non_loewner_witness)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.ok);
        println!(
            "{} {:>2}. {name}: {}",
            if v.ok { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
