use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{CMatrix, HermitianMatrix, PdMatrix, C64};
use crate::error::{Error, Result};

pub type SuiteRng = ChaCha8Rng;

/// Deterministic generator for `(seed, stream)`; distinct streams are
/// independent, which lets every suite trial be replayed on its own.
pub fn seeded_rng(seed: u64, stream: u64) -> SuiteRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(s * re, s * im)
    })
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `diag(R)` folded back into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = complex_gaussian(rng, n).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::hermitian_part(complex_gaussian(rng, n))
}

fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let u: f64 = rng.random();
    (lo.ln() + u * (hi.ln() - lo.ln())).exp()
}

fn conjugate_diag(u: &CMatrix, values: &[f64]) -> HermitianMatrix {
    let d = HermitianMatrix::diag(values);
    HermitianMatrix::hermitian_part(u * d.matrix() * u.adjoint())
}

fn check_cond(cond_max: f64) -> Result<()> {
    if cond_max.is_finite() && cond_max >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "cond_max must be a finite number >= 1, got {cond_max}"
        )))
    }
}

/// Eigenvalues log-uniform in `[1/cond_max, 1]`, rescaled so the largest is 1.
fn pd_spectrum<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_max: f64) -> Vec<f64> {
    let mut lams: Vec<f64> = (0..dim).map(|_| log_uniform(rng, 1.0 / cond_max, 1.0)).collect();
    let top = lams.iter().copied().fold(0.0, f64::max);
    for l in &mut lams {
        *l /= top;
    }
    lams
}

pub fn random_pd_from<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_max: f64) -> Result<PdMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    check_cond(cond_max)?;
    let lams = pd_spectrum(rng, dim, cond_max);
    let u = random_unitary(rng, dim);
    PdMatrix::new(conjugate_diag(&u, &lams))
}

/// Random positive definite matrix with `λ_max = 1` and condition number at
/// most `cond_max`; identical for identical seeds.
pub fn random_pd(dim: usize, cond_max: f64, seed: u64) -> Result<PdMatrix> {
    random_pd_from(&mut seeded_rng(seed, 0), dim, cond_max)
}

/// Two positive definite matrices sharing one random eigenbasis, so they
/// commute by construction.
pub fn random_commuting_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize, cond_max: f64) -> Result<(PdMatrix, PdMatrix)> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    check_cond(cond_max)?;
    let la = pd_spectrum(rng, dim, cond_max);
    let lb = pd_spectrum(rng, dim, cond_max);
    let u = random_unitary(rng, dim);
    Ok((
        PdMatrix::new(conjugate_diag(&u, &la))?,
        PdMatrix::new(conjugate_diag(&u, &lb))?,
    ))
}

/// Random `R` with spectrum uniform in `[0.05, 0.95]`, so `0 < R < I` with room
/// to spare.
pub fn random_contraction<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<PdMatrix> {
    if dim == 0 {
        return Err(Error::EmptyDimension);
    }
    let lams: Vec<f64> = (0..dim).map(|_| rng.random_range(0.05..0.95)).collect();
    let u = random_unitary(rng, dim);
    PdMatrix::new(conjugate_diag(&u, &lams))
}

/// Positive semidefinite matrix of the given rank, nonzero eigenvalues
/// log-uniform in `[1e-2, 1]`.
pub fn random_psd_with_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> HermitianMatrix {
    let lams: Vec<f64> = (0..dim)
        .map(|i| if i < rank { log_uniform(rng, 1e-2, 1.0) } else { 0.0 })
        .collect();
    let u = random_unitary(rng, dim);
    conjugate_diag(&u, &lams)
}
