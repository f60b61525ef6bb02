//! Dense complex Hermitian linear algebra.
//!
//! Every function of a positive definite matrix (square root, inverse,
//! fractional powers) goes through one eigendecomposition so that a single
//! accuracy model covers the whole crate.

mod jacobi;
mod json;
mod random;

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use jacobi::eig_hermitian;
pub use json::MatrixJson;
pub use random::{
    random_commuting_pair, random_contraction, random_hermitian, random_pd, random_pd_from, random_psd_with_rank,
    random_unitary, seeded_rng, SuiteRng,
};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Inputs whose asymmetry is at most this fraction of the largest entry are
/// symmetrized; anything larger is rejected.
pub const HERMITIAN_REL_TOL: f64 = 1e-13;

/// `lambda_min > PD_REL_THRESHOLD * lambda_max` is the positive definiteness test.
pub const PD_REL_THRESHOLD: f64 = 1e-12;

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖_F / max(‖b‖_F, tiny)`.
pub fn rel_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(f64::MIN_POSITIVE)
}

pub fn trace_re(m: &CMatrix) -> f64 {
    (0..m.nrows()).map(|i| m[(i, i)].re).sum()
}

pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, m, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Dense complex Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    /// Validates a caller-supplied matrix. Tiny asymmetry is averaged away.
    pub fn new(m: CMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyDimension);
        }
        let max_entry = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !max_entry.is_finite() {
            return Err(Error::Parse("matrix has non-finite entries".into()));
        }
        let mut asym: f64 = 0.0;
        for i in 0..rows {
            for j in 0..=i {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        let limit = HERMITIAN_REL_TOL * max_entry;
        if asym > limit {
            return Err(Error::NotHermitian { asymmetry: asym, limit });
        }
        Ok(Self::hermitian_part(m))
    }

    /// `(M + M*)/2` without any check; used for internally computed products
    /// that are Hermitian up to rounding.
    pub fn hermitian_part(m: CMatrix) -> Self {
        let adj = m.adjoint();
        let mut h = (m + adj) * C64::new(0.5, 0.0);
        for i in 0..h.nrows() {
            h[(i, i)].im = 0.0;
        }
        Self { m: h }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(real_matrix(rows))
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            m: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(values[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            m: CMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn trace(&self) -> f64 {
        trace_re(&self.m)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.m)
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eig_hermitian(self)
    }

    /// Decreasing eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.eig()?.eigenvalues)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            m: &self.m * C64::new(alpha, 0.0),
        }
    }

    /// `Σ w_i M_i` for real weights.
    pub fn combination(terms: &[(f64, &HermitianMatrix)]) -> Result<Self> {
        let n = terms.first().map(|(_, m)| m.dim()).ok_or(Error::EmptyDimension)?;
        let mut acc = CMatrix::zeros(n, n);
        for (w, m) in terms {
            if m.dim() != n {
                return Err(Error::DimensionMismatch(n, m.dim()));
            }
            acc += &m.m * C64::new(*w, 0.0);
        }
        Ok(Self { m: acc })
    }

    pub fn commutator_norm(&self, other: &HermitianMatrix) -> f64 {
        frobenius(&(&self.m * &other.m - &other.m * &self.m))
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m + &rhs.m }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix { m: &self.m - &rhs.m }
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scaled(rhs)
    }
}

/// Eigenvalues in decreasing order with the matching unitary eigenvector
/// matrix (eigenvectors are the columns).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U f(Λ) U*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let fj = C64::new(f(lam), 0.0);
            for i in 0..u.nrows() {
                scaled[(i, j)] *= fj;
            }
        }
        HermitianMatrix::hermitian_part(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.apply(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Positive definite matrix with its cached eigendecomposition.
#[derive(Clone, Debug)]
pub struct PdMatrix {
    base: HermitianMatrix,
    eig: SpectralDecomposition,
}

impl PdMatrix {
    pub fn new(base: HermitianMatrix) -> Result<Self> {
        let eig = base.eig()?;
        Self::with_eig(base, eig, PD_REL_THRESHOLD)
    }

    /// For intermediates built from operands that already passed [`PdMatrix::new`]
    /// (congruences, sums): these are positive definite in exact arithmetic,
    /// and a congruence can square the condition number, so only `λ_min > 0`
    /// is required.
    pub(crate) fn derived(base: HermitianMatrix) -> Result<Self> {
        let eig = base.eig()?;
        Self::with_eig(base, eig, 0.0)
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_rows(rows)?)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diag(values))
    }

    pub fn identity(n: usize) -> Self {
        let base = HermitianMatrix::identity(n);
        let eig = SpectralDecomposition {
            eigenvalues: vec![1.0; n],
            eigenvectors: identity(n),
        };
        Self { base, eig }
    }

    fn with_eig(base: HermitianMatrix, eig: SpectralDecomposition, rel_floor: f64) -> Result<Self> {
        let (min, max) = (eig.min(), eig.max());
        if !(max > 0.0 && min > 0.0 && min > rel_floor * max) {
            return Err(Error::NotPositiveDefinite { min, max });
        }
        Ok(Self { base, eig })
    }

    /// Builds `U f(Λ) U*` for an `f` that is positive on the spectrum,
    /// reusing the eigenvectors instead of decomposing again.
    fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let base = self.eig.apply(&f);
        let mut pairs: Vec<(f64, usize)> = self
            .eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &l)| (f(l), j))
            .collect();
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let eigenvectors = CMatrix::from_fn(self.dim(), self.dim(), |i, k| self.eig.eigenvectors[(i, pairs[k].1)]);
        let eig = SpectralDecomposition {
            eigenvalues: pairs.iter().map(|p| p.0).collect(),
            eigenvectors,
        };
        Self::with_eig(base, eig, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn eigen(&self) -> &SpectralDecomposition {
        &self.eig
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig.min()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eig.max()
    }

    pub fn trace(&self) -> f64 {
        self.base.trace()
    }

    pub fn principal_sqrt(&self) -> Self {
        self.map_spectrum(f64::sqrt)
            .expect("square root of a positive definite matrix is positive definite")
    }

    pub fn inverse(&self) -> Self {
        self.map_spectrum(|x| 1.0 / x)
            .expect("inverse of a positive definite matrix is positive definite")
    }

    pub fn inv_sqrt(&self) -> Self {
        self.map_spectrum(|x| 1.0 / x.sqrt())
            .expect("inverse square root of a positive definite matrix is positive definite")
    }

    /// `P^t`; fails only when `|t|` is large enough to push the spectrum
    /// past the definiteness threshold.
    pub fn power(&self, t: f64) -> Result<Self> {
        self.map_spectrum(|x| x.powf(t))
    }

    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidWeight(format!("scale factor {alpha} must be positive")));
        }
        let eig = SpectralDecomposition {
            eigenvalues: self.eig.eigenvalues.iter().map(|l| l * alpha).collect(),
            eigenvectors: self.eig.eigenvectors.clone(),
        };
        Ok(Self {
            base: self.base.scaled(alpha),
            eig,
        })
    }

    pub fn condition_number(&self) -> f64 {
        self.eig.max() / self.eig.min()
    }
}

impl PartialEq for PdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

pub fn principal_sqrt(p: &PdMatrix) -> PdMatrix {
    p.principal_sqrt()
}

pub fn inverse(p: &PdMatrix) -> PdMatrix {
    p.inverse()
}

/// `H_+ = (|H| + H)/2`: eigenvalues clamped at zero.
pub fn positive_part(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(h.eig()?.apply(|x| x.max(0.0)))
}

/// `T C T*`.
pub fn congruence(t: &CMatrix, c: &HermitianMatrix) -> Result<HermitianMatrix> {
    let (rows, cols) = t.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if cols != c.dim() {
        return Err(Error::DimensionMismatch(cols, c.dim()));
    }
    Ok(HermitianMatrix::hermitian_part(t * c.matrix() * t.adjoint()))
}

pub(crate) fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitization_accepts_rounding_and_rejects_real_asymmetry() {
        let mut m = real_matrix(&[&[1.0, 2.0], &[2.0, 3.0]]);
        m[(0, 1)].re += 1e-15;
        let h = HermitianMatrix::new(m.clone()).unwrap();
        assert_eq!(h.matrix()[(0, 1)], h.matrix()[(1, 0)].conj());

        m[(0, 1)].re += 1e-6;
        assert!(matches!(HermitianMatrix::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_non_square_and_empty() {
        assert!(matches!(
            HermitianMatrix::new(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            HermitianMatrix::new(CMatrix::zeros(0, 0)),
            Err(Error::EmptyDimension)
        ));
    }

    #[test]
    fn pd_check() {
        assert!(PdMatrix::diag(&[1.0, 2.0]).is_ok());
        assert!(matches!(
            PdMatrix::diag(&[1.0, -2.0]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(PdMatrix::diag(&[1.0, 1e-13]).is_err());
        assert!(PdMatrix::diag(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn sqrt_of_diagonal() {
        let p = PdMatrix::diag(&[4.0, 9.0]).unwrap();
        let s = p.principal_sqrt();
        let expected = real_matrix(&[&[2.0, 0.0], &[0.0, 3.0]]);
        assert!(rel_diff(s.matrix(), &expected) < 1e-15);
        assert_eq!(s.eigen().eigenvalues, vec![3.0, 2.0]);
    }

    #[test]
    fn sqrt_of_certificate_matrix_matches_cayley_hamilton_form() {
        // D = [[2, 5/4], [5/4, 17/16]]: sqrt(D) = (D + 3/4 I) / (sqrt(73)/4).
        let d = PdMatrix::from_real_rows(&[&[2.0, 1.25], &[1.25, 17.0 / 16.0]]).unwrap();
        let s = d.principal_sqrt();
        let k = 73f64.sqrt() / 4.0;
        let expected = real_matrix(&[&[(2.0 + 0.75) / k, 1.25 / k], &[1.25 / k, (17.0 / 16.0 + 0.75) / k]]);
        assert!(rel_diff(s.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn inverse_of_diagonal() {
        let p = PdMatrix::diag(&[1.0, 20.0, 40.0]).unwrap();
        let inv = p.inverse();
        let expected = HermitianMatrix::diag(&[1.0, 1.0 / 20.0, 1.0 / 40.0]);
        assert!(rel_diff(inv.matrix(), expected.matrix()) < 1e-15);
        let i = PdMatrix::identity(3).inverse();
        assert!(rel_diff(i.matrix(), &identity(3)) < 1e-15);
    }

    #[test]
    fn positive_part_clamps() {
        let h = HermitianMatrix::diag(&[1.0, -2.0]);
        let p = positive_part(&h).unwrap();
        assert!(rel_diff(p.matrix(), HermitianMatrix::diag(&[1.0, 0.0]).matrix()) < 1e-15);
        let psd = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap();
        assert!(rel_diff(positive_part(&psd).unwrap().matrix(), psd.matrix()) < 1e-14);
    }

    #[test]
    fn congruence_basic() {
        let c = HermitianMatrix::identity(2);
        let t = real_matrix(&[&[2.0, 0.0], &[0.0, 3.0]]);
        let r = congruence(&t, &c).unwrap();
        assert!(rel_diff(r.matrix(), HermitianMatrix::diag(&[4.0, 9.0]).matrix()) < 1e-15);
        assert_eq!(congruence(&identity(2), &c).unwrap(), c);
        assert!(matches!(
            congruence(&identity(3), &c),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }
}
