//! Schur-multiplier reduction for the spectral Heron expression and the
//! nonlinear pinching map used for the Kubo-Ando Heron expression.
//!
//! With `X = A⁻¹#B`, `R = X^{1/2}` and `C = RAR`, one has `A = R⁻¹CR⁻¹`,
//! `B = RCR` and `A♮B = C`. In an eigenbasis of `R = diag(r)` the spectral
//! Heron expression is the Schur product `Γ_c ∘ S_{a,b}(R, C)` with the
//! rank-at-most-three multiplier
//! `Γ_c = D⁻¹(ααᵀ + ββᵀ + c·11ᵀ)D⁻¹`, `α = a/r`, `β = b·r`, `d = α + β`.

use crate::error::{Error, Result};
use crate::linalg::{check_dims, congruence, rel_diff, CMatrix, HermitianMatrix, PdMatrix, C64};
use crate::means::{self, check_nonneg};

/// Residual bound for the change-of-variables identities, relative.
pub const CHANGE_OF_VARS_TOL: f64 = 1e-8;
/// `0 < R < I` is enforced as `λ(R) ⊂ [STRICTNESS, 1 − STRICTNESS]`.
pub const STRICTNESS: f64 = 1e-10;

/// Entrywise product of two Hermitian matrices.
pub fn schur_product(m: &HermitianMatrix, n: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(m.dim(), n.dim())?;
    Ok(HermitianMatrix::hermitian_part(m.matrix().component_mul(n.matrix())))
}

/// The multiplier `Γ_c` with the vectors it is built from.
#[derive(Clone, Debug)]
pub struct MultiplierBundle {
    pub gamma: HermitianMatrix,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub d: Vec<f64>,
    pub c: f64,
    /// `α/d`, `β/d` and `√c/d` (the last omitted when `c = 0`); `Γ_c` is the
    /// sum of their outer products.
    pub low_rank_factors: Vec<Vec<f64>>,
}

impl MultiplierBundle {
    /// `‖Γ − Σ f fᵀ‖_F / ‖Γ‖_F`.
    pub fn reconstruction_residual(&self) -> f64 {
        let n = self.alpha.len();
        let sum = CMatrix::from_fn(n, n, |i, j| {
            C64::new(self.low_rank_factors.iter().map(|f| f[i] * f[j]).sum(), 0.0)
        });
        rel_diff(&sum, self.gamma.matrix())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.alpha.len()).map(|i| self.gamma.matrix()[(i, i)].re).collect()
    }
}

fn check_positive_vector(r: &[f64]) -> Result<()> {
    if r.is_empty() {
        return Err(Error::EmptyDimension);
    }
    match r.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
        Some((index, &value)) => Err(Error::NonPositiveEntry { index, value }),
        None => Ok(()),
    }
}

fn check_positive_weight(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("{name} = {v} must be strictly positive")))
    }
}

/// `(Γ_c)_ij = (α_i α_j + β_i β_j + c) / (d_i d_j)`.
pub fn gamma_multiplier(r: &[f64], a: f64, b: f64, c: f64) -> Result<MultiplierBundle> {
    check_positive_vector(r)?;
    check_positive_weight("a", a)?;
    check_positive_weight("b", b)?;
    check_nonneg("c", c)?;
    let alpha: Vec<f64> = r.iter().map(|ri| a / ri).collect();
    let beta: Vec<f64> = r.iter().map(|ri| b * ri).collect();
    let d: Vec<f64> = alpha.iter().zip(&beta).map(|(x, y)| x + y).collect();
    let n = r.len();
    let gamma = HermitianMatrix::hermitian_part(CMatrix::from_fn(n, n, |i, j| {
        C64::new((alpha[i] * alpha[j] + beta[i] * beta[j] + c) / (d[i] * d[j]), 0.0)
    }));
    let mut low_rank_factors = vec![
        alpha.iter().zip(&d).map(|(x, di)| x / di).collect::<Vec<_>>(),
        beta.iter().zip(&d).map(|(x, di)| x / di).collect(),
    ];
    if c > 0.0 {
        low_rank_factors.push(d.iter().map(|di| c.sqrt() / di).collect());
    }
    Ok(MultiplierBundle {
        gamma,
        alpha,
        beta,
        d,
        c,
        low_rank_factors,
    })
}

/// `s_i = (α_i − β_i)/d_i`, `t_i = 2√(ab)/d_i`, so that
/// `Γ_{2ab} = ½(11ᵀ + ssᵀ + ttᵀ)`.
pub fn correlation_decomposition(r: &[f64], a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check_positive_vector(r)?;
    check_positive_weight("a", a)?;
    check_positive_weight("b", b)?;
    let root = 2.0 * (a * b).sqrt();
    Ok(r.iter()
        .map(|ri| {
            let (al, be) = (a / ri, b * ri);
            let d = al + be;
            ((al - be) / d, root / d)
        })
        .unzip())
}

/// `½(11ᵀ + ssᵀ + ttᵀ)`.
pub fn correlation_from_factors(s: &[f64], t: &[f64]) -> HermitianMatrix {
    let n = s.len();
    HermitianMatrix::hermitian_part(CMatrix::from_fn(n, n, |i, j| {
        C64::new(0.5 * (1.0 + s[i] * s[j] + t[i] * t[j]), 0.0)
    }))
}

/// `(R, C)` with `R = (A⁻¹#B)^{1/2}` and `C = RAR`.
#[derive(Clone, Debug)]
pub struct SpectralFrame {
    pub r: PdMatrix,
    pub c: PdMatrix,
    /// Largest relative residual among `A = R⁻¹CR⁻¹`, `B = RCR`, `A♮B = C`.
    pub residual: f64,
}

impl SpectralFrame {
    /// `C` expressed in the eigenbasis of `R`, with the eigenvalues of `R`.
    pub fn in_r_basis(&self) -> (Vec<f64>, CMatrix) {
        let e = self.r.eigen();
        let u = &e.eigenvectors;
        (e.eigenvalues.clone(), u.adjoint() * self.c.matrix() * u)
    }
}

pub fn spectral_change_of_vars(a: &PdMatrix, b: &PdMatrix) -> Result<SpectralFrame> {
    let x = means::riccati_mean(a, b)?;
    let r = x.principal_sqrt();
    let c = PdMatrix::derived(congruence(r.matrix(), a.hermitian())?)?;
    let r_inv = r.inverse();
    let a_back = congruence(r_inv.matrix(), c.hermitian())?;
    let b_back = congruence(r.matrix(), c.hermitian())?;
    let natural = means::spectral_mean(a, b)?;
    let residual = rel_diff(a_back.matrix(), a.matrix())
        .max(rel_diff(b_back.matrix(), b.matrix()))
        .max(rel_diff(natural.matrix(), c.matrix()));
    if residual > CHANGE_OF_VARS_TOL {
        return Err(Error::NumericalFailure {
            what: "spectral change of variables",
            residual,
            limit: CHANGE_OF_VARS_TOL,
        });
    }
    Ok(SpectralFrame { r, c, residual })
}

/// `T_{a,b;c}(R,C) = a²R⁻¹CR⁻¹ + b²RCR + cC` and
/// `S_{a,b}(R,C) = (aR⁻¹ + bR)C(aR⁻¹ + bR)` for diagonal `R = diag(r)`,
/// evaluated by matrix products.
pub fn schur_reduction_sides(r: &[f64], c_mat: &CMatrix, a: f64, b: f64, c: f64) -> Result<(CMatrix, CMatrix)> {
    check_positive_vector(r)?;
    check_dims(r.len(), c_mat.nrows())?;
    let n = r.len();
    let diag = |f: &dyn Fn(f64) -> f64| {
        CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(f(r[i]), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    };
    let rm = diag(&|x| x);
    let ri = diag(&|x| 1.0 / x);
    let t =
        &ri * c_mat * &ri * C64::new(a * a, 0.0) + &rm * c_mat * &rm * C64::new(b * b, 0.0) + c_mat * C64::new(c, 0.0);
    let m = diag(&|x| a / x + b * x);
    let s = &m * c_mat * &m;
    Ok((t, s))
}

/// `R⁻¹CR + RCR⁻¹ − 2C`, the scaled difference `(W − H^♮)/ab` in the
/// spectral frame; it is indefinite in general.
pub fn loewner_gap(r: &PdMatrix, c: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_dims(r.dim(), c.dim())?;
    let ri = r.inverse();
    let m =
        ri.matrix() * c.matrix() * r.matrix() + r.matrix() * c.matrix() * ri.matrix() - c.matrix() * C64::new(2.0, 0.0);
    Ok(HermitianMatrix::hermitian_part(m))
}

fn check_strict_contraction(r: &PdMatrix) -> Result<()> {
    let (lo, hi) = (r.min_eigenvalue(), r.max_eigenvalue());
    if lo < STRICTNESS || hi > 1.0 - STRICTNESS {
        return Err(Error::InvalidWeight(format!(
            "R must satisfy 0 < R < I strictly; spectrum spans [{lo:e}, {hi:e}]"
        )));
    }
    Ok(())
}

/// `Φ_R(C) = RCR + SCS + 2(RCR # SCS)` with `S = I − R`.
pub fn pinching_map(c: &PdMatrix, r: &PdMatrix) -> Result<PdMatrix> {
    check_dims(c.dim(), r.dim())?;
    check_strict_contraction(r)?;
    let n = r.dim();
    let s = CMatrix::identity(n, n) - r.matrix();
    let p = PdMatrix::derived(congruence(r.matrix(), c.hermitian())?)?;
    let q = PdMatrix::derived(congruence(&s, c.hermitian())?)?;
    let g = means::geometric_mean(&p, &q)?;
    PdMatrix::derived(HermitianMatrix::combination(&[
        (1.0, p.hermitian()),
        (1.0, q.hermitian()),
        (2.0, g.hermitian()),
    ])?)
}

/// `S = I − R` for a strict contraction `R`.
pub fn complement(r: &PdMatrix) -> Result<PdMatrix> {
    check_strict_contraction(r)?;
    let n = r.dim();
    PdMatrix::from_matrix(CMatrix::identity(n, n) - r.matrix())
}

/// `(R, C)` with `T = aI + bX`, `C = TAT`, `R = aT⁻¹` (so `S = bXT⁻¹`).
#[derive(Clone, Debug)]
pub struct KuboFrame {
    pub r: PdMatrix,
    pub c: PdMatrix,
    /// Largest relative residual among `R + S = I`, `RCR = a²A`, `SCS = b²B`,
    /// `C = W_{a,b}` and `Φ_R(C) = H^#_{a,b}`.
    pub residual: f64,
}

pub fn kubo_change_of_vars(a_mat: &PdMatrix, b_mat: &PdMatrix, a: f64, b: f64) -> Result<KuboFrame> {
    kubo_change_of_vars_within(a_mat, b_mat, a, b, CHANGE_OF_VARS_TOL)
}

/// [`kubo_change_of_vars`] with a caller-chosen residual limit, for runs
/// whose tolerance is looser than the default.
pub fn kubo_change_of_vars_within(a_mat: &PdMatrix, b_mat: &PdMatrix, a: f64, b: f64, limit: f64) -> Result<KuboFrame> {
    check_positive_weight("a", a)?;
    check_positive_weight("b", b)?;
    let x = means::riccati_mean(a_mat, b_mat)?;
    let n = a_mat.dim();
    let eye = CMatrix::identity(n, n);
    let t = PdMatrix::from_matrix(&eye * C64::new(a, 0.0) + x.matrix() * C64::new(b, 0.0))?;
    let t_inv = t.inverse();
    let c = PdMatrix::derived(congruence(t.matrix(), a_mat.hermitian())?)?;
    let r = t_inv.scaled(a)?;
    let s = x.matrix() * t_inv.matrix() * C64::new(b, 0.0);

    let unit = crate::linalg::frobenius(&(r.matrix() + &s - &eye)) / (n as f64).sqrt();
    let rcr = congruence(r.matrix(), c.hermitian())?;
    let scs = congruence(&s, c.hermitian())?;
    let w = means::wasserstein_expression(a_mat, b_mat, a, b)?;
    let phi = pinching_map(&c, &r)?;
    let h = means::heron_kubo(a_mat, b_mat, a, b, 2.0 * a * b)?;
    let residual = unit
        .max(rel_diff(rcr.matrix(), a_mat.hermitian().scaled(a * a).matrix()))
        .max(rel_diff(scs.matrix(), b_mat.hermitian().scaled(b * b).matrix()))
        .max(rel_diff(c.matrix(), w.matrix()))
        .max(rel_diff(phi.matrix(), h.matrix()));
    if !(residual <= limit) {
        return Err(Error::NumericalFailure {
            what: "Kubo-Ando change of variables",
            residual,
            limit,
        });
    }
    Ok(KuboFrame { r, c, residual })
}
