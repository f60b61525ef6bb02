//! Two-variable matrix means and the quadratic Heron / Bures-Wasserstein
//! expressions built from them.
//!
//! The Riccati mean `X = A⁻¹#B` (the unique positive definite solution of
//! `XAX = B`) is the central device: it gives `(AB)^{1/2} = AX`,
//! `(BA)^{1/2} = XA`, the spectral mean `A♮B = X^{1/2} A X^{1/2}`, and the
//! congruence form `W_{a,b}(A,B) = (aI + bX) A (aI + bX)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_dims, congruence, rel_diff, CMatrix, HermitianMatrix, PdMatrix, C64};

/// Residual bound for `XAX = B`, relative to `‖B‖_F`.
pub const RICCATI_TOL: f64 = 1e-8;
/// Agreement bound between the two Wasserstein formulas, relative to `‖W‖_F`.
pub const WASSERSTEIN_TOL: f64 = 1e-8;

/// Coefficients `(a, b, c, t)` for Heron and Wasserstein expressions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub t: f64,
}

impl MeanWeights {
    pub fn new(a: f64, b: f64, c: f64, t: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            check_nonneg(name, v)?;
        }
        check_unit(t)?;
        Ok(Self { a, b, c, t })
    }

    /// `c = 2ab`, `t = 1/2`.
    pub fn sharp(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 2.0 * a * b, 0.5)
    }

    pub fn sharp_coefficient(&self) -> f64 {
        2.0 * self.a * self.b
    }

    /// Enforces `c ≤ 2ab` (up to one rounding step).
    pub fn require_c_at_most_sharp(&self) -> Result<()> {
        let bound = self.sharp_coefficient();
        if self.c > bound * (1.0 + 4.0 * f64::EPSILON) {
            return Err(Error::InvalidWeight(format!("c = {} exceeds 2ab = {bound}", self.c)));
        }
        Ok(())
    }
}

pub(crate) fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!(
            "{name} = {v} must be a finite nonnegative number"
        )))
    }
}

pub(crate) fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidWeight(format!("t = {t} must lie in [0, 1]")))
    }
}

/// `X = A⁻¹#B` together with its relative Riccati residual.
#[derive(Clone, Debug)]
pub struct RiccatiSolution {
    pub x: PdMatrix,
    pub residual: f64,
}

/// `X = A^{-1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}`, checked against `XAX = B`.
pub fn riccati_mean_checked(a: &PdMatrix, b: &PdMatrix) -> Result<RiccatiSolution> {
    check_dims(a.dim(), b.dim())?;
    let a_half = a.principal_sqrt();
    let a_inv_half = a.inv_sqrt();
    let inner = PdMatrix::derived(congruence(a_half.matrix(), b.hermitian())?)?;
    let x = PdMatrix::derived(congruence(a_inv_half.matrix(), inner.principal_sqrt().hermitian())?)?;
    let xax = x.matrix() * a.matrix() * x.matrix();
    let residual = rel_diff(&xax, b.matrix());
    if residual > RICCATI_TOL {
        return Err(Error::NumericalFailure {
            what: "Riccati residual ‖XAX − B‖/‖B‖",
            residual,
            limit: RICCATI_TOL,
        });
    }
    Ok(RiccatiSolution { x, residual })
}

pub fn riccati_mean(a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
    Ok(riccati_mean_checked(a, b)?.x)
}

/// `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`.
pub fn geometric_mean_weighted(a: &PdMatrix, b: &PdMatrix, t: f64) -> Result<PdMatrix> {
    check_unit(t)?;
    check_dims(a.dim(), b.dim())?;
    let inner = PdMatrix::derived(congruence(a.inv_sqrt().matrix(), b.hermitian())?)?;
    let powered = inner.power(t)?;
    PdMatrix::derived(congruence(a.principal_sqrt().matrix(), powered.hermitian())?)
}

pub fn geometric_mean(a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
    geometric_mean_weighted(a, b, 0.5)
}

/// `A ♮_t B = X^t A X^t` with `X = A⁻¹#B`.
pub fn spectral_mean_weighted(a: &PdMatrix, b: &PdMatrix, t: f64) -> Result<PdMatrix> {
    check_unit(t)?;
    let x = riccati_mean(a, b)?;
    let xt = if t == 0.5 { x.principal_sqrt() } else { x.power(t)? };
    PdMatrix::derived(congruence(xt.matrix(), a.hermitian())?)
}

pub fn spectral_mean(a: &PdMatrix, b: &PdMatrix) -> Result<PdMatrix> {
    spectral_mean_weighted(a, b, 0.5)
}

/// `((AB)^{1/2}, (BA)^{1/2}) = (AX, XA)`.
pub fn product_sqrt_pair(a: &PdMatrix, b: &PdMatrix) -> Result<(CMatrix, CMatrix)> {
    let x = riccati_mean(a, b)?;
    Ok((a.matrix() * x.matrix(), x.matrix() * a.matrix()))
}

/// `W_{a,b}(A, B)` and the relative disagreement between its two formulas.
#[derive(Clone, Debug)]
pub struct WassersteinValue {
    pub w: HermitianMatrix,
    pub formula_gap: f64,
    pub riccati_residual: f64,
}

/// Evaluates `a²A + b²B + ab(AX + XA)` and `(aI + bX)A(aI + bX)`, requires
/// them to agree, and returns the congruence form.
pub fn wasserstein_checked(a_mat: &PdMatrix, b_mat: &PdMatrix, a: f64, b: f64) -> Result<WassersteinValue> {
    check_nonneg("a", a)?;
    check_nonneg("b", b)?;
    let sol = riccati_mean_checked(a_mat, b_mat)?;
    let x = sol.x.matrix();
    let am = a_mat.matrix();
    let n = a_mat.dim();

    let cross = am * x + x * am;
    let definition = am * C64::new(a * a, 0.0) + b_mat.matrix() * C64::new(b * b, 0.0) + cross * C64::new(a * b, 0.0);

    let t = CMatrix::identity(n, n) * C64::new(a, 0.0) + x * C64::new(b, 0.0);
    let w = congruence(&t, a_mat.hermitian())?;

    let formula_gap = if w.frobenius_norm() == 0.0 {
        crate::linalg::frobenius(&definition)
    } else {
        rel_diff(&definition, w.matrix())
    };
    if formula_gap > WASSERSTEIN_TOL {
        return Err(Error::NumericalFailure {
            what: "Wasserstein formula disagreement",
            residual: formula_gap,
            limit: WASSERSTEIN_TOL,
        });
    }
    Ok(WassersteinValue {
        w,
        formula_gap,
        riccati_residual: sol.residual,
    })
}

/// `W_{a,b}(A,B) = a²A + b²B + ab((AB)^{1/2} + (BA)^{1/2})`.
pub fn wasserstein_expression(a_mat: &PdMatrix, b_mat: &PdMatrix, a: f64, b: f64) -> Result<HermitianMatrix> {
    Ok(wasserstein_checked(a_mat, b_mat, a, b)?.w)
}

/// Bures-Wasserstein geodesic point `A ◇_t B = W_{1−t, t}(A, B)`.
pub fn bw_geodesic(a: &PdMatrix, b: &PdMatrix, t: f64) -> Result<HermitianMatrix> {
    check_unit(t)?;
    wasserstein_expression(a, b, 1.0 - t, t)
}

fn heron(a_mat: &PdMatrix, b_mat: &PdMatrix, a: f64, b: f64, c: f64, cross: Option<&PdMatrix>) -> Result<PdMatrix> {
    check_nonneg("a", a)?;
    check_nonneg("b", b)?;
    check_nonneg("c", c)?;
    check_dims(a_mat.dim(), b_mat.dim())?;
    if a == 0.0 && b == 0.0 && c == 0.0 {
        return Err(Error::InvalidWeight("a, b and c are all zero".into()));
    }
    let mut terms = vec![(a * a, a_mat.hermitian()), (b * b, b_mat.hermitian())];
    if let Some(m) = cross {
        terms.push((c, m.hermitian()));
    }
    PdMatrix::derived(HermitianMatrix::combination(&terms)?)
}

/// `H^{♮,c}_{a,b}(A,B) = a²A + b²B + c(A♮B)`.
pub fn heron_spectral(a_mat: &PdMatrix, b_mat: &PdMatrix, w: &MeanWeights) -> Result<PdMatrix> {
    let cross = if w.c > 0.0 {
        Some(spectral_mean(a_mat, b_mat)?)
    } else {
        None
    };
    heron(a_mat, b_mat, w.a, w.b, w.c, cross.as_ref())
}

/// `a²A + b²B + c(A#B)`; `c = 2ab` is `H^#_{a,b}`.
pub fn heron_kubo(a_mat: &PdMatrix, b_mat: &PdMatrix, a: f64, b: f64, c: f64) -> Result<PdMatrix> {
    let cross = if c > 0.0 {
        Some(geometric_mean(a_mat, b_mat)?)
    } else {
        None
    };
    heron(a_mat, b_mat, a, b, c, cross.as_ref())
}
