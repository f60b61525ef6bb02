use serde_json::{json, Value};

use crate::error::Result;
use crate::linalg::{HermitianMatrix, MatrixJson, PdMatrix};
use crate::means::{self, WassersteinValue};

/// A pair `(A, B)` with the means every checker needs, computed once.
#[derive(Clone, Debug)]
pub struct Pair {
    pub a: PdMatrix,
    pub b: PdMatrix,
    /// `A♮B`
    pub natural: PdMatrix,
    /// `A#B`
    pub geo: PdMatrix,
    pub sqrt_a: PdMatrix,
    pub sqrt_b: PdMatrix,
}

impl Pair {
    pub fn new(a: PdMatrix, b: PdMatrix) -> Result<Self> {
        let natural = means::spectral_mean(&a, &b)?;
        let geo = means::geometric_mean(&a, &b)?;
        let sqrt_a = a.principal_sqrt();
        let sqrt_b = b.principal_sqrt();
        Ok(Self {
            a,
            b,
            natural,
            geo,
            sqrt_a,
            sqrt_b,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `a²A + b²B + c·M`.
    fn heron_with(&self, a: f64, b: f64, c: f64, cross: &PdMatrix) -> Result<HermitianMatrix> {
        HermitianMatrix::combination(&[
            (a * a, self.a.hermitian()),
            (b * b, self.b.hermitian()),
            (c, cross.hermitian()),
        ])
    }

    /// `a²A + b²B + c(A♮B)`.
    pub fn heron_spectral(&self, a: f64, b: f64, c: f64) -> Result<HermitianMatrix> {
        self.heron_with(a, b, c, &self.natural)
    }

    /// `a²A + b²B + c(A#B)`.
    pub fn heron_kubo(&self, a: f64, b: f64, c: f64) -> Result<HermitianMatrix> {
        self.heron_with(a, b, c, &self.geo)
    }

    pub fn wasserstein(&self, a: f64, b: f64) -> Result<WassersteinValue> {
        means::wasserstein_checked(&self.a, &self.b, a, b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "A": MatrixJson::from_matrix(self.a.matrix()),
            "B": MatrixJson::from_matrix(self.b.matrix()),
        })
    }
}
