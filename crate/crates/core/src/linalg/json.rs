use serde::{Deserialize, Serialize};

use super::{CMatrix, C64};
use crate::error::{Error, Result};

/// Shared on-disk matrix format: `{"dim": n, "re": [[...]], "im": [[...]]}`.
/// A missing `im` means a real matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let re = (0..rows).map(|i| (0..cols).map(|j| m[(i, j)].re).collect()).collect();
        let any_im = m.iter().any(|z| z.im != 0.0);
        let im = any_im.then(|| (0..rows).map(|i| (0..cols).map(|j| m[(i, j)].im).collect()).collect());
        Self { dim: rows, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        let check = |rows: &Vec<Vec<f64>>, part: &str| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!("`{part}` must be a {n}x{n} array")));
            }
            Ok(())
        };
        check(&self.re, "re")?;
        if let Some(im) = &self.im {
            check(im, "im")?;
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
            C64::new(self.re[i][j], im)
        }))
    }

    pub fn parse(text: &str) -> Result<CMatrix> {
        let parsed: MatrixJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        parsed.to_matrix()
    }
}
