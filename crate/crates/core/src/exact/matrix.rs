use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, Rational};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};

/// Dense square matrix of exact rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| super::format_rational(self.get(i, j))).collect())
            .collect();
        f.debug_struct("RationalMatrix").field("rows", &rows).finish()
    }
}

impl RationalMatrix {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: r.len(),
            });
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// `(1/denom) · rows`, the shape most fixtures are written in.
    pub fn from_int_rows(rows: &[&[i64]], denom: i64) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v, denom)).collect())
                .collect(),
        )
    }

    pub fn diag(values: &[Rational]) -> Self {
        Self::from_fn(
            values.len(),
            |i, j| {
                if i == j {
                    values[i].clone()
                } else {
                    Rational::zero()
                }
            },
        )
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(Rational::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
        }))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_fn(self.dim, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self::from_fn(self.dim, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(i, j) * s)
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Largest absolute entry; zero for the empty matrix.
    pub fn max_abs(&self) -> Rational {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.entries[i * n..(i + 1) * n].to_vec()).collect();
        let mut inv: Vec<Vec<Rational>> = Self::identity(n).rows();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::Singular)?;
            a.swap(col, p);
            inv.swap(col, p);
            let piv = a[col][col].clone();
            for j in 0..n {
                a[col][j] = &a[col][j] / &piv;
                inv[col][j] = &inv[col][j] / &piv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
        Self::from_rows(inv)
    }

    pub fn det(&self) -> Rational {
        let (ints, l) = self.cleared();
        let d = bareiss_det(ints);
        Rational::new(d, l.pow(self.dim as u32))
    }

    /// Exact determinants of the leading `k×k` blocks, `k = 1..n`.
    ///
    /// Runs fraction-free (Bareiss) elimination on `L·M`, `L` the lcm of the
    /// denominators, then divides the `k`-th pivot by `L^k`.
    pub fn leading_principal_minors(&self) -> Result<Vec<Rational>> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.dim;
        let (mut a, l) = self.cleared();
        let mut out = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let scale = l.pow(k as u32 + 1);
            if a[k][k].is_zero() {
                // No pivoting allowed here: the remaining minors come from
                // the blocks directly.
                let (full, _) = self.cleared();
                for m in k + 1..=n {
                    let block = full[..m].iter().map(|r| r[..m].to_vec()).collect();
                    out.push(Rational::new(bareiss_det(block), l.pow(m as u32)));
                }
                return Ok(out);
            }
            out.push(Rational::new(a[k][k].clone(), scale));
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(out)
    }

    /// Sylvester's criterion: positive definite iff every leading principal
    /// minor is positive.
    pub fn sylvester_pd(&self) -> Result<bool> {
        Ok(self.leading_principal_minors()?.iter().all(|m| m.is_positive()))
    }

    pub fn to_complex(&self) -> CMatrix {
        CMatrix::from_fn(self.dim, self.dim, |i, j| C64::new(super::to_f64(self.get(i, j)), 0.0))
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries
            .chunks(self.dim.max(1))
            .map(|r| r.to_vec())
            .take(self.dim)
            .collect()
    }

    /// Integer matrix `L·M` and the common denominator `L`.
    fn cleared(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let l = self.entries.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let n = self.dim;
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (self.get(i, j) * &l).to_integer()).collect())
            .collect();
        (rows, l)
    }
}

/// Fraction-free determinant with row pivoting.
fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
