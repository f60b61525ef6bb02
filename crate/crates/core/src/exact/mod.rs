//! Exact rational linear algebra and the incomparability certificates.
//!
//! Everything here runs on `BigRational`, so equalities are checked without
//! any tolerance.

mod certificate;
mod matrix;
mod shadow;

pub use certificate::{
    certify_direction_one, certify_direction_two, CertificateItem, CertificateReport, DirectionOne, DirectionTwo,
};
pub use matrix::RationalMatrix;
pub use shadow::float_shadow;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Reduced `p/q` form; integers keep the `/1` so every value has one shape.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `p/q`, `p` or `-p/q` with arbitrary-size integers.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Exact square root when `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rational::new(n, d))
}

/// Sign as `-1`, `0` or `1`.
pub fn sign(r: &Rational) -> Rational {
    if r.is_zero() {
        Rational::zero()
    } else if r.is_positive() {
        rat(1, 1)
    } else {
        rat(-1, 1)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
