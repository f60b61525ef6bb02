use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, rat, rational_sqrt, sign, Rational, RationalMatrix};
use crate::error::{Error, Result};

/// One exact comparison; `computed` and `expected` are reduced `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateItem {
    pub label: String,
    pub computed: String,
    pub expected: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub name: String,
    pub items: Vec<CertificateItem>,
    pub verdict: bool,
}

impl CertificateReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            items: Vec::new(),
            verdict: true,
        }
    }

    fn push(&mut self, label: impl Into<String>, computed: &Rational, expected: &str) {
        let exp = parse_rational(expected).expect("embedded constant is a rational");
        let matched = *computed == exp;
        self.verdict &= matched;
        self.items.push(CertificateItem {
            label: label.into(),
            computed: format_rational(computed),
            expected: format_rational(&exp),
            matched,
        });
    }

    pub fn item(&self, label: &str) -> Option<&CertificateItem> {
        self.items.iter().find(|i| i.label == label)
    }

    /// Labels of the items that did not match.
    pub fn mismatches(&self) -> Vec<&str> {
        self.items
            .iter()
            .filter(|i| !i.matched)
            .map(|i| i.label.as_str())
            .collect()
    }

    pub fn value(&self, label: &str) -> Option<Rational> {
        self.item(label).and_then(|i| parse_rational(&i.computed).ok())
    }
}

pub const DIRECTION_ONE: &str = "kubo_exceeds_spectral_at_k1";
pub const DIRECTION_TWO: &str = "spectral_exceeds_kubo_in_trace";

const R_MINORS: [&str; 3] = ["21/10", "59/100", "3/2000"];
const B_UPPER: [(usize, usize, &str); 6] = [
    (0, 0, "129153/5000"),
    (0, 1, "-4119/1250"),
    (0, 2, "4521/5000"),
    (1, 1, "6219/10000"),
    (1, 2, "-723/20000"),
    (2, 2, "2511/40000"),
];
const K_MINORS: [&str; 3] = [
    "1538228131/2000000000",
    "36854830002529581/8000000000000000000",
    "249208941796751/200000000000000000000000000",
];
const DET_41_MINUS_MG: &str = "-2296964316553/1000000000000";
const SPECTRAL_MINORS: [&str; 3] = ["14747/5000", "139973371/10000000", "3328064679/20000000000"];

/// 3×3 witness that `A+B+2(A#B)` has a larger top eigenvalue than
/// `A+B+2(A♮B)`. `g` is a Loewner lower bound for `A#B`, certified through
/// the Schur complement `B − G A⁻¹ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionOne {
    pub a: RationalMatrix,
    pub r: RationalMatrix,
    pub g: RationalMatrix,
}

impl Default for DirectionOne {
    fn default() -> Self {
        let int = |rows: &[&[i64]], d| RationalMatrix::from_int_rows(rows, d).expect("square fixture");
        Self {
            a: RationalMatrix::diag(&[rat(1, 1), rat(20, 1), rat(40, 1)]),
            r: int(&[&[42, -4, 2], &[-4, 6, 2], &[2, 2, 1]], 20),
            g: int(
                &[&[50041, -6271, 1796], &[-6271, 19846, 7265], &[1796, 7265, 3009]],
                10000,
            ),
        }
    }
}

/// Matrices derived from a [`DirectionOne`] instance.
#[derive(Clone, Debug)]
pub struct DirectionOneData {
    pub x: RationalMatrix,
    pub b: RationalMatrix,
    /// `RAR`, equal to the spectral mean because `R = X^{1/2}`.
    pub spectral: RationalMatrix,
    pub k: RationalMatrix,
    pub m_g: RationalMatrix,
    pub m_spectral: RationalMatrix,
}

impl DirectionOne {
    pub fn derive(&self) -> Result<DirectionOneData> {
        let x = self.r.mul(&self.r)?;
        let b = x.mul(&self.a)?.mul(&x)?;
        let spectral = self.r.mul(&self.a)?.mul(&self.r)?;
        let k = b.sub(&self.g.mul(&self.a.inverse()?)?.mul(&self.g)?)?;
        let two = rat(2, 1);
        let sum = self.a.add(&b)?;
        let m_g = sum.add(&self.g.scale(&two))?;
        let m_spectral = sum.add(&spectral.scale(&two))?;
        Ok(DirectionOneData {
            x,
            b,
            spectral,
            k,
            m_g,
            m_spectral,
        })
    }

    pub fn certify(&self) -> Result<CertificateReport> {
        let d = self.derive()?;
        let n = self.a.dim();
        let shifted = |m: &RationalMatrix| RationalMatrix::identity(n).scale(&rat(41, 1)).sub(m);
        let mut rep = CertificateReport::new(DIRECTION_ONE);

        for (k, (m, e)) in self.r.leading_principal_minors()?.iter().zip(R_MINORS).enumerate() {
            rep.push(format!("R minor {}", k + 1), m, e);
        }
        for (i, j, e) in B_UPPER {
            rep.push(format!("B[{},{}]", i + 1, j + 1), d.b.get(i, j), e);
        }
        for (k, (m, e)) in d.k.leading_principal_minors()?.iter().zip(K_MINORS).enumerate() {
            rep.push(format!("K minor {}", k + 1), m, e);
        }
        rep.push("det(41I - M_G)", &shifted(&d.m_g)?.det(), DET_41_MINUS_MG);
        let spec_minors = shifted(&d.m_spectral)?.leading_principal_minors()?;
        for (k, (m, e)) in spec_minors.iter().zip(SPECTRAL_MINORS).enumerate() {
            rep.push(format!("41I - M_spectral minor {}", k + 1), m, e);
        }
        Ok(rep)
    }
}

/// 2×2 witness that `Tr(A#B) < Tr(A♮B)`, built from diagonal `A` and the
/// Riccati solution `X`, with `B = XAX`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionTwo {
    pub a_diag: [Rational; 2],
    pub x: RationalMatrix,
}

impl Default for DirectionTwo {
    fn default() -> Self {
        Self {
            a_diag: [rat(1, 1), rat(4, 1)],
            x: RationalMatrix::from_int_rows(&[&[2, 1], &[1, 2]], 2).expect("square fixture"),
        }
    }
}

impl DirectionTwo {
    pub fn certify(&self) -> Result<CertificateReport> {
        let unverified = |what: &str| Error::CertificateUnverified(format!("{DIRECTION_TWO}: {what}"));
        let a = RationalMatrix::diag(&self.a_diag);
        let b = self.x.mul(&a)?.mul(&self.x)?;
        let inv_sqrt: Vec<Rational> = self
            .a_diag
            .iter()
            .map(|v| rational_sqrt(v).filter(|s| !s.is_zero()).map(|s| s.recip()))
            .collect::<Option<_>>()
            .ok_or_else(|| unverified("A is not a diagonal of nonzero rational squares"))?;
        let h = RationalMatrix::diag(&inv_sqrt);
        let d = h.mul(&b)?.mul(&h)?;
        let tr_d = d.trace();
        let det_d = d.det();
        let root_det = rational_sqrt(&det_d).ok_or_else(|| unverified("det D is not a rational square"))?;

        // With D^{1/2} = (D + √det D·I)/√(Tr D + 2√det D):
        // Tr(A#B) = Tr(A D^{1/2}) = q/√s, q = 4(Tr(AD) + √det D·Tr A), s = 16(Tr D + 2√det D).
        let four = rat(4, 1);
        let q = &four * (a.mul(&d)?.trace() + &root_det * a.trace());
        let s = rat(16, 1) * (&tr_d + rat(2, 1) * &root_det);
        let spectral_trace = a.mul(&self.x)?.trace();
        let lifted = RationalMatrix::identity(2).scale(&root_det).add(&d)?;
        let ch_residual = lifted
            .mul(&lifted)?
            .sub(&d.scale(&(&tr_d + rat(2, 1) * &root_det)))?
            .max_abs();

        let mut rep = CertificateReport::new(DIRECTION_TWO);
        rep.push("B[1,1]", b.get(0, 0), "2");
        rep.push("B[1,2]", b.get(0, 1), "5/2");
        rep.push("B[2,2]", b.get(1, 1), "17/4");
        rep.push("Tr(AX)", &spectral_trace, "5");
        rep.push("Tr D", &tr_d, "49/16");
        rep.push("det D", &det_d, "9/16");
        rep.push("sqrt(det D)", &root_det, "3/4");
        rep.push("Cayley-Hamilton residual", &ch_residual, "0");
        rep.push("s", &s, "73");
        rep.push("q", &q, "40");
        rep.push("q^2", &(&q * &q), "1600");
        let rhs = &spectral_trace * &spectral_trace * &s;
        rep.push("Tr(AX)^2 * s", &rhs, "1825");
        rep.push("sign(Tr(AX)^2 * s - q^2)", &sign(&(&rhs - &q * &q)), "1");
        if q < Rational::zero() || spectral_trace < Rational::zero() {
            rep.verdict = false;
        }
        Ok(rep)
    }
}

pub fn certify_direction_one() -> CertificateReport {
    DirectionOne::default().certify().expect("built-in data is well formed")
}

pub fn certify_direction_two() -> CertificateReport {
    DirectionTwo::default().certify().expect("built-in data is well formed")
}
