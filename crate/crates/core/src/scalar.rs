//! Field elements used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`], which has exactly two
//! implementations: arbitrary-precision [`Rational`] numbers (exact, the
//! default) and [`Complex64`] doubles. A single computation always stays in
//! one of the two fields.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, EigenPair, Matrix};

pub type Rational = BigRational;

/// Relative threshold under which a floating-point pivot counts as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Default comparison tolerance for the floating-point path.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    #[serde(rename = "exact")]
    Rational,
    #[serde(rename = "f64")]
    ComplexF64,
}

impl ScalarKind {
    pub fn name(self) -> &'static str {
        match self {
            ScalarKind::Rational => "exact",
            ScalarKind::ComplexF64 => "f64",
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const KIND: ScalarKind;

    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// `None` on the exact path, which has no complex numbers.
    fn from_complex(c: Complex64) -> Option<Self>;

    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn div_ref(&self, rhs: &Self) -> Self;

    fn conj(&self) -> Self;
    /// Absolute value, approximated as a double on the exact path.
    fn magnitude(&self) -> f64;
    fn to_complex(&self) -> Complex64;

    /// Zero test. Exact on the rational path; `|x| <= tol * scale` otherwise.
    fn negligible(&self, scale: f64, tol: f64) -> bool;

    fn approx_eq(&self, other: &Self, scale: f64, tol: f64) -> bool {
        self.sub_ref(other).negligible(scale, tol)
    }

    fn is_exact() -> bool {
        Self::KIND == ScalarKind::Rational
    }

    /// Indices of the pivot columns of `m` under row reduction.
    fn pivot_columns(m: &Matrix<Self>, tol: f64) -> Vec<usize>;

    /// Eigenpairs of a matrix whose eigenvalues are pairwise distinct.
    fn eigen_distinct(m: &Matrix<Self>, tol: f64) -> Result<Vec<EigenPair<Self>>>;

    /// One eigenpair `(λ, w)` of the pencil `a w = λ b w`, all of whose
    /// eigenvalues must be distinct; `pick` chooses among the eigenvalues.
    fn generalized_eigenpair(
        a: &Matrix<Self>,
        b: &Matrix<Self>,
        rank_tol: f64,
        tol: f64,
        pick: &dyn Fn(&[Self]) -> usize,
    ) -> Result<EigenPair<Self>>;

    fn to_json(&self) -> serde_json::Value;
    fn parse(s: &str) -> Result<Self>;
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_complex(_c: Complex64) -> Option<Self> {
        None
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }

    fn negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn pivot_columns(m: &Matrix<Self>, _tol: f64) -> Vec<usize> {
        linalg::bareiss::pivot_columns_rational(m)
    }

    fn eigen_distinct(m: &Matrix<Self>, _tol: f64) -> Result<Vec<EigenPair<Self>>> {
        linalg::eigen::eigen_distinct_rational(m)
    }

    fn generalized_eigenpair(
        a: &Matrix<Self>,
        b: &Matrix<Self>,
        _rank_tol: f64,
        _tol: f64,
        pick: &dyn Fn(&[Self]) -> usize,
    ) -> Result<EigenPair<Self>> {
        let values = linalg::eigen::generalized_eigenvalues_rational(a, b)?;
        let value = values[pick(&values)].clone();
        let vector = linalg::eigen::generalized_eigenvector_rational(a, b, &value)?;
        Ok(EigenPair { value, vector })
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(q) = Rational::from_str(s) {
            return Ok(q);
        }
        parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a rational number: `{s}`")))
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::ComplexF64;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn from_complex(c: Complex64) -> Option<Self> {
        Some(c)
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_ref(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn negligible(&self, scale: f64, tol: f64) -> bool {
        self.norm() <= tol * scale
    }

    fn pivot_columns(m: &Matrix<Self>, tol: f64) -> Vec<usize> {
        linalg::row_reduce(m.clone(), tol).1
    }

    fn eigen_distinct(m: &Matrix<Self>, tol: f64) -> Result<Vec<EigenPair<Self>>> {
        linalg::eigen::eigen_distinct_complex(m, tol)
    }

    fn generalized_eigenpair(
        a: &Matrix<Self>,
        b: &Matrix<Self>,
        rank_tol: f64,
        tol: f64,
        pick: &dyn Fn(&[Self]) -> usize,
    ) -> Result<EigenPair<Self>> {
        let mut pairs = linalg::eigen::generalized_eigen_complex(a, b, rank_tol, tol)?;
        let values: Vec<Self> = pairs.iter().map(|p| p.value).collect();
        let pair = pairs.swap_remove(pick(&values));
        Ok(linalg::eigen::refine_pencil_pair(a, b, pair, 2))
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(v) = s.parse::<f64>() {
            return Ok(Complex64::new(v, 0.0));
        }
        if let Ok(q) = Rational::from_str(s) {
            return Ok(Self::from_rational(&q));
        }
        Complex64::from_str(s).map_err(|_| Error::Parse(format!("not a complex number: `{s}`")))
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerators or denominators: scale through bit lengths.
    let (n, d) = (q.numer(), q.denom());
    let shift = n.bits() as i64 - d.bits() as i64;
    let (n2, d2) = if shift > 0 {
        (n.clone(), d << (shift as usize))
    } else {
        (n << ((-shift) as usize), d.clone())
    };
    let mantissa = Rational::new(n2, d2).to_f64().unwrap_or(0.0);
    mantissa * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&digits).ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let q = Rational::new(numer, denom);
    Some(if neg { -q } else { q })
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
