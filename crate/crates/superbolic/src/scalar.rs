//! Scalar backends for supernumber coefficients.
//!
//! Two modes are supported end to end: exact rationals for algebraic
//! identities and `f64` for transcendental lifts. `Complex64` is carried as a
//! third backend for the upper half-plane map; it supports arithmetic but no
//! analytic lifts.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::series;

/// Tags for the supported analytic-function lifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticTag {
    Sqrt,
    Exp,
    Ln,
    Cosh,
    Sinh,
    Tanh,
    Cos,
    Sin,
    Arccosh,
    Arcsinh,
    Arctanh,
    Arccos,
}

impl AnalyticTag {
    pub fn name(self) -> &'static str {
        use AnalyticTag::*;
        match self {
            Sqrt => "sqrt",
            Exp => "exp",
            Ln => "ln",
            Cosh => "cosh",
            Sinh => "sinh",
            Tanh => "tanh",
            Cos => "cos",
            Sin => "sin",
            Arccosh => "arccosh",
            Arcsinh => "arcsinh",
            Arctanh => "arctanh",
            Arccos => "arccos",
        }
    }

    pub const ALL: [AnalyticTag; 12] = [
        AnalyticTag::Sqrt,
        AnalyticTag::Exp,
        AnalyticTag::Ln,
        AnalyticTag::Cosh,
        AnalyticTag::Sinh,
        AnalyticTag::Tanh,
        AnalyticTag::Cos,
        AnalyticTag::Sin,
        AnalyticTag::Arccosh,
        AnalyticTag::Arcsinh,
        AnalyticTag::Arctanh,
        AnalyticTag::Arccos,
    ];

    /// These lifts require an even soul so the value stays in the even part.
    pub fn requires_even(self) -> bool {
        matches!(self, AnalyticTag::Sqrt | AnalyticTag::Arccosh)
    }
}

impl std::str::FromStr for AnalyticTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        AnalyticTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::OptionError(format!("unknown analytic tag `{s}`")))
    }
}

/// Coefficient field interface used by [`crate::grassmann::Supernumber`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True when arithmetic is exact (rational mode).
    const EXACT: bool;
    /// Human-readable backend name.
    const KIND: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division; `Err(NonInvertible)` when `rhs` is zero.
    fn div(&self, rhs: &Self) -> Result<Self>;

    /// Magnitude as `f64`, used for residual bookkeeping.
    fn abs_f64(&self) -> f64;
    /// Approximate value as `f64` (real part for complex scalars).
    fn approx_f64(&self) -> f64;
    /// Exact comparison against zero where the scalars are ordered.
    fn cmp_zero(&self) -> Option<Ordering>;

    /// Taylor coefficients `f^(k)(body)/k!` for `k = 0..=order`.
    fn taylor(tag: AnalyticTag, body: &Self, order: usize) -> Result<Vec<Self>>;

    fn parse(text: &str) -> Result<Self>;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const KIND: &'static str = "float64";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            return Err(Error::NonInvertible);
        }
        Ok(self / rhs)
    }
    fn abs_f64(&self) -> f64 {
        self.abs()
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
    fn cmp_zero(&self) -> Option<Ordering> {
        self.partial_cmp(&0.0)
    }
    fn taylor(tag: AnalyticTag, body: &Self, order: usize) -> Result<Vec<Self>> {
        series::taylor_f64(tag, *body, order)
    }
    fn parse(text: &str) -> Result<Self> {
        text.parse::<f64>().map_err(|e| Error::ParseError {
            pos: 0,
            msg: format!("invalid float literal `{text}`: {e}"),
        })
    }
    fn to_json(&self) -> Value {
        json!(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::JsonError(format!("non-finite number {n}"))),
            Value::String(s) => Self::parse(s),
            other => Err(Error::JsonError(format!(
                "expected a number for a float coefficient, got {other}"
            ))),
        }
    }
}

/// Exact square root of a rational if one exists.
fn rational_sqrt_exact(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer();
    let den = x.denom();
    let rn = num.sqrt();
    let rd = den.sqrt();
    if &(&rn * &rn) == num && &(&rd * &rd) == den {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let fail = |msg: String| Error::ParseError { pos: 0, msg };
    let s = text.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|e| fail(format!("bad numerator `{n}`: {e}")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|e| fail(format!("bad denominator `{d}`: {e}")))?;
        if den.is_zero() {
            return Err(fail(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(num, den));
    }
    // Decimal form with optional exponent: [-]digits[.digits][e[-]digits]
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e
                .parse()
                .map_err(|err| fail(format!("bad exponent `{e}`: {err}")))?;
            (m, exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail(format!("empty numeric literal `{s}`")));
    }
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let num: BigInt = digits
        .parse()
        .map_err(|e| fail(format!("bad numeric literal `{s}`: {e}")))?;
    let shift = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::from_integer(num * ten.pow(shift as u32))
    } else {
        BigRational::new(num, ten.pow((-shift) as u32))
    };
    Ok(value)
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    const KIND: &'static str = "rational";

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(num.into(), den.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::NonInvertible);
        }
        Ok(self / rhs)
    }
    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn cmp_zero(&self) -> Option<Ordering> {
        Some(if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        })
    }
    fn taylor(tag: AnalyticTag, body: &Self, order: usize) -> Result<Vec<Self>> {
        match tag {
            AnalyticTag::Sqrt => {
                if !body.is_positive() {
                    return Err(Error::DomainError {
                        tag: "sqrt",
                        reason: format!("body {body} is not positive"),
                    });
                }
                let root = rational_sqrt_exact(body).ok_or(Error::AnalyticUnsupported {
                    tag: "sqrt",
                    kind: "rational (body is not an exact square)",
                })?;
                // c_k = C(1/2, k) * sqrt(b) / b^k via the ratio (3 - 2k) / (2k b)
                let mut out = Vec::with_capacity(order + 1);
                out.push(root);
                for k in 1..=order as i64 {
                    let prev = out.last().unwrap().clone();
                    let ratio = BigRational::new((3 - 2 * k).into(), (2 * k).into());
                    out.push(&prev * ratio / body);
                }
                Ok(out)
            }
            other => Err(Error::AnalyticUnsupported {
                tag: other.name(),
                kind: Self::KIND,
            }),
        }
    }
    fn parse(text: &str) -> Result<Self> {
        parse_rational(text)
    }
    fn to_json(&self) -> Value {
        if self.denom().is_one() {
            json!(self.numer().to_string())
        } else {
            json!(format!("{}/{}", self.numer(), self.denom()))
        }
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Self::from_i64(i))
                } else {
                    Err(Error::JsonError(format!(
                        "non-integer number {n} in rational mode; use a string like \"5/2\""
                    )))
                }
            }
            Value::String(s) => Self::parse(s),
            other => Err(Error::JsonError(format!(
                "expected an integer or string for a rational coefficient, got {other}"
            ))),
        }
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const KIND: &'static str = "complex64";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        if Scalar::is_zero(rhs) {
            return Err(Error::NonInvertible);
        }
        Ok(self / rhs)
    }
    fn abs_f64(&self) -> f64 {
        self.norm()
    }
    fn approx_f64(&self) -> f64 {
        self.re
    }
    fn cmp_zero(&self) -> Option<Ordering> {
        None
    }
    fn taylor(tag: AnalyticTag, _body: &Self, _order: usize) -> Result<Vec<Self>> {
        Err(Error::AnalyticUnsupported {
            tag: tag.name(),
            kind: Self::KIND,
        })
    }
    fn parse(_text: &str) -> Result<Self> {
        Err(Error::ParseError {
            pos: 0,
            msg: "complex coefficients are output-only".into(),
        })
    }
    fn to_json(&self) -> Value {
        json!({ "re": self.re, "im": self.im })
    }
    fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::JsonError(format!("expected {{\"re\",\"im\"}}, got {v}")))?;
        let get = |key: &str| -> Result<f64> {
            obj.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::JsonError(format!("missing/invalid `{key}` in {v}")))
        };
        Ok(Complex64::new(get("re")?, get("im")?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(
            BigRational::parse("3/4").unwrap(),
            BigRational::from_ratio(3, 4)
        );
        assert_eq!(
            BigRational::parse("2.5").unwrap(),
            BigRational::from_ratio(5, 2)
        );
        assert_eq!(
            BigRational::parse("-0.125").unwrap(),
            BigRational::from_ratio(-1, 8)
        );
        assert_eq!(
            BigRational::parse("1e3").unwrap(),
            BigRational::from_i64(1000)
        );
        assert_eq!(
            BigRational::parse("2.5e-2").unwrap(),
            BigRational::from_ratio(1, 40)
        );
        assert!(BigRational::parse("1/0").is_err());
    }

    #[test]
    fn rational_sqrt() {
        let c = BigRational::taylor(AnalyticTag::Sqrt, &BigRational::from_ratio(9, 4), 2).unwrap();
        assert_eq!(c[0], BigRational::from_ratio(3, 2));
        // c1 = 1/(2 sqrt(b)) = 1/3
        assert_eq!(c[1], BigRational::from_ratio(1, 3));
        assert!(matches!(
            BigRational::taylor(AnalyticTag::Sqrt, &BigRational::from_i64(2), 2),
            Err(Error::AnalyticUnsupported { .. })
        ));
        assert!(matches!(
            BigRational::taylor(AnalyticTag::Exp, &<BigRational as Scalar>::one(), 2),
            Err(Error::AnalyticUnsupported { .. })
        ));
    }
}
