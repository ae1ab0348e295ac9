//! Numeric backends: exact arbitrary-precision rationals and `f64`.
//!
//! Every classification decision goes through [`NumericConfig`], which compares
//! scalars exactly for rationals and within `eps` for floats. Entropies are
//! always computed in `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_TENSOR_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "rational" => Ok(Mode::Exact),
            "float" | "floating" => Ok(Mode::Float),
            other => Err(format!("unknown numeric mode `{other}` (expected exact|float)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Comparison tolerance and size limits shared by all operations.
///
/// `mode` records which backend a caller selected; the generic operations
/// themselves only read `eps` (ignored for exact scalars) and `tensor_cap`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericConfig {
    pub mode: Mode,
    pub eps: f64,
    pub tensor_cap: usize,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            mode: Mode::Exact,
            eps: DEFAULT_EPS,
            tensor_cap: DEFAULT_TENSOR_CAP,
        }
    }
}

impl NumericConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn float() -> Self {
        NumericConfig {
            mode: Mode::Float,
            ..Self::default()
        }
    }

    /// Returns `None` unless `eps` is finite and strictly positive.
    pub fn with_eps(self, eps: f64) -> Option<Self> {
        (eps.is_finite() && eps > 0.0).then_some(NumericConfig { eps, ..self })
    }

    pub fn with_tensor_cap(self, tensor_cap: usize) -> Self {
        NumericConfig { tensor_cap, ..self }
    }

    pub fn cmp<S: Scalar>(&self, a: &S, b: &S) -> Ordering {
        if S::EXACT {
            a.partial_cmp(b).unwrap_or(Ordering::Equal)
        } else {
            let d = (a.clone() - b.clone()).to_f64();
            if d.abs() <= self.eps {
                Ordering::Equal
            } else if d < 0.0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
    }

    pub fn lt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Less
    }

    pub fn le<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) != Ordering::Greater
    }

    pub fn gt<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Greater
    }

    pub fn ge<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) != Ordering::Less
    }

    pub fn eq<S: Scalar>(&self, a: &S, b: &S) -> bool {
        self.cmp(a, b) == Ordering::Equal
    }

    pub fn is_positive<S: Scalar>(&self, a: &S) -> bool {
        self.gt(a, &S::zero())
    }
}

/// A field element usable as a Schmidt coefficient.
pub trait Scalar: Signed + Clone + fmt::Debug + PartialOrd + Send + Sync + 'static {
    /// True when arithmetic and comparisons are exact.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts a float. Exact scalars take the shortest decimal that
    /// round-trips, so `0.4` becomes `2/5` rather than its binary expansion.
    fn from_f64(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Parses `"p/q"`, an integer, or a decimal literal (optionally with exponent).
    fn parse_str(s: &str) -> Option<Self>;

    /// `"p/q"` strings for exact scalars, JSON numbers otherwise.
    fn to_json(&self) -> serde_json::Value;

    /// Smallest multiple of `1/den` not below `self`.
    fn ceil_to(&self, den: i64) -> Self;

    fn from_usize(n: usize) -> Self {
        Self::from_ratio(n as i64, 1)
    }

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        // Display for f64 never uses exponent notation and is round-trip shortest.
        parse_decimal(&x.to_string())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    None
                } else {
                    Some(Rational::new(p, q))
                }
            }
            None => parse_decimal(s),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn ceil_to(&self, den: i64) -> Self {
        let d = Rational::from_integer(BigInt::from(den));
        (self * &d).ceil() / d
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_str(s: &str) -> Option<Self> {
        let s = s.trim();
        let v = match s.split_once('/') {
            Some((p, q)) => {
                let q: f64 = q.trim().parse().ok()?;
                if q == 0.0 {
                    return None;
                }
                p.trim().parse::<f64>().ok()? / q
            }
            None => s.parse().ok()?,
        };
        v.is_finite().then_some(v)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn ceil_to(&self, den: i64) -> Self {
        (self * den as f64).ceil() / den as f64
    }
}

/// Exact value of a decimal literal such as `-0.255`, `12`, `1.5e-3`.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

pub(crate) fn max_in<S: Scalar>(xs: impl IntoIterator<Item = S>) -> Option<S> {
    xs.into_iter().reduce(S::max_of)
}

pub(crate) fn min_in<S: Scalar>(xs: impl IntoIterator<Item = S>) -> Option<S> {
    xs.into_iter().reduce(S::min_of)
}

pub(crate) fn sum<S: Scalar>(xs: impl IntoIterator<Item = S>) -> S {
    xs.into_iter().fold(S::zero(), |acc, x| acc + x)
}
