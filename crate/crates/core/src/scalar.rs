//! Exact rational scalars and logarithms of positive rationals.
//!
//! Every exact quantity in this crate is a [`Scalar`] (an arbitrary-precision
//! rational). Quantities that live in the log domain, such as the entries of
//! the limit Riemann matrix or the Abel map, are stored as [`LogRational`]:
//! the value `log(q)` is kept as its argument `q`, so sums of logs become
//! products and integer (or exact half-integer) multiples become powers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Scalar::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let negative = ip.starts_with('-');
        let ip_abs = ip.trim_start_matches(['-', '+']);
        let whole = if ip_abs.is_empty() { BigInt::zero() } else { BigInt::from_str(ip_abs).map_err(|_| err())? };
        let frac = BigInt::from_str(fp).map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let mag = Scalar::new(whole * &scale + frac, scale);
        return Ok(if negative { -mag } else { mag });
    }
    BigInt::from_str(t).map(Scalar::from_integer).map_err(|_| err())
}

/// Canonical string form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(q: &Scalar) -> String {
    q.to_string()
}

pub fn to_f64(q: &Scalar) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = q.numer().to_string();
        let d = q.denom().to_string();
        n.parse::<f64>().unwrap_or(f64::NAN) / d.parse::<f64>().unwrap_or(f64::NAN)
    })
}

/// Integer power with a possibly negative exponent. Panics on `0^negative`.
pub fn powi(q: &Scalar, e: i64) -> Scalar {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        assert!(!q.is_zero(), "zero raised to a negative power");
        num_traits::pow(q.recip(), e.unsigned_abs() as usize)
    }
}

fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return exact_int_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact `k`-th root of a rational, if it exists.
pub fn exact_root(q: &Scalar, k: u32) -> Option<Scalar> {
    assert!(k >= 1);
    let n = exact_int_root(q.numer(), k)?;
    let d = exact_int_root(q.denom(), k)?;
    Some(Scalar::new(n, d))
}

/// `q^(num/den)` when the result is rational.
pub fn pow_frac(q: &Scalar, num: i64, den: u32) -> Option<Scalar> {
    assert!(den >= 1);
    let g = num_integer::gcd(num.unsigned_abs(), den as u64) as i64;
    let (num, den) = if g > 1 { (num / g, den / g as u32) } else { (num, den) };
    if q.is_zero() {
        return if num > 0 { Some(Scalar::zero()) } else { None };
    }
    let root = exact_root(q, den)?;
    Some(powi(&root, num))
}

/// The value `log(arg)` for a positive rational `arg`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogRational {
    arg: Scalar,
}

impl LogRational {
    pub fn new(arg: Scalar) -> Result<Self> {
        if !arg.is_positive() {
            return Err(Error::NonPositiveLogArgument);
        }
        Ok(Self { arg })
    }

    /// `log(1) = 0`.
    pub fn zero() -> Self {
        Self { arg: Scalar::one() }
    }

    /// The argument `q`, i.e. `exp` of the represented value.
    pub fn exp(&self) -> &Scalar {
        &self.arg
    }

    pub fn is_zero(&self) -> bool {
        self.arg.is_one()
    }

    /// `log(a) + log(b) = log(ab)`.
    pub fn add(&self, other: &Self) -> Self {
        Self { arg: &self.arg * &other.arg }
    }

    pub fn neg(&self) -> Self {
        Self { arg: self.arg.recip() }
    }

    /// `m * log(q) = log(q^m)`.
    pub fn scale(&self, m: i64) -> Self {
        Self { arg: powi(&self.arg, m) }
    }

    /// `exp((num/den) * log(q))`, if it is rational.
    pub fn exp_scaled(&self, num: i64, den: u32) -> Option<Scalar> {
        pow_frac(&self.arg, num, den)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.arg).ln()
    }
}

impl fmt::Debug for LogRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log({})", self.arg)
    }
}

impl fmt::Display for LogRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log({})", self.arg)
    }
}

/// A logarithm of a nonzero rational whose sign is carried separately:
/// `log|q|` plus a flag recording `q < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedLog {
    pub log: LogRational,
    pub negative: bool,
}

impl SignedLog {
    pub fn from_value(q: &Scalar) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::NonPositiveLogArgument);
        }
        Ok(Self { log: LogRational::new(q.abs())?, negative: q.is_negative() })
    }

    /// The signed rational `q` this logarithm was taken of.
    pub fn value(&self) -> Scalar {
        if self.negative {
            -self.log.exp().clone()
        } else {
            self.log.exp().clone()
        }
    }
}
