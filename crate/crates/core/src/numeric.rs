//! Extended-precision decimal floats for the numeric evaluation layer.

use std::str::FromStr;

use dashu_float::DBig;
use dashu_int::IBig;
use num_rational::BigRational;

use crate::scalar::Scalar;

pub type Float = DBig;

pub const DEFAULT_PRECISION: usize = 30;
pub const PRECISION_ENV: &str = "TROPKP_PRECISION";

/// Working precision in decimal digits: `TROPKP_PRECISION` if it parses to
/// at least 16, else the default.
pub fn precision() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&p| p >= 16)
        .unwrap_or(DEFAULT_PRECISION)
}

fn big_int(n: &num_bigint::BigInt, prec: usize) -> Float {
    let i = IBig::from_str(&n.to_string()).expect("decimal integer string");
    Float::from(i).with_precision(prec).value()
}

pub fn from_rational(q: &Scalar, prec: usize) -> Float {
    big_int(q.numer(), prec) / big_int(q.denom(), prec)
}

/// Exact conversion of a finite `f64` (NaN and infinities map to zero).
pub fn from_f64(x: f64, prec: usize) -> Float {
    BigRational::from_float(x).map_or_else(|| zero(prec), |q| from_rational(&q, prec))
}

pub fn to_f64(x: &Float) -> f64 {
    x.to_f64().value()
}

pub fn zero(prec: usize) -> Float {
    Float::ZERO.with_precision(prec).value()
}

pub fn from_i64(n: i64, prec: usize) -> Float {
    Float::from(n).with_precision(prec).value()
}

pub fn abs(x: &Float) -> Float {
    if *x < Float::ZERO {
        -x.clone()
    } else {
        x.clone()
    }
}
