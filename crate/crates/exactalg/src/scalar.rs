//! Exact rational scalars.

use crate::error::{AlgError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Canonical wire form: always `num/den`, denominator positive.
pub fn format(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

/// Short human form: `num` when the denominator is 1.
pub fn format_short(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format(s)
    }
}

/// Accepts `n`, `-n`, `n/d`, `-n/d` with decimal digits only.
pub fn parse(text: &str) -> Result<Scalar> {
    let t = text.trim();
    let bad = |msg: &str| AlgError::Parse { pos: 0, msg: format!("{msg}: `{t}`") };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix('-').unwrap_or(s) } else { s };
        !body.is_empty() && body.len() <= 4096 && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) || !digits(den, false) {
        return Err(bad("invalid rational"));
    }
    let n: BigInt = num.parse().map_err(|_| bad("invalid numerator"))?;
    let d: BigInt = den.parse().map_err(|_| bad("invalid denominator"))?;
    if d.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

pub fn binomial(n: u32, k: u32) -> Scalar {
    if k > n {
        return zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

pub fn factorial(n: u32) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

pub fn sign(positive: bool) -> Scalar {
    if positive {
        one()
    } else {
        -one()
    }
}

pub fn abs(s: &Scalar) -> Scalar {
    s.abs()
}
