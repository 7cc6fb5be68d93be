//! Rational scalars and outward-rounded real powers.
//!
//! Coefficients, coordinates and reported constants are exact rationals. Bound
//! formulas with fractional exponents are evaluated as rational upper (or
//! lower) approximations so that any inequality asserted against them stays
//! sound: a bound may come out slightly looser, never tighter.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"` with optional surrounding whitespace.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = |message: &str| Error::Parse {
        position: 0,
        message: format!("{message}: {t:?}"),
    };
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let numerator: BigInt = num.parse().map_err(|_| err("invalid rational numerator"))?;
    let denominator: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err("invalid rational denominator"))?,
        None => BigInt::one(),
    };
    if denominator.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numerator, denominator))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

pub fn pow_int(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

fn bit_len(n: &BigInt) -> u64 {
    n.bits()
}

/// `q`-th root of a non-negative rational rounded to a dyadic rational.
/// `upward` selects the rounding direction.
fn nth_root_rounded(y: &Rational, q: u32, upward: bool) -> Rational {
    debug_assert!(!y.is_negative());
    if y.is_zero() || q == 1 {
        return y.clone();
    }
    let a = y.numer().clone();
    let b = y.denom().clone();
    let precision = 64 + bit_len(&b);
    // y^(1/q) = (a * b^(q-1))^(1/q) / b
    let scaled = a * num_traits::pow(b.clone(), (q - 1) as usize) << (precision * q as u64);
    let mut r = scaled.nth_root(q);
    if upward && num_traits::pow(r.clone(), q as usize) < scaled {
        r += 1;
    }
    Rational::new(r, b << precision)
}

/// Rational `r >= x^e` within about 2^-64 relative slack (x > 0, or x = 0 with e >= 0).
pub fn pow_upper(x: &Rational, e: &Rational) -> Result<Rational> {
    pow_rounded(x, e, true)
}

/// Rational `r <= x^e` within about 2^-64 relative slack.
pub fn pow_lower(x: &Rational, e: &Rational) -> Result<Rational> {
    pow_rounded(x, e, false)
}

fn pow_rounded(x: &Rational, e: &Rational, upward: bool) -> Result<Rational> {
    if x.is_negative() {
        return Err(Error::DomainError(format!("real power of negative base {x}")));
    }
    if e.is_zero() {
        return Ok(Rational::one());
    }
    if x.is_zero() {
        return if e.is_positive() {
            Ok(Rational::zero())
        } else {
            Err(Error::DomainError("zero raised to a negative power".into()))
        };
    }
    let p = e.numer().to_i64().ok_or_else(|| Error::DomainError("exponent too large".into()))?;
    let q = e.denom().to_u32().ok_or_else(|| Error::DomainError("exponent too large".into()))?;
    let base = pow_int(x, p.unsigned_abs() as u32);
    if p > 0 {
        Ok(nth_root_rounded(&base, q, upward))
    } else {
        // x^-e = 1 / x^e, so rounding flips direction.
        let denom = nth_root_rounded(&base, q, !upward);
        if denom.is_zero() {
            return Err(Error::DomainError("power underflow".into()));
        }
        Ok(denom.recip())
    }
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(x: &Rational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Smallest integer `i >= 0` with `2^i >= x`.
pub fn ceil_log2(x: &Rational) -> u32 {
    let mut i = 0;
    let mut p = Rational::one();
    while &p < x {
        p *= rat(2);
        i += 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), rat(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn exact_roots_are_exact() {
        assert_eq!(pow_upper(&rat(100), &ratio(1, 2)).unwrap(), rat(10));
        assert_eq!(pow_lower(&rat(27), &ratio(2, 3)).unwrap(), rat(9));
        assert_eq!(pow_upper(&rat(4), &ratio(-1, 2)).unwrap(), ratio(1, 2));
    }

    #[test]
    fn sqrt_two_brackets() {
        let up = pow_upper(&rat(2), &ratio(1, 2)).unwrap();
        let lo = pow_lower(&rat(2), &ratio(1, 2)).unwrap();
        assert!(&up * &up >= rat(2));
        assert!(&lo * &lo <= rat(2));
        let gap = to_f64(&(up - lo));
        assert!(gap > 0.0 && gap < 1e-18);
    }

    #[test]
    fn small_base_relative_slack() {
        let x = ratio(1, 1000);
        let up = pow_upper(&x, &ratio(1, 3)).unwrap();
        assert!(pow_int(&up, 3) >= x);
        assert!((to_f64(&up) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(&rat(1)), 0);
        assert_eq!(ceil_log2(&rat(16)), 4);
        assert_eq!(ceil_log2(&rat(17)), 5);
        assert_eq!(ceil_log2(&ratio(3, 2)), 1);
    }
}
