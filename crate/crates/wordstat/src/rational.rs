//! Rational and integer helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qb(n: BigInt) -> Q {
    Q::from_integer(n)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial with a possibly negative top argument treated as zero.
pub fn binomial_i(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        binomial(n as u64, k as u64)
    }
}

/// Parses `p`, `-p`, `p/q` or a decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        if b.is_empty() || !b.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = a.starts_with('-');
        let whole: BigInt = if a.is_empty() || a == "-" || a == "+" {
            BigInt::zero()
        } else {
            a.parse().map_err(|_| bad())?
        };
        let frac: BigInt = b.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), b.len());
        let frac = Q::new(frac, scale);
        let whole = Q::from_integer(whole.abs());
        let v = whole + frac;
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Formats as `p` or `p/q`.
pub fn fmt_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both parts down until they fit.
            let bits = x.numer().bits().max(x.denom().bits());
            let shift = bits.saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (x.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Rescales a vector to coprime integers with a positive leading entry.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    let den = common_denominator(v.iter());
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * qb(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| qb(x / &g * &sign)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(fmt_rational(&q(-2, 4)), "-1/2");
        assert_eq!(fmt_rational(&qi(5)), "5");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
        assert_eq!(binomial_i(-1, 0), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn primitive_scaling() {
        let v = primitive(&[q(-1, 2), q(1, 3), qi(0)]);
        assert_eq!(v, vec![qi(3), qi(-2), qi(0)]);
    }
}
