//! Helpers around [`BigRational`]; the type itself comes from `num-rational`
//! and is always kept in lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn from_bigint(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}

/// `x` lies in (1/2)Z.
pub fn is_half_integer_or_integer(x: &BigRational) -> bool {
    x.denom().is_one() || *x.denom() == BigInt::from(2)
}

/// `x` lies in 1/2 + Z.
pub fn is_strict_half_integer(x: &BigRational) -> bool {
    *x.denom() == BigInt::from(2)
}

pub fn to_i64(x: &BigRational) -> Option<i64> {
    if is_integer(x) {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {num:?} in {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {den:?} in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn lcm_denominators<'a, I: IntoIterator<Item = &'a BigRational>>(xs: I) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(x: &BigRational) -> BigRational {
    x.abs()
}

/// Squarefree decomposition of a nonzero integer: `n = sign * s^2 * core`
/// with `core > 0` squarefree. Returns `(s, signed core)`; trial division, so
/// callers keep inputs small.
pub fn squarefree_split(n: &BigInt) -> Result<(BigInt, i64)> {
    if n.is_zero() {
        return Err(Error::InvalidField("squarefree part of zero".into()));
    }
    let sign: i64 = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1u64 << 40);
    while &p * &p <= m {
        if p > limit {
            return Err(Error::Limits(format!(
                "cannot factor {n} for squarefree part"
            )));
        }
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    core *= m;
    let core = core
        .to_i64()
        .ok_or_else(|| Error::Limits(format!("squarefree core of {n} too large")))?;
    Ok((square, sign * core))
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    squarefree_split(&BigInt::from(d))
        .map(|(s, _)| s.is_one())
        .unwrap_or(false)
}

pub fn prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    prime_factors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p - 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("5/13").unwrap(), rat(5, 13));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), rat(-2, 3));
        assert_eq!(format_rational(&rat(10, 5)), "2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(
            squarefree_split(&BigInt::from(-36)).unwrap(),
            (BigInt::from(6), -1)
        );
        assert_eq!(
            squarefree_split(&BigInt::from(72)).unwrap(),
            (BigInt::from(6), 2)
        );
        assert_eq!(
            squarefree_split(&BigInt::from(-11)).unwrap(),
            (BigInt::from(1), -11)
        );
        assert!(is_squarefree(-3));
        assert!(!is_squarefree(12));
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(18), 6);
        assert_eq!(euler_phi(1), 1);
    }
}
