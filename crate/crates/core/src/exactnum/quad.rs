//! Elements `a + b*sqrt(d)` of a quadratic field.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, is_squarefree};
use crate::error::{Error, Result};

/// `a + b*sqrt(d)` with `d` squarefree and `d != 0, 1`.
///
/// Rationals are carried with `b = 0` in whatever field context they are used
/// in. Arithmetic requires matching `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: BigRational,
    b: BigRational,
    d: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl QuadElem {
    pub fn new(a: BigRational, b: BigRational, d: i64) -> Result<Self> {
        check_field(d)?;
        Ok(QuadElem { a, b, d })
    }

    pub fn rational(a: BigRational, d: i64) -> Result<Self> {
        Self::new(a, BigRational::zero(), d)
    }

    pub fn from_int(n: i64, d: i64) -> Result<Self> {
        Self::rational(BigRational::from_integer(BigInt::from(n)), d)
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_d(d: i64) -> Result<Self> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Same value, moved to another field context. Only valid for rationals
    /// or when `d` already matches.
    pub fn rehome(&self, d: i64) -> Result<Self> {
        if self.d == d {
            return Ok(self.clone());
        }
        if !self.is_rational() {
            return Err(Error::FieldMismatch {
                left: self.d,
                right: d,
            });
        }
        Self::rational(self.a.clone(), d)
    }

    pub fn conjugate(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    /// `x * conjugate(x) = a^2 - d b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(self.d.into()) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            return Err(Error::FieldMismatch {
                left: self.d,
                right: other.d,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QuadElem {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(QuadElem {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d,
        })
    }

    pub fn neg(&self) -> Self {
        QuadElem {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = BigRational::from_integer(self.d.into());
        Ok(QuadElem {
            a: &self.a * &other.a + d * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d,
        })
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QuadElem {
            a: &self.a * k,
            b: &self.b * k,
            d: self.d,
        }
    }

    pub fn add_rational(&self, k: &BigRational) -> Self {
        QuadElem {
            a: &self.a + k,
            b: self.b.clone(),
            d: self.d,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            // d is squarefree and != 1, so the norm vanishes only at zero
            return Err(Error::DivisionByZero);
        }
        Ok(self.conjugate().scale(&n.recip()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QuadElem::from_int(1, self.d)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Real embedding is available: `d > 0` or `b = 0`.
    pub fn is_real(&self) -> bool {
        self.d > 0 || self.b.is_zero()
    }

    /// Algebraic integer test: `a, b` in Z, or both in 1/2 + Z when d = 1 (mod 4).
    pub fn is_algebraic_integer(&self) -> bool {
        let two = BigInt::from(2);
        let int = |x: &BigRational| x.denom().is_one();
        let half = |x: &BigRational| *x.denom() == two;
        if int(&self.a) && int(&self.b) {
            return true;
        }
        self.d.rem_euclid(4) == 1 && half(&self.a) && half(&self.b)
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let r = (self.d.abs() as f64).sqrt();
        if self.d > 0 {
            (a + b * r, 0.0)
        } else {
            (a, b * r)
        }
    }

    /// Sign of the real value; `None` when the value is not real.
    pub fn real_sign(&self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering;
        if self.b.is_zero() {
            return Some(self.a.cmp(&BigRational::zero()));
        }
        if self.d < 0 {
            return None;
        }
        // compare a with -b*sqrt(d) by squaring with sign care
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sa != Ordering::Less && sb != Ordering::Less {
            return Some(Ordering::Greater);
        }
        if sa != Ordering::Greater && sb != Ordering::Greater {
            return Some(Ordering::Less);
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.into());
        // a and b have opposite signs; the larger magnitude decides
        Some(match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        })
    }

    pub fn abs_b(&self) -> BigRational {
        self.b.abs()
    }
}

/// Dispatch form of the field operations.
pub fn quad_arith(op: QuadOp, x: &QuadElem, y: &QuadElem) -> Result<QuadElem> {
    match op {
        QuadOp::Add => x.add(y),
        QuadOp::Sub => x.sub(y),
        QuadOp::Mul => x.mul(y),
        QuadOp::Div => x.div(y),
    }
}

fn check_field(d: i64) -> Result<()> {
    if d == 1 || !is_squarefree(d) {
        return Err(Error::InvalidField(format!(
            "d = {d} must be squarefree and != 1"
        )));
    }
    Ok(())
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", format_rational(&self.a));
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let b = self.b.abs();
        let coeff = if b.is_one() {
            String::new()
        } else {
            format!("{}*", format_rational(&b))
        };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}sqrt({})", self.d)
        } else {
            write!(
                f,
                "{} {sign} {coeff}sqrt({})",
                format_rational(&self.a),
                self.d
            )
        }
    }
}

/// Wire form: rationals as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadElemDoc {
    pub a: String,
    pub b: String,
    pub d: i64,
}

impl From<&QuadElem> for QuadElemDoc {
    fn from(x: &QuadElem) -> Self {
        QuadElemDoc {
            a: format_rational(&x.a),
            b: format_rational(&x.b),
            d: x.d,
        }
    }
}

impl TryFrom<&QuadElemDoc> for QuadElem {
    type Error = Error;
    fn try_from(doc: &QuadElemDoc) -> Result<Self> {
        use super::rational::parse_rational;
        QuadElem::new(parse_rational(&doc.a)?, parse_rational(&doc.b)?, doc.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use proptest::prelude::*;

    fn q(a: BigRational, b: BigRational, d: i64) -> QuadElem {
        QuadElem::new(a, b, d).unwrap()
    }

    #[test]
    fn gaussian_norm() {
        let x = q(int(1), int(1), -1);
        let y = q(int(1), int(-1), -1);
        assert_eq!(
            quad_arith(QuadOp::Mul, &x, &y).unwrap(),
            q(int(2), int(0), -1)
        );
    }

    #[test]
    fn i_squared() {
        let i = QuadElem::sqrt_d(-1).unwrap();
        assert_eq!(i.pow(2).unwrap(), q(int(-1), int(0), -1));
    }

    #[test]
    fn division_multiplies_back() {
        let one = q(int(1), int(0), 5);
        let y = q(int(1), int(1), 5);
        let z = quad_arith(QuadOp::Div, &one, &y).unwrap();
        assert_eq!(z, q(rat(-1, 4), rat(1, 4), 5));
        assert_eq!(z.mul(&y).unwrap(), one);
    }

    #[test]
    fn errors() {
        let x = q(int(1), int(1), -1);
        let z = q(int(0), int(0), -1);
        assert_eq!(x.div(&z), Err(Error::DivisionByZero));
        let y = q(int(1), int(1), 2);
        assert!(matches!(x.add(&y), Err(Error::FieldMismatch { .. })));
        assert!(QuadElem::new(int(0), int(1), 1).is_err());
        assert!(QuadElem::new(int(0), int(1), 8).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(q(int(-2), int(3), -1).conjugate(), q(int(-2), int(-3), -1));
        assert_eq!(q(int(5), int(0), -7).conjugate(), q(int(5), int(0), -7));
        assert_eq!(
            q(rat(1, 2), rat(3, 2), -3).conjugate(),
            q(rat(1, 2), rat(-3, 2), -3)
        );
    }

    #[test]
    fn real_sign_of_real_quadratics() {
        use std::cmp::Ordering::*;
        assert_eq!(q(int(1), int(-1), 2).real_sign(), Some(Less)); // 1 - sqrt2
        assert_eq!(q(int(-1), int(1), 2).real_sign(), Some(Greater));
        assert_eq!(q(int(2), int(-1), 3).real_sign(), Some(Greater));
        assert_eq!(q(int(0), int(1), -1).real_sign(), None);
    }

    fn small_rat() -> impl Strategy<Value = BigRational> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| rat(n, d))
    }

    fn triple() -> impl Strategy<Value = (QuadElem, QuadElem, QuadElem)> {
        prop::sample::select(vec![-1i64, -2, -3, -7, 2, 3, 5, -11]).prop_flat_map(|d| {
            (
                small_rat(),
                small_rat(),
                small_rat(),
                small_rat(),
                small_rat(),
                small_rat(),
            )
                .prop_map(move |(a, b, c, e, f, g)| (q(a, b, d), q(c, e, d), q(f, g, d)))
        })
    }

    proptest! {
        #[test]
        fn field_axioms((x, y, z) in triple()) {
            let d = x.d();
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
            prop_assert_eq!(x.mul(&y.add(&z).unwrap()).unwrap(),
                            x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap());
            if !x.is_zero() {
                prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), QuadElem::from_int(1, d).unwrap());
            }
            let n = x.mul(&x.conjugate()).unwrap();
            prop_assert!(n.b().is_zero());
            prop_assert_eq!(n.a(), &x.norm());
            prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        }
    }
}
