//! Constant expressions over `pi` and `e^{pi sqrt(m) / D}` with rigorous
//! enclosures.

use std::cell::Cell;
use std::fmt;

use num_rational::BigRational;

use super::interval::DyadicInterval;
use super::rational::format_rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstExpr {
    Rational(BigRational),
    Pi,
    /// `sqrt(m)` for a positive integer `m`.
    Sqrt(u64),
    /// `e^{pi sqrt(m) / den}`.
    ExpPiSqrt {
        m: u64,
        den: u64,
    },
    Exp(Box<ConstExpr>),
    Sinh(Box<ConstExpr>),
    Cosh(Box<ConstExpr>),
    Add(Box<ConstExpr>, Box<ConstExpr>),
    Sub(Box<ConstExpr>, Box<ConstExpr>),
    Mul(Box<ConstExpr>, Box<ConstExpr>),
    Div(Box<ConstExpr>, Box<ConstExpr>),
    Neg(Box<ConstExpr>),
    Pow(Box<ConstExpr>, i64),
}

thread_local! {
    static EVALUATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Number of interval evaluations performed on this thread so far.
pub fn evaluation_count() -> u64 {
    EVALUATIONS.with(|c| c.get())
}

pub(crate) fn note_evaluation() {
    EVALUATIONS.with(|c| c.set(c.get() + 1));
}

impl ConstExpr {
    pub fn rational(x: BigRational) -> Self {
        ConstExpr::Rational(x)
    }

    pub fn int(n: i64) -> Self {
        ConstExpr::Rational(BigRational::from_integer(n.into()))
    }

    pub fn add(self, o: ConstExpr) -> Self {
        ConstExpr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: ConstExpr) -> Self {
        ConstExpr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: ConstExpr) -> Self {
        ConstExpr::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: ConstExpr) -> Self {
        ConstExpr::Div(Box::new(self), Box::new(o))
    }

    pub fn pow(self, e: i64) -> Self {
        ConstExpr::Pow(Box::new(self), e)
    }

    pub fn exp(self) -> Self {
        ConstExpr::Exp(Box::new(self))
    }

    pub fn sinh(self) -> Self {
        ConstExpr::Sinh(Box::new(self))
    }

    fn depth(&self) -> u64 {
        use ConstExpr::*;
        match self {
            Rational(_) | Pi | Sqrt(_) | ExpPiSqrt { .. } => 1,
            Exp(a) | Sinh(a) | Cosh(a) | Neg(a) | Pow(a, _) => 1 + a.depth(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn eval(&self, w: u64) -> Option<DyadicInterval> {
        use ConstExpr::*;
        Some(match self {
            Rational(x) => DyadicInterval::from_rational(x, w),
            Pi => DyadicInterval::pi(w),
            Sqrt(m) => DyadicInterval::from_int(*m as i64).sqrt(w)?,
            ExpPiSqrt { m, den } => {
                let arg = DyadicInterval::pi(w + 8)
                    .mul(&DyadicInterval::from_int(*m as i64).sqrt(w + 8)?, w + 8)
                    .div(&DyadicInterval::from_int(*den as i64), w + 8)?;
                arg.exp(w)
            }
            Exp(a) => a.eval(w)?.exp(w),
            Sinh(a) => a.eval(w)?.sinh(w),
            Cosh(a) => a.eval(w)?.cosh(w),
            Add(a, b) => a.eval(w)?.add(&b.eval(w)?, w),
            Sub(a, b) => a.eval(w)?.sub(&b.eval(w)?, w),
            Mul(a, b) => a.eval(w)?.mul(&b.eval(w)?, w),
            Div(a, b) => a.eval(w)?.div(&b.eval(w)?, w)?,
            Neg(a) => a.eval(w)?.neg(),
            Pow(a, e) => a.eval(w)?.powi(*e, w)?,
        })
    }
}

/// Enclosure of `expr` at `precision_bits`, escalating internal working
/// precision when a denominator enclosure still straddles zero.
pub fn eval_enclosure(expr: &ConstExpr, precision_bits: u64, cap: u64) -> Result<DyadicInterval> {
    if precision_bits > cap {
        return Err(Error::PrecisionCap {
            requested: precision_bits,
            cap,
        });
    }
    note_evaluation();
    let mut w = precision_bits + 4 * expr.depth() + 16;
    loop {
        if let Some(v) = expr.eval(w) {
            return Ok(v);
        }
        w *= 2;
        if w > 4 * cap.max(64) {
            return Err(Error::PrecisionCap { requested: w, cap });
        }
    }
}

/// Successive enclosures of one expression, intersected so the reported
/// interval only ever shrinks.
pub struct Refiner<'a> {
    expr: &'a ConstExpr,
    cap: u64,
    current: Option<DyadicInterval>,
}

impl<'a> Refiner<'a> {
    pub fn new(expr: &'a ConstExpr, cap: u64) -> Self {
        Refiner {
            expr,
            cap,
            current: None,
        }
    }

    pub fn refine(&mut self, precision_bits: u64) -> Result<DyadicInterval> {
        let fresh = eval_enclosure(self.expr, precision_bits, self.cap)?;
        let next = match &self.current {
            Some(old) => old.intersect(&fresh).ok_or_else(|| {
                Error::RootIsolation("disjoint enclosures of one constant".into())
            })?,
            None => fresh,
        };
        self.current = Some(next.clone());
        Ok(next)
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ConstExpr::*;
        match self {
            Rational(x) => write!(f, "{}", format_rational(x)),
            Pi => write!(f, "pi"),
            Sqrt(m) => write!(f, "sqrt({m})"),
            ExpPiSqrt { m, den } => match (m, den) {
                (1, 1) => write!(f, "e^pi"),
                (1, _) => write!(f, "e^(pi/{den})"),
                (_, 1) => write!(f, "e^(pi*sqrt({m}))"),
                _ => write!(f, "e^(pi*sqrt({m})/{den})"),
            },
            Exp(a) => write!(f, "exp({a})"),
            Sinh(a) => write!(f, "sinh({a})"),
            Cosh(a) => write!(f, "cosh({a})"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "{a}*{b}"),
            Div(a, b) => write!(f, "({a})/({b})"),
            Neg(a) => write!(f, "-({a})"),
            Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937510";

    fn pi_rational() -> BigRational {
        let digits: String = PI_50.chars().filter(|c| *c != '.').collect();
        BigRational::new(
            digits.parse().unwrap(),
            num_bigint::BigInt::from(10).pow(50),
        )
    }

    #[test]
    fn pi_enclosure() {
        let v = eval_enclosure(&ConstExpr::Pi, 64, 1 << 16).unwrap();
        let err = rat(1, 1_000_000_000_000_000_000);
        assert!(v.overlaps(&DyadicInterval::new(
            DyadicInterval::from_rational(&(pi_rational() - &err), 200)
                .lo()
                .clone(),
            DyadicInterval::from_rational(&(pi_rational() + &err), 200)
                .hi()
                .clone()
        )));
        assert!(v.width_log2().unwrap() <= -60);
    }

    #[test]
    fn self_difference_contains_zero() {
        let e = ConstExpr::ExpPiSqrt { m: 1, den: 1 };
        let v = eval_enclosure(&e.clone().sub(e), 32, 1 << 16).unwrap();
        assert!(v.contains_zero());
    }

    #[test]
    fn sinh_ratio() {
        let expr = ConstExpr::Pi
            .sinh()
            .div(ConstExpr::int(39).mul(ConstExpr::Pi.mul(ConstExpr::int(3)).sinh()));
        let v = eval_enclosure(&expr, 128, 1 << 16).unwrap();
        // independent value: mpmath sinh(pi)/(39*sinh(3*pi)) at 40 digits
        let reference = BigRational::new(
            "4779372824334937427481209458441859917783".parse().unwrap(),
            num_bigint::BigInt::from(10).pow(44),
        );
        assert!(num_traits::Signed::abs(&(v.mid().to_rational() - reference)) < rat(1, 10).pow(40));
        assert!(v.width_log2().unwrap() < -120);
    }

    #[test]
    fn rational_expressions_are_sound() {
        let x = rat(22, 7);
        let expr = ConstExpr::rational(x.clone())
            .mul(ConstExpr::rational(rat(-3, 11)))
            .add(ConstExpr::int(1));
        let exact = x * rat(-3, 11) + int(1);
        for prec in [8, 32, 100] {
            assert!(eval_enclosure(&expr, prec, 1 << 16)
                .unwrap()
                .contains_rational(&exact));
        }
    }

    #[test]
    fn cap_and_refinement() {
        assert!(matches!(
            eval_enclosure(&ConstExpr::Pi, 1 << 17, 1 << 16),
            Err(Error::PrecisionCap { .. })
        ));
        let mut r = Refiner::new(&ConstExpr::Pi, 1 << 16);
        let a = r.refine(32).unwrap();
        let b = r.refine(64).unwrap();
        assert!(b.is_subset_of(&a));
    }
}
