//! Hypergeometric sequences `p(n) u_{n+1} = q(n) u_n`: exact terms, the
//! asymptotic class of the shift quotient, search bounds and the brute-force
//! oracle.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_SCAN_CAP;
use crate::error::{Error, Result};
use crate::exactnum::rational::format_rational;
use crate::polyfield::{IntPoly, QPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Membership,
    Threshold,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Membership => "membership",
            Problem::Threshold => "threshold",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HGInstance {
    pub p: IntPoly,
    pub q: IntPoly,
    pub u0: BigRational,
    pub t: BigRational,
    pub problem: Problem,
}

impl HGInstance {
    pub fn new(
        p: IntPoly,
        q: IntPoly,
        u0: BigRational,
        t: BigRational,
        problem: Problem,
    ) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::InvalidInstance("p and q must be nonzero".into()));
        }
        if let Some(k) = p.least_nonnegative_integer_root() {
            return Err(Error::InvalidInstance(format!("p vanishes at n = {k}")));
        }
        Ok(HGInstance {
            p,
            q,
            u0,
            t,
            problem,
        })
    }

    pub fn is_monic(&self) -> bool {
        self.p.is_monic() && self.q.is_monic()
    }

    /// `r(k) = q(k) / p(k)`.
    pub fn ratio(&self, k: u64) -> BigRational {
        let k = BigInt::from(k);
        BigRational::new(self.q.eval_int(&k), self.p.eval_int(&k))
    }

    pub fn with_target(&self, t: BigRational, problem: Problem) -> Self {
        HGInstance {
            t,
            problem,
            ..self.clone()
        }
    }
}

impl fmt::Display for HGInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) u(n+1) = ({}) u(n), u0 = {}, {} t = {}",
            self.p,
            self.q,
            format_rational(&self.u0),
            self.problem,
            format_rational(&self.t)
        )
    }
}

/// Walks `u_0, u_1, ...` keeping an unreduced fraction `num / den`, `den > 0`,
/// so long scans cost one small multiplication per step.
#[derive(Clone, Debug)]
pub struct Scanner<'a> {
    inst: &'a HGInstance,
    n: u64,
    num: BigInt,
    den: BigInt,
    cap: u64,
}

impl<'a> Scanner<'a> {
    pub fn new(inst: &'a HGInstance, cap: u64) -> Self {
        Scanner {
            inst,
            n: 0,
            num: inst.u0.numer().clone(),
            den: inst.u0.denom().clone(),
            cap,
        }
    }

    pub fn index(&self) -> u64 {
        self.n
    }

    pub fn value(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn sign(&self) -> i32 {
        sign_of(&self.num)
    }

    /// Moves to the next index.
    pub fn advance(&mut self) -> Result<()> {
        if self.n >= self.cap {
            return Err(Error::ScanCap {
                index: self.n + 1,
                cap: self.cap,
            });
        }
        let k = BigInt::from(self.n);
        let (a, b) = (self.inst.q.eval_int(&k), self.inst.p.eval_int(&k));
        if b.is_negative() {
            self.num *= -a;
            self.den *= -b;
        } else {
            self.num *= a;
            self.den *= b;
        }
        self.n += 1;
        Ok(())
    }

    pub fn advance_to(&mut self, n: u64) -> Result<()> {
        while self.n < n {
            self.advance()?;
        }
        Ok(())
    }

    pub fn cmp(&self, x: &BigRational) -> Ordering {
        (&self.num * x.denom()).cmp(&(x.numer() * &self.den))
    }

    pub fn cmp_abs(&self, x: &BigRational) -> Ordering {
        (self.num.abs() * x.denom()).cmp(&(x.numer().abs() * &self.den))
    }
}

fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn term(inst: &HGInstance, n: u64) -> Result<BigRational> {
    term_capped(inst, n, DEFAULT_SCAN_CAP)
}

pub fn term_capped(inst: &HGInstance, n: u64, cap: u64) -> Result<BigRational> {
    if n > cap {
        return Err(Error::ScanCap { index: n, cap });
    }
    let mut s = Scanner::new(inst, cap);
    s.advance_to(n)?;
    Ok(s.value())
}

/// First `count` terms.
pub fn terms(inst: &HGInstance, count: u64, cap: u64) -> Result<Vec<BigRational>> {
    let mut s = Scanner::new(inst, cap);
    let mut out = Vec::new();
    for i in 0..count {
        if i > 0 {
            s.advance()?;
        }
        out.push(s.value());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum AsymptoticClass {
    DivergesToInfinity,
    ConvergesToZeroLimitRatio,
    /// Ratio limit `l` with `|l| != 1`.
    ConvergesTo {
        limit: String,
    },
    /// Ratio limit 1; the product behaves like `n^A`.
    RatioLimitOne {
        exponent: String,
    },
    RatioLimitMinusOne,
}

impl AsymptoticClass {
    pub fn is_harmonious(&self) -> bool {
        matches!(self, AsymptoticClass::RatioLimitOne { exponent } if exponent == "0")
    }

    pub fn exponent(&self) -> Option<BigRational> {
        match self {
            AsymptoticClass::RatioLimitOne { exponent } => {
                crate::exactnum::rational::parse_rational(exponent).ok()
            }
            _ => None,
        }
    }

    pub fn limit(&self) -> Option<BigRational> {
        match self {
            AsymptoticClass::ConvergesTo { limit } => {
                crate::exactnum::rational::parse_rational(limit).ok()
            }
            _ => None,
        }
    }

    /// `|u_n| -> infinity` for nonzero starts.
    pub fn diverges(&self) -> bool {
        match self {
            AsymptoticClass::DivergesToInfinity => true,
            AsymptoticClass::ConvergesTo { .. } => {
                self.limit().is_some_and(|l| l.abs() > BigRational::one())
            }
            AsymptoticClass::RatioLimitOne { .. } => {
                self.exponent().is_some_and(|a| a.is_positive())
            }
            _ => false,
        }
    }

    /// `u_n -> 0`.
    pub fn shrinks(&self) -> bool {
        match self {
            AsymptoticClass::ConvergesToZeroLimitRatio => true,
            AsymptoticClass::ConvergesTo { .. } => {
                self.limit().is_some_and(|l| l.abs() < BigRational::one())
            }
            AsymptoticClass::RatioLimitOne { .. } => {
                self.exponent().is_some_and(|a| a.is_negative())
            }
            _ => false,
        }
    }
}

impl fmt::Display for AsymptoticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticClass::DivergesToInfinity => write!(f, "DivergesToInfinity"),
            AsymptoticClass::ConvergesToZeroLimitRatio => write!(f, "ConvergesToZeroLimitRatio"),
            AsymptoticClass::ConvergesTo { limit } => write!(f, "ConvergesTo({limit})"),
            AsymptoticClass::RatioLimitOne { exponent } => write!(f, "RatioLimitOne(A={exponent})"),
            AsymptoticClass::RatioLimitMinusOne => write!(f, "RatioLimitMinusOne"),
        }
    }
}

/// Class of the shift quotient `q/p` from degrees and top coefficients.
pub fn classify(p: &IntPoly, q: &IntPoly) -> AsymptoticClass {
    let (dp, dq) = (p.deg(), q.deg());
    if dq > dp {
        return AsymptoticClass::DivergesToInfinity;
    }
    if dq < dp {
        return AsymptoticClass::ConvergesToZeroLimitRatio;
    }
    let (lp, lq) = (
        BigRational::from_integer(p.leading()),
        BigRational::from_integer(q.leading()),
    );
    let c = &lq / &lp;
    if c.is_one() {
        // sum of roots of p minus sum of roots of q
        let a = if dp == 0 {
            BigRational::zero()
        } else {
            BigRational::from_integer(q.coeff(dq - 1)) / &lq
                - BigRational::from_integer(p.coeff(dp - 1)) / &lp
        };
        AsymptoticClass::RatioLimitOne {
            exponent: format_rational(&a),
        }
    } else if c == -BigRational::one() {
        AsymptoticClass::RatioLimitMinusOne
    } else {
        AsymptoticClass::ConvergesTo {
            limit: format_rational(&c),
        }
    }
}

/// Least `K >= 0` such that every polynomial is nonzero with the sign of its
/// leading coefficient at all integers `k >= K`.
pub fn sign_stable_index(polys: &[QPoly], scan_cap: u64) -> u64 {
    let polys: Vec<&QPoly> = polys.iter().filter(|f| !f.is_zero()).collect();
    let good = |k: &BigRational| {
        polys.iter().all(|f| {
            let v = f.eval(k);
            !v.is_zero() && v.is_positive() == f.leading().is_positive()
        })
    };
    let root_free_from = |m: &BigInt| {
        let mq = BigRational::from_integer(m.clone());
        polys.iter().all(|f| {
            f.deg() == 0 || (f.count_real_roots(Some(&mq), None) == 0 && !f.eval(&mq).is_zero())
        })
    };
    let mut hi = polys
        .iter()
        .map(|f| crate::polyfield::cauchy_bound_q(f))
        .max()
        .unwrap_or_else(BigInt::zero);
    let mut lo = BigInt::zero();
    if !root_free_from(&lo) {
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) / 2;
            if root_free_from(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    } else {
        hi = lo;
    }
    let mut k: BigInt = hi;
    let mut steps = 0u64;
    while k.is_positive() && steps < scan_cap {
        let prev: BigInt = &k - 1;
        if !good(&BigRational::from_integer(prev.clone())) {
            break;
        }
        k = prev;
        steps += 1;
    }
    k.to_u64().unwrap_or(u64::MAX)
}

/// Whether every polynomial is nonzero with the sign of its leading
/// coefficient on the whole real ray `[k, infinity)`.
pub fn sign_stable_from(polys: &[QPoly], k: u64) -> bool {
    let kq = BigRational::from_integer(BigInt::from(k));
    polys.iter().filter(|f| !f.is_zero()).all(|f| {
        let v = f.eval(&kq);
        !v.is_zero()
            && v.is_positive() == f.leading().is_positive()
            && f.count_real_roots(Some(&kq), None) == 0
    })
}

/// Polynomials whose signs fix the sign and the growth of `|u_n|`.
pub fn tail_polys(p: &IntPoly, q: &IntPoly) -> Vec<QPoly> {
    let (p, q) = (p.to_q(), q.to_q());
    let d = q.mul(&q).sub(&p.mul(&p));
    vec![p, q, d]
}

/// Least `K0` such that for every `k >= K0`, `p(k) > 0`, `q(k) > 0` and
/// `(q - p)(k)` has the sign of its leading coefficient.
pub fn monotonicity_index(p: &IntPoly, q: &IntPoly) -> u64 {
    let (pq, qq) = (p.to_q(), q.to_q());
    sign_stable_index(&[pq.clone(), qq.clone(), qq.sub(&pq)], DEFAULT_SCAN_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundJustification {
    /// `|r(n)| > 1` and `|u_n| > |t|` from `N` on.
    RatioExceedsTarget,
    /// `|r(n)| < 1` and `|u_n| < |t|` from `N` on.
    TailBelowTarget,
    /// `|u_n|` is strictly monotone from `N` on, moving away from `|t|` or
    /// towards a limit that lies on the same side of `|t|`.
    ProductMonotoneBeyond,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBound {
    #[serde(rename = "N")]
    pub n: u64,
    pub justification: BoundJustification,
    pub ratio_above_one: bool,
    pub terms_above_target: bool,
}

impl SearchBound {
    /// Re-checks the guaranteed inequalities by exact evaluation at
    /// `N, ..., N + extra`.
    pub fn check(&self, inst: &HGInstance, extra: u64, cap: u64) -> Result<bool> {
        let mut s = Scanner::new(inst, cap.max(self.n + extra + 1));
        s.advance_to(self.n)?;
        for k in self.n..=self.n + extra {
            let r = inst.ratio(k).abs();
            let side_ok = if self.ratio_above_one {
                r > BigRational::one()
            } else {
                r < BigRational::one()
            };
            let target = s.cmp_abs(&inst.t);
            let term_ok = if self.terms_above_target {
                target == Ordering::Greater
            } else {
                target == Ordering::Less
            };
            if !side_ok || !term_ok {
                return Ok(false);
            }
            s.advance()?;
        }
        Ok(true)
    }
}

/// `N` with `|u_n| > |t|` and `|r(n)| > 1` for all `n >= N`.
pub fn divergence_bound(inst: &HGInstance) -> Result<SearchBound> {
    divergence_bound_capped(inst, DEFAULT_SCAN_CAP)
}

pub fn divergence_bound_capped(inst: &HGInstance, cap: u64) -> Result<SearchBound> {
    let class = classify(&inst.p, &inst.q);
    if !class.diverges() {
        return Err(Error::WrongClass(format!("{class} does not diverge")));
    }
    if inst.t.is_zero() {
        return Err(Error::InvalidInstance("bounds need t != 0".into()));
    }
    let (p, q) = (inst.p.to_q(), inst.q.to_q());
    let k = sign_stable_index(&[p.clone(), q.clone(), q.mul(&q).sub(&p.mul(&p))], cap);
    first_beyond(inst, k, Ordering::Greater, cap).map(|n| SearchBound {
        n,
        justification: BoundJustification::RatioExceedsTarget,
        ratio_above_one: true,
        terms_above_target: true,
    })
}

/// `N` with `|u_n| < |t|` and `|r(n)| < 1` for all `n >= N`.
pub fn shrink_bound(inst: &HGInstance) -> Result<SearchBound> {
    shrink_bound_capped(inst, DEFAULT_SCAN_CAP)
}

pub fn shrink_bound_capped(inst: &HGInstance, cap: u64) -> Result<SearchBound> {
    let class = classify(&inst.p, &inst.q);
    if !class.shrinks() {
        return Err(Error::WrongClass(format!("{class} does not shrink to 0")));
    }
    if inst.t.is_zero() {
        return Err(Error::InvalidInstance("bounds need t != 0".into()));
    }
    let (p, q) = (inst.p.to_q(), inst.q.to_q());
    let k = sign_stable_index(&[p.clone(), q.clone(), p.mul(&p).sub(&q.mul(&q))], cap);
    first_beyond(inst, k, Ordering::Less, cap).map(|n| SearchBound {
        n,
        justification: BoundJustification::TailBelowTarget,
        ratio_above_one: false,
        terms_above_target: false,
    })
}

/// First `n >= k` with `|u_n|` strictly on side `side` of `|t|`.
fn first_beyond(inst: &HGInstance, k: u64, side: Ordering, cap: u64) -> Result<u64> {
    let mut s = Scanner::new(inst, cap);
    s.advance_to(k)?;
    if s.is_zero() && side == Ordering::Greater {
        return Err(Error::InvalidInstance("sequence vanishes".into()));
    }
    while s.cmp_abs(&inst.t) != side {
        s.advance()?;
    }
    Ok(s.index())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum OracleResult {
    FoundMembership { n: u64 },
    NoneUpTo { up_to: u64 },
    ThresholdViolation { n: u64 },
    ThresholdHoldsUpTo { up_to: u64 },
}

impl fmt::Display for OracleResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleResult::FoundMembership { n } => write!(f, "FoundMembership({n})"),
            OracleResult::NoneUpTo { up_to } => write!(f, "NoneUpTo({up_to})"),
            OracleResult::ThresholdViolation { n } => write!(f, "ThresholdViolation({n})"),
            OracleResult::ThresholdHoldsUpTo { up_to } => write!(f, "ThresholdHoldsUpTo({up_to})"),
        }
    }
}

/// Exact scan of `u_0, ..., u_{up_to - 1}` for the instance's problem.
pub fn brute_force(inst: &HGInstance, up_to: u64) -> Result<OracleResult> {
    brute_force_capped(inst, up_to, DEFAULT_SCAN_CAP)
}

pub fn brute_force_capped(inst: &HGInstance, up_to: u64, cap: u64) -> Result<OracleResult> {
    if up_to > cap {
        return Err(Error::ScanCap { index: up_to, cap });
    }
    let mut s = Scanner::new(inst, cap);
    for n in 0..up_to {
        if n > 0 {
            s.advance()?;
        }
        match inst.problem {
            Problem::Membership if s.cmp(&inst.t) == Ordering::Equal => {
                return Ok(OracleResult::FoundMembership { n })
            }
            Problem::Threshold if s.cmp(&inst.t) == Ordering::Less => {
                return Ok(OracleResult::ThresholdViolation { n })
            }
            _ => {}
        }
        // every later term is zero too, and zero was not a hit
        if s.is_zero() {
            break;
        }
    }
    Ok(match inst.problem {
        Problem::Membership => OracleResult::NoneUpTo { up_to },
        Problem::Threshold => OracleResult::ThresholdHoldsUpTo { up_to },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use proptest::prelude::*;

    fn inst(p: &[i64], q: &[i64], u0: BigRational, t: BigRational, problem: Problem) -> HGInstance {
        HGInstance::new(IntPoly::from_i64(p), IntPoly::from_i64(q), u0, t, problem).unwrap()
    }

    fn gauss13(t: BigRational, problem: Problem) -> HGInstance {
        inst(&[13, -4, 1], &[5, -4, 1], int(1), t, problem)
    }

    #[test]
    fn example_terms() {
        let i = gauss13(int(0), Problem::Membership);
        assert_eq!(term(&i, 0).unwrap(), int(1));
        assert_eq!(term(&i, 1).unwrap(), rat(5, 13));
        assert_eq!(term(&i, 2).unwrap(), rat(1, 13));
        assert_eq!(term(&i, 3).unwrap(), rat(1, 117));
        assert!(term_capped(&i, 11, 10).is_err());
    }

    #[test]
    fn p_with_nonnegative_root_rejected() {
        let r = HGInstance::new(
            IntPoly::from_i64(&[-3, 1]),
            IntPoly::from_i64(&[1]),
            int(1),
            int(1),
            Problem::Membership,
        );
        assert!(r.is_err());
    }

    #[test]
    fn classes() {
        let c = |p: &[i64], q: &[i64]| classify(&IntPoly::from_i64(p), &IntPoly::from_i64(q));
        assert!(c(&[13, -4, 1], &[5, -4, 1]).is_harmonious());
        assert_eq!(
            c(&[2, 1], &[1, 1]),
            AsymptoticClass::RatioLimitOne {
                exponent: "-1".into()
            }
        );
        assert_eq!(
            c(&[1, 1], &[2, 2]),
            AsymptoticClass::ConvergesTo { limit: "2".into() }
        );
        assert_eq!(c(&[1, 1], &[-1, -1]), AsymptoticClass::RatioLimitMinusOne);
        assert_eq!(c(&[1], &[0, 1]), AsymptoticClass::DivergesToInfinity);
        assert_eq!(c(&[0, 1], &[1]), AsymptoticClass::ConvergesToZeroLimitRatio);
    }

    #[test]
    fn monotonicity_indices() {
        let m =
            |p: &[i64], q: &[i64]| monotonicity_index(&IntPoly::from_i64(p), &IntPoly::from_i64(q));
        assert_eq!(m(&[13, -4, 1], &[5, -4, 1]), 0);
        assert_eq!(m(&[1, 1], &[3, 1]), 0);
        assert_eq!(m(&[1, 0, 1], &[7, -5, 1]), 2);
        // q - p = -100 is fine everywhere but q > 0 only from 100 on
        assert_eq!(m(&[1, 1], &[-99, 1]), 100);
    }

    #[test]
    fn divergence_examples() {
        let b =
            divergence_bound(&inst(&[1, 1], &[3, 1], int(1), int(7), Problem::Membership)).unwrap();
        assert_eq!(b.n, 3);
        let b =
            divergence_bound(&inst(&[1], &[2], int(1), int(1000), Problem::Membership)).unwrap();
        assert_eq!(b.n, 10);
        // u_n = n + 1
        let i = inst(&[1, 1], &[2, 1], int(1), int(100), Problem::Membership);
        let b = divergence_bound(&i).unwrap();
        assert_eq!(b.n, 100);
        assert!(b.check(&i, 50, 1000).unwrap());
    }

    #[test]
    fn shrink_examples() {
        let b = shrink_bound(&inst(
            &[2, 1],
            &[1, 1],
            int(1),
            rat(1, 10),
            Problem::Membership,
        ))
        .unwrap();
        assert_eq!(b.n, 10);
        let b = shrink_bound(&inst(&[2], &[1], int(1), rat(1, 100), Problem::Membership)).unwrap();
        assert_eq!(b.n, 7);
        let i = inst(&[3, 1], &[1, 1], int(4), rat(1, 5), Problem::Membership);
        let b = shrink_bound(&i).unwrap();
        // u_n = 8 / ((n + 1)(n + 2))
        let closed = |n: i64| rat(8, (n + 1) * (n + 2));
        assert!(closed(b.n as i64) < rat(1, 5));
        assert!(closed(b.n as i64 - 1) >= rat(1, 5));
        assert!(b.check(&i, 50, 1000).unwrap());
        assert!(shrink_bound(&inst(&[1], &[2], int(1), int(1), Problem::Membership)).is_err());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            brute_force(&gauss13(rat(1, 13), Problem::Membership), 10).unwrap(),
            OracleResult::FoundMembership { n: 2 }
        );
        assert_eq!(
            brute_force(&gauss13(rat(1, 26), Problem::Threshold), 10).unwrap(),
            OracleResult::ThresholdViolation { n: 3 }
        );
        assert_eq!(
            brute_force(&gauss13(int(1), Problem::Membership), 1).unwrap(),
            OracleResult::FoundMembership { n: 0 }
        );
        assert_eq!(
            brute_force(&gauss13(int(2), Problem::Membership), 50).unwrap(),
            OracleResult::NoneUpTo { up_to: 50 }
        );
    }

    #[test]
    fn zero_tail() {
        // q = x - 3 vanishes at 3, so u_n = 0 for n > 3
        let i = inst(&[1, 1], &[-3, 1], int(1), int(0), Problem::Membership);
        for n in 4..20 {
            assert!(term(&i, n).unwrap().is_zero());
        }
        assert!(!term(&i, 3).unwrap().is_zero());
        assert_eq!(
            brute_force(&i, 100).unwrap(),
            OracleResult::FoundMembership { n: 4 }
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn recurrence_holds(p1 in 1i64..9, p0 in 1i64..9, q1 in -3i64..4, q0 in -9i64..9, a in -5i64..6) {
            let i = inst(&[p0, p1, 1], &[q0, q1, 1], int(a), int(0), Problem::Membership);
            let ts = terms(&i, 1001, 2000).unwrap();
            for n in 0..1000u64 {
                let k = BigInt::from(n);
                prop_assert_eq!(
                    BigRational::from_integer(i.p.eval_int(&k)) * &ts[n as usize + 1],
                    BigRational::from_integer(i.q.eval_int(&k)) * &ts[n as usize]
                );
            }
        }
    }
}
