//! Rigorous dyadic interval arithmetic.
//!
//! Endpoints are `m * 2^e` with big-integer mantissas. Every operation rounds
//! outward to the working precision, so results always enclose the exact
//! image. Transcendental functions fold their truncation error into the
//! returned interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `mantissa * 2^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    pub mantissa: BigInt,
    pub exponent: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

fn bitlen(m: &BigInt) -> i64 {
    m.bits() as i64
}

/// floor or ceil of `m / 2^k` for `k >= 0`.
fn shr_round(m: &BigInt, k: u64, dir: Round) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    let floor = m >> k; // arithmetic shift floors for negatives
    match dir {
        Round::Down => floor,
        Round::Up => {
            if (&floor << k) == *m {
                floor
            } else {
                floor + 1
            }
        }
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic {
            mantissa: n.into(),
            exponent: 0,
        }
    }

    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        Dyadic { mantissa, exponent }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }

    fn round(&self, prec: u64, dir: Round) -> Dyadic {
        let excess = bitlen(&self.mantissa) - prec as i64;
        if excess <= 0 {
            return self.clone();
        }
        Dyadic {
            mantissa: shr_round(&self.mantissa, excess as u64, dir),
            exponent: self.exponent + excess,
        }
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exponent.min(b.exponent);
        let ma = &a.mantissa << (a.exponent - e) as u64;
        let mb = &b.mantissa << (b.exponent - e) as u64;
        (ma, mb, e)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::align(self, other);
        Dyadic {
            mantissa: a + b,
            exponent: e,
        }
    }

    fn neg(&self) -> Dyadic {
        Dyadic {
            mantissa: -&self.mantissa,
            exponent: self.exponent,
        }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
    }

    fn shift(&self, k: i64) -> Dyadic {
        Dyadic {
            mantissa: self.mantissa.clone(),
            exponent: self.exponent + k,
        }
    }

    /// Quotient rounded in direction `dir` to about `prec` bits.
    fn div(&self, other: &Dyadic, prec: u64, dir: Round) -> Dyadic {
        assert!(!other.is_zero());
        let k = (prec as i64 + bitlen(&other.mantissa) - bitlen(&self.mantissa) + 2).max(0);
        let num = &self.mantissa << k as u64;
        let den = &other.mantissa;
        let q = match dir {
            Round::Down => num.div_floor(den),
            Round::Up => -((-num).div_floor(den)),
        };
        Dyadic {
            mantissa: q,
            exponent: self.exponent - other.exponent - k,
        }
        .round(prec, dir)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exponent >= 0 {
            BigRational::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            BigRational::new(
                self.mantissa.clone(),
                BigInt::one() << (-self.exponent) as u64,
            )
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bl = bitlen(&self.mantissa);
        let drop = (bl - 60).max(0);
        let m = (&self.mantissa >> drop as u64).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exponent + drop).clamp(-2000, 2000) as i32)
    }

    /// Upper bound on log2|x| (exponent of the leading bit + 1).
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.exponent + bitlen(&self.mantissa)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = Dyadic::align(self, other);
        a.cmp(&b)
    }
}

fn rational_round(x: &BigRational, prec: u64, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    let n = Dyadic::from_int(x.numer().clone());
    let d = Dyadic::from_int(x.denom().clone());
    if x.denom().is_one() {
        return n.round(prec, dir);
    }
    n.div(&d, prec, dir)
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyadicInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        DyadicInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        DyadicInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Dyadic::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_rational(x: &BigRational, prec: u64) -> Self {
        DyadicInterval {
            lo: rational_round(x, prec, Round::Down),
            hi: rational_round(x, prec, Round::Up),
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    /// log2 of the width, rounded up; `None` for a point.
    pub fn width_log2(&self) -> Option<i64> {
        let w = self.hi.add(&self.lo.neg());
        if w.is_zero() {
            None
        } else {
            Some(w.magnitude())
        }
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lo.to_rational() <= *x && *x <= self.hi.to_rational()
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.lo.sign() == Sign::Plus
    }

    pub fn is_negative(&self) -> bool {
        self.hi.sign() == Sign::Minus
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Intersection, when nonempty.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then(|| DyadicInterval { lo, hi })
    }

    pub fn hull(&self, other: &Self) -> Self {
        DyadicInterval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).shift(-1)
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Upper bound on log2 max(|lo|, |hi|).
    pub fn magnitude(&self) -> i64 {
        self.lo.magnitude().max(self.hi.magnitude())
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        DyadicInterval {
            lo: self.lo.add(&o.lo).round(prec, Round::Down),
            hi: self.hi.add(&o.hi).round(prec, Round::Up),
        }
    }

    pub fn neg(&self) -> Self {
        DyadicInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round(prec, Round::Down);
        let hi = c.iter().max().unwrap().round(prec, Round::Up);
        DyadicInterval { lo, hi }
    }

    pub fn square(&self, prec: u64) -> Self {
        let s = self.mul(self, prec);
        if self.contains_zero() {
            DyadicInterval {
                lo: Dyadic::zero(),
                hi: s.hi,
            }
        } else {
            s
        }
    }

    /// Division; `None` if the divisor contains zero.
    pub fn div(&self, o: &Self, prec: u64) -> Option<Self> {
        if o.contains_zero() {
            return None;
        }
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let d = a.div(b, prec, Round::Down);
                let u = a.div(b, prec, Round::Up);
                lo = Some(match lo {
                    Some(x) if x <= d => x,
                    _ => d,
                });
                hi = Some(match hi {
                    Some(x) if x >= u => x,
                    _ => u,
                });
            }
        }
        Some(DyadicInterval {
            lo: lo.unwrap(),
            hi: hi.unwrap(),
        })
    }

    pub fn recip(&self, prec: u64) -> Option<Self> {
        Self::one().div(self, prec)
    }

    pub fn scale_pow2(&self, k: i64) -> Self {
        DyadicInterval {
            lo: self.lo.shift(k),
            hi: self.hi.shift(k),
        }
    }

    pub fn mul_int(&self, n: i64, prec: u64) -> Self {
        self.mul(&Self::from_int(n), prec)
    }

    pub fn powi(&self, e: i64, prec: u64) -> Option<Self> {
        let mut base = if e < 0 {
            self.recip(prec)?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.square(prec);
            e >>= 1;
        }
        Some(acc)
    }

    /// Widens by `[-r, r]`.
    pub fn widen(&self, r: &Dyadic, prec: u64) -> Self {
        let r = if r.sign() == Sign::Minus {
            r.neg()
        } else {
            r.clone()
        };
        DyadicInterval {
            lo: self.lo.add(&r.neg()).round(prec, Round::Down),
            hi: self.hi.add(&r).round(prec, Round::Up),
        }
    }

    fn radius(&self) -> Dyadic {
        self.hi.add(&self.lo.neg()).shift(-1)
    }

    /// Square root of a nonnegative interval.
    pub fn sqrt(&self, prec: u64) -> Option<Self> {
        self.nth_root(2, prec)
    }

    /// Real `n`-th root of a nonnegative interval.
    pub fn nth_root(&self, n: u32, prec: u64) -> Option<Self> {
        if self.lo.sign() == Sign::Minus {
            return None;
        }
        Some(DyadicInterval {
            lo: root_round(&self.lo, n, prec, Round::Down),
            hi: root_round(&self.hi, n, prec, Round::Up),
        })
    }

    pub fn exp(&self, prec: u64) -> Self {
        DyadicInterval {
            lo: exp_point(&self.lo, prec).lo,
            hi: exp_point(&self.hi, prec).hi,
        }
    }

    /// `(cos x, sin x)`; interval arguments widen by the radius (both are
    /// 1-Lipschitz).
    pub fn cos_sin(&self, prec: u64) -> (Self, Self) {
        let mid = self.mid();
        let rad = self.radius();
        let (c, s) = cos_sin_point(&mid, prec);
        (c.widen(&rad, prec), s.widen(&rad, prec))
    }

    pub fn sinh(&self, prec: u64) -> Self {
        let w = prec + 8;
        let e = self.exp(w);
        let inv = self.neg().exp(w);
        e.sub(&inv, w).scale_pow2(-1).round_to(prec)
    }

    pub fn cosh(&self, prec: u64) -> Self {
        let w = prec + 8;
        let e = self.exp(w);
        let inv = self.neg().exp(w);
        e.add(&inv, w).scale_pow2(-1).round_to(prec)
    }

    pub fn round_to(&self, prec: u64) -> Self {
        DyadicInterval {
            lo: self.lo.round(prec, Round::Down),
            hi: self.hi.round(prec, Round::Up),
        }
    }

    pub fn pi(prec: u64) -> Self {
        pi_interval(prec)
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

fn root_round(x: &Dyadic, n: u32, prec: u64, dir: Round) -> Dyadic {
    if x.is_zero() {
        return Dyadic::zero();
    }
    let n64 = n as i64;
    // x = m 2^e; scale so the radicand has about n*prec bits and the exponent
    // is divisible by n
    let want = n64 * (prec as i64 + 2);
    let mut s = (want - bitlen(&x.mantissa)).max(0);
    while (x.exponent - s).rem_euclid(n64) != 0 {
        s += 1;
    }
    let rad = &x.mantissa << s as u64;
    let mut r = rad.nth_root(n);
    if dir == Round::Up && r.pow(n) != rad {
        r += 1;
    }
    Dyadic {
        mantissa: r,
        exponent: (x.exponent - s) / n64,
    }
    .round(prec, dir)
}

/// Enclosure of `exp(x)` for a dyadic point.
fn exp_point(x: &Dyadic, prec: u64) -> DyadicInterval {
    if x.is_zero() {
        return DyadicInterval::one();
    }
    // halve until |y| <= 2^-8, then square back
    let s = (x.magnitude() + 8).max(0);
    let w = prec + 32 + s as u64;
    let y = DyadicInterval::point(x.shift(-s));
    let mut sum = DyadicInterval::one();
    let mut term = DyadicInterval::one();
    let mut k = 1i64;
    loop {
        term = term
            .mul(&y, w)
            .div(&DyadicInterval::from_int(k), w)
            .unwrap();
        sum = sum.add(&term, w);
        // |y|^k / k! below 2^-(w+8): remainder after this term is at most
        // twice the next term, which is smaller still
        if term.magnitude() < -(w as i64) - 8 {
            break;
        }
        k += 1;
    }
    let tail = Dyadic::new(BigInt::one(), -(w as i64) - 6);
    let mut r = sum.widen(&tail, w);
    for _ in 0..s {
        r = r.square(w);
    }
    r.round_to(prec + 2)
}

fn cos_sin_point(x: &Dyadic, prec: u64) -> (DyadicInterval, DyadicInterval) {
    let guard = 48u64;
    let mut w = prec + guard;
    // reduce modulo 2 pi
    let xf = x.to_f64();
    let two_pi_f = std::f64::consts::TAU;
    let mut y = DyadicInterval::point(x.clone());
    if xf.abs() > 4.0 || !xf.is_finite() {
        let k = if xf.is_finite() {
            (xf / two_pi_f).round()
        } else {
            // astronomically large arguments are not produced by this crate
            0.0
        };
        let kb = BigInt::from(k as i64);
        w += kb.bits();
        let two_pi = DyadicInterval::pi(w).scale_pow2(1);
        let kpi = two_pi.mul(&DyadicInterval::point(Dyadic::from_int(kb)), w);
        y = y.sub(&kpi, w);
    }
    let s = (y.magnitude() + 6).max(0);
    let w = w + 2 * s as u64;
    let z = y.scale_pow2(-s);
    // Taylor on |z| <= 2^-6
    let z2 = z.square(w);
    let mut c = DyadicInterval::one();
    let mut sn = z.clone();
    let mut tc = DyadicInterval::one();
    let mut ts = z.clone();
    let mut k = 1i64;
    loop {
        tc = tc
            .mul(&z2, w)
            .div(&DyadicInterval::from_int(-(2 * k - 1) * (2 * k)), w)
            .unwrap();
        ts = ts
            .mul(&z2, w)
            .div(&DyadicInterval::from_int(-(2 * k) * (2 * k + 1)), w)
            .unwrap();
        c = c.add(&tc, w);
        sn = sn.add(&ts, w);
        if tc.magnitude().max(ts.magnitude()) < -(w as i64) - 8 {
            break;
        }
        k += 1;
    }
    let tail = Dyadic::new(BigInt::one(), -(w as i64) - 6);
    c = c.widen(&tail, w);
    sn = sn.widen(&tail, w);
    for _ in 0..s {
        let c2 = c.square(w).scale_pow2(1).sub(&DyadicInterval::one(), w);
        let s2 = sn.mul(&c, w).scale_pow2(1);
        c = c2;
        sn = s2;
    }
    let one = DyadicInterval::new(Dyadic::from_int(-1), Dyadic::from_int(1));
    let clamp = |v: DyadicInterval| v.intersect(&one).unwrap_or(v);
    (clamp(c.round_to(prec + 2)), clamp(sn.round_to(prec + 2)))
}

/// `atan(1/x)` in fixed point scaled by `2^w`, with an error bound in ulps.
fn atan_inv_fixed(x: u64, w: u64) -> (BigInt, u64) {
    let one = BigInt::one() << w;
    let xb = BigInt::from(x);
    let x2 = &xb * &xb;
    let mut power = &one / &xb; // floor(2^w / x^(2k+1))
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power /= &x2;
        k += 1;
    }
    // each term carries < 2 ulps of floor error, the omitted tail < 1 ulp
    (sum, 2 * k + 2)
}

fn pi_interval(prec: u64) -> DyadicInterval {
    let w = prec + 24;
    let (a5, e5) = atan_inv_fixed(5, w);
    let (a239, e239) = atan_inv_fixed(239, w);
    let approx = BigInt::from(16) * a5 - BigInt::from(4) * a239;
    let err = BigInt::from(16 * e5 + 4 * e239);
    let lo = Dyadic::new(&approx - &err, -(w as i64));
    let hi = Dyadic::new(&approx + &err, -(w as i64));
    DyadicInterval::new(lo, hi).round_to(prec + 4)
}

/// Complex rectangle `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: DyadicInterval,
    pub im: DyadicInterval,
}

impl ComplexInterval {
    pub fn new(re: DyadicInterval, im: DyadicInterval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: DyadicInterval) -> Self {
        ComplexInterval {
            re,
            im: DyadicInterval::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::real(DyadicInterval::zero())
    }

    pub fn one() -> Self {
        Self::real(DyadicInterval::one())
    }

    pub fn i() -> Self {
        ComplexInterval {
            re: DyadicInterval::zero(),
            im: DyadicInterval::one(),
        }
    }

    pub fn from_rational(x: &BigRational, prec: u64) -> Self {
        Self::real(DyadicInterval::from_rational(x, prec))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let re = self
            .re
            .mul(&o.re, prec)
            .sub(&self.im.mul(&o.im, prec), prec);
        let im = self
            .re
            .mul(&o.im, prec)
            .add(&self.im.mul(&o.re, prec), prec);
        ComplexInterval { re, im }
    }

    pub fn scale(&self, k: &DyadicInterval, prec: u64) -> Self {
        ComplexInterval {
            re: self.re.mul(k, prec),
            im: self.im.mul(k, prec),
        }
    }

    pub fn conj(&self) -> Self {
        ComplexInterval {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    pub fn norm_sqr(&self, prec: u64) -> DyadicInterval {
        self.re.square(prec).add(&self.im.square(prec), prec)
    }

    pub fn recip(&self, prec: u64) -> Option<Self> {
        let n = self.norm_sqr(prec);
        let inv = n.recip(prec)?;
        Some(self.conj().scale(&inv, prec))
    }

    pub fn div(&self, o: &Self, prec: u64) -> Option<Self> {
        Some(self.mul(&o.recip(prec)?, prec))
    }

    pub fn powi(&self, e: i64, prec: u64) -> Option<Self> {
        let mut base = if e < 0 {
            self.recip(prec)?
        } else {
            self.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            base = base.mul(&base, prec);
            e >>= 1;
        }
        Some(acc)
    }

    pub fn exp(&self, prec: u64) -> Self {
        let m = self.re.exp(prec);
        let (c, s) = self.im.cos_sin(prec);
        ComplexInterval {
            re: m.mul(&c, prec),
            im: m.mul(&s, prec),
        }
    }

    /// `e^{2 pi i k / n}`.
    pub fn root_of_unity(k: i64, n: i64, prec: u64) -> Self {
        let w = prec + 16;
        let angle = DyadicInterval::pi(w)
            .mul_int(2 * k, w)
            .div(&DyadicInterval::from_int(n), w)
            .unwrap();
        let (c, s) = angle.cos_sin(prec);
        ComplexInterval { re: c, im: s }
    }

    pub fn magnitude(&self) -> i64 {
        self.re.magnitude().max(self.im.magnitude())
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    // pi to 60 digits
    const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944";

    fn pi_rational_bounds() -> (BigRational, BigRational) {
        let n: BigInt = PI_DIGITS.parse().unwrap();
        let d = BigInt::from(10).pow(60);
        let lo = BigRational::new(n.clone(), d.clone());
        let hi = BigRational::new(n + 1, d);
        (lo, hi)
    }

    #[test]
    fn pi_matches_published_digits() {
        let p = DyadicInterval::pi(64);
        let (lo, hi) = pi_rational_bounds();
        assert!(p.overlaps(&DyadicInterval::new(
            rational_round(&lo, 200, Round::Down),
            rational_round(&hi, 200, Round::Up)
        )));
        assert!(p.width_log2().unwrap() <= -60);
        let p = DyadicInterval::pi(180);
        assert!(p.lo().to_rational() <= hi && p.hi().to_rational() >= lo);
    }

    #[test]
    fn rational_enclosures_are_sound() {
        for (n, d) in [(1, 3), (-22, 7), (355, 113), (1, 1 << 20)] {
            let x = rat(n, d);
            for prec in [8, 32, 100] {
                assert!(DyadicInterval::from_rational(&x, prec).contains_rational(&x));
            }
        }
    }

    #[test]
    fn exp_and_log_identities() {
        let prec = 128;
        let one = DyadicInterval::one();
        let e = one.exp(prec);
        // e = 2.718281828459045235360287...
        let (lo, hi) = (rat(271_828_182_845, 100_000_000_000), rat(271_828_182_846, 100_000_000_000));
        assert!(e.lo().to_rational() > lo && e.hi().to_rational() < hi);
        let prod = e.mul(&one.neg().exp(prec), prec);
        assert!(prod.contains_rational(&rat(1, 1)));
        assert!(prod.width_log2().unwrap() < -100);
    }

    #[test]
    fn cos_sin_pythagoras() {
        let prec = 128;
        for x in [rat(1, 3), rat(7, 1), rat(-100, 3), rat(1, 1 << 10)] {
            let xi = DyadicInterval::from_rational(&x, prec + 20);
            let (c, s) = xi.cos_sin(prec);
            let one = c.square(prec).add(&s.square(prec), prec);
            assert!(one.contains_rational(&rat(1, 1)), "x = {x}");
            assert!(one.width_log2().unwrap() < -90);
        }
    }

    #[test]
    fn sinh_ratio_matches_reference() {
        // sinh(pi)/(39 sinh(3 pi)) = 4.7794...e-5 (independent mpmath value
        // 4.779372824334937e-05)
        let prec = 128;
        let pi = DyadicInterval::pi(prec + 16);
        let num = pi.sinh(prec);
        let den = pi.mul_int(3, prec).sinh(prec).mul_int(39, prec);
        let v = num.div(&den, prec).unwrap();
        let f = v.to_f64();
        assert!((f - 4.779372824334937e-05).abs() < 1e-18, "{f}");
        assert!(v.width_log2().unwrap() < -110);
    }

    #[test]
    fn roots() {
        let two = DyadicInterval::from_int(2);
        let r = two.sqrt(100).unwrap();
        let sq = r.square(100);
        assert!(sq.contains_rational(&rat(2, 1)));
        let c = two.nth_root(4, 100).unwrap().powi(4, 100).unwrap();
        assert!(c.contains_rational(&rat(2, 1)));
    }

    #[test]
    fn complex_roots_of_unity() {
        let z = ComplexInterval::root_of_unity(1, 12, 100);
        let z12 = z.powi(12, 120).unwrap();
        assert!(z12.re.contains_rational(&rat(1, 1)));
        assert!(z12.im.contains_zero());
    }

    #[test]
    fn x_minus_x_contains_zero() {
        let pi = DyadicInterval::pi(40).exp(32);
        assert!(pi.sub(&pi, 32).contains_zero());
    }
}
