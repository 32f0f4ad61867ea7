//! Dense univariate polynomials over Q and Z, coefficients in ascending degree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational::format_rational;

/// Polynomial with rational coefficients; trailing zeros are trimmed so the
/// zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyOp<'a> {
    Add(&'a QPoly),
    Mul(&'a QPoly),
    DivRem(&'a QPoly),
    Gcd(&'a QPoly),
    Content,
    ShiftBy(&'a BigRational),
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(
            cs.iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x - r`.
    pub fn linear_root(r: &BigRational) -> Self {
        Self::new(vec![-r.clone(), BigRational::one()])
    }

    pub fn monomial(c: BigRational, deg: usize) -> Self {
        let mut v = vec![BigRational::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn divrem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.deg();
        let lead_inv = d.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((QPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((QPoly::new(quot), QPoly::new(rem)))
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &QPoly) -> bool {
        f.exact_div(self).is_some()
    }

    pub fn make_monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// `f(x + r)` by Horner composition.
    pub fn shift_by(&self, r: &BigRational) -> QPoly {
        let lin = QPoly::new(vec![r.clone(), BigRational::one()]);
        self.compose(&lin)
    }

    /// `f(g(x))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        self.coeffs.iter().rev().fold(QPoly::zero(), |acc, c| {
            acc.mul(g).add(&QPoly::constant(c.clone()))
        })
    }

    /// `f(s - x)`.
    pub fn reflect(&self, s: &BigRational) -> QPoly {
        self.compose(&QPoly::new(vec![s.clone(), -BigRational::one()]))
    }

    /// `x^k f(x)`.
    pub fn shift_up(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        QPoly::new(v)
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Polynomial in `x` with only even powers: returns `g` with `f = g(x^2)`.
    pub fn even_part_as_poly_in_square(&self) -> Option<QPoly> {
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(i, c)| i % 2 == 1 && !c.is_zero())
        {
            return None;
        }
        Some(QPoly::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Content: positive rational `c` with `f / c` a primitive integer polynomial.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        BigRational::new(num, den)
    }

    /// Primitive integer polynomial with positive leading coefficient, and the
    /// factor `c` with `self = c * result`.
    pub fn primitive_part(&self) -> (BigRational, IntPoly) {
        if self.is_zero() {
            return (BigRational::one(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        let p = self.scale(&c.recip());
        (
            c,
            IntPoly::new(p.coeffs.iter().map(|x| x.to_integer()).collect()),
        )
    }

    pub fn to_int_poly(&self) -> Option<IntPoly> {
        self.coeffs
            .iter()
            .all(|c| c.denom().is_one())
            .then(|| IntPoly::new(self.coeffs.iter().map(|c| c.to_integer()).collect()))
    }

    /// Yun's squarefree decomposition: monic `f_1, f_2, ...` with
    /// `monic(self) = prod f_i^i`.
    pub fn squarefree_decomposition(&self) -> Vec<QPoly> {
        let f = self.make_monic();
        if f.deg() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides derivative");
        loop {
            let d = c.sub(&b.derivative());
            if b.deg() == 0 {
                break;
            }
            a = b.gcd(&d);
            out.push(a.clone());
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
        }
        while out.last().is_some_and(|p| p.deg() == 0) {
            out.pop();
        }
        out
    }

    /// Squarefree part `prod f_i`.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.make_monic().exact_div(&g).expect("gcd divides")
    }

    /// Number of distinct real roots in the open interval (a, b) by Sturm's
    /// theorem; `None` endpoints mean infinity.
    pub fn count_real_roots(&self, a: Option<&BigRational>, b: Option<&BigRational>) -> usize {
        let f = self.squarefree_part();
        if f.deg() == 0 {
            return 0;
        }
        let mut seq = vec![f.clone(), f.derivative()];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].divrem(&seq[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let sign_at = |p: &QPoly, x: Option<&BigRational>, plus_inf: bool| -> i32 {
            match x {
                Some(v) => sign(&p.eval(v)),
                None => {
                    let lc = sign(&p.leading());
                    if plus_inf || p.deg() % 2 == 0 {
                        lc
                    } else {
                        -lc
                    }
                }
            }
        };
        let changes = |x: Option<&BigRational>, plus_inf: bool| -> usize {
            let signs: Vec<i32> = seq
                .iter()
                .map(|p| sign_at(p, x, plus_inf))
                .filter(|&s| s != 0)
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let va = changes(a, false);
        let vb = changes(b, true);
        let mut n = va.saturating_sub(vb);
        // Sturm counts roots in (a, b]; drop a root sitting exactly at b
        if let Some(bv) = b {
            if f.eval(bv).is_zero() && n > 0 {
                n -= 1;
            }
        }
        n
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Dispatch form of the polynomial operations.
pub fn poly_ops(f: &QPoly, op: PolyOp<'_>) -> Result<(QPoly, Option<QPoly>)> {
    Ok(match op {
        PolyOp::Add(g) => (f.add(g), None),
        PolyOp::Mul(g) => (f.mul(g), None),
        PolyOp::DivRem(g) => {
            let (q, r) = f.divrem(g)?;
            (q, Some(r))
        }
        PolyOp::Gcd(g) => (f.gcd(g), None),
        PolyOp::Content => (QPoly::constant(f.content()), None),
        PolyOp::ShiftBy(r) => (f.shift_by(r), None),
    })
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().map(format_rational).collect(), "x")
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, cs: Vec<String>, var: &str) -> fmt::Result {
    let mut terms = Vec::new();
    for (i, c) in cs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m.to_string()),
            None => (false, c.clone()),
        };
        let body = match (i, mag.as_str()) {
            (0, _) => mag.clone(),
            (1, "1") => var.to_string(),
            (1, _) => format!("{mag}*{var}"),
            (_, "1") => format!("{var}^{i}"),
            _ => format!("{mag}*{var}^{i}"),
        };
        terms.push((neg, body));
    }
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (neg, body)) in terms.iter().enumerate() {
        match (k, neg) {
            (0, true) => write!(f, "-{body}")?,
            (0, false) => write!(f, "{body}")?,
            (_, true) => write!(f, " - {body}")?,
            (_, false) => write!(f, " + {body}")?,
        }
    }
    Ok(())
}

/// Integer polynomial, ascending coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "Vec<String>", try_from = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.to_q().eval(x)
    }

    pub fn max_abs_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Cauchy bound `1 + max_{i<n} |a_i| / |a_n|`, rounded up: every complex
    /// root has modulus below it.
    pub fn cauchy_bound(&self) -> BigInt {
        cauchy_bound_q(&self.to_q())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        self.to_q()
            .mul(&o.to_q())
            .to_int_poly()
            .expect("integer product")
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.to_q()
            .sub(&o.to_q())
            .to_int_poly()
            .expect("integer difference")
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        self.to_q()
            .add(&o.to_q())
            .to_int_poly()
            .expect("integer sum")
    }

    /// Smallest nonnegative integer root, if any.
    pub fn least_nonnegative_integer_root(&self) -> Option<BigInt> {
        if self.is_zero() {
            return Some(BigInt::zero());
        }
        let bound = self.cauchy_bound();
        // integer roots divide the lowest nonzero coefficient; scan small
        // ranges directly and otherwise test divisors found by trial division
        let low = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            return Some(BigInt::zero());
        }
        if bound <= BigInt::from(1_000_000) {
            let mut k = BigInt::zero();
            while k <= bound {
                if self.eval_int(&k).is_zero() {
                    return Some(k);
                }
                k += 1;
            }
            return None;
        }
        let roots = crate::polyfield::roots::integer_roots(&self.to_q()).ok()?;
        roots.into_iter().filter(|r| !r.is_negative()).min()
    }
}

pub fn cauchy_bound_q(f: &QPoly) -> BigInt {
    if f.deg() == 0 {
        return BigInt::one();
    }
    let lead = f.leading().abs();
    let m = f.coeffs()[..f.deg()]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    (m + BigRational::one()).ceil().to_integer()
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;
    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let cs = v
            .iter()
            .map(|s| {
                s.parse::<BigInt>()
                    .map_err(|_| format!("bad integer coefficient {s:?}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(cs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().map(|c| c.to_string()).collect(), "x")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_i64(cs)
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 0, 0, 1])), p(&[-1, 1]));
    }

    #[test]
    fn shift_expands_binomially() {
        assert_eq!(p(&[0, 0, 1]).shift_by(&int(-1)), p(&[1, -2, 1]));
    }

    #[test]
    fn divrem_x6_minus_1() {
        let (q, r) = p(&[-1, 0, 0, 0, 0, 0, 1]).divrem(&p(&[-1, 0, 1])).unwrap();
        assert_eq!(q, p(&[1, 0, 1, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(q.mul(&p(&[-1, 0, 1])), p(&[-1, 0, 0, 0, 0, 0, 1]));
        assert_eq!(
            p(&[1, 1]).divrem(&QPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn dispatch() {
        let f = p(&[2, 4]);
        let (c, _) = poly_ops(&f, PolyOp::Content).unwrap();
        assert_eq!(c, QPoly::constant(int(2)));
        let (q, r) = poly_ops(&p(&[-1, 0, 1]), PolyOp::DivRem(&p(&[1, 1]))).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.unwrap().is_zero());
    }

    #[test]
    fn squarefree() {
        // (x-1)^2 (x+2)^3 x
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]).pow(3)).mul(&p(&[0, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![p(&[0, 1]), p(&[-1, 1]), p(&[2, 1])]);
        assert_eq!(
            f.squarefree_part(),
            p(&[0, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]))
        );
    }

    #[test]
    fn sturm_counts() {
        // y^2 - 2y - 1 has roots 1 +- sqrt2: one negative
        let g = p(&[-1, -2, 1]);
        assert_eq!(g.count_real_roots(None, Some(&int(0))), 1);
        assert_eq!(g.count_real_roots(None, None), 2);
        assert_eq!(p(&[1, 0, 1]).count_real_roots(None, None), 0);
        assert_eq!(
            p(&[0, -1, 1]).count_real_roots(Some(&rat(-1, 2)), Some(&rat(1, 2))),
            1
        );
    }

    #[test]
    fn cauchy() {
        assert_eq!(
            IntPoly::from_i64(&[13, -4, 1]).cauchy_bound(),
            BigInt::from(14)
        );
    }

    #[test]
    fn nonnegative_integer_roots() {
        assert_eq!(
            IntPoly::from_i64(&[-6, 1, 1]).least_nonnegative_integer_root(),
            Some(BigInt::from(2))
        );
        assert_eq!(
            IntPoly::from_i64(&[1, 1]).least_nonnegative_integer_root(),
            None
        );
        assert_eq!(
            IntPoly::from_i64(&[0, 1]).least_nonnegative_integer_root(),
            Some(BigInt::zero())
        );
    }

    #[test]
    fn display() {
        assert_eq!(p(&[13, -4, 1]).to_string(), "x^2 - 4*x + 13");
        assert_eq!(IntPoly::from_i64(&[-1, 0, 1]).to_string(), "x^2 - 1");
    }
}
