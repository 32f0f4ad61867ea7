//! Limits of harmonious instances as gamma products, reduced to
//! `theta * pi^l * f(x) / g(x)` with `x = e^{pi sqrt(m) / D}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::expr::{eval_enclosure, ConstExpr};
use crate::exactnum::interval::DyadicInterval;
use crate::exactnum::rational::{
    format_rational, is_half_integer_or_integer, is_integer, parse_rational,
};
use crate::exactnum::{QuadElem, QuadElemDoc};
use crate::polyfield::roots::{roots_quadratic, QuadSplit, Root};
use crate::polyfield::{IntPoly, QPoly};
use crate::sequence::{classify, HGInstance};

/// `prod Gamma(numerator) / prod Gamma(denominator)`, times the rational
/// `prefactor`, for the product of `r(k)` over `k >= start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaProduct {
    pub numerator: Vec<QuadElem>,
    pub denominator: Vec<QuadElem>,
    pub start: u64,
    pub prefactor: BigRational,
}

/// Field context for arguments that are all rational.
const RATIONAL_CONTEXT: i64 = -1;

fn field_of(roots: &[Root]) -> Result<Option<i64>> {
    let mut d = None;
    for r in roots {
        if let Root::Quad(x) = r {
            if x.is_rational() {
                continue;
            }
            match d {
                None => d = Some(x.d()),
                Some(e) if e != x.d() => {
                    return Err(Error::FieldMismatch {
                        left: e,
                        right: x.d(),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(d)
}

fn split(f: &IntPoly) -> Result<Vec<Root>> {
    if f.deg() == 0 {
        return Ok(Vec::new());
    }
    match roots_quadratic(f)? {
        QuadSplit::Split(ms) => Ok(ms.expanded()),
        QuadSplit::NotSplitting => Err(Error::Unsupported(format!(
            "{f} has irreducible factors of degree > 2"
        ))),
    }
}

fn neg_root(r: &Root, d: i64) -> Result<QuadElem> {
    match r {
        Root::Rational(x) => QuadElem::rational(-x, d),
        Root::Quad(x) => Ok(x.rehome(d)?.neg()),
        Root::Tower(_) => Err(Error::Unsupported(
            "tower roots on the quadratic path".into(),
        )),
    }
}

/// The limit `prod_{k >= 0} r(k)` of a harmonious monic instance as a gamma
/// product: numerator arguments `-roots(p)`, denominator `-roots(q)`.
pub fn limit_as_gamma(p: &IntPoly, q: &IntPoly) -> Result<GammaProduct> {
    let class = classify(p, q);
    if !class.is_harmonious() {
        return Err(Error::WrongClass(format!("{class} is not harmonious")));
    }
    if let Some(k) = q.least_nonnegative_integer_root() {
        return Err(Error::InvalidInstance(format!(
            "q vanishes at {k}: the sequence has a zero tail"
        )));
    }
    if let Some(k) = p.least_nonnegative_integer_root() {
        return Err(Error::InvalidInstance(format!("p vanishes at {k}")));
    }
    let (rp, rq) = (split(p)?, split(q)?);
    let mut all = rp.clone();
    all.extend(rq.iter().cloned());
    let d = field_of(&all)
        .map_err(|e| Error::Unsupported(format!("roots in different quadratic fields ({e})")))?
        .unwrap_or(RATIONAL_CONTEXT);
    Ok(GammaProduct {
        numerator: rp.iter().map(|r| neg_root(r, d)).collect::<Result<_>>()?,
        denominator: rq.iter().map(|r| neg_root(r, d)).collect::<Result<_>>()?,
        start: 0,
        prefactor: BigRational::one(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    /// `Gamma(w)`.
    W,
    /// `Gamma(1/2 + w)`.
    HalfPlusW,
}

/// `Gamma(arg) = prefactor * Gamma(base + w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shifted {
    pub prefactor: QuadElem,
    pub base: Base,
    pub w: QuadElem,
}

/// Rising/falling factorial shift of `a + b sqrt(d)` (`a` in `Z/2`) to the
/// base `b sqrt(d)` or `1/2 + b sqrt(d)`. For rational arguments the base is
/// `Gamma(1)` or `Gamma(1/2)`.
pub fn shift_to_base(arg: &QuadElem) -> Result<Shifted> {
    let a = arg.a();
    if !is_half_integer_or_integer(a) {
        return Err(Error::Unsupported(format!(
            "real part {} of {arg} is not in Z/2",
            format_rational(a)
        )));
    }
    let d = arg.d();
    let w = QuadElem::new(BigRational::zero(), arg.b().clone(), d)?;
    let (base, start) = if is_integer(a) {
        if arg.is_rational() {
            if !a.is_positive() {
                return Err(Error::InvalidInstance(format!("Gamma pole at {arg}")));
            }
            (Base::W, QuadElem::from_int(1, d)?)
        } else {
            (Base::W, w.clone())
        }
    } else {
        (
            Base::HalfPlusW,
            w.add_rational(&BigRational::new(1.into(), 2.into())),
        )
    };
    // arg = start + n
    let n = (a - start.a())
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Limits("shift too long".into()))?;
    if n.unsigned_abs() > 1_000_000 {
        return Err(Error::Limits(format!("factorial shift of length {n}")));
    }
    let mut acc = QuadElem::from_int(1, d)?;
    if n >= 0 {
        for j in 0..n {
            acc = acc.mul(&start.add_rational(&BigRational::from_integer(j.into())))?;
        }
    } else {
        for j in n..0 {
            let f = start.add_rational(&BigRational::from_integer(j.into()));
            if f.is_zero() {
                return Err(Error::InvalidInstance(format!("Gamma pole at {arg}")));
            }
            acc = acc.div(&f)?;
        }
    }
    Ok(Shifted {
        prefactor: acc,
        base,
        w: if arg.is_rational() {
            QuadElem::from_int(0, d)?
        } else {
            w
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    IntegerRho,
    HalfIntegerRho,
}

/// `Gamma(rho + w) Gamma(rho - w) = prefactor * closed(kind, w)` with
/// `closed(IntegerRho, w) = Gamma(w)Gamma(-w) = 2 pi i e^{pi w i} / (w (1 - e^{2 pi w i}))` and
/// `closed(HalfIntegerRho, w) = 2 pi e^{pi w i} / (e^{2 pi w i} + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairForm {
    pub rho: BigRational,
    pub w: QuadElem,
    pub kind: PairKind,
    pub prefactor: QuadElem,
}

pub fn pair_product(rho: &BigRational, w: &QuadElem) -> Result<PairForm> {
    if !w.a().is_zero() || w.is_rational() {
        return Err(Error::InvalidInstance(format!(
            "w = {w} must be a nonzero multiple of sqrt(d)"
        )));
    }
    let plus = shift_to_base(&w.add_rational(rho))?;
    let minus = shift_to_base(&w.neg().add_rational(rho))?;
    let kind = if is_integer(rho) {
        PairKind::IntegerRho
    } else {
        PairKind::HalfIntegerRho
    };
    Ok(PairForm {
        rho: rho.clone(),
        w: w.clone(),
        kind,
        prefactor: plus.prefactor.mul(&minus.prefactor)?,
    })
}

impl PairForm {
    /// Enclosure of `prefactor * closed(kind, w)` for imaginary `w`.
    pub fn value_expr(&self) -> Result<ConstExpr> {
        let d = self.w.d();
        if d > 0 {
            return Err(Error::Unsupported(
                "closed form value needs imaginary w".into(),
            ));
        }
        let a = self
            .prefactor
            .is_rational()
            .then(|| self.prefactor.a().clone())
            .ok_or_else(|| Error::InvalidInstance("pair prefactor is not rational".into()))?;
        let m = d.unsigned_abs();
        // y = b sqrt(m), w = i y
        let y = ConstExpr::rational(self.w.b().clone()).mul(ConstExpr::Sqrt(m));
        let piy = ConstExpr::Pi.mul(y.clone());
        Ok(match self.kind {
            PairKind::IntegerRho => ConstExpr::rational(a)
                .mul(ConstExpr::Pi)
                .div(y.mul(piy.sinh())),
            PairKind::HalfIntegerRho => ConstExpr::rational(a)
                .mul(ConstExpr::Pi)
                .div(ConstExpr::Cosh(Box::new(piy))),
        })
    }
}

/// `theta * pi^ell * f(x) / g(x)`, `x = e^{pi sqrt(m) / den}`.
///
/// `theta` lives in `Q(sqrt m)`; for `m = 1` it is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalConstant {
    pub theta_a: BigRational,
    pub theta_b: BigRational,
    pub ell: i64,
    pub f: IntPoly,
    pub g: IntPoly,
    pub m: u64,
    pub den: u64,
    pub base_trivial: bool,
}

impl CanonicalConstant {
    pub fn rational(theta: BigRational) -> Self {
        CanonicalConstant {
            theta_a: theta,
            theta_b: BigRational::zero(),
            ell: 0,
            f: IntPoly::from_i64(&[1]),
            g: IntPoly::from_i64(&[1]),
            m: 1,
            den: 1,
            base_trivial: true,
        }
    }

    pub fn theta_is_rational(&self) -> bool {
        self.theta_b.is_zero()
    }

    /// `f` and `g` agree up to a constant.
    pub fn f_proportional_to_g(&self) -> bool {
        self.f.deg() == 0 && self.g.deg() == 0
    }

    pub fn theta_expr(&self) -> ConstExpr {
        let a = ConstExpr::rational(self.theta_a.clone());
        if self.theta_b.is_zero() {
            a
        } else {
            a.add(ConstExpr::rational(self.theta_b.clone()).mul(ConstExpr::Sqrt(self.m)))
        }
    }

    pub fn x_expr(&self) -> ConstExpr {
        ConstExpr::ExpPiSqrt {
            m: self.m,
            den: self.den,
        }
    }

    pub fn value_expr(&self) -> ConstExpr {
        let poly = |p: &IntPoly| -> ConstExpr {
            let mut acc: Option<ConstExpr> = None;
            for (i, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = ConstExpr::Rational(BigRational::from_integer(c.clone()))
                    .mul(self.x_expr().pow(i as i64));
                acc = Some(match acc {
                    None => term,
                    Some(s) => s.add(term),
                });
            }
            acc.unwrap_or_else(|| ConstExpr::int(0))
        };
        let mut e = self.theta_expr();
        if self.ell != 0 {
            e = e.mul(ConstExpr::Pi.pow(self.ell));
        }
        if !self.f_proportional_to_g() {
            e = e.mul(poly(&self.f)).div(poly(&self.g));
        }
        e
    }

    pub fn enclosure(&self, bits: u64, cap: u64) -> Result<DyadicInterval> {
        eval_enclosure(&self.value_expr(), bits, cap)
    }

    /// Same value times a rational.
    pub fn scaled(&self, k: &BigRational) -> Self {
        CanonicalConstant {
            theta_a: &self.theta_a * k,
            theta_b: &self.theta_b * k,
            ..self.clone()
        }
    }

    /// Structural invariants: `f`, `g` primitive, coprime, positive leading
    /// coefficients, `theta != 0`.
    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| {
            Err(Error::InvalidCertificate(format!(
                "canonical constant: {m}"
            )))
        };
        if self.theta_a.is_zero() && self.theta_b.is_zero() {
            return bad("theta = 0");
        }
        if self.m == 0 || self.den == 0 || (!self.theta_b.is_zero() && self.m == 1) {
            return bad("bad base");
        }
        for p in [&self.f, &self.g] {
            if p.is_zero() || !p.leading().is_positive() {
                return bad("leading coefficient must be positive");
            }
            let (c, _) = p.to_q().primitive_part();
            if !c.is_one() {
                return bad("not primitive");
            }
        }
        if self.f.to_q().gcd(&self.g.to_q()).deg() > 0 {
            return bad("f and g share a factor");
        }
        if self.f.coeff(0).is_zero() && self.g.coeff(0).is_zero() {
            return bad("common power of X");
        }
        Ok(())
    }

    pub fn to_doc(&self) -> CanonicalDoc {
        CanonicalDoc {
            theta: QuadElemDoc {
                a: format_rational(&self.theta_a),
                b: format_rational(&self.theta_b),
                d: self.m as i64,
            },
            ell: self.ell,
            f: self.f.clone(),
            g: self.g.clone(),
            m: self.m,
            den: self.den,
            base_trivial: self.base_trivial,
        }
    }

    pub fn from_doc(doc: &CanonicalDoc) -> Result<Self> {
        Ok(CanonicalConstant {
            theta_a: parse_rational(&doc.theta.a)?,
            theta_b: parse_rational(&doc.theta.b)?,
            ell: doc.ell,
            f: doc.f.clone(),
            g: doc.g.clone(),
            m: doc.m,
            den: doc.den,
            base_trivial: doc.base_trivial,
        })
    }
}

/// Wire form of a canonical constant; `theta = a + b sqrt(d)` with `d = m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalDoc {
    pub theta: QuadElemDoc,
    pub ell: i64,
    pub f: IntPoly,
    pub g: IntPoly,
    pub m: u64,
    pub den: u64,
    pub base_trivial: bool,
}

impl fmt::Display for CanonicalConstant {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let theta = if self.theta_b.is_zero() {
            format_rational(&self.theta_a)
        } else {
            format!(
                "{} + {}*sqrt({})",
                format_rational(&self.theta_a),
                format_rational(&self.theta_b),
                self.m
            )
        };
        write!(fm, "theta = {theta}, ell = {}", self.ell)?;
        if !self.base_trivial {
            write!(
                fm,
                ", f(X) = {}, g(X) = {}, X = {}",
                self.f.to_string().replace('x', "X"),
                self.g.to_string().replace('x', "X"),
                self.x_expr()
            )?;
        }
        Ok(())
    }
}

/// Real field element `a + b sqrt(m)` (`m = 1` means rational).
#[derive(Clone, Debug)]
struct RealQuad {
    a: BigRational,
    b: BigRational,
    m: u64,
}

impl RealQuad {
    fn rational(a: BigRational, m: u64) -> Self {
        RealQuad {
            a,
            b: BigRational::zero(),
            m,
        }
    }

    fn mul(&self, o: &RealQuad) -> RealQuad {
        let m = BigRational::from_integer(self.m.into());
        RealQuad {
            a: &self.a * &o.a + m * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            m: self.m,
        }
    }

    fn inv(&self) -> RealQuad {
        let n = &self.a * &self.a - BigRational::from_integer(self.m.into()) * &self.b * &self.b;
        RealQuad {
            a: &self.a / &n,
            b: -&self.b / &n,
            m: self.m,
        }
    }

    /// `b_y sqrt(m)`, folded to a rational when `m = 1`.
    fn sqrt_times(b: &BigRational, m: u64) -> RealQuad {
        if m == 1 {
            RealQuad::rational(b.clone(), m)
        } else {
            RealQuad {
                a: BigRational::zero(),
                b: b.clone(),
                m,
            }
        }
    }
}

/// Pairs each irrational argument with its conjugate: returns `(rho, w)` with
/// `w = b sqrt(d)`, `b > 0`, plus the leftover rational arguments.
fn conjugate_pairs(args: &[QuadElem]) -> Result<(Vec<(BigRational, QuadElem)>, Vec<BigRational>)> {
    let mut used = vec![false; args.len()];
    let mut pairs = Vec::new();
    let mut rationals = Vec::new();
    for i in 0..args.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = &args[i];
        if z.is_rational() {
            rationals.push(z.a().clone());
            continue;
        }
        let c = z.conjugate();
        let j = (0..args.len())
            .find(|&j| !used[j] && args[j] == c)
            .ok_or_else(|| Error::InvalidInstance(format!("argument {z} without its conjugate")))?;
        used[j] = true;
        let w = QuadElem::new(BigRational::zero(), z.b().abs(), z.d())?;
        pairs.push((z.a().clone(), w));
    }
    Ok((pairs, rationals))
}

/// `x^k`.
fn xpow(k: usize) -> QPoly {
    QPoly::monomial(BigRational::one(), k)
}

/// Reduces a gamma product (times `prefactor`) to canonical form.
pub fn canonicalize(gp: &GammaProduct, prefactor: &BigRational) -> Result<CanonicalConstant> {
    if prefactor.is_zero() || gp.prefactor.is_zero() {
        return Err(Error::InvalidInstance("zero prefactor".into()));
    }
    if gp.numerator.len() != gp.denominator.len() {
        return Err(Error::WrongClass("argument counts differ".into()));
    }
    let mut sums = Vec::new();
    for side in [&gp.numerator, &gp.denominator] {
        let mut s = (BigRational::zero(), BigRational::zero());
        for z in side.iter() {
            s.0 += z.a();
            s.1 += z.b();
        }
        sums.push(s);
    }
    if sums[0] != sums[1] {
        return Err(Error::WrongClass("argument sums differ".into()));
    }
    let mut d = None;
    for z in gp.numerator.iter().chain(&gp.denominator) {
        if !z.is_rational() {
            match d {
                None => d = Some(z.d()),
                Some(e) if e != z.d() => {
                    return Err(Error::Unsupported(
                        "arguments in different quadratic fields".into(),
                    ))
                }
                _ => {}
            }
        }
    }
    if let Some(d) = d {
        if d > 0 {
            return Err(Error::Unsupported(format!(
                "real quadratic field Q(sqrt {d}) needs the conditional path"
            )));
        }
    }
    let m = d.map(|d| d.unsigned_abs()).unwrap_or(1);
    let (np, nr) = conjugate_pairs(&gp.numerator)?;
    let (dp, dr) = conjugate_pairs(&gp.denominator)?;

    let mut theta = RealQuad::rational(prefactor * &gp.prefactor, m);
    let mut ell: i64 = np.len() as i64 - dp.len() as i64;
    // rational arguments: Gamma(n) = (n-1)!, Gamma(n + 1/2) = A sqrt(pi)
    let mut half_pi: i64 = 0;
    for (side, sign) in [(&nr, 1i64), (&dr, -1i64)] {
        for a in side.iter() {
            let s = shift_to_base(&QuadElem::rational(
                a.clone(),
                d.unwrap_or(RATIONAL_CONTEXT),
            )?)?;
            let k = RealQuad::rational(s.prefactor.a().clone(), m);
            theta = if sign > 0 {
                theta.mul(&k)
            } else {
                theta.mul(&k.inv())
            };
            if s.base == Base::HalfPlusW {
                half_pi += sign;
            }
        }
    }
    if half_pi % 2 != 0 {
        return Err(Error::Unsupported("odd power of sqrt(pi)".into()));
    }
    ell += half_pi / 2;

    let mut den = BigInt::one();
    for (_, w) in np.iter().chain(&dp) {
        den = den.lcm(w.b().denom());
    }
    let den_u = den
        .to_u64()
        .ok_or_else(|| Error::Limits("exponent denominator too large".into()))?;
    let mut f = QPoly::one();
    let mut g = QPoly::one();
    for (pairs, sign) in [(&np, 1i64), (&dp, -1i64)] {
        for (rho, w) in pairs.iter() {
            let form = pair_product(rho, w)?;
            if !form.prefactor.is_rational() {
                return Err(Error::InvalidInstance(
                    "pair prefactor is not rational".into(),
                ));
            }
            let mut k =
                RealQuad::rational(form.prefactor.a() * BigRational::from_integer(2.into()), m);
            if form.kind == PairKind::IntegerRho {
                // Gamma(iy)Gamma(-iy) = pi / (y sinh(pi y)), y = b sqrt(m)
                k = k.mul(&RealQuad::sqrt_times(w.b(), m).inv());
            }
            let e = (w.b() * BigRational::from_integer(den.clone()))
                .to_integer()
                .to_usize()
                .ok_or_else(|| Error::Limits("exponent too large".into()))?;
            if e > 4096 {
                return Err(Error::Limits(format!("exponent {e} of X too large")));
            }
            let mut tail = xpow(2 * e);
            tail = match form.kind {
                PairKind::IntegerRho => tail.sub(&QPoly::one()),
                PairKind::HalfIntegerRho => tail.add(&QPoly::one()),
            };
            if sign > 0 {
                theta = theta.mul(&k);
                f = f.mul(&xpow(e));
                g = g.mul(&tail);
            } else {
                theta = theta.mul(&k.inv());
                g = g.mul(&xpow(e));
                f = f.mul(&tail);
            }
        }
    }
    let common = f.valuation().min(g.valuation());
    if common > 0 {
        f = f.exact_div(&xpow(common)).expect("x-power divides");
        g = g.exact_div(&xpow(common)).expect("x-power divides");
    }
    let h = f.gcd(&g);
    f = f.exact_div(&h).expect("gcd divides");
    g = g.exact_div(&h).expect("gcd divides");
    let (cf, fi) = f.primitive_part();
    let (cg, gi) = g.primitive_part();
    let (mut fi, mut gi, mut k) = (fi, gi, cf / cg);
    if fi.leading().is_negative() {
        fi = IntPoly::new(fi.coeffs().iter().map(|c| -c).collect());
        k = -k;
    }
    if gi.leading().is_negative() {
        gi = IntPoly::new(gi.coeffs().iter().map(|c| -c).collect());
        k = -k;
    }
    theta = theta.mul(&RealQuad::rational(k, m));
    let out = CanonicalConstant {
        theta_a: theta.a,
        theta_b: theta.b,
        ell,
        f: fi,
        g: gi,
        m,
        den: den_u,
        base_trivial: np.is_empty() && dp.is_empty(),
    };
    out.check()?;
    Ok(out)
}

/// Canonical form of `u0 * prod_{k >= 0} r(k)` for a harmonious instance.
pub fn canonical_limit(inst: &HGInstance) -> Result<CanonicalConstant> {
    if !inst.is_monic() {
        return Err(Error::NonMonic(format!("{} / {}", inst.p, inst.q)));
    }
    if inst.q == inst.p {
        return Ok(CanonicalConstant::rational(inst.u0.clone()));
    }
    let gp = limit_as_gamma(&inst.p, &inst.q)?;
    canonicalize(&gp, &inst.u0)
}

/// Tail envelope: for `K` large enough, `prod_{k > K} r(k)` lies in
/// `[e^{-eps}, e^{eps}]`. Returns `eps`, or `None` when `K` is too small.
pub fn tail_envelope(p: &IntPoly, q: &IntPoly, k: u64) -> Option<BigRational> {
    let h = q.sub(p);
    let hsum: BigInt = h.coeffs().iter().map(|c| c.abs()).sum();
    let psum: BigInt = p.coeffs()[..p.deg()].iter().map(|c| c.abs()).sum();
    // |p(k)| >= k^m / 2 for k >= 2 sum|p_i|, |h(k)| <= sum|h_i| k^{m-2}
    let c = BigInt::from(2) * &hsum;
    let start = BigInt::from(k + 1);
    if start < BigInt::from(2) * &psum || &start * &start < BigInt::from(2) * &c {
        return None;
    }
    // sum_{j > K} 2C / j^2 <= 2C / K
    Some(BigRational::new(
        BigInt::from(2) * c,
        BigInt::from(k.max(1)),
    ))
}

/// Checks that the constant's enclosure overlaps `prod_{k <= K} r(k)` times
/// the tail envelope.
pub fn check_against_partial_product(
    c: &CanonicalConstant,
    inst: &HGInstance,
    k: u64,
    bits: u64,
) -> Result<bool> {
    let eps = tail_envelope(&inst.p, &inst.q, k)
        .ok_or_else(|| Error::InvalidInstance(format!("K = {k} below the envelope threshold")))?;
    let partial = crate::sequence::term_capped(inst, k + 1, k + 1)?;
    let lo = ConstExpr::rational(partial.clone()).mul(ConstExpr::rational(-eps.clone()).exp());
    let hi = ConstExpr::rational(partial.clone()).mul(ConstExpr::rational(eps).exp());
    let (lo, hi) = (
        eval_enclosure(&lo, bits, u64::MAX)?,
        eval_enclosure(&hi, bits, u64::MAX)?,
    );
    let window = lo.hull(&hi);
    Ok(c.enclosure(bits, u64::MAX)?.overlaps(&window))
}
