//! The conditional procedure for instances whose irrational roots pair up as
//! `rho +- w` with `rho` in `Z/2`: the limit becomes a product of
//! `pi / sin(pi w)` and `pi / cos(pi w)` factors, and `L = t` becomes a
//! Laurent identity in `pi`, `e^pi` and `e^{i pi s_j}` over a rational basis
//! `{1, i} U S`. A vanishing identity proves equality outright; a nonzero one
//! rules equality out under Schanuel's conjecture.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{Config, START_PRECISION};
use crate::decide::{decide_with, Conditionality, Verdict};
use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, parse_rational};
use crate::exactnum::tower::{express_in, rational_rank};
use crate::exactnum::{ComplexInterval, DyadicInterval, Tower, TowerElem, TowerKind};
use crate::polyfield::multipoly::{galois_norm_poly, Exponents, MultiPoly};
use crate::polyfield::{root_in_tower, tower_roots, Root, RootMultiset};
use crate::recognizers::{check_assumption1, Assumption1, MatchingCertificate};
use crate::sequence::{classify, HGInstance};
use crate::strategy::{
    against, Comparison, LimitAnalysis, LimitEvidence, LimitStrategy, PairDoc, Rationale, Relation,
};

/// Precision of the identity's nonvanishing check.
pub const IDENTITY_CHECK_BITS: u64 = 256;

/// Largest factorial argument accepted from a rational root.
const FACTORIAL_CAP: u64 = 100_000;

static STRESS_CASES: AtomicU64 = AtomicU64::new(0);

/// Nonzero identities whose enclosure still contained 0 at the precision cap.
pub fn stress_case_count() -> u64 {
    STRESS_CASES.load(AtomicOrdering::Relaxed)
}

/// A matched pair of roots `rho + w`, `rho - w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRoot {
    pub rho: BigRational,
    pub w: TowerElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedRoots {
    pub pairs: Vec<PairRoot>,
    /// Rational roots, repeated by multiplicity.
    pub rational: Vec<BigRational>,
}

/// Splits the roots into the certificate's pairs and the rational roots.
pub fn pair_roots(
    tower: &Arc<Tower>,
    roots: &RootMultiset,
    cert: &MatchingCertificate,
) -> Result<PairedRoots> {
    let bad = |m: String| Error::InvalidCertificate(m);
    let mut rational = Vec::new();
    let mut irrational: Vec<(TowerElem, num_complex::Complex64)> = Vec::new();
    for r in roots.expanded() {
        if r.is_rational() {
            let x = match &r {
                Root::Rational(x) => x.clone(),
                _ => root_in_tower(tower, &r)?
                    .rational_value()
                    .expect("rational root"),
            };
            rational.push(x);
        } else {
            let z = r.to_complex_f64();
            irrational.push((root_in_tower(tower, &r)?, z));
        }
    }
    if irrational.len() != cert.vertices.len() {
        return Err(bad(format!(
            "{} vertices for {} irrational roots",
            cert.vertices.len(),
            irrational.len()
        )));
    }
    // attribute each vertex to a copy of an exact root
    let mut used = vec![false; irrational.len()];
    let mut owner = Vec::with_capacity(cert.vertices.len());
    for v in &cert.vertices {
        let disc = v.disc();
        let slack = 1e-9 * (1.0 + disc.center.norm());
        let k = (0..irrational.len())
            .find(|&k| !used[k] && disc.contains(irrational[k].1, slack))
            .ok_or_else(|| bad("vertex matches no root".into()))?;
        used[k] = true;
        owner.push(k);
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let mut pairs = Vec::with_capacity(cert.pairs.len());
    let mut covered = vec![false; owner.len()];
    for e in &cert.pairs {
        if e.u >= owner.len() || e.v >= owner.len() || covered[e.u] || covered[e.v] || e.u == e.v {
            return Err(bad(format!(
                "edge ({}, {}) is not part of a matching",
                e.u, e.v
            )));
        }
        covered[e.u] = true;
        covered[e.v] = true;
        let (a, b) = (&irrational[owner[e.u]].0, &irrational[owner[e.v]].0);
        let rho = a.add(b)?.rational_value().map(|s| s / &two);
        let expected = parse_rational(&e.rho).map_err(|_| bad(format!("bad rho {:?}", e.rho)))?;
        if rho.as_ref() != Some(&expected) || !(&expected * &two).is_integer() {
            return Err(bad(format!(
                "pair ({}, {}) does not have center {}",
                e.u, e.v, e.rho
            )));
        }
        let w = a.sub(b)?.scale(&(BigRational::one() / &two));
        pairs.push(PairRoot { rho: expected, w });
    }
    if covered.iter().any(|c| !c) {
        return Err(bad("matching is not perfect".into()));
    }
    Ok(PairedRoots { pairs, rational })
}

/// `{1, i} U S` with every `w_k` an integer combination of `1/one_den`,
/// `i/i_den` and the `s_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisResult {
    pub s: Vec<TowerElem>,
    /// Row `k`: coefficients of `w_k` on `1/one_den`, `i/i_den`, `s_1, ...`.
    pub coeffs: Vec<Vec<BigInt>>,
    pub one_den: BigInt,
    pub i_den: BigInt,
    /// The maximal independent subset before normalization.
    pub independent: Vec<TowerElem>,
    /// Per element of `independent`, the lcm of its coefficient denominators.
    pub normalizers: Vec<BigInt>,
}

/// Greedy maximal subset `S'` of `ws` with `{1, i} U S'` independent over Q,
/// then `s_j = s'_j / lcm_k(den y_kj)`.
pub fn build_basis(tower: &Arc<Tower>, ws: &[TowerElem]) -> Result<BasisResult> {
    let base = vec![TowerElem::one(tower), TowerElem::i(tower)?];
    let mut span = base.clone();
    let mut independent = Vec::new();
    for w in ws {
        if !Arc::ptr_eq(w.tower(), tower) && **w.tower() != **tower {
            return Err(Error::TowerMismatch(
                "basis element in another tower".into(),
            ));
        }
        span.push(w.clone());
        if rational_rank(&span) == span.len() {
            independent.push(w.clone());
        } else {
            span.pop();
        }
    }
    let ys: Vec<Vec<BigRational>> = ws
        .iter()
        .map(|w| {
            express_in(&span, w).ok_or_else(|| Error::InvalidField(format!("{w} outside the span")))
        })
        .collect::<Result<_>>()?;
    let lcms: Vec<BigInt> = (0..span.len())
        .map(|j| {
            ys.iter()
                .fold(BigInt::one(), |acc, y| acc.lcm(y[j].denom()))
        })
        .collect();
    let coeffs = ys
        .iter()
        .map(|y| {
            y.iter()
                .zip(&lcms)
                .map(|(c, l)| (c * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let s = independent
        .iter()
        .zip(&lcms[2..])
        .map(|(e, l)| e.scale(&BigRational::new(BigInt::one(), l.clone())))
        .collect();
    Ok(BasisResult {
        s,
        coeffs,
        one_den: lcms[0].clone(),
        i_den: lcms[1].clone(),
        independent,
        normalizers: lcms[2..].to_vec(),
    })
}

impl BasisResult {
    /// Re-checks independence of `{1, i} U S` and the exact reconstruction
    /// of every `w_k`.
    pub fn check(&self, tower: &Arc<Tower>, ws: &[TowerElem]) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        let mut span = vec![TowerElem::one(tower), TowerElem::i(tower)?];
        span.extend(self.s.iter().cloned());
        if rational_rank(&span) != span.len() {
            return bad("basis is dependent".into());
        }
        let units = [
            TowerElem::rational(tower, BigRational::new(BigInt::one(), self.one_den.clone())),
            TowerElem::i(tower)?.scale(&BigRational::new(BigInt::one(), self.i_den.clone())),
        ];
        if ws.len() != self.coeffs.len() {
            return bad("coefficient rows do not match".into());
        }
        for (w, row) in ws.iter().zip(&self.coeffs) {
            let mut acc = TowerElem::zero(tower);
            for (c, e) in row.iter().zip(units.iter().chain(&self.s)) {
                acc = acc.add(&e.scale(&BigRational::from_integer(c.clone())))?;
            }
            if acc != *w {
                return bad(format!("{w} does not reconstruct"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `pi / sin(pi w)` up to an algebraic factor.
    IntegerRho,
    /// `pi / cos(pi w)` up to an algebraic factor.
    HalfIntegerRho,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Gamma factors from the roots of `p`.
    Numerator,
    /// Gamma factors from the roots of `q`.
    Denominator,
}

/// `Gamma(r + w) Gamma(r - w) = pi * coef * z / (z^2 -+ 1)` with
/// `z = e^{i pi w} = zeta * monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairFactor {
    pub side: Side,
    /// Gamma argument center `r = -rho`.
    pub r: BigRational,
    pub w: TowerElem,
    pub kind: PairKind,
    pub coef: TowerElem,
    pub zeta: TowerElem,
    /// Exponents of `(Pi, E, Y_1, ...)` in `z`; the `Pi` entry is 0.
    pub mono: Exponents,
}

impl PairFactor {
    fn numerator(&self) -> Result<MultiPoly> {
        let mut e = self.mono.clone();
        e[0] = 1;
        Ok(MultiPoly::monomial(self.coef.mul(&self.zeta)?, e))
    }

    fn denominator(&self) -> Result<MultiPoly> {
        let t = self.zeta.tower();
        let sq: Exponents = self.mono.iter().map(|k| 2 * k).collect();
        let one = TowerElem::one(t);
        let c = match self.kind {
            PairKind::IntegerRho => one.neg(),
            PairKind::HalfIntegerRho => one,
        };
        let mut d = MultiPoly::monomial(self.zeta.square(), sq);
        d.add_term(vec![0; self.mono.len()], c);
        Ok(d)
    }

    /// Enclosure of `Gamma(r + w) Gamma(r - w)` from `z = e^{i pi w}`
    /// evaluated directly.
    fn enclosure(&self, bits: u64) -> Result<ComplexInterval> {
        let w = bits + 16;
        let pi = ComplexInterval::real(DyadicInterval::pi(w));
        let ipw = self
            .w
            .to_complex(w)
            .mul(&pi, w)
            .mul(&ComplexInterval::i(), w);
        let z = ipw.exp(w);
        let one = ComplexInterval::one();
        let den = match self.kind {
            PairKind::IntegerRho => z.mul(&z, w).sub(&one, w),
            PairKind::HalfIntegerRho => z.mul(&z, w).add(&one, w),
        };
        let num = pi.mul(&self.coef.to_complex(w), w).mul(&z, w);
        num.div(&den, w).ok_or_else(|| Error::PrecisionCap {
            requested: bits,
            cap: bits,
        })
    }
}

fn pair_factor(
    tower: &Arc<Tower>,
    side: Side,
    pair: &PairRoot,
    row: &[BigInt],
    basis: &BasisResult,
) -> Result<PairFactor> {
    let r = -pair.rho.clone();
    let w = pair.w.clone();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let (kind, base) = if r.is_integer() {
        (PairKind::IntegerRho, BigRational::zero())
    } else {
        (PairKind::HalfIntegerRho, half.clone())
    };
    let n = (&r - &base)
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Limits("pair shift too large".into()))?;
    if n.unsigned_abs() > FACTORIAL_CAP {
        return Err(Error::Limits(format!("pair shift {n}")));
    }
    // P = Gamma(r + w) Gamma(r - w) / (Gamma(base + w) Gamma(base - w))
    let mut prod = TowerElem::one(tower);
    let range: Vec<i64> = if n >= 0 {
        (0..n).collect()
    } else {
        (n..0).collect()
    };
    for j in range {
        let c = &base + BigRational::from_integer(BigInt::from(j));
        let f = w.add_rational(&c).mul(&w.neg().add_rational(&c))?;
        prod = prod.mul(&f)?;
    }
    if n < 0 {
        prod = prod.inv()?;
    }
    let coef = match kind {
        // Gamma(w) Gamma(-w) = -pi / (w sin(pi w)), 1/sin = 2 i z / (z^2 - 1)
        PairKind::IntegerRho => {
            let two_i = TowerElem::i(tower)?.scale(&BigRational::from_integer(BigInt::from(2)));
            two_i.mul(&prod.neg().div(&w)?)?
        }
        // Gamma(1/2 + w) Gamma(1/2 - w) = pi / cos(pi w), 1/cos = 2 z / (z^2 + 1)
        PairKind::HalfIntegerRho => prod.scale(&BigRational::from_integer(BigInt::from(2))),
    };
    let a = BigRational::new(row[0].clone(), basis.one_den.clone());
    let zeta = unit_root(tower, &a)?;
    let mut mono = vec![0i64; 2 + basis.s.len()];
    // e^{i pi (b i / i_den)} = e^{-pi b / i_den} = E^{-b}
    mono[1] = -to_exp(&row[1])?;
    for (j, c) in row[2..].iter().enumerate() {
        mono[2 + j] = to_exp(c)?;
    }
    Ok(PairFactor {
        side,
        r,
        w,
        kind,
        coef,
        zeta,
        mono,
    })
}

fn to_exp(c: &BigInt) -> Result<i64> {
    c.to_i64()
        .filter(|k| k.abs() < 1 << 20)
        .ok_or_else(|| Error::Limits(format!("exponent {c}")))
}

/// `e^{i pi a}` for rational `a`, if the tower contains it.
fn unit_root(tower: &Arc<Tower>, a: &BigRational) -> Result<TowerElem> {
    let two = BigRational::from_integer(BigInt::from(2));
    // reduce a mod 2
    let a = a - (a / &two).floor() * &two;
    if a.is_zero() {
        return Ok(TowerElem::one(tower));
    }
    if a.is_one() {
        return Ok(TowerElem::one(tower).neg());
    }
    if (&a * &two).is_integer() {
        let i = TowerElem::i(tower)?;
        return Ok(if a < BigRational::one() { i } else { i.neg() });
    }
    let m = match tower.kind() {
        TowerKind::Cyclotomic { m } | TowerKind::Radical { m, .. } => *m,
        TowerKind::Multiquadratic { .. } => 0,
    };
    let k = &a * BigRational::from_integer(BigInt::from(m)) / &two;
    if m == 0 || !k.is_integer() {
        return Err(Error::Unsupported(format!(
            "e^(i pi {}) is not in {}",
            format_rational(&a),
            tower.kind()
        )));
    }
    TowerElem::zeta_power(tower, k.to_integer().to_i64().expect("k < m"))
}

/// `L - t = 0` with denominators cleared, as a Laurent polynomial in
/// `Pi = pi`, `E = e^{pi / i_den}` and `Y_j = e^{i pi s_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicIdentity {
    pub poly: MultiPoly,
    pub symbols: Vec<String>,
    pub target: BigRational,
}

impl fmt::Display for SymbolicIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0 = 0");
        }
        let parts: Vec<String> = self
            .poly
            .terms()
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(&self.symbols)
                    .filter(|(k, _)| **k != 0)
                    .map(|(k, s)| {
                        if *k == 1 {
                            s.clone()
                        } else {
                            format!("{s}^{k}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// The limit factors shared by every identity of one instance.
#[derive(Clone, Debug)]
pub struct LimitForm {
    pub tower: Arc<Tower>,
    pub basis: BasisResult,
    pub factors: Vec<PairFactor>,
    /// `u0` times the factorials of the rational roots.
    pub prefactor: BigRational,
    pub symbols: Vec<String>,
}

impl LimitForm {
    pub fn new(
        tower: Arc<Tower>,
        p: &PairedRoots,
        q: &PairedRoots,
        u0: &BigRational,
    ) -> Result<Self> {
        let ws: Vec<TowerElem> = p
            .pairs
            .iter()
            .chain(&q.pairs)
            .map(|e| e.w.clone())
            .collect();
        let basis = build_basis(&tower, &ws)?;
        basis.check(&tower, &ws)?;
        let mut factors = Vec::new();
        for (k, pair) in p.pairs.iter().chain(&q.pairs).enumerate() {
            let side = if k < p.pairs.len() {
                Side::Numerator
            } else {
                Side::Denominator
            };
            factors.push(pair_factor(&tower, side, pair, &basis.coeffs[k], &basis)?);
        }
        let mut prefactor = u0.clone();
        for a in &p.rational {
            prefactor *= gamma_of_negated_root(a)?;
        }
        for b in &q.rational {
            prefactor /= gamma_of_negated_root(b)?;
        }
        let mut symbols = vec!["pi".to_string(), format!("e^(pi/{})", basis.i_den)];
        if basis.i_den.is_one() {
            symbols[1] = "e^pi".into();
        }
        symbols.extend((1..=basis.s.len()).map(|j| format!("Y{j}")));
        Ok(LimitForm {
            tower,
            basis,
            factors,
            prefactor,
            symbols,
        })
    }

    fn nvars(&self) -> usize {
        2 + self.basis.s.len()
    }

    /// Cleared form of `L = t`; `reverse` multiplies the factors in the
    /// opposite order, for an independent replay.
    pub fn identity(&self, t: &BigRational, reverse: bool) -> Result<SymbolicIdentity> {
        let nv = self.nvars();
        let mut left =
            MultiPoly::constant(TowerElem::rational(&self.tower, self.prefactor.clone()), nv);
        let mut right = MultiPoly::constant(TowerElem::rational(&self.tower, t.clone()), nv);
        let mut order: Vec<&PairFactor> = self.factors.iter().collect();
        if reverse {
            order.reverse();
        }
        for f in order {
            let (n, d) = (f.numerator()?, f.denominator()?);
            match f.side {
                Side::Numerator => {
                    left = left.mul(&n)?;
                    right = right.mul(&d)?;
                }
                Side::Denominator => {
                    left = left.mul(&d)?;
                    right = right.mul(&n)?;
                }
            }
        }
        let poly = left.sub(&right);
        Ok(SymbolicIdentity {
            poly,
            symbols: self.symbols.clone(),
            target: t.clone(),
        })
    }

    /// Enclosure of the limit from the pair factors.
    pub fn enclosure(&self, bits: u64) -> Result<ComplexInterval> {
        let w = bits + 16;
        let mut acc = ComplexInterval::from_rational(&self.prefactor, w);
        for f in &self.factors {
            let v = f.enclosure(w)?;
            acc = match f.side {
                Side::Numerator => acc.mul(&v, w),
                Side::Denominator => acc.div(&v, w).ok_or(Error::PrecisionCap {
                    requested: bits,
                    cap: bits,
                })?,
            };
        }
        Ok(acc)
    }

    fn symbol_values(&self, bits: u64) -> Vec<ComplexInterval> {
        let w = bits + 16;
        let pi = DyadicInterval::pi(w);
        let e = pi
            .div(
                &DyadicInterval::point(crate::exactnum::Dyadic::from_int(self.basis.i_den.clone())),
                w,
            )
            .expect("i_den > 0")
            .exp(w);
        let mut out = vec![ComplexInterval::real(pi.clone()), ComplexInterval::real(e)];
        let ipi = ComplexInterval::new(DyadicInterval::zero(), pi);
        for s in &self.basis.s {
            out.push(s.to_complex(w).mul(&ipi, w).exp(w));
        }
        out
    }

    /// Enclosure of the identity's left side at the given precision.
    pub fn evaluate(&self, id: &SymbolicIdentity, bits: u64) -> ComplexInterval {
        let w = bits + 16;
        let vals = self.symbol_values(bits);
        let mut acc = ComplexInterval::zero();
        for (e, c) in id.poly.terms() {
            let mut term = c.to_complex(w);
            for (k, v) in e.iter().zip(&vals) {
                if *k != 0 {
                    term = term.mul(&v.powi(*k, w).expect("symbols are nonzero"), w);
                }
            }
            acc = acc.add(&term, w);
        }
        acc
    }

    /// Whether the identity only involves `pi` with `e^pi`, or `pi` with one
    /// `e^{pi sqrt(n)}`, where algebraic independence is known outright.
    pub fn degenerate(&self, id: &SymbolicIdentity) -> bool {
        let support = id.poly.support_vars();
        let ys: Vec<usize> = support.iter().filter(|&&v| v >= 2).copied().collect();
        match ys.as_slice() {
            [] => true,
            [y] if !support.contains(&1) => {
                let s = &self.basis.s[y - 2];
                s.square().rational_value().is_some_and(|r| r.is_negative())
            }
            _ => false,
        }
    }
}

fn gamma_of_negated_root(a: &BigRational) -> Result<BigRational> {
    let k = -a.clone();
    if !k.is_integer() || !k.is_positive() {
        return Err(Error::InvalidInstance(format!(
            "rational root {} is not a negative integer",
            format_rational(a)
        )));
    }
    let k = k
        .to_integer()
        .to_u64()
        .filter(|k| *k <= FACTORIAL_CAP)
        .ok_or_else(|| Error::Limits(format!("Gamma({k})")))?;
    let mut f = BigInt::one();
    for j in 2..k {
        f *= j;
    }
    Ok(BigRational::from_integer(f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityVerdict {
    HoldsUnconditionally,
    FailsUnderSC,
}

pub fn decide_identity(id: &SymbolicIdentity) -> IdentityVerdict {
    if id.poly.is_zero() {
        IdentityVerdict::HoldsUnconditionally
    } else {
        IdentityVerdict::FailsUnderSC
    }
}

/// Galois norm of the identity: a polynomial with rational coefficients that
/// vanishes at the symbol values whenever the identity does.
pub fn identity_norm(id: &SymbolicIdentity) -> Result<BTreeMap<Exponents, BigRational>> {
    galois_norm_poly(&id.poly)
}

/// Checks that a nonzero identity's enclosure excludes 0, from 256 bits up to
/// `cap`. Returns the separating precision, or `None` after logging a stress
/// case.
pub fn check_nonvanishing(form: &LimitForm, id: &SymbolicIdentity, cap: u64) -> Option<u64> {
    let mut bits = IDENTITY_CHECK_BITS;
    while bits <= cap.max(IDENTITY_CHECK_BITS) {
        if !form.evaluate(id, bits).contains_zero() {
            return Some(bits);
        }
        bits *= 2;
    }
    STRESS_CASES.fetch_add(1, AtomicOrdering::Relaxed);
    log::warn!("Schanuel stress case: enclosure of {id} contains 0 at {cap} bits");
    None
}

/// Pairing through Assumption-1 matchings and the Laurent identity.
pub struct ConditionalStrategy;

pub struct ConditionalAnalysis {
    pub form: LimitForm,
    pub matchings: Vec<MatchingCertificate>,
    pub pairs: Vec<PairDoc>,
}

fn matching_for(f: &crate::polyfield::IntPoly) -> Result<MatchingCertificate> {
    match check_assumption1(f)? {
        Assumption1::Matching(c) => Ok(c),
        no => Err(Error::Unsupported(format!("{f}: {no}"))),
    }
}

/// Builds the limit form of a harmonious monic instance.
pub fn analyze_conditional(inst: &HGInstance) -> Result<ConditionalAnalysis> {
    if !inst.is_monic() {
        return Err(Error::NonMonic(format!("{} / {}", inst.p, inst.q)));
    }
    let class = classify(&inst.p, &inst.q);
    if !class.is_harmonious() {
        return Err(Error::WrongClass(format!(
            "{class} has no finite nonzero limit"
        )));
    }
    let (cp, cq) = (matching_for(&inst.p)?, matching_for(&inst.q)?);
    let (tower, roots) = tower_roots(&[&inst.p, &inst.q])?;
    let pp = pair_roots(&tower, &roots[0], &cp)?;
    let pq = pair_roots(&tower, &roots[1], &cq)?;
    let form = LimitForm::new(tower, &pp, &pq, &inst.u0)?;
    let pairs = form
        .factors
        .iter()
        .map(|f| PairDoc {
            side: match f.side {
                Side::Numerator => "p".into(),
                Side::Denominator => "q".into(),
            },
            rho: format_rational(&-f.r.clone()),
            w: f.w.to_string(),
        })
        .collect();
    Ok(ConditionalAnalysis {
        form,
        matchings: vec![cp, cq],
        pairs,
    })
}

impl LimitStrategy for ConditionalStrategy {
    fn name(&self) -> &'static str {
        "conditional"
    }

    fn analyze(&self, inst: &HGInstance, _cfg: &Config) -> Result<Box<dyn LimitAnalysis>> {
        Ok(Box::new(analyze_conditional(inst)?))
    }
}

impl ConditionalAnalysis {
    /// Order of `Re L` against `x` by precision doubling.
    fn order(&self, x: &BigRational, cap: u64) -> Result<(Relation, u64)> {
        let mut bits = START_PRECISION;
        loop {
            let l = self.form.enclosure(bits)?;
            let d =
                l.re.sub(&DyadicInterval::from_rational(x, bits + 16), bits + 16);
            if d.is_positive() {
                return Ok((Relation::Greater, bits));
            }
            if d.is_negative() {
                return Ok((Relation::Less, bits));
            }
            bits *= 2;
            if bits > cap {
                return Err(Error::PrecisionCap {
                    requested: bits,
                    cap,
                });
            }
        }
    }
}

impl LimitAnalysis for ConditionalAnalysis {
    fn compare_to(&mut self, x: &BigRational, cfg: &Config) -> Result<Comparison> {
        let id = self.form.identity(x, false)?;
        if decide_identity(&id) == IdentityVerdict::HoldsUnconditionally {
            if !self.form.identity(x, true)?.poly.is_zero() {
                return Err(Error::InvalidCertificate(
                    "identity replay disagrees".into(),
                ));
            }
            return Ok(Comparison {
                against: against(x),
                relation: Relation::Equal,
                conditional: false,
                equality: Rationale::IdentityVanishes,
                precision_bits: None,
            });
        }
        check_nonvanishing(&self.form, &id, cfg.precision_cap);
        // L is a product of nonzero Gamma values, so L != 0 needs no conjecture
        let degenerate = x.is_zero() || self.form.degenerate(&id);
        let (relation, bits) = self.order(x, cfg.precision_cap)?;
        Ok(Comparison {
            against: against(x),
            relation,
            conditional: !(degenerate && cfg.degeneration),
            equality: Rationale::IdentityNonzero {
                precision_bits: bits,
                degenerate,
            },
            precision_bits: Some(bits),
        })
    }

    fn evidence(&self) -> LimitEvidence {
        LimitEvidence::Identity {
            tower: self.form.tower.kind().to_string(),
            symbols: self.form.symbols.clone(),
            pairs: self.pairs.clone(),
            matchings: self.matchings.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub against: String,
    pub identity: String,
    pub verdict: IdentityVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionalVerdict {
    pub verdict: Verdict,
    pub conditionality: Conditionality,
    pub identity_trace: Vec<TraceEntry>,
}

/// The decision pipeline with the conditional strategy for the limit.
pub fn decide_conditional(inst: &HGInstance, cfg: &Config) -> Result<ConditionalVerdict> {
    let verdict = decide_with(
        inst,
        cfg,
        &[Arc::new(ConditionalStrategy) as Arc<dyn LimitStrategy>],
    )?;
    let mut identity_trace = Vec::new();
    if let Some(l) = &verdict.limit {
        let a = analyze_conditional(inst)?;
        for c in &l.comparisons {
            let x = parse_rational(&c.against)?;
            let id = a.form.identity(&x, false)?;
            identity_trace.push(TraceEntry {
                against: c.against.clone(),
                identity: id.to_string(),
                verdict: decide_identity(&id),
            });
        }
    }
    Ok(ConditionalVerdict {
        conditionality: verdict.conditionality,
        verdict,
        identity_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::Outcome;
    use crate::equality::{decide_membership, decide_threshold};
    use crate::exactnum::rational::{int, rat};
    use crate::polyfield::IntPoly;
    use crate::sequence::Problem;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    fn pairs_of(f: &IntPoly) -> (Arc<Tower>, PairedRoots) {
        let cert = matching_for(f).unwrap();
        let (tower, roots) = tower_roots(&[f]).unwrap();
        let pr = pair_roots(&tower, &roots[0], &cert).unwrap();
        (tower, pr)
    }

    #[test]
    fn pairs_from_matchings() {
        let (t, pr) = pairs_of(&ip(&[13, -4, 1]));
        assert_eq!(pr.pairs.len(), 1);
        assert_eq!(pr.pairs[0].rho, int(2));
        let w = &pr.pairs[0].w;
        assert!(
            *w == TowerElem::i(&t).unwrap().scale(&int(3))
                || *w == TowerElem::i(&t).unwrap().scale(&int(-3))
        );
        let (_, pr) = pairs_of(&ip(&[1, 0, -1, 0, 1]));
        assert_eq!(pr.pairs.len(), 2);
        assert!(pr
            .pairs
            .iter()
            .all(|e| e.rho.is_zero() && e.w.square() != TowerElem::one(e.w.tower())));
        let (t, pr) = pairs_of(&ip(&[-1, -2, 1]));
        assert_eq!(pr.pairs[0].rho, int(1));
        assert_eq!(pr.pairs[0].w.square(), TowerElem::rational(&t, int(2)));
        let (_, pr) = pairs_of(&ip(&[6, 5, 1]).mul(&ip(&[1, 0, 1])));
        assert_eq!(pr.rational.len(), 2);
    }

    #[test]
    fn basis_examples() {
        let t = Tower::multiquadratic(&[-1, 2, 3]).unwrap();
        let i = TowerElem::i(&t).unwrap();
        let b = build_basis(&t, &[i.scale(&int(3)), i.clone()]).unwrap();
        assert!(b.s.is_empty());
        assert_eq!(
            b.coeffs,
            vec![vec![0.into(), 3.into()], vec![0.into(), 1.into()]]
        );
        let i2 = i.mul(&TowerElem::sqrt(&t, 2).unwrap()).unwrap();
        let i3 = i.mul(&TowerElem::sqrt(&t, 3).unwrap()).unwrap();
        let b = build_basis(&t, &[i2.clone(), i3.clone()]).unwrap();
        assert_eq!(b.s, vec![i2, i3.clone()]);
        let one: BigInt = 1.into();
        assert_eq!(b.coeffs[0][2..], [one.clone(), 0.into()]);
        let ws = [i3.scale(&rat(3, 2)), i3.scale(&rat(1, 2))];
        let b = build_basis(&t, &ws).unwrap();
        assert_eq!(b.independent, vec![ws[0].clone()]);
        assert_eq!(b.normalizers, vec![BigInt::from(3)]);
        assert_eq!(b.s, vec![i3.scale(&rat(1, 2))]);
        assert_eq!(
            b.coeffs,
            vec![
                vec![0.into(), 0.into(), 3.into()],
                vec![0.into(), 0.into(), one]
            ]
        );
        b.check(&t, &ws).unwrap();
    }

    fn gauss13(t: BigRational, problem: Problem) -> HGInstance {
        HGInstance::new(ip(&[13, -4, 1]), ip(&[5, -4, 1]), int(1), t, problem).unwrap()
    }

    #[test]
    fn gauss13_identity() {
        let a = analyze_conditional(&gauss13(int(0), Problem::Membership)).unwrap();
        assert!(a.form.basis.s.is_empty());
        let id = a.form.identity(&rat(1, 26), false).unwrap();
        assert_eq!(decide_identity(&id), IdentityVerdict::FailsUnderSC);
        assert!(a.form.degenerate(&id));
        assert_eq!(id.poly.support_vars(), vec![0, 1]);
        assert!(check_nonvanishing(&a.form, &id, 1 << 16).is_some());
        // the limit matches sinh(pi) / (39 sinh(3 pi))
        let l = a.form.enclosure(128).unwrap();
        assert!((l.re.to_f64() - 4.7793728243349374e-5).abs() < 1e-18);
        assert!(l.im.contains_zero());
    }

    #[test]
    fn cancelling_identity() {
        let inst = HGInstance::new(
            ip(&[3, 1]),
            ip(&[3, 1]),
            int(1),
            int(1),
            Problem::Membership,
        )
        .unwrap();
        assert!(analyze_conditional(&inst).is_ok());
        // same pairs on both sides: p = (x^2 + 1)(x + 2), q = (x^2 + 1)(x + 2)
        let f = ip(&[1, 0, 1]).mul(&ip(&[2, 1]));
        let (t, pr) = pairs_of(&f);
        let form = LimitForm::new(t, &pr, &pr, &int(1)).unwrap();
        let id = form.identity(&int(1), false).unwrap();
        assert_eq!(decide_identity(&id), IdentityVerdict::HoldsUnconditionally);
        assert_eq!(id.to_string(), "0 = 0");
    }

    #[test]
    fn real_quadratic_identity() {
        // pairs (0, sqrt 2) over (0, 2 sqrt 2)
        let (t, p) = pairs_of(&ip(&[-2, 0, 1]));
        let (t2, q) = pairs_of(&ip(&[-8, 0, 1]));
        assert_eq!(*t, *t2);
        let q = PairedRoots {
            pairs: q
                .pairs
                .iter()
                .map(|e| PairRoot {
                    rho: e.rho.clone(),
                    w: TowerElem::new(&t, e.w.coords().to_vec()).unwrap(),
                })
                .collect(),
            rational: vec![],
        };
        let form = LimitForm::new(t, &p, &q, &int(1)).unwrap();
        let id = form.identity(&int(1), false).unwrap();
        assert_eq!(decide_identity(&id), IdentityVerdict::FailsUnderSC);
        assert!(id.poly.len() >= 2);
        assert_eq!(form.basis.s.len(), 1);
        assert!(!form.degenerate(&id));
        assert!(identity_norm(&id).is_ok());
    }

    #[test]
    fn pi_identity_is_degenerate() {
        // Gamma(i) Gamma(-i) = pi / sinh(pi) against 22/7
        let f = ip(&[1, 0, 1]);
        let (t, pr) = pairs_of(&f);
        let empty = PairedRoots {
            pairs: vec![],
            rational: vec![],
        };
        let form = LimitForm::new(t, &pr, &empty, &int(1)).unwrap();
        let id = form.identity(&rat(22, 7), false).unwrap();
        assert_eq!(decide_identity(&id), IdentityVerdict::FailsUnderSC);
        assert!(form.degenerate(&id));
    }

    #[test]
    fn gauss13_through_conditional_path() {
        let cfg = Config::default();
        let off = Config {
            degeneration: false,
            ..Config::default()
        };
        for (t, problem) in [
            (rat(1, 13), Problem::Membership),
            (rat(5, 13), Problem::Membership),
            (rat(1, 7), Problem::Membership),
            (rat(1, 26), Problem::Threshold),
            (rat(1, 100_000), Problem::Threshold),
            (int(0), Problem::Threshold),
        ] {
            let inst = gauss13(t, problem);
            let c = decide_conditional(&inst, &cfg).unwrap();
            let u = match problem {
                Problem::Membership => decide_membership(&inst, &cfg).unwrap(),
                Problem::Threshold => decide_threshold(&inst, &cfg).unwrap(),
            };
            assert_eq!(
                (c.verdict.outcome, c.verdict.witness),
                (u.outcome, u.witness)
            );
            assert_eq!(c.conditionality, Conditionality::Unconditional);
            let c = decide_conditional(&inst, &off).unwrap();
            assert_eq!(c.verdict.outcome, u.outcome);
        }
        // the equality branch is exercised at t = 1e-5: decreasing tail, L > t
        let c = decide_conditional(&gauss13(rat(1, 100_000), Problem::Threshold), &off).unwrap();
        assert_eq!(c.verdict.outcome, Outcome::Holds);
        assert_eq!(c.conditionality, Conditionality::ConditionalOnSchanuel);
        assert_eq!(c.identity_trace.len(), 1);
    }

    #[test]
    fn real_quadratic_instance() {
        let cfg = Config::default();
        for t in [rat(1, 3), int(2), rat(-1, 2), int(7)] {
            for problem in [Problem::Membership, Problem::Threshold] {
                let inst = HGInstance::new(
                    ip(&[-1, -2, 1]),
                    ip(&[-4, -2, 1]),
                    int(1),
                    t.clone(),
                    problem,
                )
                .unwrap();
                let c = decide_conditional(&inst, &cfg).unwrap();
                let oracle = crate::sequence::brute_force(&inst, 10_000).unwrap();
                match oracle {
                    crate::sequence::OracleResult::FoundMembership { n }
                    | crate::sequence::OracleResult::ThresholdViolation { n } => {
                        assert_eq!(c.verdict.witness, Some(n))
                    }
                    _ => assert!(c.verdict.witness.is_none()),
                }
                if c.verdict
                    .limit
                    .as_ref()
                    .is_some_and(|l| l.comparisons.iter().any(|c| c.relation != Relation::Equal))
                {
                    assert_eq!(c.conditionality, Conditionality::ConditionalOnSchanuel);
                }
            }
        }
    }

    #[test]
    fn assumption1_failure_is_reported() {
        let inst = HGInstance::new(
            ip(&[1, 0, 0, -1, 0, 0, 1]),
            ip(&[2, 0, 0, -1, 0, 0, 1]),
            int(1),
            int(1),
            Problem::Membership,
        )
        .unwrap();
        let e = analyze_conditional(&inst).err().unwrap();
        assert!(e.is_unsupported());
        assert!(e.to_string().contains("Assumption 1: NO"));
    }
}
