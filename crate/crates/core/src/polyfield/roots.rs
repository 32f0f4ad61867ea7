//! Root extraction: isolated numeric roots, integer roots, and splitting over
//! quadratic fields.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::poly::{IntPoly, QPoly};
use crate::error::{Error, Result};
use crate::exactnum::rational::squarefree_split;
use crate::exactnum::{QuadElem, TowerElem};

pub const DEGREE_CAP: usize = 32;
pub const COEFF_BITS_CAP: u64 = 256;

/// A root known to lie in the closed disc `|z - center| <= radius`, with
/// exactly one root of the source polynomial in that disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsolatedRoot {
    pub center: Complex64,
    pub radius: f64,
}

impl IsolatedRoot {
    pub fn intersects(&self, o: &IsolatedRoot) -> bool {
        (self.center - o.center).norm() <= self.radius + o.radius
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        (z - self.center).norm() <= self.radius + slack
    }
}

pub fn check_caps(f: &IntPoly) -> Result<()> {
    if f.deg() > DEGREE_CAP {
        return Err(Error::Limits(format!(
            "degree {} exceeds cap {DEGREE_CAP}",
            f.deg()
        )));
    }
    if f.max_abs_coeff_bits() > COEFF_BITS_CAP {
        return Err(Error::Limits(format!(
            "coefficients of {} bits exceed cap {COEFF_BITS_CAP}",
            f.max_abs_coeff_bits()
        )));
    }
    Ok(())
}

fn eval_c(cs: &[Complex64], z: Complex64) -> Complex64 {
    cs.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `|f(z)|` computed exactly at the rational point `z`, rounded up.
fn exact_abs_value(f: &QPoly, z: Complex64) -> f64 {
    let (Some(x), Some(y)) = (BigRational::from_f64(z.re), BigRational::from_f64(z.im)) else {
        return f64::INFINITY;
    };
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for c in f.coeffs().iter().rev() {
        let nre = &re * &x - &im * &y + c;
        let nim = &re * &y + &im * &x;
        re = nre;
        im = nim;
    }
    let n2 = (&re * &re + &im * &im).to_f64().unwrap_or(f64::INFINITY);
    n2.sqrt() * (1.0 + 1e-12)
}

/// Isolating discs for the roots of a squarefree polynomial: Aberth
/// iteration followed by Smith's inclusion bound, evaluated with exact
/// residuals.
pub fn isolate_roots(f: &QPoly) -> Result<Vec<IsolatedRoot>> {
    let n = f.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = f.make_monic();
    let cs: Vec<Complex64> = monic
        .to_f64_coeffs()
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    if cs.iter().any(|c| !c.re.is_finite()) {
        return Err(Error::RootIsolation("coefficients overflow f64".into()));
    }
    let dcs: Vec<Complex64> = (1..cs.len()).map(|i| cs[i] * i as f64).collect();
    let bound = 1.0 + cs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                bound * 0.5,
                2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4,
            )
        })
        .collect();
    for round in 0..8 {
        for _ in 0..if round == 0 { 500 } else { 100 } {
            let mut moved = 0.0f64;
            for i in 0..n {
                let fz = eval_c(&cs, z[i]);
                if fz.norm() == 0.0 {
                    continue;
                }
                let ratio = fz / eval_c(&dcs, z[i]);
                let s: Complex64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    moved = moved.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if moved < 1e-17 {
                break;
            }
        }
        // snap near-real roots of a real polynomial onto the axis
        for zi in z.iter_mut() {
            if zi.im.abs() < 1e-14 * (1.0 + zi.re.abs()) {
                zi.im = 0.0;
            }
        }
        let discs: Vec<IsolatedRoot> = (0..n)
            .map(|i| {
                let denom: f64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).norm())
                    .product();
                let r = n as f64 * exact_abs_value(&monic, z[i]) / denom;
                IsolatedRoot {
                    center: z[i],
                    radius: r * (1.0 + 1e-9) + f64::MIN_POSITIVE,
                }
            })
            .collect();
        let disjoint = (0..n).all(|i| {
            discs[i].radius.is_finite() && (i + 1..n).all(|j| !discs[i].intersects(&discs[j]))
        });
        if disjoint {
            return Ok(discs);
        }
        // perturb and retry
        for (k, zi) in z.iter_mut().enumerate() {
            *zi += Complex64::new(1e-7 * (k as f64 + 1.0), 1e-7);
        }
    }
    Err(Error::RootIsolation(format!(
        "could not separate the roots of {f}"
    )))
}

/// Integer roots of a nonzero polynomial, without multiplicity.
pub fn integer_roots(f: &QPoly) -> Result<Vec<BigInt>> {
    if f.is_zero() {
        return Err(Error::InvalidInstance(
            "integer roots of the zero polynomial".into(),
        ));
    }
    let sf = f.squarefree_part();
    let mut out = Vec::new();
    if sf.coeff(0).is_zero() {
        out.push(BigInt::zero());
    }
    let sf = if sf.coeff(0).is_zero() {
        sf.exact_div(&QPoly::x()).unwrap()
    } else {
        sf
    };
    for root in isolate_roots(&sf)? {
        if root.center.im.abs() > root.radius {
            continue;
        }
        if root.radius > 1e4 {
            return Err(Error::RootIsolation(
                "root disc too wide for integer search".into(),
            ));
        }
        let c: BigInt = BigInt::from_f64(root.center.re.floor()).expect("finite");
        let r: BigInt = BigInt::from_f64(root.radius.ceil()).expect("finite") + 1;
        let mut k: BigInt = &c - &r;
        let hi = &c + &r;
        while k <= hi {
            if sf.eval(&BigRational::from_integer(k.clone())).is_zero() && !out.contains(&k) {
                out.push(k.clone());
            }
            k += 1;
        }
    }
    out.sort();
    Ok(out)
}

/// A root of an integer polynomial in one of the supported representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Root {
    Rational(BigRational),
    Quad(QuadElem),
    Tower(TowerElem),
}

impl Root {
    pub fn is_rational(&self) -> bool {
        match self {
            Root::Rational(_) => true,
            Root::Quad(q) => q.is_rational(),
            Root::Tower(t) => t.is_rational(),
        }
    }

    pub fn to_complex_f64(&self) -> Complex64 {
        let (re, im) = match self {
            Root::Rational(x) => (x.to_f64().unwrap_or(f64::NAN), 0.0),
            Root::Quad(q) => q.to_complex_f64(),
            Root::Tower(t) => t.to_complex_f64(),
        };
        Complex64::new(re, im)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Root::Rational(x) => write!(f, "{}", crate::exactnum::rational::format_rational(x)),
            Root::Quad(q) => write!(f, "{q}"),
            Root::Tower(t) => write!(f, "{t}"),
        }
    }
}

/// Roots with multiplicities; multiplicities sum to the source degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RootMultiset {
    pub entries: Vec<(Root, u32)>,
}

impl RootMultiset {
    pub fn degree(&self) -> u32 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Root> {
        self.entries
            .iter()
            .flat_map(|(r, m)| std::iter::repeat(r.clone()).take(*m as usize))
            .collect()
    }

    /// Distinct squarefree parts `d` of the quadratic roots.
    pub fn fields(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self
            .entries
            .iter()
            .filter_map(|(r, _)| match r {
                Root::Quad(q) if !q.is_rational() => Some(q.d()),
                _ => None,
            })
            .collect();
        ds.sort();
        ds.dedup();
        ds
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadSplit {
    Split(RootMultiset),
    NotSplitting,
}

/// Roots of a monic integer polynomial whose irreducible factors over Q are
/// linear or quadratic.
pub fn roots_quadratic(f: &IntPoly) -> Result<QuadSplit> {
    if f.deg() == 0 {
        return Err(Error::InvalidInstance(
            "roots of a constant polynomial".into(),
        ));
    }
    if !f.is_monic() {
        return Err(Error::NonMonic(f.to_string()));
    }
    check_caps(f)?;
    let mut entries = Vec::new();
    for (i, g) in f.to_q().squarefree_decomposition().into_iter().enumerate() {
        let mult = i as u32 + 1;
        match split_squarefree(&g)? {
            Some(roots) => entries.extend(roots.into_iter().map(|r| (r, mult))),
            None => return Ok(QuadSplit::NotSplitting),
        }
    }
    Ok(QuadSplit::Split(RootMultiset { entries }))
}

/// Quadratic factors of a monic squarefree polynomial without integer roots,
/// found by pairing isolated roots and confirmed by exact division.
pub fn quadratic_factors(g: &QPoly) -> Result<Option<Vec<QPoly>>> {
    if g.deg() % 2 == 1 {
        return Ok(None);
    }
    let mut rest = g.clone();
    let mut pending: Vec<Complex64> = isolate_roots(g)?.into_iter().map(|r| r.center).collect();
    let mut out = Vec::new();
    while let Some(z) = pending.pop() {
        let mut found = None;
        for (j, w) in pending.iter().enumerate() {
            let s = z + w;
            let p = z * w;
            let tol_s = 1e-6 * (1.0 + s.norm());
            let tol_p = 1e-6 * (1.0 + p.norm());
            if s.im.abs() > tol_s || p.im.abs() > tol_p {
                continue;
            }
            let (rs, rp) = (s.re.round(), p.re.round());
            if (s.re - rs).abs() > tol_s || (p.re - rp).abs() > tol_p {
                continue;
            }
            let h = QPoly::new(vec![
                BigRational::from_f64(rp).unwrap(),
                -BigRational::from_f64(rs).unwrap(),
                BigRational::one(),
            ]);
            if let Some(q) = rest.exact_div(&h) {
                rest = q;
                found = Some((j, h));
                break;
            }
        }
        match found {
            Some((j, h)) => {
                pending.remove(j);
                out.push(h);
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

fn split_squarefree(g: &QPoly) -> Result<Option<Vec<Root>>> {
    let mut rest = g.clone();
    let mut roots = Vec::new();
    for k in integer_roots(g)? {
        let r = BigRational::from_integer(k);
        rest = rest
            .exact_div(&QPoly::linear_root(&r))
            .expect("verified root");
        roots.push(Root::Rational(r));
    }
    if rest.deg() == 0 {
        return Ok(Some(roots));
    }
    let Some(factors) = quadratic_factors(&rest)? else {
        return Ok(None);
    };
    for h in factors {
        let (a, b) = quadratic_root_pair(&h)?;
        roots.push(Root::Quad(a));
        roots.push(Root::Quad(b));
    }
    Ok(Some(roots))
}

/// The two roots `s/2 +- (k/2) sqrt(d)` of an irreducible monic quadratic
/// `x^2 - s x + p`.
pub fn quadratic_root_pair(h: &QPoly) -> Result<(QuadElem, QuadElem)> {
    let s = -h.coeff(1);
    let p = h.coeff(0);
    let disc = &s * &s - BigRational::from_integer(4.into()) * &p;
    // disc = (num/den); sqrt(disc) = sqrt(num*den)/den
    let nd = disc.numer() * disc.denom();
    let (k, d) = squarefree_split(&nd)?;
    if d == 1 {
        return Err(Error::InvalidInstance(format!("{h} is reducible")));
    }
    let half = BigRational::new(1.into(), 2.into());
    let b = BigRational::new(k, disc.denom().clone()) * &half;
    let a = s * &half;
    let r = QuadElem::new(a, b.abs(), d)?;
    Ok((r.clone(), r.conjugate()))
}

/// Expands `prod (x - r)^m` over Q for a multiset of rational and quadratic
/// roots.
pub fn expand_roots(ms: &RootMultiset) -> Result<QPoly> {
    let mut acc = QPoly::one();
    let mut used = vec![false; ms.entries.len()];
    for i in 0..ms.entries.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let (r, m) = &ms.entries[i];
        let factor = match r {
            Root::Rational(x) => QPoly::linear_root(x),
            Root::Quad(q) if q.is_rational() => QPoly::linear_root(q.a()),
            Root::Quad(q) => {
                let j = (0..ms.entries.len())
                    .find(|&j| {
                        !used[j]
                            && ms.entries[j].0 == Root::Quad(q.conjugate())
                            && ms.entries[j].1 == *m
                    })
                    .ok_or_else(|| Error::InvalidInstance(format!("conjugate of {q} missing")))?;
                used[j] = true;
                QPoly::new(vec![q.norm(), -q.trace(), BigRational::one()])
            }
            Root::Tower(_) => return Err(Error::Unsupported("expanding tower roots".into())),
        };
        acc = acc.mul(&factor.pow(*m));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    fn split(cs: &[i64]) -> RootMultiset {
        match roots_quadratic(&ip(cs)).unwrap() {
            QuadSplit::Split(m) => m,
            QuadSplit::NotSplitting => panic!("expected split"),
        }
    }

    #[test]
    fn example_quadratic() {
        let m = split(&[13, -4, 1]);
        let want = [
            QuadElem::new(int(2), int(3), -1).unwrap(),
            QuadElem::new(int(2), int(-3), -1).unwrap(),
        ];
        for w in &want {
            assert!(m.entries.contains(&(Root::Quad(w.clone()), 1)));
        }
    }

    #[test]
    fn integer_roots_beyond_f64_precision() {
        let big: BigInt = "1152921504606846977".parse().unwrap();
        let f = QPoly::new(vec![
            BigRational::from_integer(-big.clone()),
            BigRational::from_integer(BigInt::from(1)),
        ]);
        assert_eq!(integer_roots(&f).unwrap(), vec![big]);
    }

    #[test]
    fn half_integer_coordinates() {
        let m = split(&[1, -1, 1]);
        assert!(m.entries.contains(&(
            Root::Quad(QuadElem::new(rat(1, 2), rat(1, 2), -3).unwrap()),
            1
        )));
        assert!(m.entries.contains(&(
            Root::Quad(QuadElem::new(rat(1, 2), rat(-1, 2), -3).unwrap()),
            1
        )));
        for (r, _) in &m.entries {
            if let Root::Quad(q) = r {
                assert!(q.is_algebraic_integer());
            }
        }
    }

    #[test]
    fn not_splitting() {
        assert_eq!(
            roots_quadratic(&ip(&[-2, 0, 0, 1])).unwrap(),
            QuadSplit::NotSplitting
        );
        assert_eq!(
            roots_quadratic(&ip(&[1, 0, 0, -1, 0, 0, 1])).unwrap(),
            QuadSplit::NotSplitting
        );
        assert!(matches!(
            roots_quadratic(&ip(&[1, 2])),
            Err(Error::NonMonic(_))
        ));
    }

    #[test]
    fn round_trip_with_multiplicity() {
        // (x^2+1)^2 (x-3) (x^2 - 2x - 1) (x+5)^3
        let f = QPoly::from_i64(&[1, 0, 1])
            .pow(2)
            .mul(&QPoly::from_i64(&[-3, 1]))
            .mul(&QPoly::from_i64(&[-1, -2, 1]))
            .mul(&QPoly::from_i64(&[5, 1]).pow(3));
        let fi = f.to_int_poly().unwrap();
        let m = split(
            &fi.coeffs()
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect::<Vec<_>>(),
        );
        assert_eq!(m.degree() as usize, fi.deg());
        assert_eq!(expand_roots(&m).unwrap(), f);
        assert_eq!(m.fields(), vec![-1, 2]);
    }

    #[test]
    fn isolation_of_cyclotomic_roots() {
        let f = crate::polyfield::cyclotomic(24).to_q();
        let discs = isolate_roots(&f).unwrap();
        assert_eq!(discs.len(), 8);
        for d in &discs {
            assert!((d.center.norm() - 1.0).abs() < 1e-12);
            assert!(d.radius < 1e-10);
        }
    }

    #[test]
    fn integer_root_search() {
        let f = QPoly::from_i64(&[-6, 1, 1]).mul(&QPoly::from_i64(&[1, 0, 1]));
        assert_eq!(
            integer_roots(&f).unwrap(),
            vec![BigInt::from(-3), BigInt::from(2)]
        );
        assert_eq!(
            integer_roots(&QPoly::from_i64(&[0, 0, 1])).unwrap(),
            vec![BigInt::zero()]
        );
    }
}
