//! Number fields given by explicit multiplication rules on a rational basis:
//! multiquadratic fields, cyclotomic fields and radical extensions
//! `Q(zeta_m)(theta)` with `theta^n = a`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{ComplexInterval, DyadicInterval};
use super::rational::{euler_phi, prime_factors, squarefree_split};
use crate::error::{Error, Result};
use crate::polyfield::cyclotomic;

const MAX_DIM: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TowerKind {
    /// `Q(sqrt g_1, ..., sqrt g_k)`, generators are `-1` and primes.
    Multiquadratic { gens: Vec<i64> },
    /// `Q(zeta_m)`.
    Cyclotomic { m: u64 },
    /// `Q(zeta_m)(theta)`, `theta^n = a`, `n | m`.
    Radical { m: u64, n: u64, a: i64 },
}

/// A tower field together with its precomputed reduction data.
#[derive(Debug, PartialEq, Eq)]
pub struct Tower {
    kind: TowerKind,
    dim: usize,
    /// cyclotomic/radical: `zeta^k` for `0 <= k < m` in the power basis of
    /// `Q(zeta_m)`.
    zeta_powers: Vec<Vec<BigRational>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Automorphism {
    /// `sqrt g_i -> -sqrt g_i` for every bit `i` of the mask.
    Flip(u32),
    /// `zeta_m -> zeta_m^k`, `theta -> zeta_m^{(m/n) j} theta`.
    Cyc { k: u64, j: u64 },
}

impl Tower {
    pub fn multiquadratic(ds: &[i64]) -> Result<Arc<Tower>> {
        let mut gens: Vec<i64> = Vec::new();
        for &d in ds {
            if d == 0 {
                return Err(Error::InvalidField("sqrt(0) generator".into()));
            }
            if d < 0 && !gens.contains(&-1) {
                gens.push(-1);
            }
            for p in prime_factors(d.unsigned_abs()) {
                let p = p as i64;
                if !gens.contains(&p) {
                    gens.push(p);
                }
            }
        }
        gens.sort();
        if gens.len() > 6 {
            return Err(Error::Unsupported(format!(
                "multiquadratic tower with {} generators",
                gens.len()
            )));
        }
        let dim = 1usize << gens.len();
        Ok(Arc::new(Tower {
            kind: TowerKind::Multiquadratic { gens },
            dim,
            zeta_powers: Vec::new(),
        }))
    }

    pub fn cyclotomic_field(m: u64) -> Result<Arc<Tower>> {
        Self::build_cyc(TowerKind::Cyclotomic { m }, m, 1)
    }

    pub fn radical(m: u64, n: u64, a: i64) -> Result<Arc<Tower>> {
        if n == 0 || m % n != 0 {
            return Err(Error::InvalidField(format!(
                "radical degree {n} must divide {m}"
            )));
        }
        if a == 0 {
            return Err(Error::InvalidField("radical of zero".into()));
        }
        check_kummer(m, n, a)?;
        Self::build_cyc(TowerKind::Radical { m, n, a }, m, n)
    }

    fn build_cyc(kind: TowerKind, m: u64, n: u64) -> Result<Arc<Tower>> {
        if m == 0 {
            return Err(Error::InvalidField("conductor 0".into()));
        }
        let phi = euler_phi(m) as usize;
        let dim = phi * n as usize;
        if dim > MAX_DIM {
            return Err(Error::Unsupported(format!(
                "tower of degree {dim} exceeds {MAX_DIM}"
            )));
        }
        let phi_m = cyclotomic(m).to_q();
        let mut zeta_powers = Vec::with_capacity(m as usize);
        let mut cur = vec![BigRational::zero(); phi];
        cur[0] = BigRational::one();
        for _ in 0..m {
            zeta_powers.push(cur.clone());
            // multiply by zeta and reduce with the monic Phi_m
            let top = cur[phi - 1].clone();
            let mut next = vec![BigRational::zero(); phi];
            for i in (1..phi).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, c) in next.iter_mut().enumerate() {
                    *c -= &top * phi_m.coeff(i);
                }
            }
            cur = next;
        }
        Ok(Arc::new(Tower {
            kind,
            dim,
            zeta_powers,
        }))
    }

    pub fn kind(&self) -> &TowerKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn phi(&self) -> usize {
        match self.kind {
            TowerKind::Multiquadratic { .. } => 0,
            TowerKind::Cyclotomic { .. } | TowerKind::Radical { .. } => self.zeta_powers[0].len(),
        }
    }

    fn m(&self) -> u64 {
        match self.kind {
            TowerKind::Cyclotomic { m } | TowerKind::Radical { m, .. } => m,
            TowerKind::Multiquadratic { .. } => 1,
        }
    }

    fn n(&self) -> u64 {
        match self.kind {
            TowerKind::Radical { n, .. } => n,
            _ => 1,
        }
    }

    /// Every element of the Galois group.
    pub fn automorphisms(&self) -> Vec<Automorphism> {
        match &self.kind {
            TowerKind::Multiquadratic { gens } => {
                (0..1u32 << gens.len()).map(Automorphism::Flip).collect()
            }
            _ => {
                let m = self.m();
                let mut out = Vec::new();
                for k in 1..=m {
                    if k.gcd(&m) == 1 {
                        for j in 0..self.n() {
                            out.push(Automorphism::Cyc { k: k % m, j });
                        }
                    }
                }
                out
            }
        }
    }

    pub fn complex_conjugation(&self) -> Automorphism {
        match &self.kind {
            TowerKind::Multiquadratic { gens } => Automorphism::Flip(
                gens.iter()
                    .enumerate()
                    .filter(|(_, &g)| g < 0)
                    .fold(0, |acc, (i, _)| acc | (1 << i)),
            ),
            TowerKind::Cyclotomic { m } => Automorphism::Cyc { k: m - 1, j: 0 },
            TowerKind::Radical { m, n, a } => Automorphism::Cyc {
                k: m - 1,
                j: if *a < 0 { n - 1 } else { 0 },
            },
        }
    }

    fn reduce_zeta(&self, buf: &[BigRational]) -> Vec<BigRational> {
        // buf indexed by (zeta exponent mod m) + m * theta exponent
        let m = self.m() as usize;
        let phi = self.phi();
        let mut out = vec![BigRational::zero(); self.dim];
        for (idx, c) in buf.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (e, j) = (idx % m, idx / m);
            for (i, z) in self.zeta_powers[e].iter().enumerate() {
                if !z.is_zero() {
                    out[i + phi * j] += c * z;
                }
            }
        }
        out
    }

    fn basis_embeddings(&self, prec: u64) -> Vec<ComplexInterval> {
        match &self.kind {
            TowerKind::Multiquadratic { gens } => {
                let roots: Vec<ComplexInterval> = gens
                    .iter()
                    .map(|&g| {
                        if g == -1 {
                            ComplexInterval::i()
                        } else {
                            ComplexInterval::real(
                                DyadicInterval::from_int(g).sqrt(prec).expect("positive"),
                            )
                        }
                    })
                    .collect();
                (0..self.dim)
                    .map(|mask| {
                        roots
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .fold(ComplexInterval::one(), |acc, (_, r)| acc.mul(r, prec))
                    })
                    .collect()
            }
            _ => {
                let m = self.m() as i64;
                let phi = self.phi();
                let theta = self.theta_embedding(prec);
                let zetas: Vec<ComplexInterval> = (0..phi as i64)
                    .map(|i| ComplexInterval::root_of_unity(i, m, prec))
                    .collect();
                let mut out = Vec::with_capacity(self.dim);
                let mut tp = ComplexInterval::one();
                for _ in 0..self.n() {
                    for z in &zetas {
                        out.push(z.mul(&tp, prec));
                    }
                    tp = tp.mul(&theta, prec);
                }
                out
            }
        }
    }

    fn theta_embedding(&self, prec: u64) -> ComplexInterval {
        match self.kind {
            TowerKind::Radical { n, a, .. } => {
                let r = DyadicInterval::from_int(a.abs())
                    .nth_root(n as u32, prec)
                    .expect("positive");
                if a > 0 {
                    ComplexInterval::real(r)
                } else {
                    ComplexInterval::root_of_unity(1, 2 * n as i64, prec).scale(&r, prec)
                }
            }
            _ => ComplexInterval::one(),
        }
    }
}

fn check_kummer(m: u64, n: u64, a: i64) -> Result<()> {
    let big = BigInt::from(a);
    for p in prime_factors(n) {
        if p == 2 {
            let (_, core) = squarefree_split(&big)?;
            if core == 1 || m % quadratic_conductor(core) == 0 {
                return Err(Error::Unsupported(format!(
                    "x^{n} - {a} is reducible over Q(zeta_{m})"
                )));
            }
        } else if is_perfect_power(&big, p as u32) {
            return Err(Error::Unsupported(format!("{a} is a {p}-th power")));
        }
    }
    Ok(())
}

/// Conductor of `Q(sqrt d)` for squarefree `d != 1`.
pub fn quadratic_conductor(d: i64) -> u64 {
    if d.rem_euclid(4) == 1 {
        d.unsigned_abs()
    } else {
        4 * d.unsigned_abs()
    }
}

pub fn is_perfect_power(a: &BigInt, p: u32) -> bool {
    if a.is_negative() {
        if p % 2 == 0 {
            return false;
        }
        return is_perfect_power(&-a, p);
    }
    let r = a.nth_root(p);
    r.pow(p) == *a
}

/// Element of a tower, as rational coordinates over the tower's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElem {
    tower: Arc<Tower>,
    coords: Vec<BigRational>,
}

impl TowerElem {
    pub fn new(tower: &Arc<Tower>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != tower.dim {
            return Err(Error::TowerMismatch(format!(
                "{} coordinates for a degree-{} tower",
                coords.len(),
                tower.dim
            )));
        }
        Ok(TowerElem {
            tower: tower.clone(),
            coords,
        })
    }

    pub fn zero(tower: &Arc<Tower>) -> Self {
        TowerElem {
            tower: tower.clone(),
            coords: vec![BigRational::zero(); tower.dim],
        }
    }

    pub fn rational(tower: &Arc<Tower>, x: BigRational) -> Self {
        let mut e = Self::zero(tower);
        e.coords[0] = x;
        e
    }

    pub fn one(tower: &Arc<Tower>) -> Self {
        Self::rational(tower, BigRational::one())
    }

    pub fn basis(tower: &Arc<Tower>, idx: usize) -> Self {
        let mut e = Self::zero(tower);
        e.coords[idx] = BigRational::one();
        e
    }

    /// `zeta_m^k` in a cyclotomic or radical tower.
    pub fn zeta_power(tower: &Arc<Tower>, k: i64) -> Result<Self> {
        let m = tower.m() as i64;
        if matches!(tower.kind, TowerKind::Multiquadratic { .. }) {
            return Err(Error::TowerMismatch(
                "no roots of unity basis in a multiquadratic tower".into(),
            ));
        }
        let mut e = Self::zero(tower);
        for (i, c) in tower.zeta_powers[k.rem_euclid(m) as usize]
            .iter()
            .enumerate()
        {
            e.coords[i] = c.clone();
        }
        Ok(e)
    }

    /// `theta` of a radical tower.
    pub fn theta(tower: &Arc<Tower>) -> Result<Self> {
        match tower.kind {
            TowerKind::Radical { n, .. } if n > 1 => Ok(Self::basis(tower, tower.phi())),
            TowerKind::Radical { .. } => Ok(Self::rational(
                tower,
                BigRational::from_integer(match tower.kind {
                    TowerKind::Radical { a, .. } => a.into(),
                    _ => unreachable!(),
                }),
            )),
            _ => Err(Error::TowerMismatch(
                "theta only exists in radical towers".into(),
            )),
        }
    }

    /// The principal `sqrt(d)`, for squarefree `d`.
    pub fn sqrt(tower: &Arc<Tower>, d: i64) -> Result<Self> {
        if d == 1 {
            return Ok(Self::one(tower));
        }
        match &tower.kind {
            TowerKind::Multiquadratic { gens } => {
                let mut mask = 0usize;
                let mut need: Vec<i64> = prime_factors(d.unsigned_abs())
                    .into_iter()
                    .map(|p| p as i64)
                    .collect();
                if d < 0 {
                    need.push(-1);
                }
                for g in need {
                    let i = gens
                        .iter()
                        .position(|&x| x == g)
                        .ok_or_else(|| Error::TowerMismatch(format!("sqrt({g}) not in tower")))?;
                    mask |= 1 << i;
                }
                Ok(Self::basis(tower, mask))
            }
            _ => sqrt_in_cyclotomic(tower, d),
        }
    }

    pub fn i(tower: &Arc<Tower>) -> Result<Self> {
        Self::sqrt(tower, -1)
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn rational_value(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// `self` is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.rational_value().is_some_and(|x| x.is_integer())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.tower, &o.tower) || self.tower == o.tower {
            Ok(())
        } else {
            Err(Error::TowerMismatch(format!(
                "{:?} vs {:?}",
                self.tower.kind, o.tower.kind
            )))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(TowerElem {
            tower: self.tower.clone(),
            coords: self
                .coords
                .iter()
                .zip(&o.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        TowerElem {
            tower: self.tower.clone(),
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add_rational(&self, k: &BigRational) -> Self {
        let mut e = self.clone();
        e.coords[0] += k;
        e
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let t = &self.tower;
        let coords = match &t.kind {
            TowerKind::Multiquadratic { gens } => {
                let mut out = vec![BigRational::zero(); t.dim];
                for (s, a) in self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                    for (u, b) in o.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                        let both = s & u;
                        let k: i64 = gens
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| both & (1 << i) != 0)
                            .map(|(_, g)| *g)
                            .product();
                        out[s ^ u] += a * b * BigRational::from_integer(k.into());
                    }
                }
                out
            }
            _ => {
                let (m, phi, n) = (t.m() as usize, t.phi(), t.n() as usize);
                let a = match t.kind {
                    TowerKind::Radical { a, .. } => BigRational::from_integer(a.into()),
                    _ => BigRational::one(),
                };
                let mut buf = vec![BigRational::zero(); m * n];
                for (x, c) in self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (y, d) in o.coords.iter().enumerate().filter(|(_, d)| !d.is_zero()) {
                        let e = (x % phi + y % phi) % m;
                        let mut j = x / phi + y / phi;
                        let mut v = c * d;
                        if j >= n {
                            j -= n;
                            v *= &a;
                        }
                        buf[e + m * j] += v;
                    }
                }
                t.reduce_zeta(&buf)
            }
        };
        Ok(TowerElem {
            tower: t.clone(),
            coords,
        })
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same tower")
    }

    /// Matrix of multiplication by `self`, column `j` = `self * basis_j`.
    fn mul_matrix(&self) -> Vec<Vec<BigRational>> {
        let dim = self.tower.dim;
        let cols: Vec<Vec<BigRational>> = (0..dim)
            .map(|j| {
                self.mul(&Self::basis(&self.tower, j))
                    .expect("same tower")
                    .coords
            })
            .collect();
        (0..dim)
            .map(|i| (0..dim).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(x) = self.rational_value() {
            return Ok(Self::rational(&self.tower, x.recip()));
        }
        let mut rhs = vec![BigRational::zero(); self.tower.dim];
        rhs[0] = BigRational::one();
        let sol = solve(self.mul_matrix(), rhs).ok_or(Error::DivisionByZero)?;
        Ok(TowerElem {
            tower: self.tower.clone(),
            coords: sol,
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(&self.tower);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.square();
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn apply(&self, sigma: Automorphism) -> Result<Self> {
        let t = &self.tower;
        match (sigma, &t.kind) {
            (Automorphism::Flip(mask), TowerKind::Multiquadratic { .. }) => Ok(TowerElem {
                tower: t.clone(),
                coords: self
                    .coords
                    .iter()
                    .enumerate()
                    .map(|(s, c)| {
                        if (s as u32 & mask).count_ones() % 2 == 1 {
                            -c
                        } else {
                            c.clone()
                        }
                    })
                    .collect(),
            }),
            (
                Automorphism::Cyc { k, j },
                TowerKind::Cyclotomic { .. } | TowerKind::Radical { .. },
            ) => {
                let (m, phi, n) = (t.m() as usize, t.phi(), t.n() as usize);
                let shift = (m / n) * j as usize;
                let mut buf = vec![BigRational::zero(); m * n];
                for (x, c) in self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    let (i, l) = (x % phi, x / phi);
                    let e = (i * k as usize + shift * l) % m;
                    buf[e + m * l] += c;
                }
                Ok(TowerElem {
                    tower: t.clone(),
                    coords: t.reduce_zeta(&buf),
                })
            }
            _ => Err(Error::TowerMismatch(format!(
                "{sigma:?} does not act on {:?}",
                t.kind
            ))),
        }
    }

    pub fn conj(&self) -> Self {
        self.apply(self.tower.complex_conjugation())
            .expect("conjugation acts")
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn to_complex(&self, prec: u64) -> ComplexInterval {
        let w = prec + 8;
        let basis = self.tower.basis_embeddings(w);
        self.coords
            .iter()
            .zip(basis)
            .filter(|(c, _)| !c.is_zero())
            .fold(ComplexInterval::zero(), |acc, (c, b)| {
                acc.add(&b.mul(&ComplexInterval::from_rational(c, w), w), w)
            })
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        let z = self.to_complex(64);
        (z.re.to_f64(), z.im.to_f64())
    }
}

/// Exact Gaussian elimination; `None` if singular.
pub fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let v = &f * &a[col][c];
                    a[r][c] -= v;
                }
                let v = &f * &b[col];
                b[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// `sqrt(d)` inside `Q(zeta_m)` through quadratic Gauss sums.
fn sqrt_in_cyclotomic(tower: &Arc<Tower>, d: i64) -> Result<TowerElem> {
    let m = tower.m();
    if m % quadratic_conductor(d) != 0 {
        return Err(Error::TowerMismatch(format!(
            "sqrt({d}) not in Q(zeta_{m})"
        )));
    }
    let z = |k: i64| TowerElem::zeta_power(tower, k);
    let mut acc = TowerElem::one(tower);
    let mut odd_part = d.unsigned_abs();
    if odd_part % 2 == 0 {
        odd_part /= 2;
        // sqrt 2 = zeta_8 + zeta_8^{-1}
        let e = (m / 8) as i64;
        acc = acc.mul(&z(e)?.add(&z(-e)?)?)?;
    }
    for p in prime_factors(odd_part) {
        // the Gauss sum over residues mod p squares to (-1)^((p-1)/2) p
        let step = (m / p) as i64;
        let mut g = TowerElem::zero(tower);
        for a in 1..p {
            let term = z(step * a as i64)?;
            g = if legendre(a, p) > 0 {
                g.add(&term)?
            } else {
                g.sub(&term)?
            };
        }
        acc = acc.mul(&g)?;
    }
    let target = TowerElem::rational(tower, BigRational::from_integer(d.into()));
    if acc.square() != target {
        acc = acc.mul(&z((m / 4) as i64)?)?;
    }
    // the Gauss sum conventions fix sqrt(d) up to sign; choose the principal one
    let (re, im) = acc.to_complex_f64();
    let principal_positive = if d > 0 { re > 0.0 } else { im > 0.0 };
    Ok(if principal_positive { acc } else { acc.neg() })
}

fn legendre(a: u64, p: u64) -> i32 {
    let mut r = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = basis_names(&self.tower);
        let mut first = true;
        for (c, name) in self.coords.iter().zip(&names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = super::rational::format_rational(c);
            if name.is_empty() {
                write!(f, "{cs}")?;
            } else if c.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "({cs})*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn basis_names(t: &Tower) -> Vec<String> {
    match &t.kind {
        TowerKind::Multiquadratic { gens } => (0..t.dim)
            .map(|mask| {
                let d: i64 = gens
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, g)| *g)
                    .product();
                if mask == 0 {
                    String::new()
                } else {
                    format!("sqrt({d})")
                }
            })
            .collect(),
        TowerKind::Cyclotomic { m } | TowerKind::Radical { m, .. } => {
            let phi = t.phi();
            (0..t.dim)
                .map(|x| {
                    let (i, j) = (x % phi, x / phi);
                    let z = match i {
                        0 => String::new(),
                        1 => format!("z{m}"),
                        _ => format!("z{m}^{i}"),
                    };
                    let th = match j {
                        0 => String::new(),
                        1 => "theta".to_string(),
                        _ => format!("theta^{j}"),
                    };
                    match (z.is_empty(), th.is_empty()) {
                        (true, _) => th,
                        (_, true) => z,
                        _ => format!("{z}*{th}"),
                    }
                })
                .collect()
        }
    }
}

impl fmt::Display for TowerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerKind::Multiquadratic { gens } => {
                let g: Vec<String> = gens.iter().map(|g| format!("sqrt({g})")).collect();
                write!(f, "Q({})", g.join(", "))
            }
            TowerKind::Cyclotomic { m } => write!(f, "Q(zeta_{m})"),
            TowerKind::Radical { m, n, a } => write!(f, "Q(zeta_{m}, ({a})^(1/{n}))"),
        }
    }
}

/// Rank of a family of tower elements over Q.
pub fn rational_rank(elems: &[TowerElem]) -> usize {
    let rows: Vec<Vec<BigRational>> = elems.iter().map(|e| e.coords.clone()).collect();
    row_echelon(rows).len()
}

/// Reduced row echelon rows (nonzero only) of a rational matrix.
pub fn row_echelon(mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for c in 0..ncols {
            rows[rank][c] = &rows[rank][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..ncols {
                    let v = &f * &rows[rank][c];
                    rows[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Express `target` as a rational combination of `basis`; `None` if it is not
/// in their span. `basis` must be linearly independent.
pub fn express_in(basis: &[TowerElem], target: &TowerElem) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let dim = target.coords.len();
    // augmented system: sum c_j basis_j = target, rows = coordinates
    let mut rows: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            let mut r: Vec<BigRational> = basis.iter().map(|b| b.coords[i].clone()).collect();
            r.push(target.coords[i].clone());
            r
        })
        .collect();
    rows = row_echelon(rows);
    let mut sol = vec![BigRational::zero(); k];
    for r in &rows {
        let lead = r.iter().position(|c| !c.is_zero())?;
        if lead == k {
            return None;
        }
        sol[lead] = r[k].clone();
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &ComplexInterval, b: &ComplexInterval) -> bool {
        a.sub(b, 128).re.magnitude() < -90 && a.sub(b, 128).im.magnitude() < -90
    }

    fn random_elem(t: &Arc<Tower>, rng: &mut ChaCha8Rng) -> TowerElem {
        TowerElem::new(
            t,
            (0..t.dim())
                .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn multiquadratic_products() {
        let t = Tower::multiquadratic(&[-1, 2, 3]).unwrap();
        let s2 = TowerElem::sqrt(&t, 2).unwrap();
        let s6 = TowerElem::sqrt(&t, 6).unwrap();
        assert_eq!(s2.square(), TowerElem::rational(&t, int(2)));
        assert_eq!(
            s6.mul(&s2).unwrap(),
            TowerElem::sqrt(&t, 3).unwrap().scale(&int(2))
        );
        let i = TowerElem::i(&t).unwrap();
        assert_eq!(i.square(), TowerElem::rational(&t, int(-1)));
        assert_eq!(
            TowerElem::sqrt(&t, -2).unwrap().conj(),
            TowerElem::sqrt(&t, -2).unwrap().neg()
        );
    }

    #[test]
    fn cyclotomic_relations() {
        let t = Tower::cyclotomic_field(12).unwrap();
        let z = TowerElem::zeta_power(&t, 1).unwrap();
        assert_eq!(z.pow(12).unwrap(), TowerElem::one(&t));
        assert_ne!(z.pow(6).unwrap(), TowerElem::one(&t));
        let s3 = TowerElem::sqrt(&t, 3).unwrap();
        assert_eq!(s3.square(), TowerElem::rational(&t, int(3)));
        let (re, im) = s3.to_complex_f64();
        assert!((re - 3f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
        let sm3 = TowerElem::sqrt(&t, -3).unwrap();
        let (re, im) = sm3.to_complex_f64();
        assert!(re.abs() < 1e-12 && (im - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(z.conj(), z.pow(11).unwrap());
    }

    #[test]
    fn sqrt_via_gauss_sums() {
        for (m, d) in [
            (8, 2),
            (8, -2),
            (5, 5),
            (20, -5),
            (7 * 4, 7),
            (28, -7),
            (24, 6),
            (24, -6),
        ] {
            let t = Tower::cyclotomic_field(m).unwrap();
            let s = TowerElem::sqrt(&t, d).unwrap();
            assert_eq!(s.square(), TowerElem::rational(&t, int(d)), "m={m} d={d}");
            let (re, im) = s.to_complex_f64();
            if d > 0 {
                assert!(re > 0.0 && im.abs() < 1e-9);
            } else {
                assert!(im > 0.0 && re.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn radical_tower() {
        let t = Tower::radical(4, 4, 2).unwrap();
        let th = TowerElem::theta(&t).unwrap();
        assert_eq!(th.pow(4).unwrap(), TowerElem::rational(&t, int(2)));
        let (re, im) = th.to_complex_f64();
        assert!((re - 2f64.powf(0.25)).abs() < 1e-12 && im.abs() < 1e-12);
        assert!(Tower::radical(12, 6, 3).is_err());
        assert!(Tower::radical(4, 2, 4).is_err());
        let tn = Tower::radical(4, 2, -2).unwrap();
        let th = TowerElem::theta(&tn).unwrap();
        assert_eq!(th.square(), TowerElem::rational(&tn, int(-2)));
        assert_eq!(
            th.conj().mul(&th).unwrap(),
            TowerElem::rational(&tn, int(2))
        );
    }

    #[test]
    fn inverse_and_embedding_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let towers = [
            Tower::multiquadratic(&[-1, 2, 5]).unwrap(),
            Tower::cyclotomic_field(20).unwrap(),
            Tower::radical(8, 4, 3).unwrap(),
            Tower::radical(4, 2, -7).unwrap(),
        ];
        for t in &towers {
            for _ in 0..4 {
                let x = random_elem(t, &mut rng);
                let y = random_elem(t, &mut rng);
                let xy = x.mul(&y).unwrap();
                assert!(close(
                    &xy.to_complex(128),
                    &x.to_complex(128).mul(&y.to_complex(128), 128)
                ));
                if !x.is_zero() {
                    assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), TowerElem::one(t));
                }
                for s in t.automorphisms().into_iter().take(6) {
                    let lhs = xy.apply(s).unwrap();
                    let rhs = x.apply(s).unwrap().mul(&y.apply(s).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
                assert!(close(&x.conj().to_complex(128), &x.to_complex(128).conj()));
            }
        }
    }

    #[test]
    fn span_and_rank() {
        let t = Tower::multiquadratic(&[-1, 2, 3]).unwrap();
        let a = TowerElem::sqrt(&t, -2).unwrap();
        let b = TowerElem::sqrt(&t, -3).unwrap();
        let c = a.scale(&rat(3, 2)).sub(&b).unwrap();
        assert_eq!(rational_rank(&[a.clone(), b.clone(), c.clone()]), 2);
        assert_eq!(
            express_in(&[a.clone(), b.clone()], &c),
            Some(vec![rat(3, 2), int(-1)])
        );
        assert_eq!(express_in(&[a], &b), None);
    }
}
