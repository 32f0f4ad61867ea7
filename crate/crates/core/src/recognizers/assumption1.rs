//! The symmetry graph on irrational roots and its perfect matchings.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::rational::{format_rational, is_half_integer_or_integer, parse_rational};
use crate::polyfield::roots::{check_caps, integer_roots, isolate_roots, IsolatedRoot};
use crate::polyfield::{IntPoly, QPoly};

/// One copy of an irrational root.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    /// Index of the distinct root this vertex is a copy of.
    pub root: usize,
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

impl Vertex {
    pub fn disc(&self) -> IsolatedRoot {
        IsolatedRoot {
            center: Complex64::new(self.re, self.im),
            radius: self.radius,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymmetryGraph {
    pub vertices: Vec<Vertex>,
    pub adjacency: Vec<Vec<bool>>,
    /// `u + v` for adjacent distinct roots.
    sums: HashMap<(usize, usize), BigInt>,
}

/// A matched edge `u = rho + w`, `v = rho - w`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub u: usize,
    pub v: usize,
    /// `rho = (u + v) / 2`, as `"a/b"`.
    pub rho: String,
    /// Numeric `w = (u - v) / 2`.
    pub w_re: f64,
    pub w_im: f64,
}

impl MatchedPair {
    pub fn rho(&self) -> BigRational {
        parse_rational(&self.rho).expect("certificate rho")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub poly: IntPoly,
    pub vertices: Vec<Vertex>,
    pub pairs: Vec<MatchedPair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Assumption1 {
    Matching(MatchingCertificate),
    NoMatching {
        poly: IntPoly,
        vertices: usize,
        max_matching: Vec<(usize, usize)>,
    },
}

impl Assumption1 {
    pub fn holds(&self) -> bool {
        matches!(self, Assumption1::Matching(_))
    }
}

impl fmt::Display for Assumption1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assumption1::Matching(c) => {
                write!(f, "Assumption 1: YES ({} pairs)", c.pairs.len())?;
                for p in &c.pairs {
                    write!(f, "\n  rho = {}, w = {:.6} + {:.6}i", p.rho, p.w_re, p.w_im)?;
                }
                Ok(())
            }
            Assumption1::NoMatching {
                vertices,
                max_matching,
                ..
            } => write!(
                f,
                "Assumption 1: NO (max matching size {} of {} vertices)",
                max_matching.len(),
                vertices
            ),
        }
    }
}

/// Squarefree layers `(multiplicity, polynomial without integer roots)`.
fn irrational_layers(f: &IntPoly) -> Result<Vec<(u32, QPoly)>> {
    let mut out = Vec::new();
    for (i, g) in f.to_q().squarefree_decomposition().into_iter().enumerate() {
        let mut rest = g.clone();
        for k in integer_roots(&g)? {
            rest = rest
                .exact_div(&QPoly::linear_root(&BigRational::from_integer(k)))
                .unwrap();
        }
        if rest.deg() > 0 {
            out.push((i as u32 + 1, rest));
        }
    }
    Ok(out)
}

/// Roots of a squarefree polynomial `h` that lie in given disjoint discs:
/// returns, for each root of `h`, the index of the unique disc containing it.
fn locate_in(h: &QPoly, discs: &[IsolatedRoot]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for r in isolate_roots(h)? {
        let hits: Vec<usize> = (0..discs.len())
            .filter(|&i| discs[i].intersects(&r))
            .collect();
        match hits.as_slice() {
            [i] => out.push(*i),
            _ => {
                return Err(Error::RootIsolation(
                    "could not attribute a root to a unique disc".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Squarefree irrational part, its isolated roots, and each root's multiplicity.
fn distinct_roots(f: &IntPoly) -> Result<(QPoly, Vec<IsolatedRoot>, Vec<u32>)> {
    let layers = irrational_layers(f)?;
    let big = layers.iter().fold(QPoly::one(), |acc, (_, g)| acc.mul(g));
    if big.deg() == 0 {
        return Ok((big, Vec::new(), Vec::new()));
    }
    let discs = isolate_roots(&big)?;
    let mut mult = vec![0u32; discs.len()];
    for (m, g) in &layers {
        for i in locate_in(g, &discs)? {
            mult[i] = *m;
        }
    }
    if mult.contains(&0) {
        return Err(Error::RootIsolation("root of no squarefree layer".into()));
    }
    Ok((big, discs, mult))
}

impl SymmetryGraph {
    pub fn build(f: &IntPoly) -> Result<Self> {
        let (big, roots, mult) = distinct_roots(f)?;
        let n = roots.len();
        // exact edge test via gcd(F(x), F(s - x)) for each integer candidate s
        let mut partner: HashMap<(usize, usize), BigInt> = HashMap::new();
        let mut tested: HashMap<BigInt, Vec<usize>> = HashMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let s = roots[a].center + roots[b].center;
                let slack = roots[a].radius + roots[b].radius + 1e-9;
                if s.im.abs() > slack + 1e-6 {
                    continue;
                }
                let sr = s.re.round();
                if (s.re - sr).abs() > slack + 1e-6 {
                    continue;
                }
                let s_int = BigInt::from_f64(sr).unwrap();
                if !tested.contains_key(&s_int) {
                    let refl = big.reflect(&BigRational::from_integer(s_int.clone()));
                    let g = big.gcd(&refl);
                    let members = if g.deg() == 0 {
                        Vec::new()
                    } else {
                        locate_in(&g, &roots)?
                    };
                    tested.insert(s_int.clone(), members);
                }
                let members = &tested[&s_int];
                if !members.contains(&a) || !members.contains(&b) {
                    continue;
                }
                // b must be the root s - a
                let mirror = IsolatedRoot {
                    center: Complex64::new(sr, 0.0) - roots[a].center,
                    radius: roots[a].radius,
                };
                let hits: Vec<usize> = (0..n).filter(|&i| roots[i].intersects(&mirror)).collect();
                if hits == [b] {
                    partner.insert((a, b), s_int.clone());
                }
            }
        }
        let mut vertices = Vec::new();
        for (i, r) in roots.iter().enumerate() {
            for _ in 0..mult[i] {
                vertices.push(Vertex {
                    root: i,
                    re: r.center.re,
                    im: r.center.im,
                    radius: r.radius,
                });
            }
        }
        let nv = vertices.len();
        let mut adjacency = vec![vec![false; nv]; nv];
        for i in 0..nv {
            for j in 0..nv {
                let (a, b) = (vertices[i].root, vertices[j].root);
                let key = (a.min(b), a.max(b));
                adjacency[i][j] = a != b && partner.contains_key(&key);
            }
        }
        Ok(SymmetryGraph {
            vertices,
            adjacency,
            sums: partner,
        })
    }

    pub fn sum(&self, u: usize, v: usize) -> Option<&BigInt> {
        let (a, b) = (self.vertices[u].root, self.vertices[v].root);
        self.sums.get(&(a.min(b), a.max(b)))
    }

    /// A perfect matching by backtracking, if one exists.
    pub fn perfect_matching(&self) -> Option<Vec<(usize, usize)>> {
        let n = self.vertices.len();
        if n % 2 == 1 {
            return None;
        }
        let mut used = vec![false; n];
        let mut out = Vec::new();
        if self.perfect_rec(&mut used, &mut out) {
            Some(out)
        } else {
            None
        }
    }

    fn perfect_rec(&self, used: &mut [bool], out: &mut Vec<(usize, usize)>) -> bool {
        let Some(u) = used.iter().position(|x| !x) else {
            return true;
        };
        used[u] = true;
        for v in 0..used.len() {
            if !used[v] && self.adjacency[u][v] {
                used[v] = true;
                out.push((u, v));
                if self.perfect_rec(used, out) {
                    return true;
                }
                out.pop();
                used[v] = false;
            }
        }
        used[u] = false;
        false
    }

    /// A maximum matching by branch and bound.
    pub fn maximum_matching(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let mut best = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; n];
        self.max_rec(0, &mut used, &mut cur, &mut best);
        best
    }

    fn max_rec(
        &self,
        start: usize,
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        best: &mut Vec<(usize, usize)>,
    ) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        let free = used.iter().filter(|x| !**x).count();
        if cur.len() + free / 2 <= best.len() {
            return;
        }
        let Some(u) = (start..used.len()).find(|&i| !used[i]) else {
            return;
        };
        used[u] = true;
        for v in u + 1..used.len() {
            if !used[v] && self.adjacency[u][v] {
                used[v] = true;
                cur.push((u, v));
                self.max_rec(u + 1, used, cur, best);
                cur.pop();
                used[v] = false;
            }
        }
        // leave u unmatched
        self.max_rec(u + 1, used, cur, best);
        used[u] = false;
    }
}

/// Decides whether the symmetry graph of `f` has a perfect matching.
pub fn check_assumption1(f: &IntPoly) -> Result<Assumption1> {
    if !f.is_monic() {
        return Err(Error::NonMonic(f.to_string()));
    }
    check_caps(f)?;
    let g = SymmetryGraph::build(f)?;
    match g.perfect_matching() {
        Some(m) => {
            let pairs = m
                .into_iter()
                .map(|(u, v)| {
                    let s = g.sum(u, v).expect("edge").clone();
                    let (zu, zv) = (g.vertices[u].disc().center, g.vertices[v].disc().center);
                    let w = (zu - zv) / 2.0;
                    MatchedPair {
                        u,
                        v,
                        rho: format_rational(&BigRational::new(s, BigInt::from(2))),
                        w_re: w.re,
                        w_im: w.im,
                    }
                })
                .collect();
            Ok(Assumption1::Matching(MatchingCertificate {
                poly: f.clone(),
                vertices: g.vertices,
                pairs,
            }))
        }
        None => Ok(Assumption1::NoMatching {
            poly: f.clone(),
            vertices: g.vertices.len(),
            max_matching: g.maximum_matching(),
        }),
    }
}

/// Standalone re-check of a matching certificate: recomputes the root discs
/// of the polynomial, matches every certificate vertex to them, and tests
/// each edge with the exact gcd criterion.
pub fn validate_matching(cert: &MatchingCertificate) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidCertificate(m));
    let (big, discs, mult) = distinct_roots(&cert.poly)?;
    let expected: u32 = mult.iter().sum();
    if cert.vertices.len() as u32 != expected {
        return bad(format!(
            "{} vertices, {} irrational roots",
            cert.vertices.len(),
            expected
        ));
    }
    let mut owner = Vec::new();
    let mut seen = vec![0u32; discs.len()];
    for v in &cert.vertices {
        let hits: Vec<usize> = (0..discs.len())
            .filter(|&i| discs[i].intersects(&v.disc()))
            .collect();
        let [i] = hits.as_slice() else {
            return bad("vertex not attributable to a unique root".into());
        };
        seen[*i] += 1;
        owner.push(*i);
    }
    if seen != mult {
        return bad("vertex copies disagree with root multiplicities".into());
    }
    let mut covered = vec![false; cert.vertices.len()];
    for p in &cert.pairs {
        if p.u >= covered.len()
            || p.v >= covered.len()
            || covered[p.u]
            || covered[p.v]
            || p.u == p.v
        {
            return bad(format!("pair ({}, {}) is not part of a matching", p.u, p.v));
        }
        covered[p.u] = true;
        covered[p.v] = true;
        let rho = parse_rational(&p.rho).map_err(|e| Error::InvalidCertificate(e.to_string()))?;
        if !is_half_integer_or_integer(&rho) {
            return bad(format!("rho = {} not in Z/2", p.rho));
        }
        let s = &rho * BigRational::from_integer(2.into());
        let (a, b) = (owner[p.u], owner[p.v]);
        if a == b {
            return bad("a root paired with itself".into());
        }
        let g = big.gcd(&big.reflect(&s));
        let members = if g.deg() == 0 {
            Vec::new()
        } else {
            locate_in(&g, &discs)?
        };
        let sf = s.to_f64().unwrap_or(f64::NAN);
        let mirror = IsolatedRoot {
            center: Complex64::new(sf, 0.0) - discs[a].center,
            radius: discs[a].radius,
        };
        let hits: Vec<usize> = (0..discs.len())
            .filter(|&i| discs[i].intersects(&mirror))
            .collect();
        if !members.contains(&a) || hits != [b] {
            return bad(format!(
                "pair ({}, {}) does not sum to {}",
                p.u,
                p.v,
                format_rational(&s)
            ));
        }
    }
    if covered.iter().any(|c| !c) {
        return bad("matching is not perfect".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::cyclotomic;

    fn check(f: &IntPoly) -> Assumption1 {
        let r = check_assumption1(f).unwrap();
        if let Assumption1::Matching(c) = &r {
            validate_matching(c).unwrap();
        }
        r
    }

    #[test]
    fn phi12_pairs_opposite_roots() {
        match check(&cyclotomic(12)) {
            Assumption1::Matching(c) => {
                assert_eq!(c.pairs.len(), 2);
                assert!(c.pairs.iter().all(|p| p.rho == "0"));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn phi18_has_no_edges() {
        let r = check(&cyclotomic(18));
        assert_eq!(
            r.to_string(),
            "Assumption 1: NO (max matching size 0 of 6 vertices)"
        );
    }

    #[test]
    fn counterexample_quartic() {
        assert!(!check(&IntPoly::from_i64(&[2, -8, -4, 0, 1])).holds());
    }

    #[test]
    fn quadratics_and_even_polys_match() {
        for f in [[1, -1, 1], [13, -4, 1], [-1, -2, 1], [-2, 0, 1]] {
            assert!(check(&IntPoly::from_i64(&f)).holds(), "{f:?}");
        }
        assert!(check(&IntPoly::from_i64(&[-2, 0, 0, 0, 1])).holds());
        assert!(check(&IntPoly::from_i64(&[-3, 0, 0, 0, 0, 0, 1])).holds());
    }

    #[test]
    fn repeated_roots_pair_across_copies() {
        // (x^2 + 1)^2 (x - 3): four vertices, two copies each of i and -i
        let f = IntPoly::from_i64(&[1, 0, 1])
            .mul(&IntPoly::from_i64(&[1, 0, 1]))
            .mul(&IntPoly::from_i64(&[-3, 1]));
        match check(&f) {
            Assumption1::Matching(c) => assert_eq!(c.vertices.len(), 4),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn tampered_certificate_rejected() {
        let Assumption1::Matching(mut c) = check(&cyclotomic(12)) else {
            panic!()
        };
        c.pairs[0].rho = "1".into();
        assert!(validate_matching(&c).is_err());
        let Assumption1::Matching(mut c) = check(&cyclotomic(12)) else {
            panic!()
        };
        c.pairs.pop();
        assert!(validate_matching(&c).is_err());
    }
}
