//! Sparse multivariate Laurent polynomials with tower coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactnum::rational::format_rational;
use crate::exactnum::{Automorphism, Tower, TowerElem};

/// Exponent vector; negative entries allowed.
pub type Exponents = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    tower: Arc<Tower>,
    nvars: usize,
    terms: BTreeMap<Exponents, TowerElem>,
}

impl MultiPoly {
    pub fn zero(tower: &Arc<Tower>, nvars: usize) -> Self {
        MultiPoly {
            tower: tower.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: TowerElem, exps: Exponents) -> Self {
        let tower = c.tower().clone();
        let nvars = exps.len();
        let mut p = Self::zero(&tower, nvars);
        p.add_term(exps, c);
        p
    }

    pub fn constant(c: TowerElem, nvars: usize) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, TowerElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Exponents, c: TowerElem) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exps) {
            Some(old) => {
                let s = old.add(&c).expect("one tower");
                if !s.is_zero() {
                    self.terms.insert(exps, s);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            tower: self.tower.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = Self::zero(&self.tower, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &TowerElem) -> Result<Self> {
        let mut out = Self::zero(&self.tower, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(k)?);
        }
        Ok(out)
    }

    pub fn apply(&self, sigma: Automorphism) -> Result<Self> {
        let mut out = Self::zero(&self.tower, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.apply(sigma)?);
        }
        Ok(out)
    }

    /// Variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|e| e[v] != 0))
            .collect()
    }

    pub fn to_rational(&self) -> Option<BTreeMap<Exponents, BigRational>> {
        self.terms
            .iter()
            .map(|(e, c)| Some((e.clone(), c.rational_value()?)))
            .collect()
    }
}

/// `prod_sigma sigma(P)` over the Galois group of the coefficient tower.
pub fn galois_norm_poly(p: &MultiPoly) -> Result<BTreeMap<Exponents, BigRational>> {
    if p.is_zero() {
        return Err(Error::InvalidInstance("norm of the zero polynomial".into()));
    }
    let mut acc = MultiPoly::constant(TowerElem::one(p.tower()), p.nvars());
    for sigma in p.tower().automorphisms() {
        acc = acc.mul(&p.apply(sigma)?)?;
    }
    acc.to_rational()
        .ok_or_else(|| Error::InvalidField("Galois norm with irrational coefficients".into()))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(v, &k)| {
                        if k == 1 {
                            format!("X{v}")
                        } else {
                            format!("X{v}^{k}")
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
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn format_rational_poly(p: &BTreeMap<Exponents, BigRational>) -> String {
    if p.is_empty() {
        return "0".into();
    }
    p.iter()
        .map(|(e, c)| {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        format!("X{v}")
                    } else {
                        format!("X{v}^{k}")
                    }
                })
                .collect();
            if mono.is_empty() {
                format_rational(c)
            } else {
                format!("{}*{}", format_rational(c), mono.join("*"))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn x_minus(c: TowerElem) -> MultiPoly {
        let t = c.tower().clone();
        let mut p = MultiPoly::monomial(TowerElem::one(&t), vec![1]);
        p.add_term(vec![0], c.neg());
        p
    }

    fn rpoly(cs: &[(i64, BigRational)]) -> BTreeMap<Exponents, BigRational> {
        cs.iter().map(|(e, c)| (vec![*e], c.clone())).collect()
    }

    #[test]
    fn norm_of_x_minus_sqrt2() {
        let t = Tower::multiquadratic(&[2]).unwrap();
        let n = galois_norm_poly(&x_minus(TowerElem::sqrt(&t, 2).unwrap())).unwrap();
        assert_eq!(n, rpoly(&[(0, int(-2)), (2, int(1))]));
    }

    #[test]
    fn norm_of_rational_input_squares() {
        let t = Tower::multiquadratic(&[-1]).unwrap();
        let n = galois_norm_poly(&x_minus(TowerElem::rational(&t, int(-1)))).unwrap();
        assert_eq!(n, rpoly(&[(0, int(1)), (1, int(2)), (2, int(1))]));
    }

    #[test]
    fn norm_of_golden_ratio() {
        let t = Tower::multiquadratic(&[5]).unwrap();
        let phi = TowerElem::sqrt(&t, 5)
            .unwrap()
            .add_rational(&int(1))
            .scale(&rat(1, 2));
        let n = galois_norm_poly(&x_minus(phi)).unwrap();
        assert_eq!(n, rpoly(&[(0, int(-1)), (1, int(-1)), (2, int(1))]));
    }

    #[test]
    fn norm_is_invariant() {
        let t = Tower::cyclotomic_field(12).unwrap();
        let z = TowerElem::zeta_power(&t, 1).unwrap();
        let mut p = x_minus(z.clone());
        p.add_term(vec![3], z.square());
        let n = galois_norm_poly(&p).unwrap();
        assert!(!n.is_empty());
        let lifted = n.iter().fold(MultiPoly::zero(&t, 1), |mut acc, (e, c)| {
            acc.add_term(e.clone(), TowerElem::rational(&t, c.clone()));
            acc
        });
        for s in t.automorphisms() {
            assert_eq!(lifted.apply(s).unwrap(), lifted);
        }
    }
}
