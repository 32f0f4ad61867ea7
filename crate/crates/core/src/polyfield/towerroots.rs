//! Exact roots in a common tower for polynomials whose irreducible factors
//! are linear, quadratic, cyclotomic or irreducible binomials `x^d - a`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{IntPoly, QPoly};
use super::roots::{
    check_caps, integer_roots, quadratic_factors, quadratic_root_pair, Root, RootMultiset,
};
use crate::error::{Error, Result};
use crate::exactnum::rational::euler_phi;
use crate::exactnum::tower::quadratic_conductor;
use crate::exactnum::{Tower, TowerElem};
use crate::recognizers::classc::binomial_irreducible;

#[derive(Clone, Debug)]
enum Factor {
    Integer(BigInt),
    Quadratic(QPoly),
    Cyclotomic(u64),
    Binomial { d: u64, a: i64 },
}

fn factor_squarefree(g: &QPoly) -> Result<Vec<Factor>> {
    let mut out = Vec::new();
    let mut rest = g.clone();
    for k in integer_roots(g)? {
        rest = rest
            .exact_div(&QPoly::linear_root(&BigRational::from_integer(k.clone())))
            .unwrap();
        out.push(Factor::Integer(k));
    }
    if rest.deg() == 0 {
        return Ok(out);
    }
    if let Some(hs) = quadratic_factors(&rest)? {
        out.extend(hs.into_iter().map(Factor::Quadratic));
        return Ok(out);
    }
    let deg = rest.deg() as u64;
    for n in 3..=(2 * deg * deg) {
        if euler_phi(n) > rest.deg() as u64 || euler_phi(n) == 2 {
            continue;
        }
        let phi = super::cyclotomic(n).to_q();
        if let Some(q) = rest.exact_div(&phi) {
            rest = q;
            out.push(Factor::Cyclotomic(n));
        }
    }
    if rest.deg() == 0 {
        return Ok(out);
    }
    if let Some(hs) = quadratic_factors(&rest)? {
        out.extend(hs.into_iter().map(Factor::Quadratic));
        return Ok(out);
    }
    let d = rest.deg();
    let ip = rest.to_int_poly();
    if let Some(ip) = ip {
        if ip.coeffs()[1..d].iter().all(|c| c.is_zero()) {
            let a = -ip.coeff(0);
            if binomial_irreducible(d as u64, &a) {
                let a = a
                    .to_i64()
                    .ok_or_else(|| Error::Limits("binomial constant too large".into()))?;
                out.push(Factor::Binomial { d: d as u64, a });
                return Ok(out);
            }
        }
    }
    Err(Error::Unsupported(format!(
        "irreducible factor of {rest} outside the supported families"
    )))
}

/// Roots of every polynomial, all expressed in one tower that also contains
/// `i`. Each root is checked to vanish its polynomial exactly.
pub fn tower_roots(polys: &[&IntPoly]) -> Result<(Arc<Tower>, Vec<RootMultiset>)> {
    let mut factored = Vec::new();
    for f in polys {
        check_caps(f)?;
        if !f.is_monic() {
            return Err(Error::NonMonic(f.to_string()));
        }
        let mut parts = Vec::new();
        for (i, g) in f.to_q().squarefree_decomposition().into_iter().enumerate() {
            parts.push((i as u32 + 1, factor_squarefree(&g)?));
        }
        factored.push(parts);
    }
    let mut ds: Vec<i64> = vec![-1];
    let mut conductors: Vec<u64> = vec![4];
    let mut binomial: Option<(u64, i64)> = None;
    for parts in &factored {
        for (_, fs) in parts {
            for fac in fs {
                match fac {
                    Factor::Quadratic(h) => {
                        let (r, _) = quadratic_root_pair(h)?;
                        ds.push(r.d());
                    }
                    Factor::Cyclotomic(n) => conductors.push(*n),
                    Factor::Binomial { d, a } => match binomial {
                        Some(b) if b != (*d, *a) => {
                            return Err(Error::Unsupported("two different binomial factors".into()))
                        }
                        _ => binomial = Some((*d, *a)),
                    },
                    Factor::Integer(_) => {}
                }
            }
        }
    }
    ds.sort();
    ds.dedup();
    let tower = if conductors.len() == 1 && binomial.is_none() {
        Tower::multiquadratic(&ds)?
    } else {
        let mut m = conductors.iter().fold(1u64, |acc, c| acc.lcm(c));
        for &d in &ds {
            m = m.lcm(&quadratic_conductor(d));
        }
        match binomial {
            Some((n, a)) => Tower::radical(m.lcm(&n), n, a)?,
            None => Tower::cyclotomic_field(m)?,
        }
    };
    let mut out = Vec::new();
    for (f, parts) in polys.iter().zip(&factored) {
        let mut entries = Vec::new();
        for (mult, fs) in parts {
            for fac in fs {
                for r in factor_roots(&tower, fac)? {
                    entries.push((r, *mult));
                }
            }
        }
        let fq = f.to_q();
        for (r, _) in &entries {
            if let Root::Tower(t) = r {
                if !eval_in_tower(&fq, t)?.is_zero() {
                    return Err(Error::RootIsolation(format!(
                        "tower root {t} does not vanish {f}"
                    )));
                }
            }
        }
        out.push(RootMultiset { entries });
    }
    Ok((tower, out))
}

fn factor_roots(tower: &Arc<Tower>, fac: &Factor) -> Result<Vec<Root>> {
    Ok(match fac {
        Factor::Integer(k) => vec![Root::Rational(BigRational::from_integer(k.clone()))],
        Factor::Quadratic(h) => {
            let (r, c) = quadratic_root_pair(h)?;
            let s = TowerElem::sqrt(tower, r.d())?;
            vec![
                Root::Tower(s.scale(r.b()).add_rational(r.a())),
                Root::Tower(s.scale(c.b()).add_rational(c.a())),
            ]
        }
        Factor::Cyclotomic(n) => {
            let m = cyc_conductor(tower);
            (1..=*n)
                .filter(|k| k.gcd(n) == 1)
                .map(|k| TowerElem::zeta_power(tower, ((m / n) * k) as i64).map(Root::Tower))
                .collect::<Result<_>>()?
        }
        Factor::Binomial { d, .. } => {
            let m = cyc_conductor(tower);
            let theta = TowerElem::theta(tower)?;
            (0..*d)
                .map(|k| {
                    Ok(Root::Tower(theta.mul(&TowerElem::zeta_power(
                        tower,
                        ((m / d) * k) as i64,
                    )?)?))
                })
                .collect::<Result<_>>()?
        }
    })
}

fn cyc_conductor(t: &Tower) -> u64 {
    match t.kind() {
        crate::exactnum::TowerKind::Cyclotomic { m }
        | crate::exactnum::TowerKind::Radical { m, .. } => *m,
        crate::exactnum::TowerKind::Multiquadratic { .. } => 1,
    }
}

pub fn eval_in_tower(f: &QPoly, x: &TowerElem) -> Result<TowerElem> {
    let mut acc = TowerElem::zero(x.tower());
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(x)?.add_rational(c);
    }
    Ok(acc)
}

/// Root as a tower element of `tower`.
pub fn root_in_tower(tower: &Arc<Tower>, r: &Root) -> Result<TowerElem> {
    match r {
        Root::Rational(x) => Ok(TowerElem::rational(tower, x.clone())),
        Root::Quad(q) => Ok(TowerElem::sqrt(tower, q.d())?
            .scale(q.b())
            .add_rational(q.a())),
        Root::Tower(t) if Arc::ptr_eq(t.tower(), tower) || **t.tower() == **tower => Ok(t.clone()),
        Root::Tower(_) => Err(Error::TowerMismatch(
            "root lives in a different tower".into(),
        )),
    }
}

pub fn one_half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    #[test]
    fn quadratic_roots_in_multiquadratic() {
        let (t, ms) = tower_roots(&[&ip(&[13, -4, 1]), &ip(&[-1, -2, 1])]).unwrap();
        assert!(matches!(
            t.kind(),
            crate::exactnum::TowerKind::Multiquadratic { .. }
        ));
        assert_eq!(ms[0].degree(), 2);
        assert_eq!(ms[1].degree(), 2);
    }

    #[test]
    fn cyclotomic_and_binomial_roots() {
        let (_, ms) = tower_roots(&[&ip(&[1, 0, -1, 0, 1])]).unwrap();
        assert_eq!(ms[0].degree(), 4);
        let (_, ms) = tower_roots(&[&ip(&[-2, 0, 0, 0, 1])]).unwrap();
        assert_eq!(ms[0].degree(), 4);
        let (_, ms) = tower_roots(&[&ip(&[1, 0, 1]).mul(&ip(&[1, 0, -1, 0, 1]))]).unwrap();
        assert_eq!(ms[0].degree(), 6);
    }

    #[test]
    fn unsupported_factor() {
        assert!(tower_roots(&[&ip(&[2, -8, -4, 0, 1])])
            .unwrap_err()
            .is_unsupported());
    }
}
