use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactnum::rational::{format_rational, is_integer};
use crate::polyfield::{IntPoly, QPoly};

/// `f(x) = g((x - rho)^2)` with `g` monic and having a negative real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCWitness {
    pub rho: BigRational,
    pub g: QPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassC {
    Witness(ClassCWitness),
    /// Linear polynomials: the root itself is rational.
    Linear(BigRational),
    NotInC,
}

/// Class C test for a monic irreducible polynomial with rational
/// coefficients.
pub fn recognize_classc(f: &QPoly) -> ClassC {
    let n = f.deg();
    if f.is_zero() || n == 0 || !f.is_monic() {
        return ClassC::NotInC;
    }
    if n == 1 {
        return ClassC::Linear(-f.coeff(0));
    }
    let rho = -f.coeff(n - 1) / BigRational::from_integer(n.into());
    if n == 2 {
        // x^2 + b x + c has non-real roots with real part -b/2 iff b^2 - 4c < 0
        let (b, c) = (f.coeff(1), f.coeff(0));
        let four = BigRational::from_integer(4.into());
        if &b * &b - &four * &c >= BigRational::zero() {
            return ClassC::NotInC;
        }
        let g = QPoly::new(vec![c - &b * &b / four, BigRational::one()]);
        return ClassC::Witness(ClassCWitness { rho, g });
    }
    let Some(g) = f.shift_by(&rho).even_part_as_poly_in_square() else {
        return ClassC::NotInC;
    };
    if g.count_real_roots(None, Some(&BigRational::zero())) == 0 {
        return ClassC::NotInC;
    }
    ClassC::Witness(ClassCWitness { rho, g })
}

impl ClassCWitness {
    /// Re-checks `f = g((x - rho)^2)` and the negative root of `g`.
    pub fn verify(&self, f: &QPoly) -> bool {
        let sq = QPoly::new(vec![-self.rho.clone(), BigRational::one()]).pow(2);
        self.g.is_monic()
            && self.g.compose(&sq) == *f
            && (self.g.count_real_roots(None, Some(&BigRational::zero())) > 0)
    }

    pub fn describe(&self) -> String {
        format!(
            "rho = {}, g(y) = {}",
            format_rational(&self.rho),
            self.g.to_string().replace('x', "y")
        )
    }
}

/// `rho` with `f(rho + x) = f(rho - x)`, if one exists.
pub fn detect_shifted_even(f: &IntPoly) -> Option<BigRational> {
    let fq = f.to_q();
    let n = fq.deg();
    if fq.is_zero() {
        return None;
    }
    if n == 0 {
        return Some(BigRational::zero());
    }
    let rho = -fq.coeff(n - 1) / (fq.leading() * BigRational::from_integer(n.into()));
    fq.shift_by(&rho).even_part_as_poly_in_square().map(|_| rho)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RadicalFamily {
    XdMinusA { d: u64, a: String, eligible: bool },
    Cyclotomic { n: u64, eligible: bool },
    Neither,
}

impl std::fmt::Display for RadicalFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = |e: bool| {
            if e {
                "matching guaranteed"
            } else {
                "no guarantee"
            }
        };
        match self {
            RadicalFamily::XdMinusA { d, a, eligible } => {
                write!(f, "x^{d} - ({a}), {}", tag(*eligible))
            }
            RadicalFamily::Cyclotomic { n, eligible } => write!(f, "Phi_{n}, {}", tag(*eligible)),
            RadicalFamily::Neither => f.write_str("neither"),
        }
    }
}

/// Identifies `x^d - a` (irreducible) and cyclotomic polynomials, with the
/// parity condition under which they have a perfect symmetric matching.
pub fn check_radical_family(f: &IntPoly) -> RadicalFamily {
    if let Some(n) = crate::polyfield::cyclotomic_index(f) {
        return RadicalFamily::Cyclotomic {
            n,
            eligible: n % 4 == 0,
        };
    }
    let d = f.deg();
    if d == 0 || !f.is_monic() || f.coeffs()[1..d].iter().any(|c| !c.is_zero()) {
        return RadicalFamily::Neither;
    }
    let a = -f.coeff(0);
    if a.is_zero() || !binomial_irreducible(d as u64, &a) {
        return RadicalFamily::Neither;
    }
    RadicalFamily::XdMinusA {
        d: d as u64,
        a: a.to_string(),
        eligible: d % 2 == 0,
    }
}

/// Capelli: `x^d - a` is irreducible over Q iff `a` is not a `p`-th power for
/// any prime `p | d` and, when `4 | d`, `a` is not `-4 b^4`.
pub fn binomial_irreducible(d: u64, a: &BigInt) -> bool {
    if d == 1 {
        return true;
    }
    for p in crate::exactnum::rational::prime_factors(d) {
        if crate::exactnum::tower::is_perfect_power(a, p as u32) {
            return false;
        }
    }
    if d % 4 == 0 && a.is_negative() {
        let q = -a;
        if (&q % 4u32).is_zero() && crate::exactnum::tower::is_perfect_power(&(q / 4u32), 4) {
            return false;
        }
    }
    true
}

/// `true` when every coefficient of `f` is an integer.
pub fn is_integral(f: &QPoly) -> bool {
    f.coeffs().iter().all(is_integer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::{int, rat};

    fn w(f: &[i64]) -> ClassC {
        recognize_classc(&QPoly::from_i64(f))
    }

    #[test]
    fn quartic_witnesses() {
        let g = QPoly::from_i64(&[-1, -2, 1]);
        assert_eq!(
            w(&[-1, 0, -2, 0, 1]),
            ClassC::Witness(ClassCWitness {
                rho: int(0),
                g: g.clone()
            })
        );
        assert_eq!(
            w(&[-2, 0, 4, -4, 1]),
            ClassC::Witness(ClassCWitness { rho: int(1), g })
        );
    }

    #[test]
    fn counterexample_quartics_rejected() {
        assert_eq!(w(&[-17, 37, -16, -1, 1]), ClassC::NotInC);
        assert_eq!(w(&[1044, 120, -71, -5, 1]), ClassC::NotInC);
    }

    #[test]
    fn quadratic_criterion() {
        match w(&[13, -4, 1]) {
            ClassC::Witness(c) => {
                assert_eq!(c.rho, int(2));
                assert_eq!(c.g, QPoly::new(vec![int(9), int(1)]));
                assert!(c.verify(&QPoly::from_i64(&[13, -4, 1])));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(w(&[-1, -2, 1]), ClassC::NotInC);
    }

    #[test]
    fn even_g_without_negative_root() {
        // g = y^2 - 3y + 1 has only positive roots
        assert_eq!(w(&[1, 0, -3, 0, 1]), ClassC::NotInC);
    }

    #[test]
    fn shifted_even() {
        assert_eq!(
            detect_shifted_even(&IntPoly::from_i64(&[1, 0, -1, 0, 1])),
            Some(int(0))
        );
        assert_eq!(
            detect_shifted_even(&IntPoly::from_i64(&[13, -4, 1])),
            Some(int(2))
        );
        assert_eq!(
            detect_shifted_even(&IntPoly::from_i64(&[-2, 0, 0, 1])),
            None
        );
        assert_eq!(
            detect_shifted_even(&IntPoly::from_i64(&[0, -1, 1])),
            Some(rat(1, 2))
        );
    }

    #[test]
    fn radical_families() {
        assert_eq!(
            check_radical_family(&IntPoly::from_i64(&[-2, 0, 0, 0, 1])),
            RadicalFamily::XdMinusA {
                d: 4,
                a: "2".into(),
                eligible: true
            }
        );
        assert_eq!(
            check_radical_family(&IntPoly::from_i64(&[1, 0, 0, -1, 0, 0, 1])),
            RadicalFamily::Cyclotomic {
                n: 18,
                eligible: false
            }
        );
        assert_eq!(
            check_radical_family(&IntPoly::from_i64(&[-4, 0, 1])),
            RadicalFamily::Neither
        );
        assert_eq!(
            check_radical_family(&IntPoly::from_i64(&[4, 0, 0, 0, 1])),
            RadicalFamily::Neither
        );
        assert_eq!(
            check_radical_family(&IntPoly::from_i64(&[-3, 0, 0, 0, 0, 0, 1])),
            RadicalFamily::XdMinusA {
                d: 6,
                a: "3".into(),
                eligible: true
            }
        );
    }
}
