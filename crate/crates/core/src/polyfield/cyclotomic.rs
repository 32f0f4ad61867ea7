use std::collections::HashMap;
use std::sync::Mutex;

use num_rational::BigRational;
use num_traits::One;

use super::poly::{IntPoly, QPoly};

static CACHE: Mutex<Option<HashMap<u64, IntPoly>>> = Mutex::new(None);

/// The `n`-th cyclotomic polynomial, as `(x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .get(&n)
    {
        return p.clone();
    }
    let mut f = QPoly::monomial(BigRational::one(), n as usize).sub(&QPoly::one());
    for d in (1..n).filter(|d| n % d == 0) {
        f = f
            .exact_div(&cyclotomic(d).to_q())
            .expect("Phi_d divides x^n - 1");
    }
    let out = f
        .to_int_poly()
        .expect("cyclotomic polynomials are integral");
    CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(n, out.clone());
    out
}

/// `n` with `Phi_n = f`, searching the indices whose totient equals the degree.
pub fn cyclotomic_index(f: &IntPoly) -> Option<u64> {
    let deg = f.degree()? as u64;
    if deg == 0 || !f.is_monic() {
        return None;
    }
    // phi(n) >= sqrt(n / 2), so n <= 2 deg^2
    (1..=(2 * deg * deg).max(2))
        .find(|&n| crate::exactnum::rational::euler_phi(n) == deg && cyclotomic(n) == *f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn small_cases() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(18), IntPoly::from_i64(&[1, 0, 0, -1, 0, 0, 1]));
    }

    #[test]
    fn primitive_roots_are_roots() {
        // oracle: Phi_n vanishes at e^{2 pi i k / n} for gcd(k, n) = 1
        for n in [12u64, 18, 20, 24] {
            let f = cyclotomic(n).to_q().to_f64_coeffs();
            for k in (1..n).filter(|k| num_integer::Integer::gcd(k, &n) == 1) {
                let z =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64);
                let v = f
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
                assert!(v.norm() < 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=64u64 {
            let prod = (1..=n)
                .filter(|d| n % d == 0)
                .fold(QPoly::one(), |acc, d| acc.mul(&cyclotomic(d).to_q()));
            assert_eq!(
                prod,
                QPoly::monomial(BigRational::one(), n as usize).sub(&QPoly::one())
            );
        }
    }

    #[test]
    fn index_lookup() {
        assert_eq!(
            cyclotomic_index(&IntPoly::from_i64(&[1, 0, 0, -1, 0, 0, 1])),
            Some(18)
        );
        assert_eq!(
            cyclotomic_index(&IntPoly::from_i64(&[-2, 0, 0, 0, 1])),
            None
        );
    }
}
