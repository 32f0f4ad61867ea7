//! Seeded pseudo-random instance families. Every instance is generated from
//! its own ChaCha stream, so a corpus is reproducible from `(seed, family)`
//! and independent of how it is later split across workers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polyfield::IntPoly;
use crate::sequence::{classify, HGInstance, Problem, Scanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    RationalRooted,
    Gaussian,
    ImaginaryQuadratic,
    Mixed,
    RealQuadratic,
}

pub const ALL_FAMILIES: [Family; 5] = [
    Family::RationalRooted,
    Family::Gaussian,
    Family::ImaginaryQuadratic,
    Family::Mixed,
    Family::RealQuadratic,
];

/// The families the unconditional pipeline decides.
pub const UNCONDITIONAL_FAMILIES: [Family; 4] = [
    Family::RationalRooted,
    Family::Gaussian,
    Family::ImaginaryQuadratic,
    Family::Mixed,
];

pub const IMAGINARY_DISCRIMINANTS: [i64; 4] = [-2, -3, -7, -11];
const REAL_DISCRIMINANTS: [i64; 5] = [2, 3, 5, 6, 7];

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::RationalRooted => "rational-rooted",
            Family::Gaussian => "gaussian",
            Family::ImaginaryQuadratic => "imaginary-quadratic",
            Family::Mixed => "mixed",
            Family::RealQuadratic => "real-quadratic",
        }
    }

    fn stream(self) -> u64 {
        ALL_FAMILIES.iter().position(|f| *f == self).unwrap() as u64
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational-rooted" | "rational" => Ok(Family::RationalRooted),
            "gaussian" => Ok(Family::Gaussian),
            "imaginary-quadratic" | "quadratic-imaginary" => Ok(Family::ImaginaryQuadratic),
            "mixed" => Ok(Family::Mixed),
            "real-quadratic" | "quadratic-real" => Ok(Family::RealQuadratic),
            _ => Err(Error::Parse(format!(
                "unknown family {s:?} (expected one of {})",
                ALL_FAMILIES.map(Family::as_str).join(", ")
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub family: Family,
    pub index: usize,
    pub harmonious: bool,
    pub instance: HGInstance,
}

fn linear(a: i64) -> IntPoly {
    IntPoly::from_i64(&[a, 1])
}

fn quadratic(m: i64, n: i64) -> IntPoly {
    IntPoly::from_i64(&[n, m, 1])
}

/// `x^2 + m x + n` with discriminant `d b^2`, for random `m` unless given.
fn quadratic_in(rng: &mut ChaCha8Rng, d: i64, m: Option<i64>) -> (IntPoly, i64) {
    loop {
        let m = m.unwrap_or_else(|| rng.gen_range(-2..=8));
        let b: i64 = rng.gen_range(1..=3);
        for b in [b, 2 * b] {
            let disc = m * m - d * b * b;
            if disc % 4 == 0 {
                return (quadratic(m, disc / 4), m);
            }
        }
    }
}

fn product(fs: &[IntPoly]) -> IntPoly {
    fs.iter().fold(IntPoly::from_i64(&[1]), |acc, f| acc.mul(f))
}

/// Roots of `p` are kept off the nonnegative integers; `q` may vanish there.
fn p_shift(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(1..=6)
}

fn q_shift(rng: &mut ChaCha8Rng) -> i64 {
    if rng.gen_ratio(1, 12) {
        rng.gen_range(-4..=-1)
    } else {
        rng.gen_range(0..=6)
    }
}

fn shape(rng: &mut ChaCha8Rng, family: Family) -> (IntPoly, IntPoly) {
    let harmonious = rng.gen_bool(0.6);
    match family {
        Family::RationalRooted => {
            let k = rng.gen_range(1..=3);
            let kq = if harmonious {
                k
            } else {
                (k + rng.gen_range(0..=2)).max(2) - 1
            };
            let a: Vec<i64> = (0..k).map(|_| p_shift(rng)).collect();
            let mut b: Vec<i64> = (0..kq).map(|_| q_shift(rng)).collect();
            if harmonious {
                let rest: i64 = b[..k - 1].iter().sum();
                b[k - 1] = a.iter().sum::<i64>() - rest;
            }
            let p = product(&a.iter().map(|&x| linear(x)).collect::<Vec<_>>());
            let q = product(&b.iter().map(|&x| linear(x)).collect::<Vec<_>>());
            (p, q)
        }
        Family::Gaussian => {
            let a = rng.gen_range(0..=5);
            let c = if harmonious { a } else { rng.gen_range(0..=5) };
            let p = quadratic(2 * a, a * a + rng.gen_range(1..=4i64).pow(2));
            let q = quadratic(2 * c, c * c + rng.gen_range(1..=4i64).pow(2));
            (p, q)
        }
        Family::ImaginaryQuadratic => {
            let d = IMAGINARY_DISCRIMINANTS[rng.gen_range(0..4)];
            let (p, m) = quadratic_in(rng, d, None);
            let (q, _) = quadratic_in(rng, d, if harmonious { Some(m) } else { None });
            (p, q)
        }
        Family::Mixed => {
            let d = [-1, -2, -3, -7, -11][rng.gen_range(0..5)];
            let a = p_shift(rng);
            let (g, m) = quadratic_in(rng, d, None);
            let p = linear(a).mul(&g);
            if rng.gen_bool(0.5) {
                // rational roots only in q
                let b1 = q_shift(rng);
                let b2 = q_shift(rng);
                let b3 = if harmonious {
                    a + m - b1 - b2
                } else {
                    q_shift(rng)
                };
                let q = product(&[linear(b1), linear(b2), linear(b3)]);
                (p, q)
            } else {
                let (h, m2) = quadratic_in(rng, d, None);
                let c = if harmonious { a + m - m2 } else { q_shift(rng) };
                let q = linear(c).mul(&h);
                (p, q)
            }
        }
        Family::RealQuadratic => {
            let a = rng.gen_range(-2..=3);
            let d1 = REAL_DISCRIMINANTS[rng.gen_range(0..5)];
            let d2 = REAL_DISCRIMINANTS[rng.gen_range(0..5)];
            let c1: i64 = rng.gen_range(1..=2);
            let c2: i64 = rng.gen_range(1..=2);
            let p = quadratic(-2 * a, a * a - d1 * c1 * c1);
            let q = quadratic(-2 * a, a * a - d2 * c2 * c2);
            (p, q)
        }
    }
}

fn small_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> BigRational {
    let mut n = rng.gen_range(-num..=num);
    if n == 0 {
        n = 1;
    }
    BigRational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=den)))
}

/// Targets are drawn near early terms so that most instances are decided
/// within a few hundred steps either way.
fn target(rng: &mut ChaCha8Rng, inst: &HGInstance) -> BigRational {
    let j = rng.gen_range(0..=12u64);
    let mut s = Scanner::new(inst, j + 1);
    let mut early = inst.u0.clone();
    for _ in 0..j {
        if s.advance().is_err() || s.is_zero() {
            break;
        }
        early = s.value();
    }
    match rng.gen_range(0..10) {
        0..=3 => early,
        4..=5 => {
            let m = BigInt::from(rng.gen_range(2..=40));
            let sign = if rng.gen_bool(0.5) {
                BigInt::one()
            } else {
                -BigInt::one()
            };
            let tweak = BigRational::one() + BigRational::new(sign, m);
            early * tweak
        }
        6 => BigRational::zero(),
        7 if !early.is_zero() => -early,
        _ => small_rational(rng, 20, 9),
    }
}

fn instance(rng: &mut ChaCha8Rng, family: Family) -> HGInstance {
    loop {
        let (p, q) = shape(rng, family);
        let problem = if rng.gen_bool(0.5) {
            Problem::Membership
        } else {
            Problem::Threshold
        };
        let u0 = small_rational(rng, 5, 4);
        let Ok(inst) = HGInstance::new(p, q, u0, BigRational::zero(), problem) else {
            continue;
        };
        let t = target(rng, &inst);
        return inst.with_target(t, problem);
    }
}

/// `count` instances of `family`; the i-th depends only on `(seed, family, i)`.
pub fn generate(seed: u64, count: usize, family: Family) -> Vec<CorpusEntry> {
    (0..count).map(|i| entry(seed, family, i)).collect()
}

pub fn entry(seed: u64, family: Family, index: usize) -> CorpusEntry {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((family.stream() << 32) | index as u64);
    let instance = instance(&mut rng, family);
    let harmonious = classify(&instance.p, &instance.q).is_harmonious();
    CorpusEntry {
        name: format!("{family}-{seed}-{index:04}"),
        family,
        index,
        harmonious,
        instance,
    }
}

/// Round-robin over `families` until `count` instances exist.
pub fn generate_families(seed: u64, count: usize, families: &[Family]) -> Vec<CorpusEntry> {
    let mut per = vec![0usize; families.len()];
    (0..count)
        .map(|i| {
            let k = i % families.len();
            per[k] += 1;
            entry(seed, families[k], per[k] - 1)
        })
        .collect()
}

/// Runs `f` on every entry over the rayon pool; results keep input order.
pub fn run_parallel<T, F>(entries: &[CorpusEntry], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&CorpusEntry) -> T + Sync + Send,
{
    entries.par_iter().map(f).collect()
}
