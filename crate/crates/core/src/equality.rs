//! Exact equality and interval-based order between a canonical constant and
//! a rational target.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use crate::config::{Config, START_PRECISION};
use crate::decide::{decide_with, Verdict};
use crate::error::{Error, Result};
use crate::exactnum::expr::{eval_enclosure, ConstExpr};
use crate::gammacanon::{canonical_limit, CanonicalConstant};
use crate::sequence::HGInstance;
use crate::strategy::{
    against, Comparison, LimitAnalysis, LimitEvidence, LimitStrategy, Rationale, Relation,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqualDecision {
    Equal,
    NotEqual(Rationale),
}

/// Symbolic test of `C = t`: `theta f(X) - t g(X) = 0` coefficient-wise over
/// `Q(sqrt m)`, with `pi` and `X` algebraically independent. No numerics.
pub fn decide_equal(c: &CanonicalConstant, t: &BigRational) -> Result<EqualDecision> {
    c.check()?;
    let proportional = c.f_proportional_to_g();
    if c.ell != 0 {
        return Ok(EqualDecision::NotEqual(if proportional {
            Rationale::PiPowerObstruction
        } else {
            Rationale::TranscendenceObstruction
        }));
    }
    if !proportional {
        return Ok(EqualDecision::NotEqual(Rationale::TranscendenceObstruction));
    }
    // f = g = 1: compare theta with t in Q(sqrt m)
    if c.theta_b.is_zero() && &c.theta_a == t {
        Ok(EqualDecision::Equal)
    } else {
        Ok(EqualDecision::NotEqual(Rationale::RationalIdentity))
    }
}

/// Order of `C` and `t` by enclosures of `C - t`, doubling the precision from
/// 64 bits up to `cap`. Requires an inequality proof, which guarantees
/// termination short of the cap.
pub fn compare(
    c: &CanonicalConstant,
    t: &BigRational,
    proof: &EqualDecision,
    cap: u64,
) -> Result<(Relation, u64)> {
    if *proof == EqualDecision::Equal {
        return Err(Error::InvalidInstance(
            "compare needs an inequality proof".into(),
        ));
    }
    separate(&c.value_expr(), t, cap)
}

/// Sign of `expr - t` by precision doubling.
pub fn separate(expr: &ConstExpr, t: &BigRational, cap: u64) -> Result<(Relation, u64)> {
    let diff = expr.clone().sub(ConstExpr::rational(t.clone()));
    let mut bits = START_PRECISION;
    loop {
        let v = eval_enclosure(&diff, bits, cap)?;
        if v.is_positive() {
            return Ok((Relation::Greater, bits));
        }
        if v.is_negative() {
            return Ok((Relation::Less, bits));
        }
        log::debug!("enclosure of {diff} straddles 0 at {bits} bits");
        bits *= 2;
        if bits > cap {
            return Err(Error::PrecisionCap {
                requested: bits,
                cap,
            });
        }
    }
}

/// Gamma-product canonicalization with the unconditional transcendence tests.
pub struct UnconditionalStrategy;

pub struct UnconditionalAnalysis {
    pub constant: CanonicalConstant,
}

impl LimitStrategy for UnconditionalStrategy {
    fn name(&self) -> &'static str {
        "unconditional"
    }

    fn analyze(&self, inst: &HGInstance, _cfg: &Config) -> Result<Box<dyn LimitAnalysis>> {
        Ok(Box::new(UnconditionalAnalysis {
            constant: canonical_limit(inst)?,
        }))
    }
}

impl LimitAnalysis for UnconditionalAnalysis {
    fn compare_to(&mut self, x: &BigRational, cfg: &Config) -> Result<Comparison> {
        let decision = decide_equal(&self.constant, x)?;
        let (relation, equality, precision_bits) = match &decision {
            EqualDecision::Equal => (Relation::Equal, Rationale::RationalIdentity, None),
            EqualDecision::NotEqual(r) => {
                let (rel, bits) = if x.is_zero() || self.constant.base_trivial {
                    rational_side(&self.constant, x)
                        .map(|r| (r, 0))
                        .unwrap_or(compare(&self.constant, x, &decision, cfg.precision_cap)?)
                } else {
                    compare(&self.constant, x, &decision, cfg.precision_cap)?
                };
                (rel, r.clone(), (bits > 0).then_some(bits))
            }
        };
        Ok(Comparison {
            against: against(x),
            relation,
            conditional: false,
            equality,
            precision_bits,
        })
    }

    fn evidence(&self) -> LimitEvidence {
        LimitEvidence::Canonical {
            constant: self.constant.to_doc(),
        }
    }
}

/// Exact order when the constant is a rational times a power of `pi` with a
/// rational `theta`, against zero or when `ell = 0`.
fn rational_side(c: &CanonicalConstant, x: &BigRational) -> Option<Relation> {
    if !c.theta_b.is_zero() || !c.f_proportional_to_g() {
        return None;
    }
    if x.is_zero() {
        return Some(Relation::from_ordering(c.theta_a.cmp(&BigRational::zero())));
    }
    (c.ell == 0).then(|| Relation::from_ordering(c.theta_a.cmp(x)))
}

/// Membership or threshold decision on the unconditional path.
pub fn decide_membership(inst: &HGInstance, cfg: &Config) -> Result<Verdict> {
    let mut i = inst.clone();
    i.problem = crate::sequence::Problem::Membership;
    decide_with(
        &i,
        cfg,
        &[Arc::new(UnconditionalStrategy) as Arc<dyn LimitStrategy>],
    )
}

pub fn decide_threshold(inst: &HGInstance, cfg: &Config) -> Result<Verdict> {
    let mut i = inst.clone();
    i.problem = crate::sequence::Problem::Threshold;
    decide_with(
        &i,
        cfg,
        &[Arc::new(UnconditionalStrategy) as Arc<dyn LimitStrategy>],
    )
}
