//! The decision pipeline shared by both limit strategies: zero and constant
//! sequences, the exact prefix scan, the monotone tail and the limit side.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::sequence::{
    classify, sign_stable_index, tail_polys, AsymptoticClass, BoundJustification, HGInstance,
    Problem, Scanner, SearchBound,
};
use crate::strategy::{
    analyze_with, Comparison, LimitAnalysis, LimitEvidence, LimitStrategy, Relation,
    StrategyRegistry,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Member,
    NotMember,
    Holds,
    Fails,
}

impl Outcome {
    /// Member or Holds.
    pub fn is_positive(self) -> bool {
        matches!(self, Outcome::Member | Outcome::Holds)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Member => "Member",
            Outcome::NotMember => "NotMember",
            Outcome::Holds => "Holds",
            Outcome::Fails => "Fails",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditionality {
    Unconditional,
    ConditionalOnSchanuel,
}

/// What the verdict rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    /// The witness was found by the forward scan.
    Witness,
    /// `u0 = 0`.
    ZeroSequence,
    /// `u_n = 0` for every `n >= from`.
    ZeroTail { from: u64 },
    /// `p = q`.
    ConstantSequence,
    /// `q = -p`: the sequence alternates between `u0` and `-u0`.
    AlternatingPair,
    /// No term vanishes but `t = 0`.
    TailNonzero,
    /// The tail has one sign and `t` the other.
    SignMismatch,
    /// Every term before the bound was scanned; none after it can qualify.
    BoundExhausted,
    /// The tail moves monotonically towards a limit that lies on its own side
    /// of `t`.
    LimitSide,
    /// Increasing tail whose first term is at least `t`.
    IncreasingTail,
    /// Decreasing tail whose limit is at least `t`.
    DecreasingAboveLimit,
    /// Alternating tail shrinking to 0 with `t < 0` below its negative terms.
    AlternatingAboveTarget,
}

/// Behaviour of `|u_n|` from `tail_start` on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AbsIncreasing,
    AbsDecreasing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitRecord {
    pub strategy: String,
    pub evidence: LimitEvidence,
    pub comparisons: Vec<Comparison>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub problem: Problem,
    pub outcome: Outcome,
    pub witness: Option<u64>,
    pub reason: Reason,
    pub class: AsymptoticClass,
    /// Index from which `p`, `q` and `q^2 - p^2` keep their leading signs.
    pub tail_start: Option<u64>,
    /// Sign of the tail terms; 0 when they alternate.
    pub tail_sign: Option<i8>,
    pub direction: Option<Direction>,
    pub bound: Option<SearchBound>,
    pub limit: Option<LimitRecord>,
    /// Terms `u_0 .. u_{scanned - 1}` were evaluated exactly.
    pub scanned: u64,
    pub conditionality: Conditionality,
}

impl Verdict {
    pub fn precision_bits(&self) -> Option<u64> {
        self.limit
            .as_ref()
            .and_then(|l| l.comparisons.iter().filter_map(|c| c.precision_bits).max())
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness {
            Some(n) => write!(f, "{}({n})", self.outcome)?,
            None => write!(f, "{}", self.outcome)?,
        }
        if self.conditionality == Conditionality::ConditionalOnSchanuel {
            write!(f, " [conditional on Schanuel's conjecture]")?;
        }
        Ok(())
    }
}

/// Decides with the strategies that `cfg.mode` selects from `registry`.
pub fn decide(inst: &HGInstance, cfg: &Config, registry: &StrategyRegistry) -> Result<Verdict> {
    decide_with(inst, cfg, &registry.for_mode(cfg.mode)?)
}

pub fn decide_with(
    inst: &HGInstance,
    cfg: &Config,
    strategies: &[Arc<dyn LimitStrategy>],
) -> Result<Verdict> {
    Pipeline::new(inst, cfg, strategies).run()
}

struct Pipeline<'a> {
    inst: &'a HGInstance,
    cfg: &'a Config,
    strategies: &'a [Arc<dyn LimitStrategy>],
    verdict: Verdict,
    analysis: Option<Box<dyn LimitAnalysis>>,
}

/// Where a scan stopped.
enum Stop {
    Hit(u64),
    Reached(u64, BigRational),
}

impl<'a> Pipeline<'a> {
    fn new(
        inst: &'a HGInstance,
        cfg: &'a Config,
        strategies: &'a [Arc<dyn LimitStrategy>],
    ) -> Self {
        let verdict = Verdict {
            problem: inst.problem,
            outcome: Outcome::NotMember,
            witness: None,
            reason: Reason::Witness,
            class: classify(&inst.p, &inst.q),
            tail_start: None,
            tail_sign: None,
            direction: None,
            bound: None,
            limit: None,
            scanned: 0,
            conditionality: Conditionality::Unconditional,
        };
        Pipeline {
            inst,
            cfg,
            strategies,
            verdict,
            analysis: None,
        }
    }

    fn membership(&self) -> bool {
        self.inst.problem == Problem::Membership
    }

    fn negative(&self) -> Outcome {
        if self.membership() {
            Outcome::NotMember
        } else {
            Outcome::Holds
        }
    }

    fn finish(mut self, outcome: Outcome, reason: Reason) -> Verdict {
        self.verdict.outcome = outcome;
        self.verdict.reason = reason;
        self.verdict
    }

    fn found(mut self, n: u64) -> Verdict {
        self.verdict.witness = Some(n);
        self.verdict.scanned = self.verdict.scanned.max(n + 1);
        let outcome = if self.membership() {
            Outcome::Member
        } else {
            Outcome::Fails
        };
        self.finish(outcome, Reason::Witness)
    }

    /// Scans forward from 0 checking the problem at every index; stops at the
    /// first hit or at the first `n >= from` with `stop`.
    fn scan(&mut self, from: u64, stop: impl Fn(&Scanner) -> bool) -> Result<Stop> {
        let mut s = Scanner::new(self.inst, self.cfg.scan_cap);
        loop {
            let n = s.index();
            self.verdict.scanned = n + 1;
            let hit = match self.inst.problem {
                Problem::Membership => s.cmp(&self.inst.t) == Ordering::Equal,
                Problem::Threshold => s.cmp(&self.inst.t) == Ordering::Less,
            };
            if hit {
                return Ok(Stop::Hit(n));
            }
            if n >= from && stop(&s) {
                return Ok(Stop::Reached(n, s.value()));
            }
            s.advance()?;
        }
    }

    fn scan_to(&mut self, last: u64) -> Result<Option<u64>> {
        match self.scan(last, |_| true)? {
            Stop::Hit(n) => Ok(Some(n)),
            Stop::Reached(..) => Ok(None),
        }
    }

    fn run(mut self) -> Result<Verdict> {
        let inst = self.inst;
        if inst.u0.is_zero() {
            // every term is 0
            self.verdict.scanned = 1;
            let hit = if self.membership() {
                inst.t.is_zero()
            } else {
                inst.t.is_positive()
            };
            if hit {
                return Ok(self.found(0));
            }
            let out = self.negative();
            return Ok(self.finish(out, Reason::ZeroSequence));
        }
        if let Some(k0) = inst.q.least_nonnegative_integer_root() {
            let k0 = u64::try_from(k0).map_err(|_| Error::ScanCap {
                index: u64::MAX,
                cap: self.cfg.scan_cap,
            })?;
            return Ok(match self.scan_to(k0 + 1)? {
                Some(n) => self.found(n),
                None => {
                    let out = self.negative();
                    self.finish(out, Reason::ZeroTail { from: k0 + 1 })
                }
            });
        }
        if inst.p == inst.q {
            return Ok(match self.scan_to(0)? {
                Some(n) => self.found(n),
                None => {
                    let out = self.negative();
                    self.finish(out, Reason::ConstantSequence)
                }
            });
        }
        if inst.q.add(&inst.p).is_zero() {
            return Ok(match self.scan_to(1)? {
                Some(n) => self.found(n),
                None => {
                    let out = self.negative();
                    self.finish(out, Reason::AlternatingPair)
                }
            });
        }
        if self.membership() && inst.t.is_zero() {
            // no q root at a nonnegative integer, so no term vanishes
            return Ok(self.finish(Outcome::NotMember, Reason::TailNonzero));
        }
        self.tail()
    }

    fn tail(mut self) -> Result<Verdict> {
        let inst = self.inst;
        let polys = tail_polys(&inst.p, &inst.q);
        let k = sign_stable_index(&polys, self.cfg.scan_cap);
        let alternating = inst.p.leading().is_positive() != inst.q.leading().is_positive();
        let increasing = polys[2].leading().is_positive();
        let class = self.verdict.class.clone();
        if class == AsymptoticClass::RatioLimitMinusOne {
            return Err(Error::Unsupported(format!(
                "{class}: the ratio tends to -1"
            )));
        }
        self.verdict.tail_start = Some(k);
        self.verdict.direction = Some(if increasing {
            Direction::AbsIncreasing
        } else {
            Direction::AbsDecreasing
        });
        // exact prefix up to and including u_k
        let uk = match self.scan(k, |_| true)? {
            Stop::Hit(n) => return Ok(self.found(n)),
            Stop::Reached(_, v) => v,
        };
        let sign: i8 = if alternating {
            0
        } else if uk.is_positive() {
            1
        } else {
            -1
        };
        self.verdict.tail_sign = Some(sign);
        if self.membership() {
            self.membership_tail(k, &uk, sign, increasing)
        } else {
            self.threshold_tail(k, &uk, sign, increasing)
        }
    }

    fn bound(
        &mut self,
        n: u64,
        justification: BoundJustification,
        ratio_above: bool,
        terms_above: bool,
    ) {
        self.verdict.bound = Some(SearchBound {
            n,
            justification,
            ratio_above_one: ratio_above,
            terms_above_target: terms_above,
        });
    }

    /// Scans from the tail start until `|u_n|` is strictly on `side` of `|t|`.
    fn scan_past(
        mut self,
        k: u64,
        side: Ordering,
        j: BoundJustification,
        increasing: bool,
    ) -> Result<Verdict> {
        let t = self.inst.t.clone();
        match self.scan(k, |s| s.cmp_abs(&t) == side)? {
            Stop::Hit(n) => Ok(self.found(n)),
            Stop::Reached(n, _) => {
                self.bound(n, j, increasing, side == Ordering::Greater);
                Ok(self.finish(Outcome::NotMember, Reason::BoundExhausted))
            }
        }
    }

    fn membership_tail(
        mut self,
        k: u64,
        uk: &BigRational,
        sign: i8,
        increasing: bool,
    ) -> Result<Verdict> {
        let t = self.inst.t.clone();
        if sign != 0 && (sign > 0) != t.is_positive() {
            return Ok(self.finish(Outcome::NotMember, Reason::SignMismatch));
        }
        let class = self.verdict.class.clone();
        if class.diverges() {
            return self.scan_past(
                k,
                Ordering::Greater,
                BoundJustification::RatioExceedsTarget,
                true,
            );
        }
        if class.shrinks() {
            return self.scan_past(
                k,
                Ordering::Less,
                BoundJustification::TailBelowTarget,
                false,
            );
        }
        // harmonious: |u_n| moves monotonically towards |L| from u_k on
        let abs_t = t.abs();
        let past = match uk.abs().cmp(&abs_t) {
            Ordering::Greater => increasing,
            Ordering::Less => !increasing,
            Ordering::Equal => unreachable!("u_k = t was caught by the scan"),
        };
        if past {
            self.bound(
                k,
                BoundJustification::ProductMonotoneBeyond,
                increasing,
                increasing,
            );
            return Ok(self.finish(Outcome::NotMember, Reason::BoundExhausted));
        }
        // |u_k| is on the near side of |t|: it crosses iff |L| is beyond |t|
        let signed_t = if sign > 0 {
            abs_t.clone()
        } else {
            -abs_t.clone()
        };
        let mut c = self.compare_limit(&signed_t)?;
        if sign < 0 {
            c.relation = c.relation.flip();
        }
        let relation = c.relation;
        self.note_conditional(&c);
        let beyond = if increasing {
            relation == Relation::Greater
        } else {
            relation == Relation::Less
        };
        if !beyond {
            self.bound(
                k,
                BoundJustification::ProductMonotoneBeyond,
                increasing,
                !increasing,
            );
            return Ok(self.finish(Outcome::NotMember, Reason::LimitSide));
        }
        let side = if increasing {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        self.scan_past(
            k,
            side,
            BoundJustification::ProductMonotoneBeyond,
            increasing,
        )
    }

    fn threshold_tail(
        mut self,
        k: u64,
        _uk: &BigRational,
        sign: i8,
        increasing: bool,
    ) -> Result<Verdict> {
        let t = self.inst.t.clone();
        let class = self.verdict.class.clone();
        if sign == 0 {
            if increasing || !t.is_negative() {
                // negative terms run to -infinity, or terms shrink to 0 <= t
                return self.scan_for_violation(k);
            }
            // the first negative tail term has the largest magnitude
            return Ok(match self.scan_to(k + 1)? {
                Some(n) => self.found(n),
                None => self.finish(Outcome::Holds, Reason::AlternatingAboveTarget),
            });
        }
        let rising = (sign > 0) == increasing;
        if rising {
            // the tail minimum is u_k, already checked
            return Ok(self.finish(Outcome::Holds, Reason::IncreasingTail));
        }
        if class.diverges() {
            // u_n -> -infinity
            return self.scan_for_violation(k);
        }
        if class.shrinks() {
            // u_n decreases to 0
            if !t.is_positive() {
                return Ok(self.finish(Outcome::Holds, Reason::DecreasingAboveLimit));
            }
            return self.scan_for_violation(k);
        }
        let c = self.compare_limit(&t)?;
        let relation = c.relation;
        self.note_conditional(&c);
        if relation == Relation::Less {
            self.scan_for_violation(k)
        } else {
            Ok(self.finish(Outcome::Holds, Reason::DecreasingAboveLimit))
        }
    }

    fn scan_for_violation(mut self, k: u64) -> Result<Verdict> {
        match self.scan(k, |_| false)? {
            Stop::Hit(n) => Ok(self.found(n)),
            Stop::Reached(..) => unreachable!("scan only stops at a hit or at the cap"),
        }
    }

    fn compare_limit(&mut self, x: &BigRational) -> Result<Comparison> {
        if self.analysis.is_none() {
            let (name, a) = analyze_with(self.strategies, self.inst, self.cfg)?;
            self.verdict.limit = Some(LimitRecord {
                strategy: name,
                evidence: a.evidence(),
                comparisons: Vec::new(),
            });
            self.analysis = Some(a);
        }
        let c = self
            .analysis
            .as_mut()
            .expect("analysis")
            .compare_to(x, self.cfg)?;
        if let Some(l) = self.verdict.limit.as_mut() {
            l.comparisons.push(c.clone());
        }
        Ok(c)
    }

    fn note_conditional(&mut self, c: &Comparison) {
        if c.conditional && c.relation != Relation::Equal {
            self.verdict.conditionality = Conditionality::ConditionalOnSchanuel;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equality::UnconditionalStrategy;
    use crate::exactnum::rational::{int, rat};
    use crate::polyfield::IntPoly;
    use crate::sequence::{brute_force, OracleResult};

    fn run(p: &[i64], q: &[i64], u0: BigRational, t: BigRational, problem: Problem) -> Verdict {
        let inst =
            HGInstance::new(IntPoly::from_i64(p), IntPoly::from_i64(q), u0, t, problem).unwrap();
        decide_with(
            &inst,
            &Config::default(),
            &[Arc::new(UnconditionalStrategy) as Arc<dyn LimitStrategy>],
        )
        .unwrap()
    }

    fn agrees(p: &[i64], q: &[i64], u0: BigRational, t: BigRational, problem: Problem) {
        let inst = HGInstance::new(
            IntPoly::from_i64(p),
            IntPoly::from_i64(q),
            u0.clone(),
            t.clone(),
            problem,
        )
        .unwrap();
        let v = run(p, q, u0, t, problem);
        let o = brute_force(&inst, 2000).unwrap();
        match o {
            OracleResult::FoundMembership { n } | OracleResult::ThresholdViolation { n } => {
                assert_eq!(v.witness, Some(n), "{inst}: {v:?}")
            }
            _ => assert!(
                !matches!(v.outcome, Outcome::Member | Outcome::Fails),
                "{inst}: {v:?}"
            ),
        }
        if let Some(b) = &v.bound {
            assert!(b.check(&inst, 50, 1 << 20).unwrap(), "{inst}: {b:?}");
        }
    }

    #[test]
    fn zero_and_constant_sequences() {
        let v = run(&[1], &[2], int(0), int(0), Problem::Membership);
        assert_eq!((v.outcome, v.witness), (Outcome::Member, Some(0)));
        let v = run(&[1], &[2], int(0), int(1), Problem::Threshold);
        assert_eq!((v.outcome, v.witness), (Outcome::Fails, Some(0)));
        let v = run(&[1, 1], &[-3, 1], int(2), int(0), Problem::Membership);
        assert_eq!((v.outcome, v.witness), (Outcome::Member, Some(4)));
        let v = run(&[1, 1], &[-3, 1], int(2), int(5), Problem::Membership);
        assert_eq!(
            (v.outcome, v.reason),
            (Outcome::NotMember, Reason::ZeroTail { from: 4 })
        );
        let v = run(&[3, 1], &[3, 1], int(2), int(2), Problem::Membership);
        assert_eq!(v.witness, Some(0));
        let v = run(&[3, 1], &[3, 1], int(2), int(1), Problem::Threshold);
        assert_eq!(
            (v.outcome, v.reason),
            (Outcome::Holds, Reason::ConstantSequence)
        );
        let v = run(&[3, 1], &[-3, -1], int(2), int(-2), Problem::Membership);
        assert_eq!(v.witness, Some(1));
    }

    #[test]
    fn harmonious_limit_side() {
        // u_n = 2(n+1)/(n+2) increases to 2
        let (p, q) = (&[3, 4, 1][..], &[4, 4, 1][..]);
        let v = run(p, q, int(1), int(2), Problem::Membership);
        assert_eq!(
            (v.outcome, v.reason.clone()),
            (Outcome::NotMember, Reason::LimitSide)
        );
        assert_eq!(v.conditionality, Conditionality::Unconditional);
        let v = run(p, q, int(1), rat(19, 10), Problem::Membership);
        assert_eq!((v.outcome, v.witness), (Outcome::Member, Some(18)));
        let v = run(p, q, int(1), rat(199, 100), Problem::Membership);
        assert_eq!((v.outcome, v.witness), (Outcome::Member, Some(198)));
        let v = run(p, q, int(1), rat(397, 200), Problem::Membership);
        assert_eq!(
            (v.outcome, v.reason.clone()),
            (Outcome::NotMember, Reason::BoundExhausted)
        );
        assert_eq!(v.bound.unwrap().n, 132);
        let v = run(p, q, int(-1), int(-2), Problem::Threshold);
        assert_eq!(
            (v.outcome, v.reason),
            (Outcome::Holds, Reason::DecreasingAboveLimit)
        );
        let v = run(p, q, int(-1), rat(-19, 10), Problem::Threshold);
        assert_eq!(v.witness, Some(19));
    }

    #[test]
    fn agrees_with_oracle() {
        let cases: &[(&[i64], &[i64])] = &[
            (&[13, -4, 1], &[5, -4, 1]),
            (&[1, 0, 1], &[4, 0, 1]),
            (&[2, 1], &[1, 1]),
            (&[1, 1], &[3, 1]),
            (&[5, 1], &[-7, 1]),
            (&[1, 1], &[2]),
            (&[2], &[-1]),
            (&[2], &[-3]),
            (&[1, 1], &[-1, -1, 1]),
            (&[1, 3, 1], &[-50, 1, 1]),
            (&[4, 0, 1], &[1, 0, 1]),
        ];
        let targets = [
            int(0),
            int(1),
            int(-1),
            rat(1, 2),
            rat(5, 13),
            rat(1, 13),
            rat(-3, 4),
            int(9),
            rat(1, 7),
        ];
        for (p, q) in cases {
            for u0 in [int(1), int(-2), rat(3, 5)] {
                for t in &targets {
                    for problem in [Problem::Membership, Problem::Threshold] {
                        agrees(p, q, u0.clone(), t.clone(), problem);
                    }
                }
            }
        }
    }
}
