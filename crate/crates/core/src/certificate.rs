//! Certificates: the verdict together with the instance and settings, and an
//! independent replay of every exact claim they make.

use std::cmp::Ordering;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{Config, Mode};
use crate::decide::{decide, Conditionality, Direction, Outcome, Reason, Verdict};
use crate::document::InstanceDocument;
use crate::equality::{decide_equal, EqualDecision, UnconditionalAnalysis};
use crate::error::{Error, Result};
use crate::exactnum::expr::{eval_enclosure, ConstExpr};
use crate::exactnum::rational::parse_rational;
use crate::gammacanon::{canonical_limit, CanonicalConstant};
use crate::schanuel::analyze_conditional;
use crate::sequence::{
    classify, sign_stable_from, tail_polys, HGInstance, Problem, Scanner, SearchBound,
};
use crate::strategy::{
    Comparison, LimitAnalysis, LimitEvidence, Rationale, Relation, StrategyRegistry,
};

pub const CERTIFICATE_FORMAT: &str = "hgeom-certificate/1";

/// Extra indices past a search bound at which its inequalities are re-checked.
pub const BOUND_CHECK_EXTRA: u64 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub instance: Value,
    pub mode: Mode,
    pub degeneration: bool,
    pub verdict: Verdict,
    pub precision_bits: Option<u64>,
    /// Wall-clock time of the decision; the only nondeterministic field.
    pub timing_ms: u64,
}

impl CertificateDocument {
    pub fn new(inst: &HGInstance, cfg: &Config, verdict: Verdict, timing_ms: u64) -> Self {
        CertificateDocument {
            format: CERTIFICATE_FORMAT.into(),
            instance: InstanceDocument::from_instance(inst, None).to_value(),
            mode: cfg.mode,
            degeneration: cfg.degeneration,
            precision_bits: verdict.precision_bits(),
            verdict,
            timing_ms,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if c.format != CERTIFICATE_FORMAT {
            return Err(Error::Parse(format!(
                "unknown certificate format {:?}",
                c.format
            )));
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The JSON text with the timing field zeroed.
    pub fn canonical_json(&self) -> String {
        CertificateDocument {
            timing_ms: 0,
            ..self.clone()
        }
        .to_json()
    }

    pub fn instance(&self) -> Result<HGInstance> {
        InstanceDocument::from_value(&self.instance)?.instance()
    }
}

/// Decides and wraps the verdict in a certificate.
pub fn certify(
    inst: &HGInstance,
    cfg: &Config,
    registry: &StrategyRegistry,
) -> Result<CertificateDocument> {
    let start = Instant::now();
    let verdict = decide(inst, cfg, registry)?;
    let ms = start.elapsed().as_millis() as u64;
    Ok(CertificateDocument::new(inst, cfg, verdict, ms))
}

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidCertificate(msg.into()))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

struct Replay<'a> {
    inst: &'a HGInstance,
    v: &'a Verdict,
    cfg: Config,
    checks: Vec<String>,
}

/// Replays a certificate; returns the list of checks performed.
pub fn verify(cert: &CertificateDocument, cfg: &Config) -> Result<Vec<String>> {
    let inst = cert.instance()?;
    let cfg = Config {
        mode: cert.mode,
        degeneration: cert.degeneration,
        ..cfg.clone()
    };
    let mut r = Replay {
        inst: &inst,
        v: &cert.verdict,
        cfg,
        checks: Vec::new(),
    };
    r.run()?;
    ensure(
        cert.precision_bits == cert.verdict.precision_bits(),
        "precision field disagrees with the comparisons",
    )?;
    Ok(r.checks)
}

impl Replay<'_> {
    fn note(&mut self, s: String) {
        self.checks.push(s);
    }

    fn hit(&self, s: &Scanner) -> bool {
        match self.inst.problem {
            Problem::Membership => s.cmp(&self.inst.t) == Ordering::Equal,
            Problem::Threshold => s.cmp(&self.inst.t) == Ordering::Less,
        }
    }

    /// Exact scan of `u_0 ..= u_last` without a hit; returns `u_last`.
    fn clean_prefix(&mut self, last: u64) -> Result<BigRational> {
        let mut s = Scanner::new(self.inst, self.cfg.scan_cap.max(last + 1));
        loop {
            if self.hit(&s) {
                return fail(format!("u_{} already decides the instance", s.index()));
            }
            if s.index() == last {
                break;
            }
            s.advance()?;
        }
        self.note(format!("no qualifying term among u_0..u_{last}"));
        Ok(s.value())
    }

    fn negative(&self) -> Outcome {
        match self.inst.problem {
            Problem::Membership => Outcome::NotMember,
            Problem::Threshold => Outcome::Holds,
        }
    }

    fn run(&mut self) -> Result<()> {
        let (inst, v) = (self.inst, self.v);
        ensure(v.problem == inst.problem, "problem kind disagrees")?;
        ensure(
            v.class == classify(&inst.p, &inst.q),
            "asymptotic class disagrees",
        )?;
        self.note(format!("class {}", v.class));
        self.check_conditionality()?;
        if let Some(n) = v.witness {
            let want = match inst.problem {
                Problem::Membership => Outcome::Member,
                Problem::Threshold => Outcome::Fails,
            };
            ensure(
                v.outcome == want && v.reason == Reason::Witness,
                "witness with a negative outcome",
            )?;
            if n > 0 {
                self.clean_prefix(n - 1)?;
            }
            let u = crate::sequence::term_capped(inst, n, self.cfg.scan_cap.max(n + 1))?;
            let ok = match inst.problem {
                Problem::Membership => u == inst.t,
                Problem::Threshold => u < inst.t,
            };
            ensure(ok, format!("u_{n} does not witness the verdict"))?;
            self.note(format!("u_{n} is the least witness"));
            return self.check_limit();
        }
        ensure(
            v.outcome == self.negative() && v.reason != Reason::Witness,
            "missing witness",
        )?;
        match &v.reason {
            Reason::ZeroSequence => {
                ensure(inst.u0.is_zero(), "u0 is not 0")?;
                self.clean_prefix(0)?;
            }
            Reason::ZeroTail { from } => {
                ensure(*from > 0, "zero tail from 0")?;
                let k = num_bigint::BigInt::from(from - 1);
                ensure(
                    inst.q.eval_int(&k).is_zero(),
                    format!("q does not vanish at {}", from - 1),
                )?;
                self.clean_prefix(*from)?;
                self.note(format!("u_n = 0 for n >= {from}"));
            }
            Reason::ConstantSequence => {
                ensure(inst.p == inst.q, "p != q")?;
                self.clean_prefix(0)?;
            }
            Reason::AlternatingPair => {
                ensure(inst.q.add(&inst.p).is_zero(), "q != -p")?;
                self.clean_prefix(1)?;
            }
            Reason::TailNonzero => {
                ensure(
                    inst.problem == Problem::Membership && inst.t.is_zero(),
                    "target is not 0",
                )?;
                ensure(!inst.u0.is_zero(), "u0 = 0")?;
                ensure(
                    inst.q.least_nonnegative_integer_root().is_none(),
                    "q vanishes at a nonnegative integer",
                )?;
                self.note("no term vanishes".into());
            }
            _ => self.check_tail()?,
        }
        self.check_limit()
    }

    fn check_conditionality(&mut self) -> Result<()> {
        let conditional = self.v.limit.as_ref().is_some_and(|l| {
            l.comparisons
                .iter()
                .any(|c| c.conditional && c.relation != Relation::Equal)
        });
        let want = if conditional {
            Conditionality::ConditionalOnSchanuel
        } else {
            Conditionality::Unconditional
        };
        ensure(
            self.v.conditionality == want,
            "conditionality flag disagrees with the comparisons",
        )
    }

    fn comparison(&self, i: usize) -> Result<&Comparison> {
        self.v
            .limit
            .as_ref()
            .and_then(|l| l.comparisons.get(i))
            .ok_or_else(|| Error::InvalidCertificate("missing limit comparison".into()))
    }

    fn check_tail(&mut self) -> Result<()> {
        let (inst, v) = (self.inst, self.v);
        let k = v
            .tail_start
            .ok_or_else(|| Error::InvalidCertificate("missing tail start".into()))?;
        let polys = tail_polys(&inst.p, &inst.q);
        ensure(
            sign_stable_from(&polys, k),
            format!("p, q, q^2 - p^2 change sign beyond {k}"),
        )?;
        self.note(format!("p, q, q^2 - p^2 keep their signs on [{k}, oo)"));
        let increasing = polys[2].leading().is_positive();
        let dir = if increasing {
            Direction::AbsIncreasing
        } else {
            Direction::AbsDecreasing
        };
        ensure(v.direction == Some(dir), "direction disagrees")?;
        let uk = self.clean_prefix(k)?;
        let alternating = inst.p.leading().is_positive() != inst.q.leading().is_positive();
        let sign: i8 = if alternating {
            0
        } else if uk.is_positive() {
            1
        } else {
            -1
        };
        ensure(v.tail_sign == Some(sign), "tail sign disagrees")?;
        let t = &inst.t;
        let class = &v.class;
        match &v.reason {
            Reason::SignMismatch => {
                ensure(
                    sign != 0 && (sign > 0) != t.is_positive() && !t.is_zero(),
                    "signs agree",
                )?;
            }
            Reason::BoundExhausted => {
                let b = self.bound()?;
                ensure(b.n >= k, "bound before the tail start")?;
                ensure(b.ratio_above_one == increasing, "bound direction disagrees")?;
                ensure(
                    b.ratio_above_one == b.terms_above_target,
                    "bound does not move away from t",
                )?;
                self.clean_prefix(b.n.saturating_sub(1).max(k))?;
                self.check_bound(&b)?;
            }
            Reason::LimitSide => {
                ensure(
                    class.is_harmonious(),
                    "limit side outside the harmonious class",
                )?;
                let b = self.bound()?;
                ensure(
                    b.n == k
                        && b.ratio_above_one == increasing
                        && b.terms_above_target != increasing,
                    "bad bound",
                )?;
                let c = self.comparison(0)?;
                let mut rel = c.relation;
                let abs_t = t.abs();
                let against = if sign > 0 { abs_t } else { -abs_t };
                ensure(
                    parse_rational(&c.against)? == against,
                    "comparison target disagrees",
                )?;
                if sign < 0 {
                    rel = rel.flip();
                }
                let ok = if increasing {
                    rel != Relation::Greater
                } else {
                    rel != Relation::Less
                };
                ensure(ok, "limit is beyond the target")?;
                self.check_bound(&b)?;
            }
            Reason::IncreasingTail => {
                ensure(
                    inst.problem == Problem::Threshold && sign != 0,
                    "not a threshold tail",
                )?;
                ensure((sign > 0) == increasing, "tail is not increasing")?;
                self.note(format!("u_n >= u_{k} >= t for n >= {k}"));
            }
            Reason::DecreasingAboveLimit => {
                ensure(
                    inst.problem == Problem::Threshold && sign != 0,
                    "not a threshold tail",
                )?;
                ensure((sign > 0) != increasing, "tail is not decreasing")?;
                if class.shrinks() {
                    ensure(!t.is_positive(), "t > 0 = lim u_n")?;
                } else {
                    ensure(class.is_harmonious(), "no finite limit")?;
                    let c = self.comparison(0)?;
                    ensure(
                        parse_rational(&c.against)? == *t,
                        "comparison target disagrees",
                    )?;
                    ensure(c.relation != Relation::Less, "limit below t")?;
                }
            }
            Reason::AlternatingAboveTarget => {
                ensure(
                    sign == 0 && !increasing && t.is_negative(),
                    "not a shrinking alternating tail",
                )?;
                self.clean_prefix(k + 1)?;
            }
            other => return fail(format!("{other:?} is not a tail reason")),
        }
        Ok(())
    }

    fn bound(&self) -> Result<SearchBound> {
        self.v
            .bound
            .clone()
            .ok_or_else(|| Error::InvalidCertificate("missing search bound".into()))
    }

    fn check_bound(&mut self, b: &SearchBound) -> Result<()> {
        let ok = b.check(
            self.inst,
            BOUND_CHECK_EXTRA,
            self.cfg.scan_cap.max(b.n + BOUND_CHECK_EXTRA + 1),
        )?;
        ensure(
            ok,
            format!(
                "bound inequalities fail in {}..{}",
                b.n,
                b.n + BOUND_CHECK_EXTRA
            ),
        )?;
        self.note(format!(
            "bound N = {} ({:?}) rechecked",
            b.n, b.justification
        ));
        Ok(())
    }

    fn check_limit(&mut self) -> Result<()> {
        let Some(l) = &self.v.limit else {
            return Ok(());
        };
        match &l.evidence {
            LimitEvidence::Canonical { constant } => {
                let c = CanonicalConstant::from_doc(constant)?;
                c.check()?;
                ensure(
                    c == canonical_limit(self.inst)?,
                    "canonical tuple is not the limit",
                )?;
                self.note(format!("canonical tuple {c}"));
                for cmp in &l.comparisons {
                    self.check_canonical_comparison(&c, cmp)?;
                }
            }
            LimitEvidence::Identity { .. } => {
                let mut a = analyze_conditional(self.inst)?;
                ensure(a.evidence() == l.evidence, "pairing evidence disagrees")?;
                for cmp in &l.comparisons {
                    let x = parse_rational(&cmp.against)?;
                    let again = a.compare_to(&x, &self.cfg)?;
                    ensure(
                        again.relation == cmp.relation
                            && again.conditional == cmp.conditional
                            && again.equality == cmp.equality,
                        format!("comparison with {} does not replay", cmp.against),
                    )?;
                    self.note(format!("identity against {} replayed", cmp.against));
                }
            }
        }
        Ok(())
    }

    fn check_canonical_comparison(
        &mut self,
        c: &CanonicalConstant,
        cmp: &Comparison,
    ) -> Result<()> {
        let x = parse_rational(&cmp.against)?;
        ensure(
            !cmp.conditional,
            "unconditional comparison flagged conditional",
        )?;
        match decide_equal(c, &x)? {
            EqualDecision::Equal => ensure(
                cmp.relation == Relation::Equal,
                "equal constant recorded as unequal",
            )?,
            EqualDecision::NotEqual(r) => ensure(
                cmp.relation != Relation::Equal && cmp.equality == r,
                "equality rationale disagrees",
            )?,
        }
        match cmp.precision_bits {
            Some(bits) => {
                let diff = c.value_expr().sub(ConstExpr::rational(x.clone()));
                let e = eval_enclosure(&diff, bits, self.cfg.precision_cap.max(bits))?;
                let rel = if e.is_positive() {
                    Relation::Greater
                } else if e.is_negative() {
                    Relation::Less
                } else {
                    return fail(format!("enclosure at {bits} bits does not separate"));
                };
                ensure(rel == cmp.relation, "separated order disagrees")?;
                self.note(format!("L {:?} {} at {bits} bits", rel, cmp.against));
            }
            None if cmp.relation != Relation::Equal => {
                let mut a = UnconditionalAnalysis {
                    constant: c.clone(),
                };
                let again = a.compare_to(&x, &self.cfg)?;
                ensure(
                    again.relation == cmp.relation && again.precision_bits.is_none(),
                    "exact order disagrees",
                )?;
                let _ = Rationale::RationalIdentity;
            }
            None => {}
        }
        Ok(())
    }
}
