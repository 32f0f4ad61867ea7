//! Limit-comparison strategies, selected by name at runtime.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::config::{Config, Mode};
use crate::error::{Error, Result};
use crate::exactnum::rational::format_rational;
use crate::gammacanon::CanonicalDoc;
use crate::recognizers::MatchingCertificate;
use crate::sequence::HGInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl Relation {
    pub fn from_ordering(o: std::cmp::Ordering) -> Self {
        match o {
            std::cmp::Ordering::Less => Relation::Less,
            std::cmp::Ordering::Equal => Relation::Equal,
            std::cmp::Ordering::Greater => Relation::Greater,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Relation::Less => Relation::Greater,
            Relation::Equal => Relation::Equal,
            Relation::Greater => Relation::Less,
        }
    }
}

/// Why a limit compares the way it does.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rationale {
    RationalIdentity,
    PiPowerObstruction,
    TranscendenceObstruction,
    IntervalSeparation {
        precision_bits: u64,
    },
    /// The Laurent identity cancels to zero.
    IdentityVanishes,
    /// Nonzero identity, separated numerically at the given precision.
    IdentityNonzero {
        precision_bits: u64,
        degenerate: bool,
    },
}

/// Outcome of comparing the limit `L` with a rational `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    /// `L` versus `against`.
    pub against: String,
    pub relation: Relation,
    /// The equality exclusion (and hence a strict relation) relies on
    /// Schanuel's conjecture.
    pub conditional: bool,
    /// Rationale for `L != x` (or `L = x`).
    pub equality: Rationale,
    /// Precision at which the order was separated, if numerics were used.
    pub precision_bits: Option<u64>,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L {:?} {}", self.relation, self.against)
    }
}

/// Strategy-specific evidence describing the limit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum LimitEvidence {
    Canonical {
        constant: CanonicalDoc,
    },
    Identity {
        tower: String,
        symbols: Vec<String>,
        pairs: Vec<PairDoc>,
        matchings: Vec<MatchingCertificate>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDoc {
    pub side: String,
    pub rho: String,
    pub w: String,
}

pub trait LimitAnalysis: Send {
    /// Compares the limit `L = u0 * prod r(k)` with `x`.
    fn compare_to(&mut self, x: &BigRational, cfg: &Config) -> Result<Comparison>;
    fn evidence(&self) -> LimitEvidence;
}

pub trait LimitStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Prepares the limit of a harmonious monic instance with nonzero terms.
    fn analyze(&self, inst: &HGInstance, cfg: &Config) -> Result<Box<dyn LimitAnalysis>>;
}

#[derive(Clone, Default)]
pub struct StrategyRegistry {
    entries: Vec<Arc<dyn LimitStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        StrategyRegistry {
            entries: Vec::new(),
        }
    }

    /// The unconditional and conditional strategies.
    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(crate::equality::UnconditionalStrategy));
        r.register(Arc::new(crate::schanuel::ConditionalStrategy));
        r
    }

    /// Adds or replaces a strategy under its name.
    pub fn register(&mut self, s: Arc<dyn LimitStrategy>) {
        self.entries.retain(|e| e.name() != s.name());
        self.entries.push(s);
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn LimitStrategy>> {
        self.entries.iter().find(|e| e.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.name()).collect()
    }

    /// Strategies to try, in order, for a mode.
    pub fn for_mode(&self, mode: Mode) -> Result<Vec<Arc<dyn LimitStrategy>>> {
        let names: &[&str] = match mode {
            Mode::Auto => &["unconditional", "conditional"],
            Mode::Unconditional => &["unconditional"],
            Mode::Conditional => &["conditional"],
        };
        names
            .iter()
            .map(|n| {
                self.get(n)
                    .ok_or_else(|| Error::Unsupported(format!("no strategy named {n:?}")))
            })
            .collect()
    }
}

/// Runs the first strategy that supports the instance.
pub fn analyze_with(
    strategies: &[Arc<dyn LimitStrategy>],
    inst: &HGInstance,
    cfg: &Config,
) -> Result<(String, Box<dyn LimitAnalysis>)> {
    let mut reasons = Vec::new();
    for s in strategies {
        match s.analyze(inst, cfg) {
            Ok(a) => return Ok((s.name().to_string(), a)),
            Err(e) if e.is_unsupported() => {
                log::debug!("strategy {} declined: {e}", s.name());
                reasons.push(format!("{}: {e}", s.name()));
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Unsupported(reasons.join("; ")))
}

pub fn against(x: &BigRational) -> String {
    format_rational(x)
}
