use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;
pub const DEFAULT_PRECISION_CAP: u64 = 1 << 16;
pub const START_PRECISION: u64 = 64;

pub const ENV_PRECISION_CAP: &str = "HGDECIDE_PRECISION_CAP";
pub const ENV_SCAN_CAP: &str = "HGDECIDE_SCAN_CAP";

/// Which limit-equality strategy a decision uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Auto,
    Unconditional,
    Conditional,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Unconditional => "unconditional",
            Mode::Conditional => "conditional",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Mode::Auto),
            "unconditional" => Ok(Mode::Unconditional),
            "conditional" => Ok(Mode::Conditional),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    pub scan_cap: u64,
    pub precision_cap: u64,
    pub mode: Mode,
    /// Decide imaginary-quadratic identities on the conditional path by the
    /// unconditional transcendence results when only one exponential occurs.
    pub degeneration: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            scan_cap: DEFAULT_SCAN_CAP,
            precision_cap: DEFAULT_PRECISION_CAP,
            mode: Mode::Auto,
            degeneration: true,
        }
    }
}

impl Config {
    /// Defaults overridden by the environment caps.
    pub fn from_env() -> Result<Self> {
        let mut c = Config::default();
        if let Ok(v) = std::env::var(ENV_PRECISION_CAP) {
            c.precision_cap = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{ENV_PRECISION_CAP}={v:?}")))?;
        }
        if let Ok(v) = std::env::var(ENV_SCAN_CAP) {
            c.scan_cap = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{ENV_SCAN_CAP}={v:?}")))?;
        }
        Ok(c)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }
}
