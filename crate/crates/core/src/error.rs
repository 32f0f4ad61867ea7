use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: sqrt({left}) vs sqrt({right})")]
    FieldMismatch { left: i64, right: i64 },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("tower mismatch: {0}")]
    TowerMismatch(String),

    #[error("precision cap exceeded: requested {requested} bits, cap {cap}")]
    PrecisionCap { requested: u64, cap: u64 },

    #[error("term scan cap exceeded: index {index} > cap {cap}")]
    ScanCap { index: u64, cap: u64 },

    #[error("polynomial must be monic: {0}")]
    NonMonic(String),

    #[error("input exceeds limits: {0}")]
    Limits(String),

    #[error("wrong asymptotic class: {0}")]
    WrongClass(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("numeric root isolation failed: {0}")]
    RootIsolation(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Errors that mean "outside the supported class" rather than a defect in
    /// the input or a resource limit.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            Error::Unsupported(_)
                | Error::InvalidField(_)
                | Error::TowerMismatch(_)
                | Error::NonMonic(_)
        )
    }

    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::PrecisionCap { .. } | Error::ScanCap { .. } | Error::Limits(_)
        )
    }
}
