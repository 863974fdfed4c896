use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series order must be at least 1")]
    InvalidOrder,

    #[error("constant term {constant} is not a unit; series cannot be inverted")]
    NotInvertible { constant: String },

    #[error("factor `{factor}` is not invertible (constant term {constant})")]
    FactorNotInvertible { factor: String, constant: String },

    #[error("dissection base must be at least 1")]
    InvalidBase,

    #[error("modulus {0} is invalid (must be at least 2)")]
    InvalidModulus(i64),

    #[error("theta spec {0} has no convergent expansion (exponents must satisfy r+s >= 1)")]
    DivergentSpec(String),

    #[error("theta spec {0} has no tabulated product form")]
    NoProductForm(String),

    #[error("parse error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("ell = {ell} and mu = {mu} are not coprime")]
    NotCoprime { ell: u64, mu: u64 },

    #[error("invalid constraint: ell = {ell}, mu = {mu} (both must be at least 2)")]
    InvalidConstraint { ell: u64, mu: u64 },

    #[error("invalid claim: {0}")]
    InvalidClaim(String),

    #[error("truncation order {order} is too small (need more than {needed})")]
    TruncationTooSmall { order: usize, needed: usize },

    #[error("forms do not share modulus {expected} (found {found})")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("mod-8 route does not apply: {0}")]
    Mod8Inapplicable(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            message: message.into(),
        }
    }
}
