use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    /// The MGF diverges at `s`.
    #[error("MGF argument {s} outside domain (must be below {s_max})")]
    Domain { s: f64, s_max: f64 },

    #[error("derivative order {order} exceeds the cap of {max}")]
    OrderTooHigh { order: usize, max: usize },

    #[error("value with natural log {ln_abs} is not representable as f64")]
    Overflow { ln_abs: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),

    #[error("series evaluated at different points ({0} vs {1})")]
    EvaluationPointMismatch(f64, f64),

    #[error("series has {len} terms, {needed} required")]
    SeriesTooShort { len: usize, needed: usize },

    #[error("product of zero factors")]
    EmptyProduct,

    #[error("conditioning event hit {hits} times, at least {required} required")]
    InsufficientConditioning { hits: u64, required: u64 },

    #[error("transmission threshold leaves no probability mass (F(mu) = {cdf})")]
    DegenerateThreshold { cdf: f64 },
}
