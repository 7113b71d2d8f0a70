use thiserror::Error;

/// Failure categories shared by every module.
///
/// The CLI maps these onto exit codes: usage-type errors (domain, range,
/// parse, unsupported) exit with 1, numeric failures with 2 and budget
/// violations with 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("invalid model spec `{0}`: expected zeta, zeta^<m>, dedekind:<d> or rs-delta:<N>")]
    ModelSpec(String),

    #[error("unsupported model `{model}`: {reason}")]
    UnsupportedModel { model: String, reason: String },

    #[error("numeric degeneracy: local factor modulus {modulus:e} below 1e-15 at p={p}{}", at.map(|t| format!(", t={t}")).unwrap_or_default())]
    Degenerate { p: u64, modulus: f64, at: Option<f64> },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("resource budget exceeded: {param}={value} (limit {limit})")]
    Resource {
        param: &'static str,
        value: String,
        limit: String,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(param: &'static str, value: impl ToString, limit: impl ToString) -> Self {
        Error::Resource {
            param,
            value: value.to_string(),
            limit: limit.to_string(),
        }
    }

    /// Short machine-readable category name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range(_) => "range",
            Error::ModelSpec(_) => "model-spec",
            Error::UnsupportedModel { .. } => "unsupported-model",
            Error::Degenerate { .. } => "degenerate",
            Error::NumericFailure(_) => "numeric",
            Error::Invariant(_) => "invariant",
            Error::Resource { .. } => "resource",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
