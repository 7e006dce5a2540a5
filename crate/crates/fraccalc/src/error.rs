//! Error type shared by all modules.

/// Library-wide error enum. Variants map onto the failure modes the
/// operations distinguish: domain violations of special functions, divergent
/// truncation tails, violated method hypotheses, incompatible operator
/// spaces, and inversion of a series with vanishing constant term.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent tail: {0}")]
    DivergentTail(String),

    /// A mathematical hypothesis of the requested method does not hold for
    /// the supplied data. The message names the violated condition.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("operator/vector space mismatch: {0}")]
    SpaceMismatch(String),

    #[error("series inversion requires a nonzero constant term")]
    ZeroConstantTerm,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code class used by the command-line frontend: hypothesis-type
    /// failures exit with 2, anything else is a usage/input error (1).
    pub fn is_hypothesis_class(&self) -> bool {
        matches!(
            self,
            Error::Hypothesis(_) | Error::DivergentTail(_) | Error::Domain(_)
        )
    }
}
