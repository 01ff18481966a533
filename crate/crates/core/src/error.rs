use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("moment c_{k} of functional {functional} is unavailable")]
    MomentUnavailable { functional: usize, k: i64 },

    #[error("index {0} lies outside the admissible cone (some n_j + m_j < 0)")]
    InvalidIndex(String),

    #[error("index {0} is not normal")]
    NotNormal(String),

    #[error("coefficient requires two distinct directions, got k = l = {0}")]
    IndexClash(usize),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("functional is not symmetric (c_{k} != c_-{k})")]
    NotSymmetric { k: i64 },

    #[error("evaluation point must be nonzero")]
    SingularEvaluation,

    #[error("series depth {depth} cannot decide the order window: {detail}")]
    DepthInsufficient { depth: usize, detail: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("functional is not quasi-definite at degree {0}")]
    QuasiDefiniteViolated(usize),
}

impl Error {
    /// Errors that signal an unmet normality/admissibility prerequisite rather
    /// than a malformed request. Verification turns these into skips.
    pub fn is_prerequisite(&self) -> bool {
        matches!(
            self,
            Error::NotNormal(_) | Error::InvalidIndex(_) | Error::DivisionByZero(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
