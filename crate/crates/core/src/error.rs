use thiserror::Error;

/// Errors raised anywhere in the toolkit.
///
/// Every variant maps to a stable machine-readable code through
/// [`Error::code`], which the command-line front end copies into reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("degree budget exceeded: {0}")]
    DegreeBudgetExceeded(String),

    #[error("time budget exceeded")]
    TimeBudgetExceeded,

    #[error("Hilbert function did not stabilize below m = {0}")]
    NotStabilized(u32),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no valid generic combination after {0} attempts")]
    RetriesExhausted(usize),

    #[error("decomposition incomplete: {0}")]
    DecompositionIncomplete(String),

    #[error("no bisecting hyperplane found: {0}")]
    HamSandwichNotFound(String),

    #[error("round budget exceeded: {needed} rounds needed, budget {budget}")]
    RoundBudgetExceeded { needed: usize, budget: usize },

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("genericity resampling budget exhausted: {0}")]
    GenericityExhausted(String),

    #[error("no point oracle available for {0}")]
    MissingPointOracle(String),

    #[error("not found within degree budget: {0}")]
    NotFound(String),

    #[error("recursion budget exceeded at depth {0}")]
    RecursionBudgetExceeded(usize),

    #[error("fixture failure: {0}")]
    FixtureFailure(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse { .. } => "parse_error",
            Error::DegreeBudgetExceeded(_) => "degree_budget_exceeded",
            Error::TimeBudgetExceeded => "time_budget_exceeded",
            Error::NotStabilized(_) => "not_stabilized",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::RetriesExhausted(_) => "retries_exhausted",
            Error::DecompositionIncomplete(_) => "decomposition_incomplete",
            Error::HamSandwichNotFound(_) => "ham_sandwich_not_found",
            Error::RoundBudgetExceeded { .. } => "round_budget_exceeded",
            Error::BudgetExceeded(_) => "budget_exceeded",
            Error::DomainError(_) => "domain_error",
            Error::GenericityExhausted(_) => "genericity_exhausted",
            Error::MissingPointOracle(_) => "missing_point_oracle",
            Error::NotFound(_) => "not_found",
            Error::RecursionBudgetExceeded(_) => "recursion_budget_exceeded",
            Error::FixtureFailure(_) => "fixture_failure",
        }
    }

    /// Budget, time and decomposition failures leave partial results that are
    /// still worth reporting; everything else is an input problem.
    pub fn is_budget_like(&self) -> bool {
        matches!(
            self,
            Error::DegreeBudgetExceeded(_)
                | Error::TimeBudgetExceeded
                | Error::NotStabilized(_)
                | Error::RetriesExhausted(_)
                | Error::DecompositionIncomplete(_)
                | Error::HamSandwichNotFound(_)
                | Error::RoundBudgetExceeded { .. }
                | Error::BudgetExceeded(_)
                | Error::GenericityExhausted(_)
                | Error::NotFound(_)
                | Error::RecursionBudgetExceeded(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
