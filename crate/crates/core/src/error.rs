use thiserror::Error;

/// Errors raised by the engine.
///
/// "Not represented" is never an error: searches return `Ok(None)` for a
/// proven non-representation and reserve [`Error::BudgetExhausted`] for an
/// inconclusive search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("order m must be at least 3, got {0}")]
    InvalidOrder(u64),
    #[error("a form needs at least one coefficient")]
    EmptyForm,
    #[error("coefficients must be positive")]
    ZeroCoefficient,
    #[error("coefficients must be nondecreasing: {next} follows {prev}")]
    Unsorted { prev: u64, next: u64 },
    #[error("witness evaluates to {actual}, expected {expected}")]
    WitnessMismatch { expected: u64, actual: u64 },
    #[error("witness has {got} entries but the form has {expected} coefficients")]
    WitnessLength { expected: usize, got: usize },
    #[error("target {target} exceeds the configured cap {cap}")]
    TargetTooLarge { target: u64, cap: u64 },
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("invalid range: lo {lo} > hi {hi}")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("budgets and bounds must be positive")]
    NonPositiveBudget,
    #[error("{0:?} is not an escalator prefix")]
    NotEscalator(Vec<u64>),
    #[error("inadmissible order: m - 4 = {bound} does not exceed the prefix sum {sum}")]
    Inadmissible { bound: i64, sum: u64 },
    #[error("no completion of {prefix:?} sums to {target}: {reason}")]
    InfeasibleCompletion {
        prefix: Vec<u64>,
        target: i64,
        reason: String,
    },
    #[error("coordinate sum {0} is odd")]
    OddCoordinateSum(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
