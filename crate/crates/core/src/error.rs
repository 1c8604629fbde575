use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("infeasible request: {0}")]
    Infeasible(String),

    #[error("park violation on link {link}: score would reach {score}")]
    ParkViolation { link: String, score: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A proven guarantee did not hold at runtime. Always an implementation bug.
    #[error("lemma violation: {0}")]
    LemmaViolation(String),

    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("simulation fault: {0}")]
    SimulationFault(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure_lemma {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::Error::LemmaViolation(format!($($arg)*)));
        }
    };
}
pub(crate) use ensure_lemma;
