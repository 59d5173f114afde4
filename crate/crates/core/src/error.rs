//! Shared error type for the symbolic pipeline.

use thiserror::Error;

/// Positioned syntax error produced by the `.ode` parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("denominator vanished at the evaluation point")]
    EvalDenominatorZero,
    #[error("budget exceeded during {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(ParseError),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("all rank trials hit a denominator zero; enlarge the sampling box")]
    DegeneratePoint,
    #[error("certified minor has zero symbolic determinant; rerun rank with new randomness")]
    MinorVanishes,
    #[error("specialization trial list exhausted without satisfying the inequation")]
    NoSolutionFound,
    #[error("specialization system is inconsistent (unit ideal); upstream bug")]
    InconsistentSystem,
    #[error("denominator of the model vanished under the specialization; upstream bug")]
    DenominatorVanishes,
    #[error("observability condition does not hold; no state transformation is guaranteed")]
    PreconditionObservability,
    #[error("transform system is not zero-dimensional; rank certificate is suspect")]
    NonZeroDimensional,
    #[error("no sparse linear ansatz produced a consistent reduced model")]
    AnsatzFailed,
    #[error("trajectory hit a right-hand-side denominator zero at t = {0}")]
    DenominatorHit(f64),
    #[error("trajectory diverged (non-finite value) at t = {0}")]
    NonFinite(f64),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
