use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate degree sequence: {0}")]
    DegenerateSequence(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible shift: P(X=0)={p0} is smaller than the required shift {delta}")]
    InfeasibleShift { p0: f64, delta: f64 },

    #[error("infeasible surgery: need {needed} vertices of degree 1, found {available}")]
    InfeasibleSurgery { needed: u64, available: u64 },

    #[error("odd number of half-edges ({0})")]
    Parity(u64),

    #[error("degenerate offspring law: P(X=1)=1, every point is a fixed point")]
    DegenerateOffspring,

    #[error("offspring law inconsistent: {0}")]
    Inconsistent(String),

    #[error("no simple graph after {attempts} attempts")]
    RejectionFailure { attempts: u32 },

    #[error("corrupt exploration trace: {0}")]
    CorruptTrace(String),

    #[error("division by a degenerate quantity: {0}")]
    DivisionDegenerate(String),

    #[error("numerical instability: {form_a} vs {form_b}")]
    NumericalInstability { form_a: f64, form_b: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("at n={n}, replicate {replicate}: {source}")]
    Replicate {
        n: u64,
        replicate: u32,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
