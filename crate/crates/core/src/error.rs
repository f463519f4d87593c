use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Supplies and demands do not balance.
    #[error("unbalanced problem: total supply {supply} vs total demand {demand}")]
    Unbalanced { supply: f64, demand: f64 },

    #[error("value {value} of entry {index} is outside its bounds")]
    OutOfBounds { index: usize, value: f64 },

    #[error("basis matrix is singular; repair the basis before pricing")]
    SingularBasis,

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("problem is unbounded")]
    Unbounded,

    #[error("iteration limit reached after {0} iterations")]
    IterationLimit(usize),

    #[error("push phase did not finish within {0} loop updates; marginals are corrupted")]
    PushStalled(usize),

    /// The perturbation error bound failed. This indicates a bug, not bad input.
    #[error("error bound violated: {lhs} > {rhs}")]
    BoundViolation { lhs: f64, rhs: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
