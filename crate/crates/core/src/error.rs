use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid word {word:?}: {reason}")]
    InvalidWord { word: String, reason: String },
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("invalid generating set: {0}")]
    InvalidGeneratingSet(String),
    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("metric is not the standard basis word metric")]
    NotABasis,
    #[error("threshold {n} must exceed alpha_rg + 1 = {min}")]
    ThresholdTooSmall { n: f64, min: f64 },
    #[error("need at least {need} annuli, census has {have}")]
    InsufficientAnnuli { need: usize, have: usize },
    #[error("census is empty")]
    EmptyCensus,
    #[error("no rows pass the filter")]
    EmptyFilter,
    #[error("equality filter needs exact translation lengths")]
    RequiresExactLengths,
    #[error("grid too coarse: maximum gap sits at the grid boundary")]
    GridTooCoarse,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
