use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not contractive: contraction factor {0} >= 1")]
    NotContractive(f64),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("labelling inconsistent: {0}")]
    LabellingInconsistent(String),

    #[error("degenerate interpolation: {0}")]
    DegenerateInterpolation(String),

    #[error("point outside the domain: {0:?}")]
    OutOfDomain(Vec<f64>),

    #[error("not crystallographic: pairing {0} is not an integer")]
    NotCrystallographic(f64),

    #[error("vector is not generic: orthogonal to root {0:?}")]
    NonGenericVector(Vec<f64>),

    #[error("group did not close within {0} elements")]
    NotClosedWithinCap(usize),

    #[error("fold did not terminate within {0} reflections")]
    FoldDiverged(usize),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("rank deficient Gram matrix at column {0}")]
    RankDeficient(usize),

    #[error("search exhausted: {0}")]
    Inconclusive(String),

    #[error("construction stalled after {rounds} rounds with defect {defect}")]
    ConstructionStalled { rounds: usize, defect: f64 },

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("json: {e}"))
    }
}
