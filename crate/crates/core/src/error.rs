use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid simplex point: {0}")]
    InvalidPoint(String),

    #[error("subsimplex {category} has zero volume (theta_k = 0)")]
    DegenerateSubsimplex { category: usize },

    #[error("observation {observation} in category {category} has u_k = 0")]
    DegenerateRatio { observation: usize, category: usize },

    #[error("negative cycle {cycle:?} with value {value:e}")]
    NegativeCycle { cycle: Vec<usize>, value: f64 },

    #[error("problem size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },

    #[error("feasible set is empty")]
    EmptySet,

    #[error("category {0} is not empty and cannot be removed")]
    InvalidRemoval(usize),

    #[error("degenerate initial point: {0}")]
    DegenerateInit(String),

    #[error("no samples to summarise")]
    NoSamples,

    #[error("starvation: {retained} of {attempts} draws retained")]
    Starvation { retained: usize, attempts: usize },

    #[error("all particle weights are zero")]
    DegenerateWeights,

    #[error("contingency table has a zero margin")]
    ZeroMargin,

    #[error("{unmet} of {total} coupled chains did not meet within {max_iterations} iterations")]
    UnmetChains {
        unmet: usize,
        total: usize,
        max_iterations: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    /// True for errors caused by bad user input, as opposed to numerical failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidDimension(_)
                | Error::InvalidPoint(_)
                | Error::InvalidRemoval(_)
                | Error::DegenerateInit(_)
                | Error::TooLarge { .. }
                | Error::ZeroMargin
                | Error::InvalidArgument(_)
                | Error::Parse { .. }
        )
    }
}
