use crate::numkernel::C64;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{routine} did not converge after {iterations} iterations (matrix hash {hash:016x})")]
    NoConvergence {
        routine: &'static str,
        hash: u64,
        iterations: usize,
    },

    #[error("eigenvalue {eigenvalue} lies on the branch cut (-inf, 0]")]
    SpectrumOnCut { eigenvalue: C64 },

    #[error("matrix function evaluation failed: {detail}")]
    IllConditioned { detail: String },

    #[error("matrix is numerically singular (condition estimate {cond:e})")]
    NearSingular { cond: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not accretive: smallest eigenvalue of the real part is {min_eig:e}")]
    NotAccretive { min_eig: f64 },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("Choi matrix is not positive semidefinite (smallest eigenvalue {min_eig:e})")]
    ChoiNotPsd { min_eig: f64 },

    #[error("hypotheses could not be met after {attempts} attempts: {detail}")]
    HypothesisUnsatisfiable { attempts: usize, detail: String },

    #[error("trial {seed:#x}: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
