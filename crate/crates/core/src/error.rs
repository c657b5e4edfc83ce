use thiserror::Error;

use crate::fitting::FitResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error("objective is not finite at the initial point")]
    NonFiniteObjective,

    #[error("invalid simplex configuration: {0}")]
    SimplexConfig(&'static str),

    #[error("degenerate configuration: the k formula has denominator {denominator:e}")]
    DegenerateRatio { denominator: f64 },

    #[error("k = {raw} falls outside [0, 1]; the tail ratio is inconsistent with the Gini index under this functional form")]
    KOutOfBounds { raw: f64 },

    #[error("R-squared is undefined when the actual shares are constant")]
    UndefinedRSquared,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("expected 10 decile shares, got {0}")]
    DecileCount(usize),

    #[error("share {index} = {value} is negative or not finite")]
    BadShare { index: usize, value: f64 },

    #[error("decile shares sum to {total}, expected 1")]
    ShareSum { total: f64 },

    #[error("invalid Lorenz points: {0}")]
    InvalidPoints(String),

    #[error("need at least {needed} points to fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("optimizer did not converge from any of {starts} starts (best sse {best_sse:e})")]
    NonConvergence {
        starts: usize,
        best_sse: f64,
        best: Box<FitResult>,
    },

    #[error("no start produced a finite objective")]
    NoFit,

    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: u64,
        column: String,
        message: String,
    },

    #[error("row {row}: {message}")]
    Validation { row: u64, message: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
