use thiserror::Error;

/// Errors produced anywhere in the certification pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Pauli symbol {symbol:?} at position {position}")]
    InvalidSymbol { symbol: char, position: usize },

    #[error("empty Pauli label")]
    EmptyLabel,

    #[error("dimension 2^{qubits} exceeds the configured limit of {limit} qubits")]
    DimensionTooLarge { qubits: usize, limit: usize },

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwoDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigendecomposition did not converge within {0} sweeps")]
    ConvergenceFailure(usize),

    #[error("extremal Hamiltonian levels are degenerate (gap {0:.3e})")]
    DegenerateExtremalLevels(f64),

    #[error("state kind requires a Hamiltonian")]
    MissingHamiltonian,

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("not a probability distribution: {0}")]
    NotADistribution(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("(x*, z*) = ({0}, {1}) lies outside the Bloch ball")]
    OutsideBlochBall(f64, f64),

    /// `advice_epsilon` is the smallest uniform widening of every tolerance
    /// that makes the set non-empty; it is never applied automatically.
    #[error("feasible set is empty; {}", advice_text(.advice_epsilon))]
    InfeasibleSet { advice_epsilon: Option<f64> },

    #[error("step (ii) solve failed: {0}")]
    StepTwoFailed(String),

    #[error("constraint list does not extend the previous session list")]
    NonNestedConstraints,

    #[error("no grid point lies in the feasible set")]
    EmptyGrid,

    #[error("grid would contain {0} points")]
    GridTooLarge(u128),

    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty input")]
    EmptyInput,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

fn advice_text(advice: &Option<f64>) -> String {
    match advice {
        Some(eps) => format!("widening every epsilon by {eps:.3e} would restore feasibility"),
        None => "no epsilon widening restores feasibility".into(),
    }
}
