use thiserror::Error;

/// Errors across the whole library. `exit_code` groups them the way the CLI
/// reports them: 1 for bad input, 2 for a mathematical inconsistency or
/// resource blow-up detected mid-computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("point set is not full-dimensional")]
    NotFullDimensional,
    #[error("polytope is not reflexive: {0}")]
    NotReflexive(String),
    #[error("polytope is not terminal: {0}")]
    NotTerminal(String),
    #[error("basis rows are linearly dependent")]
    DependentRows,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("ambient lattice is degenerate")]
    DegenerateAmbient,
    #[error("lattice does not embed: {0}")]
    NotEmbeddable(String),
    #[error("anticanonical degree must be even and positive, got {0}")]
    OddDegree(i64),

    #[error("computation overflow: {0}")]
    ComputationOverflow(String),
    #[error("dual lattice is not integral: {0}")]
    NonIntegralDual(String),
    #[error("no unimodular even negative-definite rank-8 subset found: {0}")]
    NoE8Found(String),
    #[error("Riemann-Roch value is not an integer: {0}")]
    NonIntegralChi(String),
    #[error("negative defect from inconsistent smoothing data: {0}")]
    NegativeDefect(i64),
    #[error("negative third Betti number from inconsistent data: {0}")]
    NegativeBetti(i64),
    #[error("second Chern class data inconsistent: {0}")]
    InconsistentC2(String),
    #[error("rank accounting violated: {0}")]
    RankNullityViolation(String),
    #[error("fan is not smooth: {0}")]
    NotSmooth(String),
}

impl Error {
    /// CLI exit code: 1 = input/schema error, 2 = mathematical inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MalformedInput(_)
            | Error::NotFullDimensional
            | Error::NotReflexive(_)
            | Error::NotTerminal(_)
            | Error::DependentRows
            | Error::RankMismatch(_, _)
            | Error::DegenerateAmbient
            | Error::NotEmbeddable(_)
            | Error::OddDegree(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
