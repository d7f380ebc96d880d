use thiserror::Error;

/// Errors raised while building, validating or computing with models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error(
        "generator `{name}` has degree {degree}; models must be simply connected (degree >= 2)"
    )]
    NotSimplyConnected { name: String, degree: u32 },
    #[error("differential of `{name}` has degree {found}, expected {expected}")]
    DegreeMismatch {
        name: String,
        expected: u32,
        found: String,
    },
    #[error("differential does not square to zero on `{0}`")]
    NotClosed(String),
    #[error("fiber projection of the total differential does not square to zero on `{0}`")]
    BaseDiffViolated(String),
    #[error("total differential of `{name}` projects to `{projected}` but the fiber declares `{declared}`")]
    ProjectionMismatch {
        name: String,
        projected: String,
        declared: String,
    },
    #[error("elements belong to different generator sets")]
    GeneratorSetMismatch,
    #[error("degree {needed} exceeds the validity bound {bound} of the presentation")]
    BoundExceeded { needed: u32, bound: u32 },
    #[error("operation requires a homogeneous element")]
    NotHomogeneous,
    #[error("matrices do not form a complex (d_out * d_in != 0)")]
    NotAComplex,
    #[error("matrix dimensions do not agree: {0}")]
    DimensionMismatch(String),
    #[error("subspaces live in different ambient frames")]
    AmbientMismatch,
    #[error("base generator `{0}` does not have degree 2")]
    BaseNotDegreeTwo(String),
    #[error("catalog entry `{0}` has a different fiber")]
    FiberMismatch(String),
    #[error("total space not finite at bound for: {}", .0.join(", "))]
    NotFiniteAtBound(Vec<String>),
    #[error("enumeration would visit {count} candidates (cap {cap})")]
    CombinatorialBlowup { count: u128, cap: u128 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Parse and model-validation failures, as opposed to failures of a
    /// computation on a valid model.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownGenerator(_)
                | Error::DuplicateGenerator(_)
                | Error::NotSimplyConnected { .. }
                | Error::DegreeMismatch { .. }
                | Error::NotClosed(_)
                | Error::BaseDiffViolated(_)
                | Error::ProjectionMismatch { .. }
                | Error::NotHomogeneous
                | Error::BaseNotDegreeTwo(_)
                | Error::FiberMismatch(_)
                | Error::Input(_)
        )
    }
}
