use alloc::string::String;

/// Failures of the kernel operations.
///
/// Structural verdicts (model validation, homotopy checks, certificate replay)
/// have their own violation types; this enum covers misuse of an operation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown generator id {0}")]
    UnknownGenerator(usize),
    #[error("degree {degree} exceeds truncation degree {truncation}")]
    DegreeOutOfRange { degree: u32, truncation: u32 },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected a polynomial of degree {expected}, found degree {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("element is not a cycle")]
    NotACycle,
    #[error("variable {0} has degree zero and cannot enter a graded basis")]
    DegreeZeroVariable(String),
    #[error("linear system too large: {size} unknowns (limit {limit})")]
    TooLarge { size: usize, limit: usize },
    #[error("invalid change of generators: {0}")]
    ShapeViolation(String),
    #[error("conjugated structure failed revalidation: {0}")]
    Revalidation(String),
    #[error("fibre generators must be listed in non-decreasing degree ({0} breaks the order)")]
    DegreeOrder(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
