use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid branch decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("sides of the cut overlap at vertex {0}")]
    OverlappingSides(usize),
    #[error("edge ({0}, {1}) does not go from the first side to the second")]
    DirectionViolation(usize, usize),
    #[error("representation is not reflexive: vertex {0} has S ∩ T = ∅")]
    NotReflexive(usize),
    #[error("representation is not adjusted: vertex {0}")]
    NotAdjusted(usize),
    #[error("H-convex representation is not nice: vertex {0} has no bi-directed edge")]
    NotNice(usize),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("problem `{problem}` needs parameter `{param}`")]
    MissingParameter { problem: String, param: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
