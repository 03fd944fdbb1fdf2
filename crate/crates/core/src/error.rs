use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("transform is not symplectic (det = {det})")]
    InvalidTransform { det: f64 },
    #[error("degenerate block: det {block} = {det:e}")]
    DegenerateBlock { block: char, det: f64 },
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("ensemble matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    InvalidTilde { min_eigenvalue: f64 },
    #[error("state is not P-representable: V - I/2 has eigenvalue {min_eigenvalue:e}")]
    NotPRepresentable { min_eigenvalue: f64 },
    #[error("state sits on the P-representation boundary (min eigenvalue {min_eigenvalue:e}); weight is degenerate")]
    BoundaryPRep { min_eigenvalue: f64 },
    #[error("argument out of domain: {0}")]
    OutOfDomain(String),
    #[error("invalid state spec: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}
