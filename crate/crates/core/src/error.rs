use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not skew-symmetric")]
    NotSkew,

    #[error("Pfaffian of a matrix of odd order {0}")]
    OddOrder(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("pencil has rank 0")]
    DegeneratePencil,

    #[error("B is degenerate; operation needs an invertible second form")]
    SingularB,

    #[error("subspace is not admissible")]
    NotAdmissible,

    #[error("subspace is not bi-isotropic")]
    NotBiIsotropic,

    #[error("subspace is not invariant under the recursion operator")]
    NotInvariant,

    #[error("core subspace is not contained in the reducing subspace")]
    CoreNotContained,

    #[error("inconsistent invariants: {0}")]
    InconsistentInvariants(String),

    #[error("internal consistency violation: {0}")]
    Consistency(String),

    #[error("unsupported spectrum: {0}")]
    UnsupportedSpectrum(String),

    #[error("function is not a common Casimir: {0}")]
    NotCasimir(String),

    #[error("family has {found} functions, completeness needs {expected}")]
    CountMismatch { expected: usize, found: usize },

    #[error("Jacobian of the family is rank deficient at every sample point")]
    Dependent,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integration produced a non-finite state at step {step}")]
    NonFinite { step: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
