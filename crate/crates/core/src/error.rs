use thiserror::Error;

/// Errors raised by lattice, group and realization computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("Gram matrix is not symmetric at ({row}, {col})")]
    NonSymmetric { row: usize, col: usize },
    #[error("entry {value} at ({row}, {col}) is not an integer")]
    NonIntegral { row: usize, col: usize, value: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error("lattice is degenerate (determinant 0)")]
    Degenerate,
    #[error("basis rows are linearly dependent")]
    NotASublattice,
    #[error("lattice is not negative definite (signature {p}, {q}, {r})")]
    NotNegativeDefinite { p: usize, q: usize, r: usize },
    #[error("target norm must be negative, got {0}")]
    NonNegativeTarget(i64),
    #[error("enumeration exceeded the node budget of {budget}")]
    EnumerationBudgetExceeded { budget: u64 },
    #[error("computation cancelled")]
    Cancelled,
    #[error("matrix does not preserve the form")]
    NotOrthogonal,
    #[error("matrix determinant is {0}, not +-1")]
    NotUnimodular(String),
    #[error("group closure exceeded the order cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("no exponent d <= {cap} with g^d = 1")]
    NotFiniteOrder { cap: usize },
    #[error("generators act on different lattices")]
    MixedLattices,
    #[error("restricted Gram entry {value} is not divisible by {d}")]
    NotDivisible { value: String, d: i64 },
    #[error("transfer composite differs from d*I in column {column}")]
    TransferMismatch { column: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("lattice signature ({p}, {q}, {r}) is not of the form (3, q, 0)")]
    BadSignature { p: usize, q: usize, r: usize },
    #[error("no invariant positive 3-plane found within the iteration budget")]
    NoInvariantPlaneFound,
    #[error("plane is not invariant under the group")]
    PlaneNotInvariant,
    #[error("vector has norm {0}, expected -2")]
    WrongNorm(String),
    #[error("group elements share no common fixed line in the plane")]
    NoCommonLine,
    #[error("vector has norm {0}, expected 1")]
    NotUnitNorm(String),
    #[error("vector does not lie in the plane")]
    NotInPlane,
    #[error("rotation is the identity; invariant line is not unique")]
    IdentityInput,
    #[error("matrix is not a rotation of the given form")]
    NotSpecialOrthogonal,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("integer overflow in small-integer fast path")]
    Overflow,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
