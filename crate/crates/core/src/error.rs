use thiserror::Error;

use crate::scalar::{Field, ScalarError};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),

    #[error("index ({row}, {col}) out of range for {n}x{n} matrices (indices are 1-based)")]
    IndexOutOfRange { n: usize, row: usize, col: usize },

    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },

    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid ladder: {0}")]
    InvalidLadder(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("operation requires a one-step ladder, got {0} steps")]
    NotOneStep(usize),

    #[error("operation requires a non-abelian one-step ladder")]
    AbelianProfile,

    #[error("basis element {0} is not an elementary matrix")]
    NonElementaryBasis(usize),

    #[error("duplicate basis element at ({0}, {1})")]
    DuplicateBasis(usize, usize),

    #[error("matrix has an entry at ({row}, {col}), outside the algebra")]
    NotInAlgebra { row: usize, col: usize },

    #[error("rank-one tensor has a zero factor")]
    ZeroFactor,

    #[error("product of basis elements {0} and {1} leaves the algebra")]
    NotClosed(usize, usize),

    #[error("multiplication map is not identically zero (rank {0})")]
    NotAbelian(usize),

    #[error("kernel membership routes disagree for tensor {0}")]
    RouteDisagreement(String),

    #[error("rank-one search exhausted its budget of {budget} candidates at rank {rank} of {kernel_dim}")]
    SearchExhausted {
        budget: usize,
        rank: usize,
        kernel_dim: usize,
    },

    #[error("family {label} produced {found} tensors, expected {expected}")]
    FamilyCount {
        label: String,
        expected: usize,
        found: usize,
    },

    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),

    #[error("unsupported certificate format version {0}")]
    UnsupportedVersion(u64),

    #[error("refusing to write a certificate that did not verify")]
    UnverifiedWrite,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
