//! Diagram algebras and the group algebras they retract onto, as
//! computational objects: canonical bases, bilinear multiplication with loop
//! powers of delta, augmentation, quotient maps, and cached multiplication
//! tables.

mod context;
mod element;
mod table;

pub use context::{Algebra, AlgebraFamily, AlgebraId};
pub use element::{normalize_coeff, AlgebraElement};
pub use table::{
    basis_digest, cache_file_name, load_table_bytes, read_table_cache, write_table_cache,
    CacheError, MultiplicationTable, RawTable,
};

use crate::budget::BudgetError;
use crate::diagrams::DiagramError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebras: {0} vs {1}")]
    AlgebraMismatch(AlgebraId, AlgebraId),
    #[error("basis index {index} out of range for {algebra} (dimension {dim})")]
    IndexOutOfRange { algebra: AlgebraId, index: u32, dim: usize },
    #[error("{0} has no enumerable basis at this size")]
    TooLarge(AlgebraId),
    #[error("coefficient {0} is not integral")]
    NotIntegral(String),
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: u64 },
    #[error("no quotient target for {0}")]
    NoQuotient(AlgebraId),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
}
