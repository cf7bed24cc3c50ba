//! Exact linear algebra over Z, Q, F_p and Z/m.
//!
//! Everything here is exact: integer work uses sparse columns with
//! per-column promotion to arbitrary precision, field work uses modular
//! arithmetic, and Z/m homology is derived from integral invariant factors.

pub mod fp;
pub mod homology;
pub mod induced;
pub mod lattice;
pub mod ring;
pub mod snf;
pub mod sparse;

pub use homology::{chain_homology, rank_kernel, HomologyGroup};
pub use induced::{homology_induced_map, InducedMap, MapClass};
pub use ring::{CoefficientRing, RingError, RingKind};
pub use snf::{smith_normal_form, SmithNormalForm};
pub use sparse::{read_triplets, write_triplets, SparseMatrix, SparseVec};

#[derive(Debug, thiserror::Error)]
pub enum LinAlgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a chain complex: {0}")]
    NotAComplex(String),
    #[error("chain map does not commute with the differentials: {0}")]
    NonCommuting(String),
    #[error("ring {0} is not a field")]
    NotAField(String),
    #[error("residual core is too large for dense reduction: {rows}x{cols}")]
    CoreTooLarge { rows: usize, cols: usize },
    #[error("matrix too large for transform-carrying normal form: {rows}x{cols}")]
    TransformTooLarge { rows: usize, cols: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
