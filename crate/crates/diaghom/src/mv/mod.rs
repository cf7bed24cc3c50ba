//! The Mayer-Vietoris complex of an ideal cover.
//!
//! An idempotent cover of the lower ideal (see [`crate::covers`]) glues into
//! an augmented chain complex over the integers: degree `p` is the direct sum
//! of the intersections of every `p`-element subfamily of cover ideals,
//! degree 0 is the whole algebra, and the complex is augmented by the
//! projection onto the group-algebra quotient. The differentials are signed
//! sums of inclusion maps, so every matrix entry is 0 or +-1 and the same
//! integral matrices specialize to any coefficient ring.
//!
//! The complex splits as a direct sum over basis diagrams: the copies of one
//! diagram across all degrees form the augmented chain complex of a simplex,
//! which is exact. [`simplex_decomposition_check`] certifies that splitting
//! column by column and [`check_acyclic`] confirms the global statement by
//! integral Smith normal form.

mod checks;
mod complex;
mod export;

use crate::budget::BudgetError;
use crate::covers::CoverError;
use crate::exactla::LinAlgError;

pub use checks::{check_acyclic, simplex_decomposition_check, AcyclicReport, SimplexReport};
pub use complex::{build_mv, sign_count, MvComplex, MvSummand};
pub use export::{export_complex, ExportManifest};

#[derive(Debug, thiserror::Error)]
pub enum MvError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("complex was truncated at degree {built}, but this operation needs all {width} degrees")]
    Truncated { built: u8, width: u8 },
    #[error("homology at complex degree {degree} is {group}, expected zero")]
    NotAcyclic { degree: usize, group: String },
    #[error("summand decomposition violated: {0}")]
    BadDecomposition(String),
    #[error("writing complex to disk: {0}")]
    Io(#[from] std::io::Error),
    #[error("serializing manifest: {0}")]
    Serialize(#[from] serde_json::Error),
}
