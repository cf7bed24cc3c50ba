//! Tor of the trivial module over an augmented diagram algebra, the maps
//! induced on it by the quotient onto the group algebra, and the
//! group-homology oracles those maps are measured against.
//!
//! Two independent computation routes are provided. The reduced bar complex
//! works tuple by tuple in the augmentation ideal; it is completely general
//! but grows geometrically with the degree. The free-resolution engine
//! builds much smaller complexes whose exactness is certified stage by
//! stage over the integers. Wherever both routes run they must agree, and
//! both the library and the test suite exploit that as a cross-check.

mod augideal;
mod bar;
mod compare;
mod grouphom;
mod minres;
mod resolution;
mod stream;
mod verdict;

pub use augideal::{quotient_aug_images, AugBasis, AugProducts};
pub use bar::{tor_bar, BarComplex};
pub use compare::{
    induced_tor_map, ClaimedRange, InducedDegree, InducedMapReport, MapRoute, MatrixData,
};
pub use grouphom::{cyclic_closed_form, group_homology_cyclic, group_homology_symmetric};
pub use minres::minimal_resolution_betti;
pub use resolution::{
    build_resolution, lift_over_quotient, tor_resolution, FreeResolution, ResolutionLift,
};
pub use verdict::{verify_theorem, TheoremId, Verdict, VerdictCheck};

use serde::Serialize;

use crate::algebra::{AlgebraError, AlgebraId};
use crate::budget::BudgetError;
use crate::covers::CoverError;
use crate::exactla::{CoefficientRing, HomologyGroup, LinAlgError, RingKind};
use crate::mv::MvError;

#[derive(Debug, thiserror::Error)]
pub enum TorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Mv(#[from] MvError),
    #[error("delta = {delta} raised to {loops} loops overflows 64-bit coefficients")]
    CoefficientOverflow { delta: i64, loops: u8 },
    #[error("{what} requires a field ring, got {ring}")]
    FieldRequired { what: &'static str, ring: String },
    #[error("no quotient map from {from} onto {onto}")]
    NoQuotient { from: AlgebraId, onto: AlgebraId },
    #[error("certification failed at stage {stage}: {detail}")]
    Certification { stage: usize, detail: String },
    #[error("unknown theorem {0:?}; expected partition, jones, or jones-sroka")]
    UnknownTheorem(String),
}

/// How a Tor computation was carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorMethod {
    Bar,
    MinimalResolution,
}

impl std::fmt::Display for TorMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TorMethod::Bar => write!(f, "bar"),
            TorMethod::MinimalResolution => write!(f, "minimal_resolution"),
        }
    }
}

/// Tor groups of the trivial module in degrees 0..=q_max.
#[derive(Debug, Clone, Serialize)]
pub struct TorReport {
    pub algebra: AlgebraId,
    pub ring: String,
    pub delta: i64,
    pub q_max: u8,
    pub groups: Vec<HomologyGroup>,
    pub method: TorMethod,
}

impl TorReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Computes Tor by the requested method. The bar method streams tensor
/// tuples and works over any ring; the minimal-resolution method reads the
/// answer off a certified free resolution, going through Betti numbers over
/// a field and through the collapsed integral complex otherwise.
pub fn tor_report(
    algebra: &crate::algebra::Algebra,
    ring: &CoefficientRing,
    q_max: u8,
    method: TorMethod,
    budget: &crate::budget::Budget,
) -> Result<TorReport, TorError> {
    match method {
        TorMethod::Bar => tor_bar(algebra, ring, q_max, budget),
        TorMethod::MinimalResolution => match ring.kind {
            RingKind::PrimeField(_) => {
                let betti = minimal_resolution_betti(algebra, ring, q_max, budget)?;
                Ok(TorReport {
                    algebra: algebra.id(),
                    ring: ring.kind.to_string(),
                    delta: ring.delta,
                    q_max,
                    groups: betti.into_iter().map(HomologyGroup::free).collect(),
                    method: TorMethod::MinimalResolution,
                })
            }
            _ => tor_resolution(algebra, ring, q_max, budget),
        },
    }
}
