//! Idempotent left-ideal covers of the lower two-sided ideal.
//!
//! The quotient of a partition or annular algebra by the span of deficient
//! diagrams (fewer than the maximal number of propagating blocks) is a group
//! algebra. This module builds families of left ideals whose union spans that
//! lower ideal, intersects them, and synthesizes idempotent generators for the
//! nonzero intersections together with machine-checked certificates.
//!
//! Two families are supported:
//! * partition algebras, covered by "detached prime" ideals (the block of a
//!   chosen primed vertex is a singleton) and "joined primes" ideals (two
//!   chosen primed vertices share a block);
//! * annular algebras, covered by "adjacent arc" ideals (a chosen primed
//!   vertex is paired with its cyclic successor).

mod ideals;
mod jones;
mod partition;
mod synth;
mod verify;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, AlgebraId};
use crate::diagrams::DiagramFamily;

pub use ideals::{
    cover_descriptor, cover_ideal, intersect_ideals, lower_ideal, CoverDescriptor, LeftIdealSpan,
};
pub use jones::{build_omega, is_innermost, moral_support, pick_arc_anchor};
pub use partition::{build_mu, build_nu};
pub use synth::{synthesize_idempotent, ConstructionStep, IdempotentCertificate, Synthesis};
pub use verify::{verify_cover, CoverReport, SubsetOutcome, SubsetReport};

#[derive(Debug, thiserror::Error)]
pub enum CoverError {
    #[error("covers are not defined for {0}")]
    UnsupportedFamily(AlgebraId),
    #[error("bad ideal parameters: {0}")]
    BadIdeal(String),
    #[error("subset spec error at byte {pos}: {msg}")]
    SpecParse { pos: usize, msg: String },
    #[error("construction precondition violated: {0}")]
    Precondition(String),
    #[error("certificate verification failed for subset {subset}: {check}")]
    CertificateFailed { subset: String, check: String },
    #[error("intersection routes disagree: {0}")]
    DualRouteMismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// One member of a cover, identified by what its spanning diagrams satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IdealTag {
    /// Partition algebra: the block of vertex `i'` is the singleton `{i'}`.
    DetachedPrime { i: u8 },
    /// Partition algebra: vertices `i'` and `j'` lie in the same block (i < j).
    JoinedPrimes { i: u8, j: u8 },
    /// Annular algebra: vertices `i'` and `(i+1)'` (cyclically) share an edge.
    AdjacentArc { i: u8 },
}

impl fmt::Display for IdealTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IdealTag::DetachedPrime { i } => write!(f, "{i}"),
            IdealTag::JoinedPrimes { i, j } => write!(f, "{i}-{j}"),
            IdealTag::AdjacentArc { i } => write!(f, "{i}"),
        }
    }
}

/// A chosen set of cover ideals to intersect, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum IdealSelector {
    /// Detached-prime indices and joined-prime pairs in a partition algebra.
    Partition { singles: BTreeSet<u8>, pairs: BTreeSet<(u8, u8)> },
    /// Adjacent-arc indices in an annular algebra.
    Jones { arcs: BTreeSet<u8> },
}

impl IdealSelector {
    pub fn tags(&self) -> Vec<IdealTag> {
        match self {
            IdealSelector::Partition { singles, pairs } => singles
                .iter()
                .map(|&i| IdealTag::DetachedPrime { i })
                .chain(pairs.iter().map(|&(i, j)| IdealTag::JoinedPrimes { i, j }))
                .collect(),
            IdealSelector::Jones { arcs } => {
                arcs.iter().map(|&i| IdealTag::AdjacentArc { i }).collect()
            }
        }
    }

    pub fn from_tags(family: DiagramFamily, tags: &[IdealTag]) -> Result<Self, CoverError> {
        let mut sel = match family {
            DiagramFamily::Partition => {
                IdealSelector::Partition { singles: BTreeSet::new(), pairs: BTreeSet::new() }
            }
            DiagramFamily::JonesAnnular => IdealSelector::Jones { arcs: BTreeSet::new() },
            other => {
                return Err(CoverError::BadIdeal(format!("no cover ideals for family {other}")))
            }
        };
        for tag in tags {
            match (&mut sel, *tag) {
                (IdealSelector::Partition { singles, .. }, IdealTag::DetachedPrime { i }) => {
                    singles.insert(i);
                }
                (IdealSelector::Partition { pairs, .. }, IdealTag::JoinedPrimes { i, j }) => {
                    pairs.insert((i, j));
                }
                (IdealSelector::Jones { arcs }, IdealTag::AdjacentArc { i }) => {
                    arcs.insert(i);
                }
                (_, tag) => {
                    return Err(CoverError::BadIdeal(format!(
                        "ideal {tag} does not belong to family {family}"
                    )))
                }
            }
        }
        Ok(sel)
    }

    pub fn is_empty(&self) -> bool {
        match self {
            IdealSelector::Partition { singles, pairs } => singles.is_empty() && pairs.is_empty(),
            IdealSelector::Jones { arcs } => arcs.is_empty(),
        }
    }
}

impl fmt::Display for IdealSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut item = |f: &mut fmt::Formatter<'_>, s: String| -> fmt::Result {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{s}")
        };
        match self {
            IdealSelector::Partition { singles, pairs } => {
                for &i in singles {
                    item(f, format!("{i}"))?;
                }
                for &(i, j) in pairs {
                    item(f, format!("{i}-{j}"))?;
                }
            }
            IdealSelector::Jones { arcs } => {
                for &i in arcs {
                    item(f, format!("{i}"))?;
                }
            }
        }
        Ok(())
    }
}

/// Parses a subset spec such as `1,3` (annular arcs) or `1,2-3` (partition:
/// detached prime 1 intersected with joined primes {2,3}).
///
/// Grammar: comma-separated items; an item is a decimal label in `1..=n`, or
/// for partition algebras a dash-separated pair `i-j` with `i != j` (stored
/// with the smaller label first). Whitespace around items is permitted.
/// Duplicate items are rejected.
pub fn parse_subset_spec(
    family: DiagramFamily,
    n: usize,
    spec: &str,
) -> Result<IdealSelector, CoverError> {
    let mut sel = match family {
        DiagramFamily::Partition => {
            IdealSelector::Partition { singles: BTreeSet::new(), pairs: BTreeSet::new() }
        }
        DiagramFamily::JonesAnnular => IdealSelector::Jones { arcs: BTreeSet::new() },
        other => {
            return Err(CoverError::SpecParse {
                pos: 0,
                msg: format!("no cover ideals for family {other}"),
            })
        }
    };
    let bytes = spec.as_bytes();
    let mut pos = 0usize;

    let read_label = |pos: &mut usize| -> Result<u8, CoverError> {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        let start = *pos;
        let cap = n.min(crate::diagrams::MAX_STRANDS);
        let mut value: usize = 0;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            value = value * 10 + (bytes[*pos] - b'0') as usize;
            if value > cap {
                return Err(CoverError::SpecParse {
                    pos: start,
                    msg: format!("label {value} exceeds n = {n}"),
                });
            }
            *pos += 1;
        }
        if *pos == start {
            return Err(CoverError::SpecParse { pos: start, msg: "expected a label".into() });
        }
        if value == 0 {
            return Err(CoverError::SpecParse { pos: start, msg: "labels start at 1".into() });
        }
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        Ok(value as u8)
    };

    loop {
        let a = read_label(&mut pos)?;
        let dash = pos < bytes.len() && bytes[pos] == b'-';
        if dash {
            pos += 1;
            let b = read_label(&mut pos)?;
            match &mut sel {
                IdealSelector::Partition { pairs, .. } => {
                    if a == b {
                        return Err(CoverError::SpecParse {
                            pos,
                            msg: format!("pair {a}-{b} must use two distinct labels"),
                        });
                    }
                    let pair = (a.min(b), a.max(b));
                    if !pairs.insert(pair) {
                        return Err(CoverError::SpecParse {
                            pos,
                            msg: format!("duplicate pair {}-{}", pair.0, pair.1),
                        });
                    }
                }
                IdealSelector::Jones { .. } => {
                    return Err(CoverError::SpecParse {
                        pos,
                        msg: "annular subsets take bare labels, not pairs".into(),
                    });
                }
            }
        } else {
            let inserted = match &mut sel {
                IdealSelector::Partition { singles, .. } => singles.insert(a),
                IdealSelector::Jones { arcs } => arcs.insert(a),
            };
            if !inserted {
                return Err(CoverError::SpecParse { pos, msg: format!("duplicate label {a}") });
            }
        }
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b',' {
            return Err(CoverError::SpecParse {
                pos,
                msg: format!("expected ',' or end, found {:?}", bytes[pos] as char),
            });
        }
        pos += 1;
    }
    Ok(sel)
}
