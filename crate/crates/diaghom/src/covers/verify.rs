//! Whole-cover audit: the members must jointly span the lower ideal, and
//! every small intersection must be zero or certified idempotent.

use itertools::Itertools;
use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::exactla::CoefficientRing;

use super::ideals::{cover_descriptor, cover_ideal, lower_ideal, CoverDescriptor};
use super::synth::{synthesize_idempotent, IdempotentCertificate, Synthesis};
use super::{CoverError, IdealSelector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetOutcome {
    Zero,
    Certified,
    Impossible { reason: String },
}

#[derive(Debug, Clone)]
pub struct SubsetReport {
    pub selector: IdealSelector,
    pub outcome: SubsetOutcome,
    pub certificate: Option<Box<IdempotentCertificate>>,
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub descriptor: CoverDescriptor,
    pub checked_height: u8,
    pub union_matches_target: bool,
    pub subsets: Vec<SubsetReport>,
}

impl CoverReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut zero = 0;
        let mut certified = 0;
        let mut impossible = 0;
        for s in &self.subsets {
            match s.outcome {
                SubsetOutcome::Zero => zero += 1,
                SubsetOutcome::Certified => certified += 1,
                SubsetOutcome::Impossible { .. } => impossible += 1,
            }
        }
        (zero, certified, impossible)
    }

    /// True when the members span the lower ideal and every checked subset
    /// is zero or certified.
    pub fn all_ok(&self) -> bool {
        self.union_matches_target
            && self.subsets.iter().all(|s| !matches!(s.outcome, SubsetOutcome::Impossible { .. }))
    }

    pub fn to_json(&self, algebra: &Algebra) -> serde_json::Value {
        let subsets: Vec<serde_json::Value> = self
            .subsets
            .iter()
            .map(|s| {
                let mut obj = serde_json::json!({
                    "subset": s.selector.to_string(),
                    "outcome": match &s.outcome {
                        SubsetOutcome::Zero => "zero",
                        SubsetOutcome::Certified => "certified",
                        SubsetOutcome::Impossible { .. } => "impossible",
                    },
                });
                if let SubsetOutcome::Impossible { reason } = &s.outcome {
                    obj["reason"] = serde_json::json!(reason);
                }
                if let Some(cert) = &s.certificate {
                    obj["certificate"] = cert.to_json(algebra);
                }
                obj
            })
            .collect();
        let (zero, certified, impossible) = self.counts();
        serde_json::json!({
            "algebra": self.descriptor.algebra,
            "width": self.descriptor.width,
            "height": self.descriptor.height,
            "checked_height": self.checked_height,
            "union_matches_target": self.union_matches_target,
            "counts": {"zero": zero, "certified": certified, "impossible": impossible},
            "all_ok": self.all_ok(),
            "subsets": subsets,
        })
    }
}

/// Audits the canonical cover of `algebra` up to intersections of
/// `height` members (defaulting to the descriptor height). Checks that the
/// member spans jointly exhaust the span of deficient diagrams, then
/// classifies every nonempty subset of members up to the height.
pub fn verify_cover(
    algebra: &Algebra,
    ring: &CoefficientRing,
    height: Option<u8>,
) -> Result<CoverReport, CoverError> {
    let descriptor = cover_descriptor(algebra)?;
    let checked_height = height.unwrap_or(descriptor.height).min(descriptor.width);

    let target = lower_ideal(algebra)?;
    let mut union: Vec<u32> = Vec::new();
    for &tag in &descriptor.ideals {
        union.extend_from_slice(cover_ideal(algebra, tag)?.basis());
    }
    union.sort_unstable();
    union.dedup();
    let union_matches_target = union == target.basis();

    let family = algebra.id().family.diagram_family().expect("diagram algebra");
    let mut selectors: Vec<IdealSelector> = Vec::new();
    for size in 1..=checked_height as usize {
        for combo in descriptor.ideals.iter().copied().combinations(size) {
            selectors.push(IdealSelector::from_tags(family, &combo)?);
        }
    }

    let results: Vec<Result<SubsetReport, CoverError>> = selectors
        .into_par_iter()
        .map(|selector| {
            let (outcome, certificate) = match synthesize_idempotent(algebra, &selector, ring)? {
                Synthesis::Zero => (SubsetOutcome::Zero, None),
                Synthesis::Certified(cert) => (SubsetOutcome::Certified, Some(cert)),
                Synthesis::Impossible { reason } => {
                    (SubsetOutcome::Impossible { reason }, None)
                }
            };
            Ok(SubsetReport { selector, outcome, certificate })
        })
        .collect();
    let subsets = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    Ok(CoverReport { descriptor, checked_height, union_matches_target, subsets })
}
