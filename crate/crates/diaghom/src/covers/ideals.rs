//! Left-ideal spans: membership predicates, basis extraction, intersection.

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraFamily, AlgebraId};
use crate::diagrams::{DiagramFamily, SetPartition};

use super::{CoverError, IdealTag};

/// A left ideal spanned by a subset of the diagram basis, together with the
/// membership condition that cuts it out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftIdealSpan {
    algebra: AlgebraId,
    tags: Vec<IdealTag>,
    basis: Vec<u32>,
}

impl LeftIdealSpan {
    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    /// The conditions defining this span; one entry for a cover member,
    /// several for an intersection.
    pub fn tags(&self) -> &[IdealTag] {
        &self.tags
    }

    /// Sorted indices into the algebra's diagram basis.
    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains_index(&self, index: u32) -> bool {
        self.basis.binary_search(&index).is_ok()
    }
}

/// The span of all diagrams with fewer than `n` propagating blocks; the
/// target that a cover must exhaust.
pub fn lower_ideal(algebra: &Algebra) -> Result<LeftIdealSpan, CoverError> {
    let basis = algebra
        .diagram_basis()
        .ok_or_else(|| CoverError::UnsupportedFamily(algebra.id()))?;
    let n = algebra.n();
    let indices = basis
        .iter()
        .enumerate()
        .filter(|(_, d)| d.propagating_number() < n)
        .map(|(i, _)| i as u32)
        .collect();
    Ok(LeftIdealSpan { algebra: algebra.id(), tags: Vec::new(), basis: indices })
}

fn check_label(n: usize, i: u8) -> Result<(), CoverError> {
    if i == 0 || i as usize > n {
        return Err(CoverError::BadIdeal(format!("label {i} out of range 1..={n}")));
    }
    Ok(())
}

/// Evaluates the membership condition for one tag on one diagram.
pub(crate) fn tag_holds(tag: IdealTag, d: &SetPartition) -> bool {
    let n = d.n();
    match tag {
        IdealTag::DetachedPrime { i } => {
            let code = (n + i as usize - 1) as u8;
            d.blocks().iter().any(|b| b.len() == 1 && b[0] == code)
        }
        IdealTag::JoinedPrimes { i, j } => {
            let ci = (n + i as usize - 1) as u8;
            let cj = (n + j as usize - 1) as u8;
            d.blocks().iter().any(|b| b.contains(&ci) && b.contains(&cj))
        }
        IdealTag::AdjacentArc { i } => {
            let ci = (n + i as usize - 1) as u8;
            let succ = (n + (i as usize % n)) as u8;
            if ci == succ {
                return false;
            }
            d.blocks().iter().any(|b| b.contains(&ci) && b.contains(&succ))
        }
    }
}

fn validate_tag(algebra: &Algebra, tag: IdealTag) -> Result<(), CoverError> {
    let family = algebra
        .id()
        .family
        .diagram_family()
        .ok_or_else(|| CoverError::UnsupportedFamily(algebra.id()))?;
    let n = algebra.n();
    match (family, tag) {
        (DiagramFamily::Partition, IdealTag::DetachedPrime { i }) => check_label(n, i),
        (DiagramFamily::Partition, IdealTag::JoinedPrimes { i, j }) => {
            check_label(n, i)?;
            check_label(n, j)?;
            if i >= j {
                return Err(CoverError::BadIdeal(format!(
                    "joined-primes pair must be ordered, got {i}-{j}"
                )));
            }
            Ok(())
        }
        (DiagramFamily::JonesAnnular, IdealTag::AdjacentArc { i }) => check_label(n, i),
        (_, tag) => {
            Err(CoverError::BadIdeal(format!("ideal {tag} is not defined on {}", algebra.id())))
        }
    }
}

/// Builds the span of one cover member from its membership predicate.
pub fn cover_ideal(algebra: &Algebra, tag: IdealTag) -> Result<LeftIdealSpan, CoverError> {
    validate_tag(algebra, tag)?;
    let basis = algebra.diagram_basis().expect("validated diagram family");
    let indices: Vec<u32> = basis
        .iter()
        .enumerate()
        .filter(|(_, d)| tag_holds(tag, d))
        .map(|(i, _)| i as u32)
        .collect();
    Ok(LeftIdealSpan { algebra: algebra.id(), tags: vec![tag], basis: indices })
}

/// Intersects cover members two ways and cross-checks: once as a sorted set
/// intersection of the individual spans, once by evaluating the conjunction
/// of membership predicates over the full basis. A mismatch is a hard bug.
pub fn intersect_ideals(
    algebra: &Algebra,
    tags: &[IdealTag],
) -> Result<LeftIdealSpan, CoverError> {
    for &tag in tags {
        validate_tag(algebra, tag)?;
    }
    let basis = algebra.diagram_basis().expect("validated diagram family");

    let mut by_sets: Option<Vec<u32>> = None;
    for &tag in tags {
        let span = cover_ideal(algebra, tag)?;
        by_sets = Some(match by_sets {
            None => span.basis,
            Some(prev) => {
                let mut out = Vec::with_capacity(prev.len().min(span.basis.len()));
                let (mut a, mut b) = (0usize, 0usize);
                while a < prev.len() && b < span.basis.len() {
                    match prev[a].cmp(&span.basis[b]) {
                        std::cmp::Ordering::Less => a += 1,
                        std::cmp::Ordering::Greater => b += 1,
                        std::cmp::Ordering::Equal => {
                            out.push(prev[a]);
                            a += 1;
                            b += 1;
                        }
                    }
                }
                out
            }
        });
    }
    let by_sets = by_sets.unwrap_or_else(|| (0..basis.len() as u32).collect());

    let by_predicate: Vec<u32> = basis
        .iter()
        .enumerate()
        .filter(|(_, d)| tags.iter().all(|&tag| tag_holds(tag, d)))
        .map(|(i, _)| i as u32)
        .collect();

    if by_sets != by_predicate {
        return Err(CoverError::DualRouteMismatch(format!(
            "set route gives {} diagrams, predicate route gives {} on {}",
            by_sets.len(),
            by_predicate.len(),
            algebra.id()
        )));
    }

    Ok(LeftIdealSpan { algebra: algebra.id(), tags: tags.to_vec(), basis: by_predicate })
}

/// A cover of the lower ideal: member list in canonical order plus the
/// intersection depth up to which certificates are guaranteed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDescriptor {
    pub algebra: AlgebraId,
    pub ideals: Vec<IdealTag>,
    pub height: u8,
    pub width: u8,
}

/// The canonical cover for an algebra: detached primes `1..=n` then joined
/// primes in lexicographic order for partition algebras (height `n - 1`);
/// adjacent arcs `1..=n` for annular algebras (height `ceil(n/2) - 1`).
pub fn cover_descriptor(algebra: &Algebra) -> Result<CoverDescriptor, CoverError> {
    let n = algebra.n() as u8;
    let (ideals, height) = match algebra.id().family {
        AlgebraFamily::Partition => {
            let mut tags: Vec<IdealTag> =
                (1..=n).map(|i| IdealTag::DetachedPrime { i }).collect();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    tags.push(IdealTag::JoinedPrimes { i, j });
                }
            }
            (tags, n.saturating_sub(1))
        }
        AlgebraFamily::JonesAnnular => {
            let tags: Vec<IdealTag> = (1..=n).map(|i| IdealTag::AdjacentArc { i }).collect();
            let height = (n as usize).div_ceil(2).saturating_sub(1) as u8;
            (tags, height)
        }
        _ => return Err(CoverError::UnsupportedFamily(algebra.id())),
    };
    let width = ideals.len() as u8;
    Ok(CoverDescriptor { algebra: algebra.id(), ideals, height, width })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFamily;

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    #[test]
    fn joined_primes_span_in_strand_two_partition() {
        let a = alg(AlgebraFamily::Partition, 2);
        let span = cover_ideal(&a, IdealTag::JoinedPrimes { i: 1, j: 2 }).unwrap();
        assert_eq!(span.basis().len(), 5);
        for &idx in span.basis() {
            let d = a.diagram(idx).unwrap();
            assert!(tag_holds(IdealTag::JoinedPrimes { i: 1, j: 2 }, d));
        }
    }

    #[test]
    fn detached_prime_meets_joined_primes_trivially() {
        let a = alg(AlgebraFamily::Partition, 2);
        let span = intersect_ideals(
            &a,
            &[IdealTag::DetachedPrime { i: 1 }, IdealTag::JoinedPrimes { i: 1, j: 2 }],
        )
        .unwrap();
        assert!(span.is_zero());
    }

    #[test]
    fn adjacent_arc_span_in_strand_two_annular() {
        let a = alg(AlgebraFamily::JonesAnnular, 2);
        let span1 = cover_ideal(&a, IdealTag::AdjacentArc { i: 1 }).unwrap();
        let span2 = cover_ideal(&a, IdealTag::AdjacentArc { i: 2 }).unwrap();
        assert_eq!(span1.basis().len(), 1);
        // Labels 1 and 2 name the same edge condition when n = 2.
        assert_eq!(span1.basis(), span2.basis());
        let d = a.diagram(span1.basis()[0]).unwrap();
        assert_eq!(d.propagating_number(), 0);
    }

    #[test]
    fn ideal_spans_are_left_ideals() {
        // Exhaustive left-closure: x * rho stays in the span for every basis
        // element x and every spanning diagram rho.
        let cases: Vec<(Algebra, Vec<IdealTag>)> = vec![
            (alg(AlgebraFamily::Partition, 2), vec![IdealTag::DetachedPrime { i: 1 }]),
            (alg(AlgebraFamily::Partition, 2), vec![IdealTag::JoinedPrimes { i: 1, j: 2 }]),
            (alg(AlgebraFamily::Partition, 3), vec![IdealTag::DetachedPrime { i: 2 }]),
            (alg(AlgebraFamily::Partition, 3), vec![IdealTag::JoinedPrimes { i: 1, j: 3 }]),
            (alg(AlgebraFamily::JonesAnnular, 4), vec![IdealTag::AdjacentArc { i: 2 }]),
            (alg(AlgebraFamily::JonesAnnular, 5), vec![IdealTag::AdjacentArc { i: 5 }]),
            (
                alg(AlgebraFamily::JonesAnnular, 6),
                vec![IdealTag::AdjacentArc { i: 1 }, IdealTag::AdjacentArc { i: 4 }],
            ),
        ];
        for (a, tags) in &cases {
            let span = intersect_ideals(a, tags).unwrap();
            for &rho in span.basis() {
                for x in 0..a.dim() as u32 {
                    let (prod, _) = a.product_indices(x, rho);
                    assert!(
                        span.contains_index(prod),
                        "left closure fails for {tags:?} on {}",
                        a.id()
                    );
                }
            }
        }
    }

    #[test]
    fn lower_ideal_counts_deficient_diagrams() {
        let a = alg(AlgebraFamily::Partition, 2);
        // 15 partitions of 4 points, 2 of them permutations.
        assert_eq!(lower_ideal(&a).unwrap().basis().len(), 13);
        let j = alg(AlgebraFamily::JonesAnnular, 3);
        // 12 annular diagrams, 3 rotations.
        assert_eq!(lower_ideal(&j).unwrap().basis().len(), 9);
    }

    #[test]
    fn descriptor_shapes() {
        let p = cover_descriptor(&alg(AlgebraFamily::Partition, 3)).unwrap();
        assert_eq!(p.width, 6);
        assert_eq!(p.height, 2);
        assert_eq!(p.ideals.len(), 6);
        let j = cover_descriptor(&alg(AlgebraFamily::JonesAnnular, 8)).unwrap();
        assert_eq!(j.width, 8);
        assert_eq!(j.height, 3);
        let j5 = cover_descriptor(&alg(AlgebraFamily::JonesAnnular, 5)).unwrap();
        assert_eq!(j5.height, 2);
    }

    #[test]
    fn tag_validation_rejects_bad_input() {
        let a = alg(AlgebraFamily::Partition, 3);
        assert!(cover_ideal(&a, IdealTag::DetachedPrime { i: 0 }).is_err());
        assert!(cover_ideal(&a, IdealTag::DetachedPrime { i: 4 }).is_err());
        assert!(cover_ideal(&a, IdealTag::JoinedPrimes { i: 2, j: 2 }).is_err());
        assert!(cover_ideal(&a, IdealTag::JoinedPrimes { i: 3, j: 1 }).is_err());
        assert!(cover_ideal(&a, IdealTag::AdjacentArc { i: 1 }).is_err());
        let j = alg(AlgebraFamily::JonesAnnular, 3);
        assert!(cover_ideal(&j, IdealTag::DetachedPrime { i: 1 }).is_err());
        let b = alg(AlgebraFamily::Brauer, 3);
        assert!(cover_ideal(&b, IdealTag::AdjacentArc { i: 1 }).is_err());
    }
}
