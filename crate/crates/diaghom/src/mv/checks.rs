use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraId};
use crate::covers::cover_ideal;
use crate::exactla::homology::complex_homology;
use crate::exactla::{CoefficientRing, SparseMatrix};

use super::complex::{sign_count, MvComplex, MvSummand};
use super::MvError;

/// Outcome of the integral acyclicity check: the augmented complex has zero
/// homology in every degree, verified by Smith normal form over the
/// integers. A complex of free abelian groups that is exact over the
/// integers stays exact over every coefficient ring.
#[derive(Clone, Debug, Serialize)]
pub struct AcyclicReport {
    pub algebra: AlgebraId,
    pub width: u8,
    pub dims: Vec<usize>,
    pub degrees_checked: usize,
}

impl AcyclicReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Verifies that the full augmented complex is exact in every degree over
/// the integers. Requires the complex to be built to full width.
pub fn check_acyclic(cx: &MvComplex) -> Result<AcyclicReport, MvError> {
    if !cx.is_full() {
        return Err(MvError::Truncated { built: cx.built_to(), width: cx.width() });
    }
    let ring = CoefficientRing::integers(0);
    let groups = complex_homology(cx.dims(), cx.differentials(), &ring)?;
    for (degree, group) in groups.iter().enumerate() {
        if !group.is_zero() {
            return Err(MvError::NotAcyclic { degree, group: group.to_string() });
        }
    }
    Ok(AcyclicReport {
        algebra: cx.descriptor().algebra,
        width: cx.width(),
        dims: cx.dims().to_vec(),
        degrees_checked: groups.len(),
    })
}

/// Outcome of the per-diagram decomposition check.
#[derive(Clone, Debug, Serialize)]
pub struct SimplexReport {
    pub algebra: AlgebraId,
    pub diagrams: usize,
    pub full_prop: usize,
    pub columns_checked: usize,
    pub max_label_set: usize,
}

impl SimplexReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct DegreeIndex<'a> {
    summands: &'a [MvSummand],
}

impl<'a> DegreeIndex<'a> {
    /// Decodes a row index of the degree into its owning summand and the
    /// algebra basis index stored there.
    fn decode(&self, row: u32) -> Result<(&'a MvSummand, u32), MvError> {
        let r = row as usize;
        let i = self.summands.partition_point(|s| s.offset() <= r);
        let summand = &self.summands[i - 1];
        let k = r - summand.offset();
        if k >= summand.dim() {
            return Err(MvError::BadDecomposition(format!(
                "row {row} does not land in any summand"
            )));
        }
        Ok((summand, summand.basis()[k]))
    }
}

/// Certifies that the complex splits over basis diagrams: every column only
/// hits rows carrying the same diagram, the summands containing a diagram
/// `v` are indexed by exactly the subsets of the set of cover ideals
/// containing `v`, the entries realize the signed face maps of that subset
/// simplex, and the resulting per-diagram complexes are exact.
pub fn simplex_decomposition_check(
    alg: &Algebra,
    cx: &MvComplex,
) -> Result<SimplexReport, MvError> {
    if alg.id() != cx.descriptor().algebra {
        return Err(MvError::BadDecomposition(format!(
            "complex was built for {}, got algebra {}",
            cx.descriptor().algebra,
            alg.id()
        )));
    }
    if !cx.is_full() {
        return Err(MvError::Truncated { built: cx.built_to(), width: cx.width() });
    }
    let width = cx.width();
    let dim = alg.dim();

    // Independent membership route: scan each cover ideal directly instead of
    // trusting the stored intersection bases.
    let mut label_sets: Vec<Vec<u8>> = vec![Vec::new(); dim];
    for (label, &tag) in cx.descriptor().ideals.iter().enumerate() {
        let span = cover_ideal(alg, tag)?;
        for &v in span.basis() {
            label_sets[v as usize].push(label as u8);
        }
    }

    // Every deficient diagram must be covered, and no full propagating
    // diagram may land in an ideal.
    for v in 0..dim as u32 {
        let sv = &label_sets[v as usize];
        match alg.full_prop_image(v) {
            Some(_) if !sv.is_empty() => {
                return Err(MvError::BadDecomposition(format!(
                    "full propagating element {v} lies in cover ideals {sv:?}"
                )));
            }
            None if sv.is_empty() => {
                return Err(MvError::BadDecomposition(format!(
                    "deficient element {v} is missed by every cover ideal"
                )));
            }
            _ => {}
        }
    }

    // Occurrence counts: diagram v appears in the degree-p summand for S if
    // and only if S is a p-subset of its label set.
    for p in 0..=width {
        let mut seen: Vec<u64> = vec![0; dim];
        for summand in cx.summands(p) {
            for &v in summand.basis() {
                let sv = &label_sets[v as usize];
                if !summand.labels().iter().all(|l| sv.contains(l)) {
                    return Err(MvError::BadDecomposition(format!(
                        "element {v} sits in summand {:?} but only ideals {sv:?} contain it",
                        summand.labels()
                    )));
                }
                seen[v as usize] += 1;
            }
        }
        for v in 0..dim {
            let k = label_sets[v].len() as u64;
            let expect = binomial(k, p as u64);
            if seen[v] != expect {
                return Err(MvError::BadDecomposition(format!(
                    "element {v} appears {} times in degree {p}, expected {expect}",
                    seen[v]
                )));
            }
        }
    }

    // The augmentation projects each full propagating diagram onto its group
    // image with coefficient one and kills everything else.
    let aug = &cx.differentials()[0];
    let mut columns_checked = 0usize;
    for v in 0..dim {
        let col = aug.column(v);
        match alg.full_prop_image(v as u32) {
            Some(g) => {
                if col.len() != 1 || col[0] != (g, BigInt::one()) {
                    return Err(MvError::BadDecomposition(format!(
                        "projection of element {v} is not the class of {g}"
                    )));
                }
            }
            None => {
                if !col.is_empty() {
                    return Err(MvError::BadDecomposition(format!(
                        "deficient element {v} survives the projection"
                    )));
                }
            }
        }
        columns_checked += 1;
    }

    // Face structure: each column of d_p decodes to the alternating sum of
    // the inclusions of its diagram into the facet summands.
    for p in 1..=width {
        let d = &cx.differentials()[p as usize];
        let faces = DegreeIndex { summands: cx.summands(p - 1) };
        for summand in cx.summands(p) {
            for (k, &v) in summand.basis().iter().enumerate() {
                let col = d.column(summand.offset() + k);
                let mut dropped: Vec<u8> = Vec::with_capacity(summand.labels().len());
                for (row, value) in col {
                    let (face, w) = faces.decode(*row)?;
                    if w != v {
                        return Err(MvError::BadDecomposition(format!(
                            "boundary of element {v} in {:?} touches element {w}",
                            summand.labels()
                        )));
                    }
                    let j = single_dropped_label(summand.labels(), face.labels())
                        .ok_or_else(|| {
                            MvError::BadDecomposition(format!(
                                "boundary of {:?} hits non-facet {:?}",
                                summand.labels(),
                                face.labels()
                            ))
                        })?;
                    let sign =
                        if sign_count(summand.labels(), j) % 2 == 0 { 1 } else { -1 };
                    if *value != BigInt::from(sign) {
                        return Err(MvError::BadDecomposition(format!(
                            "face {:?} of {:?} carries {value}, expected {sign}",
                            face.labels(),
                            summand.labels()
                        )));
                    }
                    dropped.push(j);
                }
                dropped.sort_unstable();
                if dropped != summand.labels() {
                    return Err(MvError::BadDecomposition(format!(
                        "boundary of {:?} misses facets: hit {dropped:?}",
                        summand.labels()
                    )));
                }
                columns_checked += 1;
            }
        }
    }

    // With the structure pinned down, each diagram contributes the augmented
    // chain complex of a simplex on its label set (with a rank-one quotient
    // tail exactly for full propagating diagrams). Exactness of those model
    // complexes only depends on the label count, so certify each count once.
    let mut full_prop = 0usize;
    let mut max_label_set = 0usize;
    let mut checked_sizes: Vec<u64> = Vec::new();
    for v in 0..dim {
        let k = label_sets[v].len();
        max_label_set = max_label_set.max(k);
        if alg.full_prop_image(v as u32).is_some() {
            full_prop += 1;
        } else if !checked_sizes.contains(&(k as u64)) {
            certify_simplex_model(k as u64)?;
            checked_sizes.push(k as u64);
        }
    }

    Ok(SimplexReport {
        algebra: alg.id(),
        diagrams: dim,
        full_prop,
        columns_checked,
        max_label_set,
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The label dropped when passing from `labels` to the facet `face`, if
/// `face` really is `labels` minus one element.
fn single_dropped_label(labels: &[u8], face: &[u8]) -> Option<u8> {
    if face.len() + 1 != labels.len() {
        return None;
    }
    let mut dropped = None;
    let mut fi = 0usize;
    for &l in labels {
        if fi < face.len() && face[fi] == l {
            fi += 1;
        } else if dropped.is_none() {
            dropped = Some(l);
        } else {
            return None;
        }
    }
    if fi == face.len() {
        dropped
    } else {
        None
    }
}

/// Exactness of the model complex for a deficient diagram inside `k` cover
/// ideals: subsets of a k-set graded by size, signed subset boundary, zero
/// quotient tail. Verified over the integers.
fn certify_simplex_model(k: u64) -> Result<(), MvError> {
    use itertools::Itertools;
    debug_assert!(k >= 1, "deficient diagrams are covered");
    let subsets = |p: u64| (0..k).combinations(p as usize).collect::<Vec<_>>();
    let mut dims = vec![0usize];
    let mut diffs = vec![SparseMatrix::zero(0, 1)];
    for p in 0..=k {
        dims.push(binomial(k, p) as usize);
    }
    for p in 1..=k {
        let sources = subsets(p);
        let targets = subsets(p - 1);
        let mut triplets = Vec::new();
        for (c, s) in sources.iter().enumerate() {
            for (pos, _) in s.iter().enumerate() {
                let mut face = s.clone();
                face.remove(pos);
                let r = targets.binary_search(&face).expect("facet is a subset");
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                triplets.push((r, c, sign));
            }
        }
        diffs.push(SparseMatrix::from_triplets(
            dims[p as usize],
            dims[p as usize + 1],
            triplets,
        ));
    }
    let groups = complex_homology(&dims, &diffs, &CoefficientRing::integers(0))?;
    for (degree, group) in groups.iter().enumerate() {
        if !group.is_zero() {
            return Err(MvError::BadDecomposition(format!(
                "model complex for {k} ideals has homology {group} in degree {degree}"
            )));
        }
    }
    Ok(())
}
