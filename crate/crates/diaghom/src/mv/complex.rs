use itertools::Itertools;

use crate::algebra::Algebra;
use crate::budget::Budget;
use crate::covers::{cover_descriptor, intersect_ideals, CoverDescriptor};
use crate::exactla::SparseMatrix;

use super::MvError;

/// Number of members of the sorted label set `s` strictly below `j`.
///
/// This is the exponent of the sign carried by the face map that drops `j`
/// from `s`, so the boundary of a summand labeled by `s` is the alternating
/// sum of its inclusions into the summands labeled by the `s` minus `j`.
pub fn sign_count(s: &[u8], j: u8) -> usize {
    debug_assert!(s.windows(2).all(|w| w[0] < w[1]));
    s.iter().filter(|&&i| i < j).count()
}

/// One direct summand of a chain degree: the intersection of the cover
/// ideals picked out by `labels` (positions into the descriptor's ideal
/// list), spanned by `basis` (sorted algebra basis indices), sitting at
/// column block `offset` within its degree.
#[derive(Clone, Debug)]
pub struct MvSummand {
    labels: Vec<u8>,
    basis: Vec<u32>,
    offset: usize,
}

impl MvSummand {
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Column block position of one algebra basis index inside the degree.
    pub fn column_of(&self, diagram: u32) -> Option<usize> {
        self.basis.binary_search(&diagram).ok().map(|k| self.offset + k)
    }
}

/// The augmented complex of a cover, with integral differentials.
///
/// Chain degrees are indexed bottom up: complex degree 0 is the group-algebra
/// quotient, complex degree `p + 1` is the Mayer-Vietoris degree `p` (the sum
/// of the `p`-fold intersections; degree 0 is the whole algebra as the empty
/// intersection). `differentials[0]` is the quotient projection and
/// `differentials[p]` maps Mayer-Vietoris degree `p` to `p - 1`. Entries are
/// 0 or +-1, so the matrices specialize verbatim to every coefficient ring.
#[derive(Clone, Debug)]
pub struct MvComplex {
    descriptor: CoverDescriptor,
    quotient_dim: usize,
    degrees: Vec<Vec<MvSummand>>,
    dims: Vec<usize>,
    differentials: Vec<SparseMatrix>,
}

impl MvComplex {
    pub fn descriptor(&self) -> &CoverDescriptor {
        &self.descriptor
    }

    pub fn width(&self) -> u8 {
        self.descriptor.width
    }

    /// Highest Mayer-Vietoris degree that was materialized.
    pub fn built_to(&self) -> u8 {
        (self.degrees.len() - 1) as u8
    }

    pub fn is_full(&self) -> bool {
        self.built_to() == self.width()
    }

    pub fn quotient_dim(&self) -> usize {
        self.quotient_dim
    }

    /// Summands of Mayer-Vietoris degree `p`, in lexicographic label order.
    pub fn summands(&self, p: u8) -> &[MvSummand] {
        &self.degrees[p as usize]
    }

    /// Dimensions in complex order: `dims[0]` is the quotient, `dims[p + 1]`
    /// is Mayer-Vietoris degree `p`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Differentials in complex order: index 0 is the quotient projection,
    /// index `p` leaves Mayer-Vietoris degree `p`.
    pub fn differentials(&self) -> &[SparseMatrix] {
        &self.differentials
    }

    #[cfg(test)]
    pub(crate) fn replace_differential(&mut self, i: usize, m: SparseMatrix) {
        assert_eq!((m.rows(), m.cols()), (self.dims[i], self.dims[i + 1]));
        self.differentials[i] = m;
    }

    /// The summand of degree `p` with exactly these labels.
    pub fn summand_by_labels(&self, p: u8, labels: &[u8]) -> Option<&MvSummand> {
        let degree = self.degrees.get(p as usize)?;
        degree
            .binary_search_by(|s| s.labels.as_slice().cmp(labels))
            .ok()
            .map(|i| &degree[i])
    }
}

/// Builds the augmented complex for the canonical cover of `alg`, up to
/// Mayer-Vietoris degree `p_max` (default: the full cover width, which the
/// acyclicity check requires). The budget bounds the total summand basis
/// size per degree.
pub fn build_mv(
    alg: &Algebra,
    p_max: Option<u8>,
    budget: &Budget,
) -> Result<MvComplex, MvError> {
    let descriptor = cover_descriptor(alg)?;
    let width = descriptor.width;
    let built_to = p_max.map_or(width, |p| p.min(width));

    let dim = alg.dim() as u32;
    let quotient_dim = (0..dim).filter(|&i| alg.full_prop_image(i).is_some()).count();

    let mut degrees: Vec<Vec<MvSummand>> = Vec::with_capacity(built_to as usize + 1);
    for p in 0..=built_to {
        let mut summands = Vec::new();
        let mut offset = 0usize;
        let mut degree_total = 0u64;
        for labels in (0..width).combinations(p as usize) {
            let tags: Vec<_> = labels
                .iter()
                .map(|&i| descriptor.ideals[i as usize])
                .collect();
            let span = intersect_ideals(alg, &tags)?;
            let basis = span.basis().to_vec();
            degree_total += basis.len() as u64;
            budget.check(degree_total, "cover complex degree")?;
            let len = basis.len();
            summands.push(MvSummand { labels, basis, offset });
            offset += len;
        }
        degrees.push(summands);
    }

    let mut dims = Vec::with_capacity(degrees.len() + 1);
    dims.push(quotient_dim);
    for degree in &degrees {
        dims.push(degree.iter().map(MvSummand::dim).sum());
    }

    let mut differentials = Vec::with_capacity(degrees.len());
    let mut aug = Vec::with_capacity(quotient_dim);
    for x in 0..dim {
        if let Some(g) = alg.full_prop_image(x) {
            debug_assert!((g as usize) < quotient_dim);
            aug.push((g as usize, x as usize, 1i64));
        }
    }
    differentials.push(SparseMatrix::from_triplets(quotient_dim, dim as usize, aug));

    for p in 1..=built_to as usize {
        let mut triplets = Vec::new();
        for summand in &degrees[p] {
            let faces: Vec<(i64, &MvSummand)> = summand
                .labels
                .iter()
                .map(|&j| {
                    let mut face: Vec<u8> = summand.labels.clone();
                    face.retain(|&i| i != j);
                    let target = degrees[p - 1]
                        .binary_search_by(|s| s.labels.as_slice().cmp(&face))
                        .map(|i| &degrees[p - 1][i])
                        .map_err(|_| {
                            MvError::BadDecomposition(format!(
                                "degree {} has no summand labeled {face:?}",
                                p - 1
                            ))
                        })?;
                    let sign = if sign_count(&summand.labels, j) % 2 == 0 { 1 } else { -1 };
                    Ok((sign, target))
                })
                .collect::<Result<_, MvError>>()?;
            for (k, &x) in summand.basis.iter().enumerate() {
                let col = summand.offset + k;
                for &(sign, target) in &faces {
                    let row = target.column_of(x).ok_or_else(|| {
                        MvError::BadDecomposition(format!(
                            "basis element {x} of summand {:?} is missing from face {:?}",
                            summand.labels, target.labels
                        ))
                    })?;
                    triplets.push((row, col, sign));
                }
            }
        }
        differentials.push(SparseMatrix::from_triplets(dims[p], dims[p + 1], triplets));
    }

    Ok(MvComplex { descriptor, quotient_dim, degrees, dims, differentials })
}
