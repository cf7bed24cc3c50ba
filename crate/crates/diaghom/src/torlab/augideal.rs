//! Coordinates for the augmentation ideal: index bookkeeping against the
//! algebra basis and integer product expansions shared by every ring.
//!
//! The augmentation sends a linear combination to its coefficient sum over
//! full-propagation basis elements. Its kernel is free with one basis vector
//! per non-unit basis element: a deficient diagram d contributes d itself, a
//! full-propagation element g contributes g - 1. Products of two such
//! vectors land back in the kernel, and because multiplicativity forces the
//! unit coefficient, the expansion is read off the non-unit coordinates of
//! the plain product. Coefficients depend only on the integer delta lift, so
//! one expansion table serves Z, Q, F_p and Z/m alike.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::budget::Budget;
use crate::exactla::lattice::IntCol;

use super::TorError;

/// Raises delta to a loop exponent with overflow detection.
pub(crate) fn delta_power(delta: i64, loops: u8) -> Result<i64, TorError> {
    let mut acc: i64 = 1;
    for _ in 0..loops {
        acc = acc
            .checked_mul(delta)
            .ok_or(TorError::CoefficientOverflow { delta, loops })?;
    }
    Ok(acc)
}

/// The augmentation-ideal basis: the algebra basis with the unit dropped,
/// deficient elements kept as they are and full-propagation ones read as
/// g - 1.
#[derive(Debug, Clone)]
pub struct AugBasis {
    unit: u32,
    /// shifted[i]: vector i is g - 1 for a full-propagation g rather than a
    /// bare deficient diagram.
    shifted: Vec<bool>,
}

impl AugBasis {
    pub fn new(algebra: &Algebra) -> Self {
        let unit = algebra.unit_index();
        let len = algebra.dim() - 1;
        let mut shifted = Vec::with_capacity(len);
        for i in 0..len {
            let b = if (i as u32) < unit { i as u32 } else { i as u32 + 1 };
            shifted.push(algebra.full_prop_image(b).is_some());
        }
        AugBasis { unit, shifted }
    }

    pub fn len(&self) -> usize {
        self.shifted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifted.is_empty()
    }

    /// The algebra basis element behind augmentation-ideal index i.
    pub fn to_algebra(&self, i: usize) -> u32 {
        debug_assert!(i < self.len());
        if (i as u32) < self.unit {
            i as u32
        } else {
            i as u32 + 1
        }
    }

    /// The augmentation-ideal index of a non-unit algebra basis element.
    pub fn from_algebra(&self, b: u32) -> Option<usize> {
        match b.cmp(&self.unit) {
            std::cmp::Ordering::Less => Some(b as usize),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(b as usize - 1),
        }
    }

    /// Whether vector i is a shifted full-propagation element.
    pub fn is_shifted(&self, i: usize) -> bool {
        self.shifted[i]
    }

    /// Expands the product of augmentation-ideal vectors i and j in the
    /// augmentation-ideal basis, sorted by index with zeros dropped.
    pub fn expand(
        &self,
        algebra: &Algebra,
        delta: i64,
        i: usize,
        j: usize,
    ) -> Result<Vec<(u32, i64)>, TorError> {
        let a = self.to_algebra(i);
        let b = self.to_algebra(j);
        // (a - [i])(b - [j]) = ab - [j] a - [i] b + [i][j], with [k] = 1 when
        // vector k is shifted. The unit coordinate of the result cancels
        // because the augmentation is multiplicative and vanishes on both
        // factors, so it is dropped below.
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        let (prod, loops) = algebra.product_indices(a, b);
        let coeff = delta_power(delta, loops)?;
        if coeff != 0 {
            acc.insert(prod, coeff);
        }
        if self.shifted[j] {
            *acc.entry(a).or_insert(0) -= 1;
        }
        if self.shifted[i] {
            *acc.entry(b).or_insert(0) -= 1;
        }
        if self.shifted[i] && self.shifted[j] {
            *acc.entry(self.unit).or_insert(0) += 1;
        }
        debug_assert_eq!(
            acc.iter()
                .filter(|&(&k, _)| algebra.full_prop_image(k).is_some())
                .map(|(_, &v)| v)
                .sum::<i64>(),
            0,
            "product of augmentation-ideal vectors must augment to zero"
        );
        Ok(acc
            .into_iter()
            .filter(|&(k, v)| v != 0 && k != self.unit)
            .map(|(k, v)| {
                let idx = if k < self.unit { k } else { k - 1 };
                (idx, v)
            })
            .collect())
    }
}

/// A full m x m table of augmentation-ideal product expansions.
pub struct AugProducts {
    basis: AugBasis,
    delta: i64,
    table: Vec<Vec<(u32, i64)>>,
}

impl AugProducts {
    pub fn build(algebra: &Algebra, delta: i64, budget: &Budget) -> Result<Self, TorError> {
        let basis = AugBasis::new(algebra);
        let m = basis.len();
        budget.check((m as u64).saturating_mul(m as u64), "product expansions")?;
        let table: Vec<Vec<(u32, i64)>> = (0..m * m)
            .into_par_iter()
            .map(|t| basis.expand(algebra, delta, t / m, t % m))
            .collect::<Result<_, _>>()?;
        Ok(AugProducts {
            basis,
            delta,
            table,
        })
    }

    pub fn basis(&self) -> &AugBasis {
        &self.basis
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn expansion(&self, i: usize, j: usize) -> &[(u32, i64)] {
        &self.table[i * self.basis.len() + j]
    }
}

/// For each augmentation-ideal vector of `source`, the index of its image in
/// the augmentation-ideal basis of `target`, or None when the quotient kills
/// it. Deficient diagrams die; a shifted g - 1 goes to its group image minus
/// one. A one-dimensional target receives the augmentation itself, which
/// kills the whole ideal.
pub fn quotient_aug_images(
    source: &Algebra,
    target: &Algebra,
) -> Result<Vec<Option<u32>>, TorError> {
    let src = AugBasis::new(source);
    if target.dim() == 1 {
        return Ok(vec![None; src.len()]);
    }
    if Some(target.id()) != source.id().quotient_target() {
        return Err(TorError::NoQuotient {
            from: source.id(),
            onto: target.id(),
        });
    }
    let tgt = AugBasis::new(target);
    Ok((0..src.len())
        .map(|i| {
            let g = source.full_prop_image(src.to_algebra(i))?;
            let idx = tgt.from_algebra(g).expect("only the unit maps to the unit");
            Some(idx as u32)
        })
        .collect())
}

/// Left multiplication by every basis element, stored structurally: the
/// product of basis elements is delta^loops times a single basis element, so
/// each operator is a scaled permutation.
pub(crate) struct LeftMult {
    dim: usize,
    rows: Vec<u32>,
    vals: Vec<i64>,
}

impl LeftMult {
    pub(crate) fn build(algebra: &Algebra, delta: i64) -> Result<Self, TorError> {
        let dim = algebra.dim();
        let mut rows = Vec::with_capacity(dim * dim);
        let mut vals = Vec::with_capacity(dim * dim);
        for x in 0..dim as u32 {
            for y in 0..dim as u32 {
                let (r, loops) = algebra.product_indices(x, y);
                rows.push(r);
                vals.push(delta_power(delta, loops)?);
            }
        }
        Ok(LeftMult { dim, rows, vals })
    }

    /// Single structural product: x * y = value * basis(row).
    pub(crate) fn entry(&self, x: usize, y: usize) -> (u32, i64) {
        let idx = x * self.dim + y;
        (self.rows[idx], self.vals[idx])
    }

    /// Applies left multiplication by basis element x to a slot-major vector
    /// over A^b (row t*dim + y is coordinate y of slot t).
    pub(crate) fn apply(&self, x: usize, col: &IntCol) -> IntCol {
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (r, v) in col.big_entries() {
            let slot = r as usize / self.dim;
            let y = r as usize % self.dim;
            let (row, val) = self.entry(x, y);
            if val == 0 {
                continue;
            }
            let out_row = (slot * self.dim) as u32 + row;
            *acc.entry(out_row).or_insert_with(BigInt::zero) += v * val;
        }
        IntCol::from_big_entries(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, AlgebraFamily, AlgebraId};
    use crate::exactla::CoefficientRing;
    use num_rational::BigRational;

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    #[test]
    fn indexing_round_trips_and_skips_unit() {
        for family in [
            AlgebraFamily::Partition,
            AlgebraFamily::JonesAnnular,
            AlgebraFamily::GroupAlgebraSymmetric,
        ] {
            let a = alg(family, 3);
            let basis = AugBasis::new(&a);
            assert_eq!(basis.len(), a.dim() - 1);
            assert_eq!(basis.from_algebra(a.unit_index()), None);
            for i in 0..basis.len() {
                let b = basis.to_algebra(i);
                assert_ne!(b, a.unit_index());
                assert_eq!(basis.from_algebra(b), Some(i));
            }
        }
    }

    /// Expansions must reproduce the product computed by the generic element
    /// arithmetic, including the forced unit coefficient.
    #[test]
    fn expansions_match_element_multiplication() {
        for delta in [0i64, 1, 2] {
            let a = alg(AlgebraFamily::Partition, 2);
            let ring = CoefficientRing::integers(delta);
            let basis = AugBasis::new(&a);
            for i in 0..basis.len() {
                for j in 0..basis.len() {
                    let expansion = basis.expand(&a, delta, i, j).unwrap();
                    // Rebuild the product from the expansion, unit included.
                    let mut want: BTreeMap<u32, i64> = BTreeMap::new();
                    let mut shift_sum = 0i64;
                    for &(k, v) in &expansion {
                        let b = basis.to_algebra(k as usize);
                        want.insert(b, v);
                        if basis.is_shifted(k as usize) {
                            shift_sum += v;
                        }
                    }
                    if shift_sum != 0 {
                        want.insert(a.unit_index(), -shift_sum);
                    }
                    // Independent route: generic element multiplication.
                    let vec_of = |idx: usize| {
                        let b = basis.to_algebra(idx);
                        let mut pairs = vec![(b, BigRational::from_integer(1.into()))];
                        if basis.is_shifted(idx) {
                            pairs.push((
                                a.unit_index(),
                                BigRational::from_integer((-1).into()),
                            ));
                        }
                        AlgebraElement::from_coeffs(a.id(), &ring, pairs).unwrap()
                    };
                    let got = a.multiply(&vec_of(i), &vec_of(j), &ring).unwrap();
                    let got_map: BTreeMap<u32, i64> = got
                        .iter()
                        .map(|(k, v)| {
                            assert!(v.is_integer());
                            (k, i64::try_from(v.to_integer()).unwrap())
                        })
                        .collect();
                    assert_eq!(got_map, want, "i={i} j={j} delta={delta}");
                }
            }
        }
    }

    #[test]
    fn products_table_agrees_with_single_expansions() {
        let a = alg(AlgebraFamily::JonesAnnular, 3);
        let products = AugProducts::build(&a, 0, &Budget::default()).unwrap();
        let basis = products.basis().clone();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                assert_eq!(
                    products.expansion(i, j),
                    basis.expand(&a, 0, i, j).unwrap().as_slice()
                );
            }
        }
    }

    #[test]
    fn quotient_images_keep_exactly_the_shifted_vectors() {
        let p3 = alg(AlgebraFamily::Partition, 3);
        let s3 = alg(AlgebraFamily::GroupAlgebraSymmetric, 3);
        let images = quotient_aug_images(&p3, &s3).unwrap();
        let src = AugBasis::new(&p3);
        let mut hit = std::collections::BTreeSet::new();
        for (i, img) in images.iter().enumerate() {
            assert_eq!(img.is_some(), src.is_shifted(i));
            if let Some(t) = img {
                assert!(hit.insert(*t), "quotient images must be distinct");
            }
        }
        assert_eq!(hit.len(), s3.dim() - 1);

        let tl3 = alg(AlgebraFamily::TemperleyLieb, 3);
        let images = quotient_aug_images(&tl3, &s3).unwrap();
        assert!(images.iter().all(Option::is_none));
    }

    #[test]
    fn one_dimensional_target_kills_the_ideal() {
        let s3 = alg(AlgebraFamily::GroupAlgebraSymmetric, 3);
        let c1 = alg(AlgebraFamily::GroupAlgebraCyclic, 1);
        let images = quotient_aug_images(&s3, &c1).unwrap();
        assert_eq!(images.len(), 5);
        assert!(images.iter().all(Option::is_none));
    }

    #[test]
    fn left_mult_matches_structural_products() {
        let a = alg(AlgebraFamily::JonesAnnular, 3);
        let ops = LeftMult::build(&a, 1).unwrap();
        for x in 0..a.dim() {
            for y in 0..a.dim() as u32 {
                let applied = ops.apply(x, &IntCol::from_entries(vec![(y, 1)]));
                let (r, loops) = a.product_indices(x as u32, y);
                let want = delta_power(1, loops).unwrap();
                assert_eq!(applied.big_entries(), vec![(r, BigInt::from(want))]);
            }
        }
    }

    #[test]
    fn delta_power_overflow_is_caught() {
        assert!(delta_power(i64::MAX, 2).is_err());
        assert_eq!(delta_power(-2, 3).unwrap(), -8);
        assert_eq!(delta_power(0, 0).unwrap(), 1);
    }
}
