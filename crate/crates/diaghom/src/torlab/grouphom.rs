//! Group-homology oracles for the quotient targets.
//!
//! Cyclic groups use the period-two complex of right multiplication by
//! g - 1 and by the norm element. Its exactness over the integers is
//! re-verified on every call before the collapse is taken, so the values it
//! feeds back are earned rather than assumed, and a separate closed form is
//! provided for cross-checking. Symmetric groups go through the bar complex
//! like any other augmented algebra.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{Algebra, AlgebraFamily, AlgebraId};
use crate::budget::Budget;
use crate::exactla::homology::{complex_homology, integral_kernel};
use crate::exactla::lattice::{lattice_equal, IntCol, IntEchelon};
use crate::exactla::{CoefficientRing, HomologyGroup, RingKind, SparseMatrix};

use super::bar::tor_bar;
use super::TorError;

/// Textbook homology of the cyclic group of order n in degrees 0..=q_max,
/// written directly from the periodicity pattern. Kept independent of the
/// computed route so the two can be compared.
pub fn cyclic_closed_form(n: usize, ring: &CoefficientRing, q_max: u8) -> Vec<HomologyGroup> {
    assert!(n >= 1);
    (0..=q_max)
        .map(|q| match ring.kind {
            RingKind::Integers => {
                if q == 0 {
                    HomologyGroup::free(1)
                } else if q % 2 == 1 && n > 1 {
                    HomologyGroup {
                        free_rank: 0,
                        torsion: vec![BigInt::from(n)],
                    }
                } else {
                    HomologyGroup::zero()
                }
            }
            RingKind::Rationals => {
                if q == 0 {
                    HomologyGroup::free(1)
                } else {
                    HomologyGroup::zero()
                }
            }
            RingKind::PrimeField(p) => {
                if q == 0 || n % (p as usize) == 0 {
                    HomologyGroup::free(1)
                } else {
                    HomologyGroup::zero()
                }
            }
            RingKind::ModularRing(m) => {
                let order = if q == 0 {
                    BigInt::from(m)
                } else {
                    BigInt::from(n).gcd(&BigInt::from(m))
                };
                if order.is_one() {
                    HomologyGroup::zero()
                } else {
                    HomologyGroup {
                        free_rank: 0,
                        torsion: vec![order],
                    }
                }
            }
        })
        .collect()
}

/// Homology of the cyclic group of order n through the period-two free
/// resolution, with the resolution's exactness verified over the integers
/// before the collapsed complex is evaluated in the requested ring.
pub fn group_homology_cyclic(
    n: usize,
    ring: &CoefficientRing,
    q_max: u8,
) -> Result<Vec<HomologyGroup>, TorError> {
    assert!(n >= 1);
    let algebra = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraCyclic, n))?;
    let dim = algebra.dim();
    let g = 1 % dim as u32;

    // Right multiplication by g - 1 and by the norm, as integer matrices.
    let mut gm1_cols = Vec::with_capacity(dim);
    let mut norm_cols = Vec::with_capacity(dim);
    for y in 0..dim as u32 {
        let (yg, _) = algebra.product_indices(y, g);
        gm1_cols.push(IntCol::from_entries(vec![(yg, 1), (y, -1)]).big_entries());
        norm_cols.push(
            IntCol::from_entries(
                (0..dim as u32)
                    .map(|x| (algebra.product_indices(y, x).0, 1))
                    .collect(),
            )
            .big_entries(),
        );
    }
    let gm1 = SparseMatrix::from_columns(dim, gm1_cols);
    let norm = SparseMatrix::from_columns(dim, norm_cols);

    // Exactness of ... -> A --norm--> A --(g-1)--> A --eps--> Z -> 0 at
    // every spot, as integer lattice identities.
    let fail = |what: &str| TorError::Certification {
        stage: 0,
        detail: format!("period-two resolution for n = {n}: {what}"),
    };
    let image_ech = |m: &SparseMatrix| {
        let mut ech = IntEchelon::new(dim, false);
        for c in m.columns() {
            ech.add(IntCol::from_big_entries(c.clone()), None);
        }
        ech
    };
    let kernel_ech = |m: &SparseMatrix| {
        let mut ech = IntEchelon::new(dim, false);
        for c in integral_kernel(m) {
            ech.add(c, None);
        }
        ech
    };
    let mut aug_kernel = IntEchelon::new(dim, false);
    for b in 1..dim as u32 {
        aug_kernel.add(IntCol::from_entries(vec![(b, 1), (0, -1)]), None);
    }
    let im_gm1 = image_ech(&gm1);
    let im_norm = image_ech(&norm);
    if !lattice_equal(&aug_kernel, &im_gm1) {
        return Err(fail("augmentation kernel differs from the image of g - 1"));
    }
    if !lattice_equal(&kernel_ech(&gm1), &im_norm) {
        return Err(fail("kernel of g - 1 differs from the image of the norm"));
    }
    if !lattice_equal(&kernel_ech(&norm), &im_gm1) {
        return Err(fail("kernel of the norm differs from the image of g - 1"));
    }

    // Collapse along the augmentation: a right multiplication collapses to
    // multiplication by the augmentation of the factor, read off as any
    // column sum.
    let column_aug = |m: &SparseMatrix| -> BigInt {
        m.column(0).iter().map(|(_, v)| v).sum()
    };
    let collapsed = |m: &SparseMatrix| {
        let a = column_aug(m);
        if a.is_zero() {
            SparseMatrix::zero(1, 1)
        } else {
            SparseMatrix::from_triplets_big(1, 1, vec![(0, 0, a)])
        }
    };
    let d_odd = collapsed(&gm1);
    let d_even = collapsed(&norm);
    let dims = vec![1usize; q_max as usize + 2];
    let diffs: Vec<SparseMatrix> = (1..=q_max as usize + 1)
        .map(|k| if k % 2 == 1 { d_odd.clone() } else { d_even.clone() })
        .collect();
    let mut groups = complex_homology(&dims, &diffs, ring)?;
    groups.truncate(q_max as usize + 1);
    Ok(groups)
}

/// Homology of the symmetric group on n letters via the bar complex of its
/// group algebra.
pub fn group_homology_symmetric(
    n: usize,
    ring: &CoefficientRing,
    q_max: u8,
    budget: &Budget,
) -> Result<Vec<HomologyGroup>, TorError> {
    let algebra = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraSymmetric, n))?;
    Ok(tor_bar(&algebra, ring, q_max, budget)?.groups)
}
