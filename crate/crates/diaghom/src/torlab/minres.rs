//! Betti numbers of a minimal free resolution over a field, computed with
//! a resolution-independent formula.
//!
//! Over a field k the q-th Tor of the trivial module equals the kernel of
//! the map K_{q-1}/(I K_{q-1}) -> F_{q-1}/(I F_{q-1}) induced by including
//! the syzygies K_{q-1} into the free stage F_{q-1}, where I is the
//! augmentation ideal. This holds for any free resolution whatsoever, so
//! the greedy generator choices below never have to be minimal for the
//! answer to be right. Since F/IF is identified with k^slots by the slotwise
//! augmentation, the dimension comes out as
//!
//!   dim Tor_q = dim K - rank(slotwise augmentation on K) - dim(I K).
//!
//! Over the rationals the same numbers are read off the integral resolution
//! engine, whose collapsed complex has the correct ranks after flat base
//! change; asking for them over Z or Z/m is an error because Betti numbers
//! of a minimal resolution are a field-coefficient notion here.

use crate::algebra::Algebra;
use crate::budget::Budget;
use crate::exactla::fp::{fp_rank_kernel, FpCtx, FpEchelon, FpVec};
use crate::exactla::{CoefficientRing, RingKind};

use super::augideal::{AugBasis, LeftMult};
use super::resolution::build_resolution;
use super::TorError;

/// dim Tor_q for q = 0..=q_max over a field.
pub fn minimal_resolution_betti(
    algebra: &Algebra,
    ring: &CoefficientRing,
    q_max: u8,
    budget: &Budget,
) -> Result<Vec<usize>, TorError> {
    match ring.kind {
        RingKind::PrimeField(p) => fp_betti(algebra, p, ring.delta_lift(), q_max, budget),
        RingKind::Rationals => {
            let res = build_resolution(algebra, ring.delta_lift(), q_max + 1, budget)?;
            Ok(res
                .tor(ring, q_max)?
                .into_iter()
                .map(|g| g.free_rank)
                .collect())
        }
        _ => Err(TorError::FieldRequired {
            what: "minimal_resolution_betti",
            ring: ring.kind.to_string(),
        }),
    }
}

struct FpOps {
    ops: LeftMult,
    ctx: FpCtx,
    dim: usize,
}

impl FpOps {
    /// Left multiplication by basis element x on a slot-major F_p vector.
    fn apply(&self, x: usize, col: &FpVec) -> FpVec {
        let mut acc: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
        for &(r, v) in col {
            let slot = r as usize / self.dim;
            let y = r as usize % self.dim;
            let (row, val) = self.ops.entry(x, y);
            let val = self.ctx.reduce_i64(val);
            if val == 0 {
                continue;
            }
            let out = (slot * self.dim) as u32 + row;
            let e = acc.entry(out).or_insert(0);
            *e = self.ctx.add(*e, self.ctx.mul(val, v));
        }
        acc.into_iter().filter(|&(_, v)| v != 0).collect()
    }

    /// Action of the augmentation-ideal basis vector i (x itself when
    /// deficient, x - 1 when shifted).
    fn apply_aug(&self, basis: &AugBasis, i: usize, col: &FpVec) -> FpVec {
        let x = basis.to_algebra(i) as usize;
        let prod = self.apply(x, col);
        if basis.is_shifted(i) {
            self.ctx.sub_scaled(&prod, col, 1)
        } else {
            prod
        }
    }
}

fn fp_betti(
    algebra: &Algebra,
    p: u64,
    delta: i64,
    q_max: u8,
    budget: &Budget,
) -> Result<Vec<usize>, TorError> {
    let dim = algebra.dim();
    let basis = AugBasis::new(algebra);
    let fp = FpOps {
        ops: LeftMult::build(algebra, delta)?,
        ctx: FpCtx::new(p),
        dim,
    };
    let full_prop: Vec<bool> = (0..dim as u32)
        .map(|i| algebra.full_prop_image(i).is_some())
        .collect();

    let mut betti = vec![1usize];
    if q_max == 0 {
        return Ok(betti);
    }

    // Current syzygy space K inside F = A^slots, as an F_p basis.
    let mut slots = 1usize;
    let mut kernel: Vec<FpVec> = (0..basis.len())
        .map(|i| {
            let b = basis.to_algebra(i);
            let mut col: FpVec = vec![(b, 1)];
            if basis.is_shifted(i) {
                col.push((algebra.unit_index(), p - 1));
            }
            col.sort_by_key(|e| e.0);
            col
        })
        .collect();

    for q in 1..=q_max {
        let ambient = slots * dim;
        // dim(I K): the span of all augmentation-ideal actions on K.
        let mut ik = FpEchelon::new(p, ambient, false);
        for v in &kernel {
            for i in 0..basis.len() {
                let w = fp.apply_aug(&basis, i, v);
                if !w.is_empty() {
                    ik.add(w, None);
                }
            }
        }
        let dim_ik = ik.rank();
        // Rank of the slotwise augmentation on K, the composite
        // K -> F -> F/IF = k^slots.
        let mut eps = FpEchelon::new(p, slots, false);
        for v in &kernel {
            let mut col: FpVec = Vec::new();
            let mut acc = 0u64;
            let mut cur_slot = u32::MAX;
            for &(r, val) in v {
                let slot = r / dim as u32;
                if slot != cur_slot {
                    if acc != 0 {
                        col.push((cur_slot, acc));
                    }
                    cur_slot = slot;
                    acc = 0;
                }
                if full_prop[r as usize % dim] {
                    acc = fp.ctx.add(acc, val);
                }
            }
            if acc != 0 {
                col.push((cur_slot, acc));
            }
            if !col.is_empty() {
                eps.add(col, None);
            }
        }
        betti.push(kernel.len() - eps.rank() - dim_ik);

        if q == q_max {
            break;
        }

        // Generators of K as a module: greedy scan with saturation under
        // the full basis action.
        let mut closure = FpEchelon::new(p, ambient, false);
        let mut gens: Vec<FpVec> = Vec::new();
        for v in &kernel {
            if closure.reduce(v.clone()).is_empty() {
                continue;
            }
            gens.push(v.clone());
            let mut work = vec![v.clone()];
            closure.add(v.clone(), None);
            while let Some(w) = work.pop() {
                for x in 0..dim {
                    let u = fp.apply(x, &w);
                    if u.is_empty() {
                        continue;
                    }
                    let reduced = closure.reduce(u.clone());
                    if !reduced.is_empty() {
                        closure.add(reduced.clone(), None);
                        work.push(reduced);
                    }
                }
            }
        }
        // Next stage: the kernel of A^gens -> K, columns x * gen_j.
        slots = gens.len();
        budget.check((slots * dim) as u64, "resolution stage columns")?;
        let mut columns: Vec<FpVec> = Vec::with_capacity(slots * dim);
        for g in &gens {
            for x in 0..dim {
                columns.push(fp.apply(x, g));
            }
        }
        let (_, next) = fp_rank_kernel(p, ambient, &columns);
        kernel = next;
    }
    Ok(betti)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraFamily, AlgebraId};

    use super::super::bar::tor_bar;

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    fn betti(
        family: AlgebraFamily,
        n: usize,
        ring: &CoefficientRing,
        q_max: u8,
    ) -> Vec<usize> {
        minimal_resolution_betti(&alg(family, n), ring, q_max, &Budget::default()).unwrap()
    }

    #[test]
    fn temperley_lieb_two_betti_are_all_one() {
        let f2 = CoefficientRing::prime_field(2, 0).unwrap();
        assert_eq!(betti(AlgebraFamily::TemperleyLieb, 2, &f2, 4), vec![1; 5]);
    }

    #[test]
    fn annular_three_betti_over_f3_are_all_one() {
        let f3 = CoefficientRing::prime_field(3, 0).unwrap();
        assert_eq!(betti(AlgebraFamily::JonesAnnular, 3, &f3, 4), vec![1; 5]);
    }

    /// Semisimple contrast case: F_2 C_3 splits, so higher Tor vanishes even
    /// though a minimal free resolution of the trivial module never stops.
    #[test]
    fn split_group_algebra_has_no_higher_tor() {
        let f2 = CoefficientRing::prime_field(2, 0).unwrap();
        assert_eq!(betti(AlgebraFamily::GroupAlgebraCyclic, 3, &f2, 3), vec![1, 0, 0, 0]);
    }

    #[test]
    fn betti_match_bar_dimensions() {
        let rings = [
            CoefficientRing::prime_field(2, 0).unwrap(),
            CoefficientRing::prime_field(3, 0).unwrap(),
        ];
        for (family, n) in [
            (AlgebraFamily::Partition, 2),
            (AlgebraFamily::TemperleyLieb, 3),
            (AlgebraFamily::JonesAnnular, 3),
            (AlgebraFamily::GroupAlgebraSymmetric, 3),
        ] {
            let a = alg(family, n);
            for ring in &rings {
                let bar = tor_bar(&a, ring, 3, &Budget::default()).unwrap();
                let bet = minimal_resolution_betti(&a, ring, 3, &Budget::default()).unwrap();
                let dims: Vec<usize> = bar.groups.iter().map(|g| g.free_rank).collect();
                assert_eq!(bet, dims, "{} over {}", a.id(), ring.kind);
            }
        }
    }

    #[test]
    fn rationals_delegate_to_the_integral_engine() {
        let q = CoefficientRing::rationals(0);
        // Over Q the annular algebra at delta 0 has homology only in degree
        // zero; the nilpotent one-dimensional ideal of TL_2 keeps rank one
        // in every degree.
        assert_eq!(betti(AlgebraFamily::JonesAnnular, 3, &q, 3), vec![1, 0, 0, 0]);
        assert_eq!(betti(AlgebraFamily::TemperleyLieb, 2, &q, 3), vec![1; 4]);
    }

    #[test]
    fn integral_rings_are_rejected() {
        let z = CoefficientRing::integers(0);
        let err = minimal_resolution_betti(&alg(AlgebraFamily::TemperleyLieb, 2), &z, 1, &Budget::default());
        assert!(matches!(err, Err(TorError::FieldRequired { .. })));
    }
}
