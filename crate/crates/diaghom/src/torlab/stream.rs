//! Streamed homology: each differential is consumed column by column, so
//! only echelon forms, never whole matrices, are held in memory.
//!
//! The integral route records the rank and the invariant factors of every
//! image lattice; homology then assembles from the cokernel description
//! (the quotient of a degree by its outgoing kernel is free, so the degree
//! splits as homology plus two free pieces of known rank). Field routes keep
//! ranks only, and Z/m homology is derived from the integral factors by
//! universal coefficients, matching the convention used for materialized
//! complexes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::exactla::fp::{FpCtx, FpEchelon};
use crate::exactla::homology::divisor_chain;
use crate::exactla::lattice::{invariant_factors, IntCol, IntEchelon};
use crate::exactla::{CoefficientRing, HomologyGroup, RingKind};

use super::TorError;

/// A chain complex whose differentials are produced column by column.
/// Columns of d_q are indexed by degree-q basis elements; entries are sorted
/// by row (a degree q-1 basis index) and carry integer values.
pub(crate) trait ColumnStream {
    /// Dimensions of degrees 0..=top.
    fn dims(&self) -> &[u64];
    /// Streams every column of d_q, 1 <= q <= top, in index order.
    fn stream(&self, q: u8, sink: &mut dyn FnMut(u64, Vec<(u32, i64)>));
}

/// Homology of the streamed complex in degrees 0..=q_max. Requires the
/// stream to provide degrees through q_max + 1.
pub(crate) fn streamed_homology(
    cx: &dyn ColumnStream,
    ring: &CoefficientRing,
    q_max: u8,
) -> Result<Vec<HomologyGroup>, TorError> {
    let dims = cx.dims();
    assert!(
        dims.len() >= q_max as usize + 2,
        "stream must cover degree q_max + 1"
    );
    let top = q_max as usize;
    match ring.kind {
        RingKind::Integers | RingKind::ModularRing(_) => {
            // ranks[q] = rank of d_q; factors[d] = invariant factors of the
            // image lattice of the differential landing in degree d.
            let mut ranks = vec![0usize; top + 2];
            let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
            for q in 1..=top + 1 {
                let rows = dims[q - 1];
                assert!(rows <= u32::MAX as u64, "echelon rows must fit u32");
                let mut ech = IntEchelon::new(rows as usize, false);
                cx.stream(q as u8, &mut |_, col| {
                    if !col.is_empty() {
                        ech.add(IntCol::from_entries(col), None);
                    }
                });
                ranks[q] = ech.rank();
                factors[q - 1] = invariant_factors(rows as usize, ech.into_live_cols())?;
            }
            let mut out = Vec::with_capacity(top + 1);
            for q in 0..=top {
                let free = dims[q] as usize - ranks[q] - ranks[q + 1];
                let group = match ring.kind {
                    RingKind::Integers => HomologyGroup {
                        free_rank: free,
                        torsion: factors[q]
                            .iter()
                            .filter(|d| !d.is_one())
                            .cloned()
                            .collect(),
                    },
                    RingKind::ModularRing(m) => {
                        let mb = BigInt::from(m);
                        let mut orders: Vec<BigInt> =
                            std::iter::repeat_with(|| mb.clone()).take(free).collect();
                        orders.extend(factors[q].iter().map(|s| s.gcd(&mb)));
                        if q > 0 {
                            orders.extend(factors[q - 1].iter().map(|s| s.gcd(&mb)));
                        }
                        HomologyGroup {
                            free_rank: 0,
                            torsion: divisor_chain(orders),
                        }
                    }
                    _ => unreachable!(),
                };
                out.push(group);
            }
            Ok(out)
        }
        RingKind::Rationals => {
            let ranks = stream_ranks_int(cx, top + 1);
            Ok(free_groups(dims, &ranks, top))
        }
        RingKind::PrimeField(p) => {
            let ctx = FpCtx::new(p);
            let mut ranks = vec![0usize; top + 2];
            for q in 1..=top + 1 {
                let rows = dims[q - 1];
                assert!(rows <= u32::MAX as u64, "echelon rows must fit u32");
                let mut ech = FpEchelon::new(p, rows as usize, false);
                cx.stream(q as u8, &mut |_, col| {
                    let fp: Vec<(u32, u64)> = col
                        .into_iter()
                        .filter_map(|(r, v)| {
                            let v = ctx.reduce_i64(v);
                            (v != 0).then_some((r, v))
                        })
                        .collect();
                    if !fp.is_empty() {
                        ech.add(fp, None);
                    }
                });
                ranks[q] = ech.rank();
            }
            Ok(free_groups(dims, &ranks, top))
        }
    }
}

fn stream_ranks_int(cx: &dyn ColumnStream, through: usize) -> Vec<usize> {
    let dims = cx.dims();
    let mut ranks = vec![0usize; through + 1];
    for q in 1..=through {
        let rows = dims[q - 1];
        assert!(rows <= u32::MAX as u64, "echelon rows must fit u32");
        let mut ech = IntEchelon::new(rows as usize, false);
        cx.stream(q as u8, &mut |_, col| {
            if !col.is_empty() {
                ech.add(IntCol::from_entries(col), None);
            }
        });
        ranks[q] = ech.rank();
    }
    ranks
}

fn free_groups(dims: &[u64], ranks: &[usize], top: usize) -> Vec<HomologyGroup> {
    (0..=top)
        .map(|q| HomologyGroup::free(dims[q] as usize - ranks[q] - ranks[q + 1]))
        .collect()
}
