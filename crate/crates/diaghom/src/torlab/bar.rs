//! The reduced bar complex of an augmented algebra.
//!
//! Degree q is free on q-tuples of augmentation-ideal basis vectors; a tuple
//! is packed into a u64 as q base-m digits, most significant digit first.
//! The differential merges adjacent slots with alternating signs:
//!
//!   d(a_1 x ... x a_q) = sum_{i=1}^{q-1} (-1)^i a_1 x ... x (a_i a_{i+1}) x ... x a_q
//!
//! The two outer face maps of the unreduced complex vanish because
//! augmentation-ideal elements have zero augmentation, which is what keeps
//! each degree at m^q instead of (m+1)^q. Differential entries are integers
//! depending only on the delta lift; ranks and invariant factors are then
//! taken per ring, so the same streamed columns serve Z, Q, F_p and Z/m.
//!
//! Homology at degree q needs the image of d_{q+1}, so building to q_max
//! prices in tuples of length q_max + 1; the budget is checked against every
//! such degree before any enumeration starts.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{Algebra, AlgebraId};
use crate::budget::Budget;
use crate::exactla::{CoefficientRing, HomologyGroup, SparseMatrix, SparseVec};

use super::augideal::{delta_power, AugBasis, AugProducts};
use super::stream::{streamed_homology, ColumnStream};
use super::{TorError, TorMethod, TorReport};

/// Tuples assembled per parallel batch before the serial echelon sink.
const CHUNK: u64 = 8192;

fn pow_u64(m: usize, q: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..q {
        acc = acc.checked_mul(m as u64)?;
    }
    Some(acc)
}

pub struct BarComplex {
    algebra: AlgebraId,
    ring: CoefficientRing,
    delta: i64,
    q_max: u8,
    m: usize,
    /// dims[q] = m^q for q = 0..=q_max+1.
    dims: Vec<u64>,
    basis: AugBasis,
    /// Expansion table, built once tuples of length >= 3 are in play; the
    /// two-slot differential expands products on demand instead, which keeps
    /// degree-one runs on huge algebras table-free.
    products: Option<AugProducts>,
}

impl BarComplex {
    pub fn build(
        algebra: &Algebra,
        ring: &CoefficientRing,
        q_max: u8,
        budget: &Budget,
    ) -> Result<Self, TorError> {
        let m = algebra.dim() - 1;
        let delta = ring.delta_lift();
        // Validate the largest possible loop coefficient once, so on-demand
        // expansion below can treat overflow as unreachable.
        delta_power(delta, algebra.n() as u8)?;
        let mut dims = Vec::with_capacity(q_max as usize + 2);
        for q in 0..=q_max as u32 + 1 {
            let d = pow_u64(m, q);
            budget.check(d.unwrap_or(u64::MAX), "bar tuples")?;
            dims.push(d.expect("within budget"));
        }
        let basis = AugBasis::new(algebra);
        let products = if q_max >= 2 {
            Some(AugProducts::build(algebra, delta, budget)?)
        } else {
            None
        };
        Ok(BarComplex {
            algebra: algebra.id(),
            ring: *ring,
            delta,
            q_max,
            m,
            dims,
            basis,
            products,
        })
    }

    pub fn id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn ring(&self) -> &CoefficientRing {
        &self.ring
    }

    pub fn q_max(&self) -> u8 {
        self.q_max
    }

    /// Rank of the augmentation ideal (algebra dimension minus one).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of degree-q tuples, for q = 0..=q_max+1.
    pub fn dim(&self, q: u8) -> u64 {
        self.dims[q as usize]
    }

    pub fn basis(&self) -> &AugBasis {
        &self.basis
    }

    fn expand_into(
        &self,
        algebra: &Algebra,
        a: usize,
        b: usize,
        mut push: impl FnMut(u32, i64),
    ) {
        match &self.products {
            Some(p) => {
                for &(c, v) in p.expansion(a, b) {
                    push(c, v);
                }
            }
            None => {
                let expansion = self
                    .basis
                    .expand(algebra, self.delta, a, b)
                    .expect("delta powers validated at build");
                for (c, v) in expansion {
                    push(c, v);
                }
            }
        }
    }

    /// One column of d_q: the boundary of tuple t, as sorted rows at degree
    /// q-1 with zero entries dropped.
    fn column(&self, algebra: &Algebra, q: usize, t: u64) -> Vec<(u32, i64)> {
        let m = self.m as u64;
        let mut acc: BTreeMap<u64, i64> = BTreeMap::new();
        for i in 1..q {
            let sign: i64 = if i % 2 == 1 { -1 } else { 1 };
            let hi = t / self.dims[q - i + 1];
            let a = ((t / self.dims[q - i]) % m) as usize;
            let b = ((t / self.dims[q - i - 1]) % m) as usize;
            let lo = t % self.dims[q - i - 1];
            let base = hi * self.dims[q - i] + lo;
            self.expand_into(algebra, a, b, |c, v| {
                let row = base + c as u64 * self.dims[q - i - 1];
                let e = acc.entry(row).or_insert(0);
                *e = e.checked_add(sign * v).expect("column coefficient overflow");
            });
        }
        acc.into_iter()
            .filter(|&(_, v)| v != 0)
            .map(|(r, v)| (r as u32, v))
            .collect()
    }

    /// Streams the columns of d_q in tuple order. Requires 1 <= q <= q_max+1
    /// and row indices (degree q-1 tuples) that fit in u32.
    pub fn stream_columns(
        &self,
        algebra: &Algebra,
        q: u8,
        sink: &mut dyn FnMut(u64, Vec<(u32, i64)>),
    ) {
        assert!(q >= 1 && (q as usize) < self.dims.len());
        assert!(
            self.dims[q as usize - 1] <= u32::MAX as u64,
            "row indices must fit u32"
        );
        let q = q as usize;
        let total = self.dims[q];
        let mut start = 0u64;
        while start < total {
            let end = (start + CHUNK).min(total);
            let batch: Vec<(u64, Vec<(u32, i64)>)> = (start..end)
                .into_par_iter()
                .map(|t| (t, self.column(algebra, q, t)))
                .collect();
            for (t, col) in batch {
                sink(t, col);
            }
            start = end;
        }
    }

    /// Materializes d_q as a sparse integer matrix. Intended for degrees
    /// small enough to hold; the homology pipeline streams instead.
    pub fn differential(&self, algebra: &Algebra, q: u8) -> SparseMatrix {
        let rows = self.dims[q as usize - 1];
        let cols = self.dims[q as usize];
        assert!(cols <= usize::MAX as u64, "materialized degree too large");
        let mut columns: Vec<SparseVec> = Vec::with_capacity(cols as usize);
        self.stream_columns(algebra, q, &mut |_, col| {
            columns.push(
                col.into_iter()
                    .map(|(r, v)| (r, num_bigint::BigInt::from(v)))
                    .collect(),
            );
        });
        SparseMatrix::from_columns(rows as usize, columns)
    }

    /// Homology in degrees 0..=q_max over the complex ring.
    pub fn homology(&self, algebra: &Algebra) -> Result<Vec<HomologyGroup>, TorError> {
        let stream = BarStream {
            bar: self,
            algebra,
        };
        streamed_homology(&stream, &self.ring, self.q_max)
    }
}

pub(crate) struct BarStream<'a> {
    pub(crate) bar: &'a BarComplex,
    pub(crate) algebra: &'a Algebra,
}

impl ColumnStream for BarStream<'_> {
    fn dims(&self) -> &[u64] {
        &self.bar.dims
    }

    fn stream(&self, q: u8, sink: &mut dyn FnMut(u64, Vec<(u32, i64)>)) {
        self.bar.stream_columns(self.algebra, q, sink);
    }
}

/// Tor of the trivial module by the reduced bar complex.
pub fn tor_bar(
    algebra: &Algebra,
    ring: &CoefficientRing,
    q_max: u8,
    budget: &Budget,
) -> Result<TorReport, TorError> {
    let bar = BarComplex::build(algebra, ring, q_max, budget)?;
    let groups = bar.homology(algebra)?;
    Ok(TorReport {
        algebra: algebra.id(),
        ring: ring.kind.to_string(),
        delta: ring.delta,
        q_max,
        groups,
        method: TorMethod::Bar,
    })
}
