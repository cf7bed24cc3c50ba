//! Maps induced on homology by a chain map, with exact classification.
//!
//! Over a field the quotient H_q = ker/im gets an explicit basis by streaming
//! image columns and then kernel vectors into one echelon; coordinates come
//! from history-tracked reduction. Over the integers H_q is presented by
//! generators and relations: an integral kernel basis K, the image expressed
//! in K-coordinates, and a Smith normal form of those relations. Generators
//! are the adapted basis K * L^{-1}; classification reduces to lattice
//! fullness (surjectivity) and a kernel-projection membership test
//! (injectivity).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::fp::{fp_rank_kernel, FpCtx, FpEchelon, FpVec};
use super::homology::{check_complex, HomologyGroup};
use super::lattice::{IntCol, IntEchelon};
use super::ring::{CoefficientRing, RingKind};
use super::snf::smith_normal_form;
use super::sparse::{SparseMatrix, SparseVec};
use super::LinAlgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapClass {
    Isomorphism,
    SurjectiveNotInjective,
    Neither,
}

impl std::fmt::Display for MapClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapClass::Isomorphism => write!(f, "isomorphism"),
            MapClass::SurjectiveNotInjective => write!(f, "surjective_not_injective"),
            MapClass::Neither => write!(f, "neither"),
        }
    }
}

pub struct InducedMap {
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    /// Matrix of the induced map in the reported generator bases: vector
    /// space bases over a field, adapted cyclic generators over Z (torsion
    /// entries reduced modulo the generator order).
    pub matrix: SparseMatrix,
    pub class: MapClass,
}

fn classify(injective: bool, surjective: bool) -> MapClass {
    match (injective, surjective) {
        (true, true) => MapClass::Isomorphism,
        (false, true) => MapClass::SurjectiveNotInjective,
        _ => MapClass::Neither,
    }
}

/// Induced map on homology at degree q.
///
/// `source` and `target` are the pairs (d_q, d_{q+1}) of the two complexes;
/// `maps` holds the chain map components (f_{q-1}, f_q, f_{q+1}).
pub fn homology_induced_map(
    source: (&SparseMatrix, &SparseMatrix),
    target: (&SparseMatrix, &SparseMatrix),
    maps: (&SparseMatrix, &SparseMatrix, &SparseMatrix),
    ring: &CoefficientRing,
) -> Result<InducedMap, LinAlgError> {
    let (ds_q, ds_q1) = source;
    let (dt_q, dt_q1) = target;
    let (f_prev, f_q, f_next) = maps;
    check_complex(ds_q, ds_q1, ring)?;
    check_complex(dt_q, dt_q1, ring)?;
    let shape_ok = f_q.rows() == dt_q.cols()
        && f_q.cols() == ds_q.cols()
        && f_prev.rows() == dt_q.rows()
        && f_prev.cols() == ds_q.rows()
        && f_next.rows() == dt_q1.cols()
        && f_next.cols() == ds_q1.cols();
    if !shape_ok {
        return Err(LinAlgError::ShapeMismatch(
            "chain map components do not match the two complexes".into(),
        ));
    }
    let square_low = f_prev.mul(ds_q).sub(&dt_q.mul(f_q));
    let square_high = f_q.mul(ds_q1).sub(&dt_q1.mul(f_next));
    let zero_in_ring = |m: &SparseMatrix| match ring.kind {
        RingKind::PrimeField(p) => m.columns_mod(p).iter().all(Vec::is_empty),
        _ => m.is_zero(),
    };
    if !zero_in_ring(&square_low) {
        return Err(LinAlgError::NonCommuting(
            "square through degree q-1 fails".into(),
        ));
    }
    if !zero_in_ring(&square_high) {
        return Err(LinAlgError::NonCommuting(
            "square through degree q+1 fails".into(),
        ));
    }
    match ring.kind {
        RingKind::PrimeField(p) => field_route(p, ds_q, ds_q1, dt_q, dt_q1, f_q),
        RingKind::Integers => integral_route(ds_q, ds_q1, dt_q, dt_q1, f_q, false),
        RingKind::Rationals => integral_route(ds_q, ds_q1, dt_q, dt_q1, f_q, true),
        RingKind::ModularRing(_) => Err(LinAlgError::Unsupported(
            "induced maps over Z/m are not supported; compute over Z and apply \
             universal coefficients"
                .into(),
        )),
    }
}

/// Quotient basis data over F_p: an echelon holding image columns (empty
/// histories) and chosen kernel representatives (unit histories), plus the
/// representatives themselves.
struct FpQuotient {
    ech: FpEchelon,
    reps: Vec<FpVec>,
}

fn fp_quotient(p: u64, d_q: &SparseMatrix, d_q1: &SparseMatrix) -> FpQuotient {
    let n_q = d_q.cols();
    let (_, kernel) = fp_rank_kernel(p, d_q.rows(), &d_q.columns_mod(p));
    let mut ech = FpEchelon::new(p, n_q, true);
    for col in d_q1.columns_mod(p) {
        ech.add(col, Some(Vec::new()));
    }
    let mut reps = Vec::new();
    for k in kernel {
        let idx = reps.len() as u32;
        if let super::fp::FpAdd::Inserted(_) = ech.add(k.clone(), Some(vec![(idx, 1)])) {
            reps.push(k);
        }
    }
    FpQuotient { ech, reps }
}

fn fp_matvec(cols: &[FpVec], ctx: FpCtx, v: &FpVec) -> FpVec {
    let mut acc: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    for &(c, x) in v {
        for &(r, m) in &cols[c as usize] {
            let slot = acc.entry(r).or_insert(0);
            *slot = ctx.add(*slot, ctx.mul(m, x));
        }
    }
    acc.into_iter().filter(|&(_, v)| v != 0).collect()
}

fn field_route(
    p: u64,
    ds_q: &SparseMatrix,
    ds_q1: &SparseMatrix,
    dt_q: &SparseMatrix,
    dt_q1: &SparseMatrix,
    f_q: &SparseMatrix,
) -> Result<InducedMap, LinAlgError> {
    let ctx = FpCtx::new(p);
    let src = fp_quotient(p, ds_q, ds_q1);
    let tgt = fp_quotient(p, dt_q, dt_q1);
    let fq_cols = f_q.columns_mod(p);
    let (hs, ht) = (src.reps.len(), tgt.reps.len());
    let mut mat_cols: Vec<SparseVec> = Vec::with_capacity(hs);
    let mut coord_cols: Vec<FpVec> = Vec::with_capacity(hs);
    for b in &src.reps {
        let z = fp_matvec(&fq_cols, ctx, b);
        let coords = tgt
            .ech
            .solve_in_span(z)
            .expect("image of a cycle is a cycle");
        mat_cols.push(
            coords
                .iter()
                .map(|&(i, v)| (i, BigInt::from(v)))
                .collect(),
        );
        coord_cols.push(coords);
    }
    let (rank, _) = fp_rank_kernel(p, ht, &coord_cols);
    Ok(InducedMap {
        source: HomologyGroup::free(hs),
        target: HomologyGroup::free(ht),
        matrix: SparseMatrix::from_columns(ht, mat_cols),
        class: classify(rank == hs, rank == ht),
    })
}

/// Generator-and-relations presentation of integral H_q.
struct ZPresentation {
    /// Orders of the adapted generators: 0 = free, 1 = killed, d >= 2 torsion.
    orders: Vec<BigInt>,
    /// Adapted generator representatives in chain coordinates.
    reps: Vec<IntCol>,
    /// Tracked echelon of the kernel basis, for coordinate extraction.
    kernel_ech: IntEchelon,
    /// Left Smith transform: adapted coords = left * kernel coords.
    left: SparseMatrix,
    /// Indices of generators that survive (order != 1).
    keep: Vec<usize>,
}

impl ZPresentation {
    fn group(&self) -> HomologyGroup {
        HomologyGroup {
            free_rank: self.orders.iter().filter(|d| d.is_zero()).count(),
            torsion: self
                .orders
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .cloned()
                .collect(),
        }
    }

    /// Adapted coordinates (kept generators only) of a cycle.
    fn coords_kept(&self, z: IntCol) -> Vec<BigInt> {
        let x = self
            .kernel_ech
            .solve_in_span(z)
            .expect("cycle lies in the kernel lattice");
        let y = self.left.mul_vec(&x.big_entries());
        let full: std::collections::HashMap<u32, BigInt> = y.into_iter().collect();
        self.keep
            .iter()
            .map(|&i| {
                let v = full.get(&(i as u32)).cloned().unwrap_or_else(BigInt::zero);
                let d = &self.orders[i];
                if d.is_zero() {
                    v
                } else {
                    v.mod_floor(d)
                }
            })
            .collect()
    }
}

fn z_presentation(d_q: &SparseMatrix, d_q1: &SparseMatrix) -> Result<ZPresentation, LinAlgError> {
    let kernel = super::homology::integral_kernel(d_q);
    let k = kernel.len();
    let mut kernel_ech = IntEchelon::new(d_q.cols(), true);
    for (i, col) in kernel.iter().enumerate() {
        let out = kernel_ech.add(col.clone(), Some(IntCol::from_entries(vec![(i as u32, 1)])));
        debug_assert!(out.inserted.is_some(), "kernel basis is independent");
    }
    // Image relations in kernel coordinates, echelonned to keep the Smith
    // computation small.
    let mut rel_ech = IntEchelon::new(k, false);
    for col in d_q1.columns() {
        let z = IntCol::from_big_entries(col.clone());
        let x = kernel_ech
            .solve_in_span(z)
            .expect("complex: image lies in the kernel lattice");
        rel_ech.add(x, None);
    }
    let rel_cols: Vec<SparseVec> = rel_ech
        .into_live_cols()
        .into_iter()
        .map(|c| c.big_entries())
        .collect();
    let rel_m = SparseMatrix::from_columns(k, rel_cols);
    let snf = smith_normal_form(&rel_m)?;
    let mut orders = vec![BigInt::zero(); k];
    for (i, d) in snf.diagonal.iter().enumerate() {
        orders[i] = d.clone();
    }
    // Adapted representatives: kernel * left^{-1}, column by column.
    let mut left_ech = IntEchelon::new(k, true);
    for j in 0..snf.left.cols() {
        let col = IntCol::from_big_entries(snf.left.column(j).clone());
        left_ech.add(col, Some(IntCol::from_entries(vec![(j as u32, 1)])));
    }
    let mut reps = Vec::with_capacity(k);
    for i in 0..k {
        let e_i = IntCol::from_entries(vec![(i as u32, 1)]);
        let linv_col = left_ech
            .solve_in_span(e_i)
            .expect("unimodular transform is invertible");
        let mut acc: Vec<(u32, BigInt)> = Vec::new();
        for (j, c) in linv_col.big_entries() {
            for (r, v) in kernel[j as usize].big_entries() {
                acc.push((r, &c * v));
            }
        }
        reps.push(IntCol::from_big_entries(acc));
    }
    let keep = (0..k).filter(|&i| !orders[i].is_one()).collect();
    Ok(ZPresentation {
        orders,
        reps,
        kernel_ech,
        left: snf.left,
        keep,
    })
}

fn integral_route(
    ds_q: &SparseMatrix,
    ds_q1: &SparseMatrix,
    dt_q: &SparseMatrix,
    dt_q1: &SparseMatrix,
    f_q: &SparseMatrix,
    rational: bool,
) -> Result<InducedMap, LinAlgError> {
    let src = z_presentation(ds_q, ds_q1)?;
    let tgt = z_presentation(dt_q, dt_q1)?;
    let (ns, nt) = (src.keep.len(), tgt.keep.len());
    // Induced matrix on kept generators.
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(ns);
    for &j in &src.keep {
        let b = &src.reps[j];
        let z = IntCol::from_big_entries(f_q.mul_vec(&b.big_entries()));
        cols.push(tgt.coords_kept(z));
    }
    let matrix = SparseMatrix::from_triplets_big(
        nt,
        ns,
        cols.iter().enumerate().flat_map(|(j, col)| {
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(i, v)| (i, j, v.clone()))
        }),
    );
    if rational {
        return Ok(rational_view(&src, &tgt, &matrix));
    }
    // Target relations among kept generators: order * e_i for torsion ones.
    let tgt_orders: Vec<BigInt> = tgt.keep.iter().map(|&i| tgt.orders[i].clone()).collect();
    let src_orders: Vec<BigInt> = src.keep.iter().map(|&i| src.orders[i].clone()).collect();
    let rel_cols: Vec<IntCol> = tgt_orders
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| IntCol::from_big_entries(vec![(i as u32, d.clone())]))
        .collect();
    // Surjectivity: image columns plus relations span all of Z^nt.
    let mut span = IntEchelon::new(nt, false);
    for j in 0..ns {
        span.add(IntCol::from_big_entries(matrix.column(j).clone()), None);
    }
    for c in rel_cols.iter() {
        span.add(c.clone(), None);
    }
    let surjective = span.is_full();
    // Injectivity: kernel vectors of [M | relations] must project into the
    // source relation lattice.
    let mut ker_ech = IntEchelon::new(nt.max(1), true);
    let mut hist_idx = 0u32;
    let mut kernel_hists: Vec<IntCol> = Vec::new();
    for j in 0..ns {
        let col = IntCol::from_big_entries(matrix.column(j).clone());
        let out = ker_ech.add(col, Some(IntCol::from_entries(vec![(hist_idx, 1)])));
        hist_idx += 1;
        if let Some(h) = out.kernel_hist {
            kernel_hists.push(h);
        }
    }
    for c in rel_cols {
        let out = ker_ech.add(c, Some(IntCol::from_entries(vec![(hist_idx, 1)])));
        hist_idx += 1;
        if let Some(h) = out.kernel_hist {
            kernel_hists.push(h);
        }
    }
    let injective = kernel_hists.iter().all(|h| {
        h.big_entries().iter().all(|(idx, v)| {
            let j = *idx as usize;
            if j >= ns {
                // Relation-column coefficients are unconstrained.
                return true;
            }
            let d = &src_orders[j];
            if d.is_zero() {
                v.is_zero()
            } else {
                (v % d).is_zero()
            }
        })
    });
    Ok(InducedMap {
        source: src.group(),
        target: tgt.group(),
        matrix,
        class: classify(injective, surjective),
    })
}

/// Rational view of the integral presentation: only free generators survive.
fn rational_view(src: &ZPresentation, tgt: &ZPresentation, matrix: &SparseMatrix) -> InducedMap {
    let src_free: Vec<usize> = src
        .keep
        .iter()
        .enumerate()
        .filter(|(_, &i)| src.orders[i].is_zero())
        .map(|(pos, _)| pos)
        .collect();
    let tgt_free: Vec<usize> = tgt
        .keep
        .iter()
        .enumerate()
        .filter(|(_, &i)| tgt.orders[i].is_zero())
        .map(|(pos, _)| pos)
        .collect();
    let row_of: std::collections::HashMap<usize, usize> = tgt_free
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let block = SparseMatrix::from_triplets_big(
        tgt_free.len(),
        src_free.len(),
        src_free.iter().enumerate().flat_map(|(new_j, &old_j)| {
            matrix
                .column(old_j)
                .iter()
                .filter_map(|(r, v)| {
                    row_of
                        .get(&(*r as usize))
                        .map(|&new_r| (new_r, new_j, v.clone()))
                })
                .collect::<Vec<_>>()
        }),
    );
    let rank = super::lattice::integer_rank(
        block.rows(),
        block
            .columns()
            .map(|c| IntCol::from_big_entries(c.clone())),
    );
    InducedMap {
        source: HomologyGroup::free(src_free.len()),
        target: HomologyGroup::free(tgt_free.len()),
        matrix: block,
        class: classify(rank == src_free.len(), rank == tgt_free.len()),
    }
}
