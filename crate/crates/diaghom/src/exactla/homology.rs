//! Homology of chain complexes over the four coefficient rings.
//!
//! One degree at a time: given the differentials leaving and entering degree
//! q, the homology group is assembled from exact ranks and invariant factors.
//! Z/m homology is derived from the integral data of the same matrices via
//! universal coefficients, which requires the lift to be a complex over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;

use super::fp::{fp_rank_kernel, FpVec};
use super::lattice::{integer_rank, invariant_factors, IntCol, IntEchelon};
use super::ring::{CoefficientRing, RingKind};
use super::sparse::{SparseMatrix, SparseVec};
use super::LinAlgError;

/// A finitely generated homology group: free rank plus cyclic torsion orders
/// forming a divisibility chain, every order at least 2.
///
/// Over a field the group is a vector space (`free_rank` = dimension). Over
/// Z/m every summand is cyclic, so groups are reported with `free_rank` 0 and
/// each Z/m summand listed as a cyclic order m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Total number of cyclic summands (free plus torsion).
    pub fn summands(&self) -> usize {
        self.free_rank + self.torsion.len()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl serde::Serialize for HomologyGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HomologyGroup", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("pretty", &self.to_string())?;
        st.end()
    }
}

/// Merges cyclic orders into the canonical divisor chain by repeated
/// (gcd, lcm) rewriting; drops trivial orders.
pub fn divisor_chain(orders: Vec<BigInt>) -> Vec<BigInt> {
    let mut ds: Vec<BigInt> = orders.into_iter().filter(|d| !d.is_one()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                if !(&ds[j] % &ds[i]).is_zero() {
                    let g = ds[i].gcd(&ds[j]);
                    let l = ds[i].lcm(&ds[j]);
                    ds[i] = g;
                    ds[j] = l;
                    changed = true;
                }
            }
        }
    }
    ds.retain(|d| !d.is_one());
    ds.sort();
    ds
}

fn sparse_to_intcols(m: &SparseMatrix) -> Vec<IntCol> {
    m.columns()
        .map(|col| IntCol::from_big_entries(col.clone()))
        .collect()
}

/// Integer rank and the full invariant factor list of a sparse matrix,
/// computed by streaming echelon plus sparse factor extraction.
pub fn integral_rank_and_factors(
    m: &SparseMatrix,
) -> Result<(usize, Vec<BigInt>), LinAlgError> {
    let mut ech = IntEchelon::new(m.rows(), false);
    for col in sparse_to_intcols(m) {
        ech.add(col, None);
    }
    let rank = ech.rank();
    let factors = invariant_factors(m.rows(), ech.into_live_cols())?;
    debug_assert_eq!(factors.len(), rank);
    Ok((rank, factors))
}

fn nonunit(factors: &[BigInt]) -> Vec<BigInt> {
    factors.iter().filter(|d| !d.is_one()).cloned().collect()
}

/// Rank of a matrix over the given ring (Z and Q share the integer rank).
pub fn ring_rank(m: &SparseMatrix, ring: &CoefficientRing) -> usize {
    match ring.kind {
        RingKind::Integers | RingKind::Rationals => {
            integer_rank(m.rows(), sparse_to_intcols(m))
        }
        RingKind::PrimeField(p) => {
            let cols = m.columns_mod(p);
            let (rank, _) = fp_rank_kernel(p, m.rows(), &cols);
            rank
        }
        RingKind::ModularRing(_) => unreachable!("no rank over Z/m"),
    }
}

fn check_zero_in_ring(m: &SparseMatrix, ring: &CoefficientRing) -> bool {
    match ring.kind {
        // Z/m homology is derived from the integral lift, so the lift itself
        // must be a complex.
        RingKind::Integers | RingKind::Rationals | RingKind::ModularRing(_) => m.is_zero(),
        RingKind::PrimeField(p) => m.columns_mod(p).iter().all(Vec::is_empty),
    }
}

/// Checks the complex condition d_q . d_{q+1} = 0 over the ring.
pub fn check_complex(
    d_q: &SparseMatrix,
    d_q1: &SparseMatrix,
    ring: &CoefficientRing,
) -> Result<(), LinAlgError> {
    if d_q.cols() != d_q1.rows() {
        return Err(LinAlgError::ShapeMismatch(format!(
            "outgoing differential has {} columns but incoming one has {} rows",
            d_q.cols(),
            d_q1.rows()
        )));
    }
    let composite = d_q.mul(d_q1);
    if !check_zero_in_ring(&composite, ring) {
        return Err(LinAlgError::NotAComplex(format!(
            "composite of consecutive differentials is nonzero over {}",
            ring.kind
        )));
    }
    Ok(())
}

/// Homology at one degree: `d_q` leaves the degree (n_{q-1} x n_q) and
/// `d_q_plus_1` enters it (n_q x n_{q+1}).
pub fn chain_homology(
    d_q: &SparseMatrix,
    d_q_plus_1: &SparseMatrix,
    ring: &CoefficientRing,
) -> Result<HomologyGroup, LinAlgError> {
    check_complex(d_q, d_q_plus_1, ring)?;
    let n_q = d_q.cols();
    match ring.kind {
        RingKind::Integers => {
            let r_out = integer_rank(d_q.rows(), sparse_to_intcols(d_q));
            let (r_in, factors) = integral_rank_and_factors(d_q_plus_1)?;
            Ok(HomologyGroup {
                free_rank: n_q - r_out - r_in,
                torsion: nonunit(&factors),
            })
        }
        RingKind::Rationals | RingKind::PrimeField(_) => {
            let r_out = ring_rank(d_q, ring);
            let r_in = ring_rank(d_q_plus_1, ring);
            Ok(HomologyGroup::free(n_q - r_out - r_in))
        }
        RingKind::ModularRing(m) => {
            // Universal coefficients from the integral lift:
            // H_q(C tensor Z/m) = (Z/m)^{free} + sum Z/gcd(s, m) over the
            // invariant factors s of d_{q+1} (the tensor part) and of d_q
            // (the Tor part from degree q-1 torsion).
            let (r_out, out_factors) = integral_rank_and_factors(d_q)?;
            let (r_in, in_factors) = integral_rank_and_factors(d_q_plus_1)?;
            let free = n_q - r_out - r_in;
            let mb = BigInt::from(m);
            let mut orders: Vec<BigInt> = std::iter::repeat_with(|| mb.clone())
                .take(free)
                .collect();
            orders.extend(in_factors.iter().map(|s| s.gcd(&mb)));
            orders.extend(out_factors.iter().map(|s| s.gcd(&mb)));
            Ok(HomologyGroup {
                free_rank: 0,
                torsion: divisor_chain(orders),
            })
        }
    }
}

/// Rank and kernel basis over a field; errors on Z and Z/m.
pub fn rank_kernel(
    m: &SparseMatrix,
    ring: &CoefficientRing,
) -> Result<(usize, Vec<SparseVec>), LinAlgError> {
    match ring.kind {
        RingKind::Rationals => {
            // Integer echelon: the rank agrees with the rational rank and the
            // tracked kernel vectors are an integral basis of the Q-kernel.
            let mut ech = IntEchelon::new(m.rows(), true);
            let mut kernel = Vec::new();
            for (j, col) in sparse_to_intcols(m).into_iter().enumerate() {
                let out = ech.add(col, Some(IntCol::from_entries(vec![(j as u32, 1)])));
                if let Some(k) = out.kernel_hist {
                    kernel.push(k.big_entries());
                }
            }
            Ok((ech.rank(), kernel))
        }
        RingKind::PrimeField(p) => {
            let cols = m.columns_mod(p);
            let (rank, kernel) = fp_rank_kernel(p, m.rows(), &cols);
            let kernel = kernel
                .into_iter()
                .map(|k: FpVec| {
                    k.into_iter()
                        .map(|(i, v)| (i, BigInt::from(v)))
                        .collect::<SparseVec>()
                })
                .collect();
            Ok((rank, kernel))
        }
        RingKind::Integers | RingKind::ModularRing(_) => {
            Err(LinAlgError::NotAField(ring.kind.to_string()))
        }
    }
}

/// The integral kernel lattice basis of a matrix (saturated, so it is also a
/// basis of the rational kernel).
pub fn integral_kernel(m: &SparseMatrix) -> Vec<IntCol> {
    let mut ech = IntEchelon::new(m.rows(), true);
    let mut kernel = Vec::new();
    for (j, col) in sparse_to_intcols(m).into_iter().enumerate() {
        let out = ech.add(col, Some(IntCol::from_entries(vec![(j as u32, 1)])));
        if let Some(k) = out.kernel_hist {
            kernel.push(k);
        }
    }
    kernel
}

/// Integral homology of a full complex given as a list of differentials
/// d_1..d_top, where d_q maps degree q to degree q-1 and `dims[q]` is the
/// dimension of degree q. Returns groups for q = 0..=top.
pub fn complex_homology(
    dims: &[usize],
    differentials: &[SparseMatrix],
    ring: &CoefficientRing,
) -> Result<Vec<HomologyGroup>, LinAlgError> {
    assert_eq!(differentials.len() + 1, dims.len());
    let top = dims.len() - 1;
    let mut out = Vec::with_capacity(dims.len());
    for q in 0..=top {
        let zero_out = SparseMatrix::zero(0, dims[0]);
        let zero_in = SparseMatrix::zero(dims[top], 0);
        let d_q = if q == 0 { &zero_out } else { &differentials[q - 1] };
        let d_q1 = if q == top {
            &zero_in
        } else {
            &differentials[q]
        };
        out.push(chain_homology(d_q, d_q1, ring)?);
    }
    Ok(out)
}

#[allow(dead_code)]
fn factors_to_u64(factors: &[BigInt]) -> Option<Vec<u64>> {
    factors.iter().map(|d| d.to_u64()).collect()
}
