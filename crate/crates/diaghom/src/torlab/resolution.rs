//! Certified free resolutions of the trivial module over the integers.
//!
//! Stage by stage: the syzygies of the previous differential are computed as
//! a saturated integer kernel lattice, a generating set over the algebra is
//! extracted greedily, and the module span of the chosen generators is
//! certified equal to the whole kernel lattice before the next stage starts.
//! Kernels of maps between free Z-modules are free, so every stage splits
//! off and the complex stays exact after tensoring with any coefficient
//! ring: the one integral resolution serves Z, Q, F_p and Z/m. Collapsing
//! each free module A^b onto Z^b along the augmentation computes Tor, and
//! chain maps lifted between two such resolutions compute the maps Tor
//! carries.
//!
//! Vectors over A^b are stored slot-major: row t*dim + y is coordinate y of
//! slot t.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Algebra, AlgebraId};
use crate::budget::Budget;
use crate::exactla::homology::{complex_homology, integral_kernel};
use crate::exactla::lattice::{integer_rank, invariant_factors, lattice_equal, IntCol, IntEchelon};
use crate::exactla::{CoefficientRing, HomologyGroup, SparseMatrix, SparseVec};

use super::augideal::{AugBasis, LeftMult};
use super::{TorError, TorMethod, TorReport};

pub struct FreeResolution {
    algebra: AlgebraId,
    delta: i64,
    dim: usize,
    full_prop: Vec<bool>,
    /// generators[k][j]: the j-th module generator of ker(D_k), a slot-major
    /// vector over F_k = A^{ranks[k]}; these define D_{k+1}.
    generators: Vec<Vec<IntCol>>,
    /// ranks[k] = rank of the free stage F_k; ranks[0] = 1.
    ranks: Vec<usize>,
    /// collapsed[k]: the augmentation collapse of D_{k+1}, an integer matrix
    /// with ranks[k] rows and ranks[k+1] columns.
    collapsed: Vec<SparseMatrix>,
}

/// Builds `stages` differentials D_1..D_stages of a certified free
/// resolution of the trivial module, enough for Tor through degree
/// stages - 1.
pub fn build_resolution(
    algebra: &Algebra,
    delta: i64,
    stages: u8,
    budget: &Budget,
) -> Result<FreeResolution, TorError> {
    let dim = algebra.dim();
    let ops = LeftMult::build(algebra, delta)?;
    let basis = AugBasis::new(algebra);
    let full_prop: Vec<bool> = (0..dim as u32)
        .map(|i| algebra.full_prop_image(i).is_some())
        .collect();
    let unit = algebra.unit_index();

    // Stage 0 syzygies: the augmentation kernel, spanned by deficient
    // diagrams and shifted full-propagation elements. This basis extends to
    // a basis of A alongside the unit, so the lattice is saturated.
    let mut kernel: Vec<IntCol> = (0..basis.len())
        .map(|i| {
            let b = basis.to_algebra(i);
            if basis.is_shifted(i) {
                IntCol::from_entries(vec![(b, 1), (unit, -1)])
            } else {
                IntCol::from_entries(vec![(b, 1)])
            }
        })
        .collect();

    let mut ranks = vec![1usize];
    let mut generators: Vec<Vec<IntCol>> = Vec::new();
    let mut collapsed: Vec<SparseMatrix> = Vec::new();

    for stage in 1..=stages as usize {
        let ambient = ranks[stage - 1] * dim;
        // Greedy generator extraction: scan the kernel basis, keeping each
        // vector not yet in the module closure of the ones already chosen.
        // The scan itself certifies that the generators generate; the
        // lattice comparison below certifies that the closure never left
        // the kernel.
        let mut closure = IntEchelon::new(ambient, false);
        let mut gens: Vec<IntCol> = Vec::new();
        for v in &kernel {
            if closure.contains(v.clone()) {
                continue;
            }
            gens.push(v.clone());
            closure.add(v.clone(), None);
            closure.close_under(dim, |x, col| ops.apply(x, col));
        }
        let mut kernel_ech = IntEchelon::new(ambient, false);
        for v in &kernel {
            kernel_ech.add(v.clone(), None);
        }
        if !lattice_equal(&closure, &kernel_ech) {
            return Err(TorError::Certification {
                stage,
                detail: "module span of the chosen generators differs from the syzygy lattice"
                    .into(),
            });
        }

        let b = gens.len();
        budget.check((b * dim) as u64, "resolution stage columns")?;
        collapsed.push(collapse(&gens, ranks[stage - 1], dim, &full_prop));
        ranks.push(b);
        generators.push(gens);

        if stage == stages as usize {
            break;
        }

        // Next syzygies: the kernel of D_stage, with rank and saturation
        // certified so the resolution stays exact over every ring.
        let matrix = differential_matrix(generators.last().unwrap(), ambient, dim, &ops);
        let kern = integral_kernel(&matrix);
        let rank = integer_rank(
            matrix.rows(),
            matrix.columns().map(|c| IntCol::from_big_entries(c.clone())),
        );
        if kern.len() + rank != matrix.cols() {
            return Err(TorError::Certification {
                stage,
                detail: format!(
                    "kernel rank {} plus image rank {} misses the domain rank {}",
                    kern.len(),
                    rank,
                    matrix.cols()
                ),
            });
        }
        let sat = invariant_factors(matrix.cols(), kern.clone())?;
        if sat.iter().any(|d| !d.is_one()) {
            return Err(TorError::Certification {
                stage,
                detail: "syzygy lattice is not saturated".into(),
            });
        }
        kernel = kern;
    }

    Ok(FreeResolution {
        algebra: algebra.id(),
        delta,
        dim,
        full_prop,
        generators,
        ranks,
        collapsed,
    })
}

/// D_{k+1} as a plain integer matrix: the domain basis element (slot j,
/// algebra basis x) maps to x * gen_j.
fn differential_matrix(
    gens: &[IntCol],
    ambient_rows: usize,
    dim: usize,
    ops: &LeftMult,
) -> SparseMatrix {
    let mut cols: Vec<SparseVec> = Vec::with_capacity(gens.len() * dim);
    for g in gens {
        for x in 0..dim {
            cols.push(ops.apply(x, g).big_entries());
        }
    }
    SparseMatrix::from_columns(ambient_rows, cols)
}

/// Augmentation collapse: slot t of each column summed over its
/// full-propagation coordinates.
fn collapse(cols: &[IntCol], slots: usize, dim: usize, full_prop: &[bool]) -> SparseMatrix {
    let mut out: Vec<SparseVec> = Vec::with_capacity(cols.len());
    for c in cols {
        let mut per_slot: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (r, v) in c.big_entries() {
            if full_prop[r as usize % dim] {
                *per_slot
                    .entry(r / dim as u32)
                    .or_insert_with(BigInt::zero) += v;
            }
        }
        out.push(
            per_slot
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        );
    }
    SparseMatrix::from_columns(slots, out)
}

impl FreeResolution {
    pub fn id(&self) -> AlgebraId {
        self.algebra
    }

    pub fn delta(&self) -> i64 {
        self.delta
    }

    /// Number of differentials built.
    pub fn stages(&self) -> usize {
        self.collapsed.len()
    }

    /// Ranks of the free stages F_0..F_stages.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Collapsed differentials: collapsed()[k] is the image of D_{k+1} under
    /// the augmentation of every slot.
    pub fn collapsed(&self) -> &[SparseMatrix] {
        &self.collapsed
    }

    /// Tor of the trivial module in degrees 0..=q_max from the collapsed
    /// complex; requires stages >= q_max + 1.
    pub fn tor(
        &self,
        ring: &CoefficientRing,
        q_max: u8,
    ) -> Result<Vec<HomologyGroup>, TorError> {
        let q_max = q_max as usize;
        assert!(
            self.collapsed.len() > q_max,
            "resolution too short for degree {q_max}"
        );
        let dims = self.ranks[0..=q_max + 1].to_vec();
        let mut groups = complex_homology(&dims, &self.collapsed[0..=q_max], ring)?;
        groups.truncate(q_max + 1);
        Ok(groups)
    }
}

/// Tor of the trivial module by a certified free resolution.
pub fn tor_resolution(
    algebra: &Algebra,
    ring: &CoefficientRing,
    q_max: u8,
    budget: &Budget,
) -> Result<TorReport, TorError> {
    let res = build_resolution(algebra, ring.delta_lift(), q_max + 1, budget)?;
    let groups = res.tor(ring, q_max)?;
    Ok(TorReport {
        algebra: algebra.id(),
        ring: ring.kind.to_string(),
        delta: ring.delta,
        q_max,
        groups,
        method: TorMethod::MinimalResolution,
    })
}

/// A chain map between two resolutions lifted over the quotient onto the
/// group algebra, recorded through its augmentation collapse.
pub struct ResolutionLift {
    /// collapsed[k] has target.ranks[k] rows and source.ranks[k] columns.
    pub collapsed: Vec<SparseMatrix>,
}

/// Lifts the quotient homomorphism to a chain map between the two
/// resolutions, solving each stage inside the exact image lattice of the
/// target differential. Exactness of the target resolution guarantees a
/// solution exists; failure to find one is reported as a certification
/// error rather than papered over.
pub fn lift_over_quotient(
    source: &FreeResolution,
    target: &FreeResolution,
    source_alg: &Algebra,
    target_alg: &Algebra,
) -> Result<ResolutionLift, TorError> {
    assert_eq!(source.algebra, source_alg.id());
    assert_eq!(target.algebra, target_alg.id());
    assert_eq!(
        Some(target.algebra),
        source.algebra.quotient_target(),
        "lift requires the designated quotient target"
    );
    assert_eq!(source.delta, target.delta, "deltas must match");
    let k_max = source.stages().min(target.stages());
    let tgt_ops = LeftMult::build(target_alg, target.delta)?;
    // The quotient on algebra coordinates: full-propagation elements map to
    // their group image, deficient diagrams die.
    let phi0: Vec<Option<u32>> = (0..source.dim as u32)
        .map(|i| source_alg.full_prop_image(i))
        .collect();

    // Slot images: ys[k][j] = phi_k(basis of slot j) in F_k of the target.
    let unit_img = IntCol::from_entries(vec![(target_alg.unit_index(), 1)]);
    let mut ys: Vec<Vec<IntCol>> = vec![vec![unit_img]];
    let mut collapsed = vec![collapse(&ys[0], 1, target.dim, &target.full_prop)];

    for k in 1..=k_max {
        // Tracked echelon of the target differential D_k, histories in the
        // domain, so membership tests come with witnesses.
        let ambient = target.ranks[k - 1] * target.dim;
        let mut span = IntEchelon::new(ambient, true);
        let mut domain_index = 0u32;
        for g in &target.generators[k - 1] {
            for x in 0..target.dim {
                span.add(
                    tgt_ops.apply(x, g),
                    Some(IntCol::from_entries(vec![(domain_index, 1)])),
                );
                domain_index += 1;
            }
        }
        let mut stage_ys = Vec::with_capacity(source.generators[k - 1].len());
        for gen in &source.generators[k - 1] {
            let image = apply_phi(gen, &ys[k - 1], &phi0, &tgt_ops, source.dim);
            let y = span.solve_in_span(image).ok_or_else(|| TorError::Certification {
                stage: k,
                detail: "chain lift has no integral preimage in the target differential".into(),
            })?;
            stage_ys.push(y);
        }
        collapsed.push(collapse(
            &stage_ys,
            target.ranks[k],
            target.dim,
            &target.full_prop,
        ));
        ys.push(stage_ys);
    }

    Ok(ResolutionLift { collapsed })
}

/// phi_k applied to a slot-major vector: each coordinate (slot t, basis x)
/// contributes its coefficient times phi(x) * ys_prev[t].
fn apply_phi(
    v: &IntCol,
    ys_prev: &[IntCol],
    phi0: &[Option<u32>],
    tgt_ops: &LeftMult,
    src_dim: usize,
) -> IntCol {
    let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
    for (r, c) in v.big_entries() {
        let slot = r as usize / src_dim;
        let x = r as usize % src_dim;
        let Some(gx) = phi0[x] else { continue };
        let w = tgt_ops.apply(gx as usize, &ys_prev[slot]);
        for (rr, vv) in w.big_entries() {
            *acc.entry(rr).or_insert_with(BigInt::zero) += &c * vv;
        }
    }
    IntCol::from_big_entries(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFamily;
    use crate::exactla::homology::check_complex;
    use crate::exactla::{homology_induced_map, MapClass};

    use super::super::bar::tor_bar;

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    /// The cyclic group algebra resolves with rank one at every stage, and
    /// the collapse alternates between zero and multiplication by n.
    #[test]
    fn cyclic_resolution_is_periodic_rank_one() {
        let a = alg(AlgebraFamily::GroupAlgebraCyclic, 5);
        let res = build_resolution(&a, 0, 6, &Budget::default()).unwrap();
        assert_eq!(res.ranks(), &[1usize; 7]);
        for (k, d) in res.collapsed().iter().enumerate() {
            if k % 2 == 0 {
                assert!(d.is_zero(), "odd differentials collapse to zero");
            } else {
                assert_eq!(d.entry(0, 0), BigInt::from(5));
            }
        }
    }

    #[test]
    fn collapsed_complexes_square_to_zero() {
        let ring = CoefficientRing::integers(0);
        // Partition stays at n = 2: at delta = 0 the augmentation ideal of
        // P_3 multiplies to almost nothing, so its syzygy ranks grow by a
        // factor near dim A per stage and the integral route is infeasible.
        for (family, n) in [
            (AlgebraFamily::JonesAnnular, 3),
            (AlgebraFamily::Partition, 2),
            (AlgebraFamily::GroupAlgebraSymmetric, 3),
        ] {
            let a = alg(family, n);
            let res = build_resolution(&a, 0, 4, &Budget::default()).unwrap();
            for k in 0..res.stages() - 1 {
                check_complex(&res.collapsed()[k], &res.collapsed()[k + 1], &ring).unwrap();
            }
        }
    }

    /// Independent routes must agree: the collapsed resolution computes the
    /// same Tor groups as the reduced bar complex.
    #[test]
    fn resolution_agrees_with_bar() {
        let rings = [
            CoefficientRing::integers(0),
            CoefficientRing::prime_field(2, 0).unwrap(),
            CoefficientRing::prime_field(3, 0).unwrap(),
            CoefficientRing::rationals(0),
            CoefficientRing::modular(4, 0).unwrap(),
        ];
        for (family, n, q_max) in [
            (AlgebraFamily::JonesAnnular, 3, 3u8),
            (AlgebraFamily::Partition, 2, 3),
            (AlgebraFamily::TemperleyLieb, 3, 3),
            (AlgebraFamily::GroupAlgebraSymmetric, 3, 2),
        ] {
            let a = alg(family, n);
            for ring in &rings {
                let bar = tor_bar(&a, ring, q_max, &Budget::default()).unwrap();
                let res = tor_resolution(&a, ring, q_max, &Budget::default()).unwrap();
                assert_eq!(
                    bar.groups, res.groups,
                    "{} over {} delta 0",
                    a.id(),
                    ring.kind
                );
            }
        }
    }

    #[test]
    fn resolution_handles_nonzero_delta() {
        let a = alg(AlgebraFamily::JonesAnnular, 4);
        let ring = CoefficientRing::prime_field(2, 1).unwrap();
        let bar = tor_bar(&a, &ring, 2, &Budget::default()).unwrap();
        let res = tor_resolution(&a, &ring, 2, &Budget::default()).unwrap();
        assert_eq!(bar.groups, res.groups);
    }

    /// The lifted chain map commutes with the collapsed differentials and
    /// induces an isomorphism for the odd annular quotient.
    #[test]
    fn lift_induces_isomorphisms_for_odd_annular() {
        let src = alg(AlgebraFamily::JonesAnnular, 3);
        let tgt = alg(AlgebraFamily::GroupAlgebraCyclic, 3);
        let q_max = 3u8;
        let res_s = build_resolution(&src, 0, q_max + 1, &Budget::default()).unwrap();
        let res_t = build_resolution(&tgt, 0, q_max + 1, &Budget::default()).unwrap();
        let lift = lift_over_quotient(&res_s, &res_t, &src, &tgt).unwrap();
        let ring = CoefficientRing::integers(0);
        let zs = SparseMatrix::zero(0, 1);
        for q in 0..=q_max as usize {
            let ds_q = if q == 0 { &zs } else { &res_s.collapsed()[q - 1] };
            let dt_q = if q == 0 { &zs } else { &res_t.collapsed()[q - 1] };
            let f_prev = if q == 0 {
                SparseMatrix::identity(0)
            } else {
                lift.collapsed[q - 1].clone()
            };
            let out = homology_induced_map(
                (ds_q, &res_s.collapsed()[q]),
                (dt_q, &res_t.collapsed()[q]),
                (&f_prev, &lift.collapsed[q], &lift.collapsed[q + 1]),
                &ring,
            )
            .unwrap();
            assert_eq!(out.class, MapClass::Isomorphism, "degree {q}");
        }
    }
}
