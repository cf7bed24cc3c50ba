//! Maps induced on Tor by the quotient onto the group algebra.
//!
//! Each degree is classified as an isomorphism, a surjection that is not
//! injective, or neither, and the verdict measures the classifications
//! against the comparison range the algebra is entitled to. Two routes
//! produce the per-degree maps. Degrees whose tuple spaces stay small are
//! computed explicitly on the reduced bar complexes of both algebras, with
//! the chain map sending a tuple of ideal basis vectors to the tuple of
//! their images. Degrees beyond the cap go through certified free
//! resolutions and the lifted chain map between them; wherever both routes
//! run, their groups and classifications are required to agree. Modular
//! coefficients are transferred from an integral run degree by degree, see
//! `modular_report`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::algebra::{Algebra, AlgebraFamily, AlgebraId};
use crate::budget::Budget;
use crate::exactla::homology::divisor_chain;
use crate::exactla::{
    homology_induced_map, CoefficientRing, HomologyGroup, MapClass, RingKind, SparseMatrix,
    SparseVec,
};

use super::augideal::quotient_aug_images;
use super::bar::BarComplex;
use super::resolution::{build_resolution, lift_over_quotient};
use super::TorError;

/// Largest tuple count the explicit route materializes per degree; beyond
/// this the resolution route takes over even when the budget would allow
/// the enumeration.
pub(crate) const EXPLICIT_CAP: u64 = 500_000;

/// How one degree of the induced map was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapRoute {
    /// Materialized bar differentials and the tuple-wise chain map.
    Explicit,
    /// Collapsed free resolutions and the lifted chain map.
    ResolutionCollapse,
    /// Classification transferred from an integral run by universal
    /// coefficients; no matrix is produced.
    IntegralLift,
}

/// A matrix in the reported generator bases, entries as decimal strings in
/// column-major order.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixData {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

impl MatrixData {
    fn from_matrix(m: &SparseMatrix) -> Self {
        let mut entries = Vec::new();
        for c in 0..m.cols() {
            for (r, v) in m.column(c) {
                entries.push((*r as usize, c, v.to_string()));
            }
        }
        MatrixData {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }
}

/// The induced map in one degree.
#[derive(Clone, Debug, Serialize)]
pub struct InducedDegree {
    pub q: u8,
    pub source_group: HomologyGroup,
    pub target_group: HomologyGroup,
    pub classification: MapClass,
    pub route: MapRoute,
    pub matrix: Option<MatrixData>,
}

/// The degrees in which the stable comparison promises an isomorphism or a
/// surjection. Both bounds are already intersected with the computed range;
/// degrees outside them are reported but never gate the verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimedRange {
    pub iso_through: Option<u8>,
    pub surjective_at: Option<u8>,
}

impl ClaimedRange {
    pub fn none() -> Self {
        ClaimedRange {
            iso_through: None,
            surjective_at: None,
        }
    }

    /// Whether the claim says anything about degree q.
    pub fn constrains(&self, q: u8) -> bool {
        self.iso_through.is_some_and(|t| q <= t) || self.surjective_at == Some(q)
    }

    /// Whether a classification at degree q is consistent with the claim.
    pub fn satisfied_by(&self, q: u8, class: MapClass) -> bool {
        let iso_ok =
            !self.iso_through.is_some_and(|t| q <= t) || class == MapClass::Isomorphism;
        let surj_ok = self.surjective_at != Some(q) || class != MapClass::Neither;
        iso_ok && surj_ok
    }
}

/// Per-degree classifications of the induced map, the range in which they
/// were required to be isomorphisms or surjections, and whether they were.
#[derive(Clone, Debug, Serialize)]
pub struct InducedMapReport {
    pub source: AlgebraId,
    pub target: AlgebraId,
    pub ring: String,
    pub delta: i64,
    pub q_max: u8,
    pub claimed: ClaimedRange,
    pub degrees: Vec<InducedDegree>,
    pub verdict: bool,
}

impl InducedMapReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// The comparison range the stable-isomorphism statements grant this
/// algebra, clipped to degrees 0..=q_max. Partition algebras are compared
/// through roughly the first n - 2 degrees; annular algebras of even n at a
/// non-unit delta through roughly the first n/2 - 2; annular algebras of
/// odd n, or of any n when delta is a unit, in every degree. Other families
/// carry no claim and their reports are informational.
pub fn natural_claim(id: AlgebraId, ring: &CoefficientRing, q_max: u8) -> ClaimedRange {
    match id.family {
        AlgebraFamily::Partition => stable_range(id.n as i64 - 3, id.n as i64 - 2, q_max),
        AlgebraFamily::JonesAnnular => {
            if id.n % 2 == 1 || ring.delta_is_unit() {
                ClaimedRange {
                    iso_through: Some(q_max),
                    surjective_at: None,
                }
            } else {
                let half = id.n as i64 / 2;
                stable_range(half - 3, half - 2, q_max)
            }
        }
        _ => ClaimedRange::none(),
    }
}

fn stable_range(iso_through: i64, surjective_at: i64, q_max: u8) -> ClaimedRange {
    ClaimedRange {
        iso_through: (iso_through >= 0).then(|| iso_through.min(q_max as i64) as u8),
        surjective_at: (0..=q_max as i64)
            .contains(&surjective_at)
            .then_some(surjective_at as u8),
    }
}

/// Induced map from Tor over `source` to Tor over its designated group
/// algebra quotient, measured against the natural comparison range.
pub fn induced_tor_map(
    source: &Algebra,
    ring: &CoefficientRing,
    q_max: u8,
    budget: &Budget,
) -> Result<InducedMapReport, TorError> {
    let target_id = source.id().quotient_target().ok_or(TorError::NoQuotient {
        from: source.id(),
        onto: source.id(),
    })?;
    let target = Algebra::new(target_id)?;
    let claim = natural_claim(source.id(), ring, q_max);
    induced_with_claim(source, &target, ring, q_max, claim, budget)
}

/// Induced map between two augmented algebras along the quotient, measured
/// against an explicit claim. The target must be the designated quotient of
/// the source, except that a one-dimensional target (the coefficients
/// themselves, reached through the augmentation) is always accepted on the
/// explicit route.
pub fn induced_with_claim(
    source: &Algebra,
    target: &Algebra,
    ring: &CoefficientRing,
    q_max: u8,
    claim: ClaimedRange,
    budget: &Budget,
) -> Result<InducedMapReport, TorError> {
    if let RingKind::ModularRing(m) = ring.kind {
        return modular_report(source, target, ring, m, q_max, claim, budget);
    }
    let images = quotient_aug_images(source, target)?;
    let m_src = source.dim() - 1;
    let m_tgt = target.dim() - 1;
    let cap = budget.max_tuples.min(EXPLICIT_CAP);
    let mut explicit_top: i64 = -1;
    for q in 0..=q_max {
        let within = |m: usize| pow_checked(m as u64, q as u32 + 1).is_some_and(|t| t <= cap);
        if within(m_src) && within(m_tgt) {
            explicit_top = q as i64;
        } else {
            break;
        }
    }

    let mut degrees: Vec<InducedDegree> = Vec::with_capacity(q_max as usize + 1);
    if explicit_top >= 0 {
        let e_top = explicit_top as u8;
        let sbar = BarComplex::build(source, ring, e_top, budget)?;
        let tbar = BarComplex::build(target, ring, e_top, budget)?;
        let mut sd_q = SparseMatrix::zero(0, 1);
        let mut td_q = SparseMatrix::zero(0, 1);
        let mut f_prev = SparseMatrix::identity(0);
        let mut f_q = chain_map_matrix(&images, m_src, m_tgt, 0);
        for q in 0..=e_top {
            let sd_q1 = sbar.differential(source, q + 1);
            let td_q1 = tbar.differential(target, q + 1);
            let f_next = chain_map_matrix(&images, m_src, m_tgt, q + 1);
            let out = homology_induced_map(
                (&sd_q, &sd_q1),
                (&td_q, &td_q1),
                (&f_prev, &f_q, &f_next),
                ring,
            )?;
            degrees.push(InducedDegree {
                q,
                source_group: out.source,
                target_group: out.target,
                classification: out.class,
                route: MapRoute::Explicit,
                matrix: Some(MatrixData::from_matrix(&out.matrix)),
            });
            sd_q = sd_q1;
            td_q = td_q1;
            f_prev = std::mem::replace(&mut f_q, f_next);
        }
    }

    if explicit_top < q_max as i64 {
        // The remaining degrees need the resolution route, which lifts the
        // designated quotient; the augmentation onto a one-dimensional
        // target has no such lift here.
        if Some(target.id()) != source.id().quotient_target() {
            return Err(TorError::NoQuotient {
                from: source.id(),
                onto: target.id(),
            });
        }
        let delta = ring.delta_lift();
        let res_s = build_resolution(source, delta, q_max + 1, budget)?;
        let res_t = build_resolution(target, delta, q_max + 1, budget)?;
        let lift = lift_over_quotient(&res_s, &res_t, source, target)?;
        let boundary = SparseMatrix::zero(0, 1);
        for q in 0..=q_max {
            let qi = q as usize;
            let ds_q = if qi == 0 { &boundary } else { &res_s.collapsed()[qi - 1] };
            let dt_q = if qi == 0 { &boundary } else { &res_t.collapsed()[qi - 1] };
            let f_prev = if qi == 0 {
                SparseMatrix::identity(0)
            } else {
                lift.collapsed[qi - 1].clone()
            };
            let out = homology_induced_map(
                (ds_q, &res_s.collapsed()[qi]),
                (dt_q, &res_t.collapsed()[qi]),
                (&f_prev, &lift.collapsed[qi], &lift.collapsed[qi + 1]),
                ring,
            )?;
            if (q as i64) <= explicit_top {
                // Overlap degrees were already computed explicitly; the two
                // routes must tell the same story.
                let seen = &degrees[qi];
                if seen.classification != out.class
                    || seen.source_group != out.source
                    || seen.target_group != out.target
                {
                    return Err(TorError::Certification {
                        stage: qi,
                        detail: format!(
                            "bar route and resolution route disagree at degree {q}: \
                             {} vs {}",
                            seen.classification, out.class
                        ),
                    });
                }
            } else {
                degrees.push(InducedDegree {
                    q,
                    source_group: out.source,
                    target_group: out.target,
                    classification: out.class,
                    route: MapRoute::ResolutionCollapse,
                    matrix: Some(MatrixData::from_matrix(&out.matrix)),
                });
            }
        }
    }

    let verdict = evaluate(&claim, q_max, &degrees);
    Ok(InducedMapReport {
        source: source.id(),
        target: target.id(),
        ring: ring.kind.to_string(),
        delta: ring.delta,
        q_max,
        claimed: claim,
        degrees,
        verdict,
    })
}

/// The chain map in degree k: a tuple of ideal basis vectors maps to the
/// tuple of their images, or to zero as soon as one slot dies.
fn chain_map_matrix(
    images: &[Option<u32>],
    m_src: usize,
    m_tgt: usize,
    k: u8,
) -> SparseMatrix {
    let cols = pow_checked(m_src as u64, k as u32).expect("explicit degree within cap") as usize;
    let rows = pow_checked(m_tgt as u64, k as u32).expect("target tuples fit") as usize;
    let mut col_vecs: Vec<SparseVec> = Vec::with_capacity(cols);
    for t in 0..cols as u64 {
        let mut rest = t;
        let mut place = 1u64;
        let mut acc = 0u64;
        let mut alive = true;
        for _ in 0..k {
            let digit = (rest % m_src as u64) as usize;
            let Some(g) = images[digit] else {
                alive = false;
                break;
            };
            acc += g as u64 * place;
            place *= m_tgt as u64;
            rest /= m_src as u64;
        }
        col_vecs.push(if alive {
            vec![(acc as u32, BigInt::one())]
        } else {
            SparseVec::new()
        });
    }
    SparseMatrix::from_columns(rows, col_vecs)
}

fn pow_checked(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

fn evaluate(claim: &ClaimedRange, q_max: u8, degrees: &[InducedDegree]) -> bool {
    (0..=q_max).all(|q| {
        if !claim.constrains(q) {
            return true;
        }
        degrees
            .iter()
            .find(|d| d.q == q)
            .is_some_and(|d| claim.satisfied_by(q, d.classification))
    })
}

/// Modular coefficients from an integral run.
///
/// The coefficient sequence 0 -> H_q x Z/m -> H_q(Z/m) -> ann_m(H_{q-1}) -> 0
/// is natural in the complex, so an integral isomorphism in degrees q and
/// q - 1 forces an isomorphism mod m in degree q, and an integral surjection
/// in degree q together with an isomorphism in degree q - 1 forces a
/// surjection mod m; a surjection between finite groups of equal order is an
/// isomorphism. Degrees past the first one these rules cannot certify are
/// omitted from the report rather than guessed, which fails the verdict
/// whenever the claim still constrains them.
fn modular_report(
    source: &Algebra,
    target: &Algebra,
    ring: &CoefficientRing,
    m: u64,
    q_max: u8,
    claim: ClaimedRange,
    budget: &Budget,
) -> Result<InducedMapReport, TorError> {
    let zring = CoefficientRing::integers(ring.delta);
    let zrep = induced_with_claim(source, target, &zring, q_max, claim, budget)?;
    let mb = BigInt::from(m);
    let mut degrees = Vec::new();
    for (qi, zq) in zrep.degrees.iter().enumerate() {
        let prev = if qi == 0 { None } else { Some(&zrep.degrees[qi - 1]) };
        if prev.is_some_and(|d| d.classification != MapClass::Isomorphism) {
            break;
        }
        let source_group = modular_group(&zq.source_group, prev.map(|d| &d.source_group), &mb);
        let target_group = modular_group(&zq.target_group, prev.map(|d| &d.target_group), &mb);
        let classification = match zq.classification {
            MapClass::Isomorphism => MapClass::Isomorphism,
            MapClass::SurjectiveNotInjective => {
                if group_order(&source_group) == group_order(&target_group) {
                    MapClass::Isomorphism
                } else {
                    MapClass::SurjectiveNotInjective
                }
            }
            MapClass::Neither => break,
        };
        degrees.push(InducedDegree {
            q: zq.q,
            source_group,
            target_group,
            classification,
            route: MapRoute::IntegralLift,
            matrix: None,
        });
    }
    let verdict = evaluate(&claim, q_max, &degrees);
    Ok(InducedMapReport {
        source: source.id(),
        target: target.id(),
        ring: ring.kind.to_string(),
        delta: ring.delta,
        q_max,
        claimed: claim,
        degrees,
        verdict,
    })
}

/// H_q with Z/m coefficients from the integral groups in degrees q and
/// q - 1: each free summand contributes Z/m, and each cyclic summand of
/// order t in either degree contributes Z/gcd(t, m).
fn modular_group(h: &HomologyGroup, prev: Option<&HomologyGroup>, m: &BigInt) -> HomologyGroup {
    let mut orders: Vec<BigInt> = vec![m.clone(); h.free_rank];
    orders.extend(h.torsion.iter().map(|t| t.gcd(m)));
    if let Some(p) = prev {
        orders.extend(p.torsion.iter().map(|t| t.gcd(m)));
    }
    HomologyGroup {
        free_rank: 0,
        torsion: divisor_chain(orders),
    }
}

fn group_order(h: &HomologyGroup) -> BigInt {
    debug_assert_eq!(h.free_rank, 0);
    h.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFamily;
    use crate::torlab::bar::tor_bar;

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    #[test]
    fn natural_claim_matches_the_stable_ranges() {
        let z = CoefficientRing::integers(0);
        let id = |f, n| AlgebraId::new(f, n);

        let c = natural_claim(id(AlgebraFamily::Partition, 2), &z, 3);
        assert_eq!((c.iso_through, c.surjective_at), (None, Some(0)));
        let c = natural_claim(id(AlgebraFamily::Partition, 5), &z, 10);
        assert_eq!((c.iso_through, c.surjective_at), (Some(2), Some(3)));
        let c = natural_claim(id(AlgebraFamily::Partition, 5), &z, 2);
        assert_eq!((c.iso_through, c.surjective_at), (Some(2), None));

        // Odd annular: every degree. Even annular at unit delta: the same.
        let c = natural_claim(id(AlgebraFamily::JonesAnnular, 7), &z, 4);
        assert_eq!((c.iso_through, c.surjective_at), (Some(4), None));
        let c = natural_claim(
            id(AlgebraFamily::JonesAnnular, 4),
            &CoefficientRing::prime_field(2, 1).unwrap(),
            2,
        );
        assert_eq!((c.iso_through, c.surjective_at), (Some(2), None));

        // Even annular at a non-unit delta: the halved stable range.
        let c = natural_claim(id(AlgebraFamily::JonesAnnular, 4), &z, 2);
        assert_eq!((c.iso_through, c.surjective_at), (None, Some(0)));
        let c = natural_claim(id(AlgebraFamily::JonesAnnular, 8), &z, 4);
        assert_eq!((c.iso_through, c.surjective_at), (Some(1), Some(2)));
        let c = natural_claim(id(AlgebraFamily::JonesAnnular, 2), &z, 4);
        assert_eq!((c.iso_through, c.surjective_at), (None, None));

        let c = natural_claim(id(AlgebraFamily::TemperleyLieb, 4), &z, 4);
        assert_eq!((c.iso_through, c.surjective_at), (None, None));
    }

    #[test]
    fn partition_three_onto_symmetric_over_f2() {
        let p3 = alg(AlgebraFamily::Partition, 3);
        let f2 = CoefficientRing::prime_field(2, 0).unwrap();
        let rep = induced_tor_map(&p3, &f2, 1, &Budget::default()).unwrap();
        assert_eq!(rep.claimed.iso_through, Some(0));
        assert_eq!(rep.claimed.surjective_at, Some(1));
        assert_eq!(rep.degrees[0].classification, MapClass::Isomorphism);
        assert_ne!(rep.degrees[1].classification, MapClass::Neither);
        assert!(rep.degrees.iter().all(|d| d.route == MapRoute::Explicit));
        assert!(rep.verdict);
    }

    #[test]
    fn jones_three_integral_maps_are_isomorphisms() {
        let j3 = alg(AlgebraFamily::JonesAnnular, 3);
        let z = CoefficientRing::integers(0);
        let rep = induced_tor_map(&j3, &z, 3, &Budget::default()).unwrap();
        assert!(rep.verdict);
        assert_eq!(rep.degrees.len(), 4);
        for d in &rep.degrees {
            assert_eq!(d.classification, MapClass::Isomorphism, "degree {}", d.q);
            assert_eq!(d.route, MapRoute::Explicit);
            assert!(d.matrix.is_some());
        }
        assert_eq!(rep.degrees[1].source_group.torsion, vec![BigInt::from(3)]);
        assert_eq!(rep.degrees[1].target_group.torsion, vec![BigInt::from(3)]);
        let m = rep.degrees[1].matrix.as_ref().unwrap();
        assert_eq!((m.rows, m.cols), (1, 1));
    }

    #[test]
    fn jones_four_with_unit_delta_is_isomorphic_everywhere() {
        let j4 = alg(AlgebraFamily::JonesAnnular, 4);
        let f2 = CoefficientRing::prime_field(2, 1).unwrap();
        let rep = induced_tor_map(&j4, &f2, 2, &Budget::default()).unwrap();
        assert_eq!(rep.claimed.iso_through, Some(2));
        assert!(rep.verdict);
        assert!(rep
            .degrees
            .iter()
            .all(|d| d.classification == MapClass::Isomorphism));
    }

    /// A small budget forces the upper degrees onto the resolution route;
    /// the answers must match an unconstrained explicit run.
    #[test]
    fn resolution_route_engages_and_agrees() {
        let j3 = alg(AlgebraFamily::JonesAnnular, 3);
        let z = CoefficientRing::integers(0);
        let full = induced_tor_map(&j3, &z, 3, &Budget::default()).unwrap();
        let split = induced_tor_map(&j3, &z, 3, &Budget::new(2000)).unwrap();
        assert!(split.verdict);
        // 11^4 tuples overrun a budget of 2000, so degree 3 switches routes
        // while degrees 0..=2 stay explicit and get cross-checked.
        for q in 0..=2 {
            assert_eq!(split.degrees[q].route, MapRoute::Explicit);
        }
        assert_eq!(split.degrees[3].route, MapRoute::ResolutionCollapse);
        for (a, b) in full.degrees.iter().zip(&split.degrees) {
            assert_eq!(a.classification, b.classification, "degree {}", a.q);
            assert_eq!(a.source_group, b.source_group, "degree {}", a.q);
            assert_eq!(a.target_group, b.target_group, "degree {}", a.q);
        }
        assert!(split.degrees[3].matrix.is_some());
    }

    /// The transferred modular groups must agree with a direct bar
    /// computation over Z/m.
    #[test]
    fn modular_coefficients_transfer_from_the_integral_run() {
        let j3 = alg(AlgebraFamily::JonesAnnular, 3);
        let z9 = CoefficientRing::modular(9, 0).unwrap();
        let rep = induced_tor_map(&j3, &z9, 2, &Budget::default()).unwrap();
        assert!(rep.verdict);
        let direct = tor_bar(&j3, &z9, 2, &Budget::default()).unwrap().groups;
        assert_eq!(rep.degrees.len(), 3);
        for d in &rep.degrees {
            assert_eq!(d.classification, MapClass::Isomorphism);
            assert_eq!(d.route, MapRoute::IntegralLift);
            assert!(d.matrix.is_none());
            assert_eq!(d.source_group, direct[d.q as usize], "degree {}", d.q);
        }
        assert_eq!(rep.degrees[0].source_group.torsion, vec![BigInt::from(9)]);
        assert_eq!(rep.degrees[1].source_group.torsion, vec![BigInt::from(3)]);
    }

    /// The augmentation quotient onto the coefficients themselves composes
    /// with the group-algebra quotient, at the chain level and on homology.
    #[test]
    fn augmentation_target_composes_functorially() {
        let p3 = alg(AlgebraFamily::Partition, 3);
        let s3 = alg(AlgebraFamily::GroupAlgebraSymmetric, 3);
        let c1 = alg(AlgebraFamily::GroupAlgebraCyclic, 1);
        let f2 = CoefficientRing::prime_field(2, 0).unwrap();
        let budget = Budget::default();

        let img_ps = quotient_aug_images(&p3, &s3).unwrap();
        let img_sr = quotient_aug_images(&s3, &c1).unwrap();
        let img_pr = quotient_aug_images(&p3, &c1).unwrap();
        let (mp, ms, mr) = (p3.dim() - 1, s3.dim() - 1, c1.dim() - 1);
        for k in 0..=2u8 {
            let f_ps = chain_map_matrix(&img_ps, mp, ms, k);
            let f_sr = chain_map_matrix(&img_sr, ms, mr, k);
            let f_pr = chain_map_matrix(&img_pr, mp, mr, k);
            assert_eq!(f_sr.mul(&f_ps), f_pr, "degree {k}");
        }

        let through = induced_with_claim(&s3, &c1, &f2, 1, ClaimedRange::none(), &budget)
            .unwrap();
        assert!(through.verdict);
        assert_eq!(through.degrees[0].classification, MapClass::Isomorphism);
        // H_1 of the symmetric group algebra is one-dimensional over F_2 and
        // dies in the coefficients.
        assert_eq!(through.degrees[1].source_group, HomologyGroup::free(1));
        assert_eq!(through.degrees[1].target_group, HomologyGroup::free(0));
        assert_eq!(
            through.degrees[1].classification,
            MapClass::SurjectiveNotInjective
        );
    }

    #[test]
    fn report_serializes_with_snake_case_tags() {
        let j3 = alg(AlgebraFamily::JonesAnnular, 3);
        let z = CoefficientRing::integers(0);
        let rep = induced_tor_map(&j3, &z, 1, &Budget::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
        assert_eq!(v["ring"], "Z");
        assert_eq!(v["verdict"], true);
        assert_eq!(v["claimed"]["iso_through"], 1);
        assert_eq!(v["degrees"][0]["route"], "explicit");
        assert_eq!(v["degrees"][0]["classification"], "isomorphism");
        assert!(v["degrees"][0]["matrix"].is_object());
    }
}
