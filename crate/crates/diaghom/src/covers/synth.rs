//! Idempotent generator synthesis for nonzero cover intersections, with full
//! certificate verification.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, AlgebraElement, AlgebraId};
use crate::diagrams::SetPartition;
use crate::exactla::CoefficientRing;

use super::ideals::{intersect_ideals, LeftIdealSpan};
use super::jones::{full_arc_diagram, is_innermost, pick_arc_anchor};
use super::partition::{all_detached_diagram, build_mu, build_nu};
use super::{CoverError, IdealSelector};

/// One right-multiplier in the retraction chain, or a closing scale step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum ConstructionStep {
    /// Multiply by the joiner diagram for primes `a'` and `b'`.
    JoinPrimes { a: u8, b: u8 },
    /// Multiply by the detacher diagram for `a'`, rerouting through `b`.
    DetachPrime { a: u8, b: u8 },
    /// Multiply by the arc installer anchored at `a`.
    InstallArc { a: u8 },
    /// Start from the diagram whose arcs tile both rows.
    FullArcBase,
    /// Start from the all-singletons diagram.
    AllDetachedBase,
    /// Scale by the inverse of delta to the `k`-th power.
    ScaleByDeltaInverse { k: u32 },
}

/// A verified idempotent generator for a cover intersection.
#[derive(Debug, Clone)]
pub struct IdempotentCertificate {
    pub algebra: AlgebraId,
    pub selector: IdealSelector,
    pub generator: AlgebraElement,
    pub chain: Vec<ConstructionStep>,
}

impl IdempotentCertificate {
    /// Serializes with coefficients rendered as exact rational strings.
    pub fn to_json(&self, algebra: &Algebra) -> serde_json::Value {
        let generator: Vec<serde_json::Value> = self
            .generator
            .iter()
            .map(|(i, c)| {
                serde_json::json!({
                    "diagram": algebra.basis_name(i),
                    "coeff": c.to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "algebra": self.algebra,
            "subset": self.selector.to_string(),
            "generator": generator,
            "chain": self.chain,
        })
    }
}

/// The outcome of trying to generate a cover intersection.
#[derive(Debug, Clone)]
pub enum Synthesis {
    /// The intersection is the zero ideal.
    Zero,
    /// A generator was constructed and passed every check.
    Certified(Box<IdempotentCertificate>),
    /// No generator exists by this construction over the given ring.
    Impossible { reason: String },
}

struct ChainPlan {
    steps: Vec<ConstructionStep>,
    diagrams: Vec<SetPartition>,
    /// Present for the scaled routes: the base diagram and the delta power.
    scaled_base: Option<(SetPartition, u32)>,
}

fn plan_partition_chain(
    n: usize,
    singles: &BTreeSet<u8>,
    pairs: &BTreeSet<(u8, u8)>,
    ring: &CoefficientRing,
) -> Result<Result<ChainPlan, String>, CoverError> {
    if singles.len() == n {
        // Every prime detached: right multiplication by any chain diagram
        // would need a carrier outside the detached set. The base diagram
        // scales by delta to the n-th power instead.
        if !ring.delta_is_unit() {
            return Ok(Err(format!(
                "all {n} primes detached: generator needs delta invertible, \
                 but delta = {} is not a unit",
                ring.delta_lift()
            )));
        }
        let base = all_detached_diagram(n);
        let (sq, k) = base.compose(&base).expect("same strand count");
        debug_assert_eq!(sq, base);
        return Ok(Ok(ChainPlan {
            steps: vec![
                ConstructionStep::AllDetachedBase,
                ConstructionStep::ScaleByDeltaInverse { k },
            ],
            diagrams: Vec::new(),
            scaled_base: Some((base, k)),
        }));
    }

    let mut steps = Vec::new();
    let mut diagrams = Vec::new();
    for &(a, b) in pairs {
        steps.push(ConstructionStep::JoinPrimes { a, b });
        diagrams.push(build_nu(a, b, n)?);
    }
    let mut done: BTreeSet<u8> = BTreeSet::new();
    for &a in singles {
        let b = (1..=n as u8)
            .find(|lbl| *lbl != a && !done.contains(lbl))
            .expect("fewer than n labels detached");
        steps.push(ConstructionStep::DetachPrime { a, b });
        diagrams.push(build_mu(&done, pairs, a, b, n)?);
        done.insert(a);
    }
    Ok(Ok(ChainPlan { steps, diagrams, scaled_base: None }))
}

fn plan_jones_chain(
    n: usize,
    arcs: &BTreeSet<u8>,
    ring: &CoefficientRing,
) -> Result<Result<ChainPlan, String>, CoverError> {
    let mut anchors = Vec::new();
    let mut cur = arcs.clone();
    while let Some(a) = pick_arc_anchor(n, &cur) {
        anchors.push(a);
        cur.remove(&a);
    }
    if cur.is_empty() {
        let mut steps = Vec::new();
        let mut diagrams = Vec::new();
        for &a in anchors.iter().rev() {
            steps.push(ConstructionStep::InstallArc { a });
            diagrams.push(super::jones::build_omega(a, n)?);
        }
        return Ok(Ok(ChainPlan { steps, diagrams, scaled_base: None }));
    }
    // The anchor chase only stalls at the start, on an arc set whose moral
    // support is the whole circle.
    debug_assert!(anchors.is_empty());
    if !ring.delta_is_unit() {
        return Ok(Err(format!(
            "arcs {:?} tile the circle: generator needs delta invertible, \
             but delta = {} is not a unit",
            arcs,
            ring.delta_lift()
        )));
    }
    let base = full_arc_diagram(n, arcs)?;
    let (sq, k) = base.compose(&base).expect("same strand count");
    debug_assert_eq!(sq, base);
    Ok(Ok(ChainPlan {
        steps: vec![ConstructionStep::FullArcBase, ConstructionStep::ScaleByDeltaInverse { k }],
        diagrams: Vec::new(),
        scaled_base: Some((base, k)),
    }))
}

/// Collapses arc labels that name the same edge; only possible on two
/// strands, where labels 1 and 2 both pin the edge between the two primes.
fn dedupe_arcs(n: usize, arcs: &BTreeSet<u8>) -> BTreeSet<u8> {
    if n == 2 && arcs.len() == 2 {
        let mut one = BTreeSet::new();
        one.insert(1);
        return one;
    }
    arcs.clone()
}

fn expected_zero(algebra: &Algebra, sel: &IdealSelector) -> bool {
    match sel {
        IdealSelector::Partition { singles, pairs } => {
            pairs.iter().any(|&(i, j)| singles.contains(&i) || singles.contains(&j))
        }
        IdealSelector::Jones { arcs } => {
            if arcs.is_empty() {
                return false;
            }
            let n = algebra.n();
            if n == 1 {
                // An edge needs two distinct vertices.
                return true;
            }
            !is_innermost(n, &dedupe_arcs(n, arcs))
        }
    }
}

fn evaluate_chain(
    algebra: &Algebra,
    plan: &ChainPlan,
    ring: &CoefficientRing,
) -> Result<AlgebraElement, CoverError> {
    if let Some((base, k)) = &plan.scaled_base {
        let idx = algebra
            .index_of(base)
            .ok_or_else(|| CoverError::BadIdeal("base diagram outside basis".into()))?;
        let delta = BigInt::from(ring.delta_lift());
        let coeff = BigRational::new(BigInt::one(), delta.pow(*k));
        return Ok(AlgebraElement::from_coeffs(algebra.id(), ring, vec![(idx, coeff)])?);
    }
    let mut idx = algebra.unit_index();
    let mut coeff = BigRational::one();
    let delta = BigInt::from(ring.delta_lift());
    for d in &plan.diagrams {
        let d_idx = algebra
            .index_of(d)
            .ok_or_else(|| CoverError::BadIdeal("chain diagram outside basis".into()))?;
        let (next, loops) = algebra.product_indices(idx, d_idx);
        // The retraction diagrams never close a loop; a nonzero power here
        // would be a construction bug and is caught by verification.
        coeff *= BigRational::from(delta.pow(loops as u32));
        idx = next;
    }
    Ok(AlgebraElement::from_coeffs(algebra.id(), ring, vec![(idx, coeff)])?)
}

fn verify_certificate(
    algebra: &Algebra,
    span: &LeftIdealSpan,
    sel: &IdealSelector,
    e: &AlgebraElement,
    ring: &CoefficientRing,
) -> Result<(), CoverError> {
    let fail = |check: &str| CoverError::CertificateFailed {
        subset: sel.to_string(),
        check: check.to_string(),
    };
    if e.is_zero() {
        return Err(fail("generator vanishes over this ring"));
    }
    if e.iter().any(|(i, _)| !span.contains_index(i)) {
        return Err(fail("generator lies outside the intersection"));
    }
    let e_sq = algebra.multiply(e, e, ring)?;
    if e_sq != *e {
        return Err(fail("generator is not idempotent"));
    }
    for &rho in span.basis() {
        let rho_el = algebra.basis_element(rho)?;
        let fixed = algebra.multiply(&rho_el, e, ring)?;
        if fixed != rho_el {
            return Err(fail("right action does not fix the intersection"));
        }
    }
    for x in 0..algebra.dim() as u32 {
        let x_el = algebra.basis_element(x)?;
        let prod = algebra.multiply(&x_el, e, ring)?;
        if prod.iter().any(|(i, _)| !span.contains_index(i)) {
            return Err(fail("left multiples escape the intersection"));
        }
    }
    Ok(())
}

/// Classifies the intersection selected by `sel` over `ring`: zero, certified
/// principal idempotent, or impossible for this construction. A returned
/// certificate has passed idempotence, retraction, and generation checks;
/// a verification failure surfaces as an error.
pub fn synthesize_idempotent(
    algebra: &Algebra,
    sel: &IdealSelector,
    ring: &CoefficientRing,
) -> Result<Synthesis, CoverError> {
    let tags = sel.tags();
    let span = intersect_ideals(algebra, &tags)?;

    let zero_predicted = expected_zero(algebra, sel);
    if span.is_zero() != zero_predicted {
        return Err(CoverError::DualRouteMismatch(format!(
            "span emptiness ({}) disagrees with the zero predicate ({}) for subset {}",
            span.is_zero(),
            zero_predicted,
            sel
        )));
    }
    if span.is_zero() {
        return Ok(Synthesis::Zero);
    }

    if sel.is_empty() {
        // Empty intersection convention: the whole algebra, generated by 1.
        let e = algebra.unit_element();
        return Ok(Synthesis::Certified(Box::new(IdempotentCertificate {
            algebra: algebra.id(),
            selector: sel.clone(),
            generator: e,
            chain: Vec::new(),
        })));
    }

    let plan = match sel {
        IdealSelector::Partition { singles, pairs } => {
            plan_partition_chain(algebra.n(), singles, pairs, ring)?
        }
        IdealSelector::Jones { arcs } => {
            plan_jones_chain(algebra.n(), &dedupe_arcs(algebra.n(), arcs), ring)?
        }
    };
    let plan = match plan {
        Ok(plan) => plan,
        Err(reason) => return Ok(Synthesis::Impossible { reason }),
    };

    let e = evaluate_chain(algebra, &plan, ring)?;
    verify_certificate(algebra, &span, sel, &e, ring)?;
    Ok(Synthesis::Certified(Box::new(IdempotentCertificate {
        algebra: algebra.id(),
        selector: sel.clone(),
        generator: e,
        chain: plan.steps,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFamily;
    use crate::covers::parse_subset_spec;

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    fn synth(a: &Algebra, spec: &str, ring: &CoefficientRing) -> Synthesis {
        let family = a.id().family.diagram_family().unwrap();
        let sel = parse_subset_spec(family, a.n(), spec).unwrap();
        synthesize_idempotent(a, &sel, ring).unwrap()
    }

    #[test]
    fn partition_singletons_certify_over_any_delta() {
        let a = alg(AlgebraFamily::Partition, 2);
        for delta in [0i64, 1, 2] {
            let ring = CoefficientRing::integers(delta);
            for spec in ["1", "2", "1-2"] {
                match synth(&a, spec, &ring) {
                    Synthesis::Certified(cert) => {
                        assert_eq!(cert.generator.support_len(), 1);
                    }
                    other => panic!("expected certificate for {spec}, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn partition_zero_intersections_are_detected() {
        let a = alg(AlgebraFamily::Partition, 3);
        let ring = CoefficientRing::integers(0);
        for spec in ["1,1-2", "2,1-2", "1,2,1-2", "3,1-3"] {
            match synth(&a, spec, &ring) {
                Synthesis::Zero => {}
                other => panic!("expected zero for {spec}, got {other:?}"),
            }
        }
        // Joined pairs not touching a detached label stay nonzero.
        match synth(&a, "3,1-2", &ring) {
            Synthesis::Certified(_) => {}
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn partition_full_detachment_needs_invertible_delta() {
        // Detaching every prime leaves an ideal that squares into delta
        // multiples of itself, so delta = 0 has no idempotent generator.
        let a = alg(AlgebraFamily::Partition, 2);
        match synth(&a, "1,2", &CoefficientRing::integers(0)) {
            Synthesis::Impossible { .. } => {}
            other => panic!("expected impossible, got {other:?}"),
        }
        match synth(&a, "1,2", &CoefficientRing::integers(1)) {
            Synthesis::Certified(cert) => {
                assert_eq!(
                    cert.chain,
                    vec![
                        ConstructionStep::AllDetachedBase,
                        ConstructionStep::ScaleByDeltaInverse { k: 2 }
                    ]
                );
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        let a3 = alg(AlgebraFamily::Partition, 3);
        match synth(&a3, "1,2,3", &CoefficientRing::integers(0)) {
            Synthesis::Impossible { .. } => {}
            other => panic!("expected impossible, got {other:?}"),
        }
        match synth(&a3, "1,2,3", &CoefficientRing::rationals(5)) {
            Synthesis::Certified(cert) => {
                assert_eq!(
                    cert.chain,
                    vec![
                        ConstructionStep::AllDetachedBase,
                        ConstructionStep::ScaleByDeltaInverse { k: 3 }
                    ]
                );
                let (_, c) = cert.generator.iter().next().unwrap();
                assert_eq!(c.to_string(), "1/125");
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        match synth(&a3, "1,2,3", &CoefficientRing::prime_field(2, 1).unwrap()) {
            Synthesis::Certified(_) => {}
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn jones_single_arc_certifies() {
        let a = alg(AlgebraFamily::JonesAnnular, 3);
        let ring = CoefficientRing::integers(0);
        for spec in ["1", "2", "3"] {
            match synth(&a, spec, &ring) {
                Synthesis::Certified(cert) => {
                    assert_eq!(cert.chain.len(), 1);
                    assert_eq!(cert.generator.support_len(), 1);
                    let (idx, c) = cert.generator.iter().next().unwrap();
                    assert!(c.is_one());
                    let d = a.diagram(idx).unwrap();
                    assert_eq!(d.propagating_number(), 1);
                }
                other => panic!("expected certificate for {spec}, got {other:?}"),
            }
        }
    }

    #[test]
    fn jones_adjacent_arcs_are_zero() {
        let a = alg(AlgebraFamily::JonesAnnular, 4);
        let ring = CoefficientRing::integers(0);
        match synth(&a, "1,2", &ring) {
            Synthesis::Zero => {}
            other => panic!("expected zero, got {other:?}"),
        }
        match synth(&a, "4,1", &ring) {
            Synthesis::Zero => {}
            other => panic!("expected zero, got {other:?}"),
        }
    }

    #[test]
    fn jones_alternating_arcs_need_invertible_delta() {
        let a = alg(AlgebraFamily::JonesAnnular, 4);
        match synth(&a, "1,3", &CoefficientRing::integers(0)) {
            Synthesis::Impossible { reason } => {
                assert!(reason.contains("delta"), "reason was {reason}");
            }
            other => panic!("expected impossible, got {other:?}"),
        }
        match synth(&a, "1,3", &CoefficientRing::integers(1)) {
            Synthesis::Certified(cert) => {
                assert_eq!(
                    cert.chain,
                    vec![
                        ConstructionStep::FullArcBase,
                        ConstructionStep::ScaleByDeltaInverse { k: 2 }
                    ]
                );
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        match synth(&a, "1,3", &CoefficientRing::prime_field(3, 5).unwrap()) {
            Synthesis::Certified(_) => {}
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn jones_two_strand_ideal_needs_invertible_delta() {
        let a = alg(AlgebraFamily::JonesAnnular, 2);
        match synth(&a, "1", &CoefficientRing::integers(0)) {
            Synthesis::Impossible { .. } => {}
            other => panic!("expected impossible, got {other:?}"),
        }
        match synth(&a, "1,2", &CoefficientRing::rationals(7)) {
            Synthesis::Certified(cert) => {
                let (_, c) = cert.generator.iter().next().unwrap();
                assert_eq!(c.to_string(), "1/7");
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn jones_nested_chain_certifies() {
        let a = alg(AlgebraFamily::JonesAnnular, 6);
        let ring = CoefficientRing::integers(0);
        match synth(&a, "1,3", &ring) {
            Synthesis::Certified(cert) => {
                // Anchor 3 peels first, so its installer is applied last.
                assert_eq!(
                    cert.chain,
                    vec![
                        ConstructionStep::InstallArc { a: 1 },
                        ConstructionStep::InstallArc { a: 3 }
                    ]
                );
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn certificate_json_shape() {
        let a = alg(AlgebraFamily::JonesAnnular, 3);
        let ring = CoefficientRing::integers(0);
        match synth(&a, "2", &ring) {
            Synthesis::Certified(cert) => {
                let json = cert.to_json(&a);
                assert_eq!(json["subset"], "2");
                assert_eq!(json["chain"][0]["op"], "install_arc");
                assert_eq!(json["chain"][0]["a"], 2);
                assert_eq!(json["generator"][0]["coeff"], "1");
                let text = json["generator"][0]["diagram"].as_str().unwrap();
                assert!(text.contains("'"), "diagram text missing primes: {text}");
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }
}
