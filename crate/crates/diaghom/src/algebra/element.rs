//! Elements of an algebra with ring-normalized coefficients, and the three
//! structural maps: multiplication, augmentation, and the quotient onto the
//! full-propagation group algebra.
//!
//! Coefficients are held as rationals so one element type serves every
//! coefficient ring. `normalize_coeff` pins each ring's canonical form:
//! integers must have denominator 1, modular values are reduced to 0..m with
//! denominators inverted, and zeros are never stored.

use super::context::Algebra;
use super::{AlgebraError, AlgebraId};
use crate::exactla::{CoefficientRing, RingKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Canonical form of a coefficient in the given ring: `None` means zero.
pub fn normalize_coeff(
    ring: &CoefficientRing,
    q: BigRational,
) -> Result<Option<BigRational>, AlgebraError> {
    match ring.kind {
        RingKind::Integers => {
            if q.is_zero() {
                Ok(None)
            } else if q.denom().is_one() {
                Ok(Some(q))
            } else {
                Err(AlgebraError::NotIntegral(q.to_string()))
            }
        }
        RingKind::Rationals => Ok(if q.is_zero() { None } else { Some(q) }),
        RingKind::PrimeField(m) | RingKind::ModularRing(m) => {
            let modulus = BigInt::from(m);
            let num = q.numer().mod_floor(&modulus);
            let den = q.denom().mod_floor(&modulus);
            let gcd = den.extended_gcd(&modulus);
            if !gcd.gcd.is_one() {
                return Err(AlgebraError::NotInvertible {
                    value: q.denom().to_string(),
                    modulus: m,
                });
            }
            let inv = gcd.x.mod_floor(&modulus);
            let value = (num * inv).mod_floor(&modulus);
            Ok(if value.is_zero() {
                None
            } else {
                Some(BigRational::from_integer(value))
            })
        }
    }
}

/// A finitely supported linear combination of basis elements. Zero
/// coefficients are never stored, so structural equality is equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra: AlgebraId,
    coeffs: BTreeMap<u32, BigRational>,
}

impl AlgebraElement {
    pub fn zero(algebra: AlgebraId) -> Self {
        AlgebraElement { algebra, coeffs: BTreeMap::new() }
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, index: u32) -> BigRational {
        self.coeffs.get(&index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    /// Builds from raw coefficient pairs, summing repeats and normalizing.
    pub fn from_coeffs(
        algebra: AlgebraId,
        ring: &CoefficientRing,
        pairs: impl IntoIterator<Item = (u32, BigRational)>,
    ) -> Result<Self, AlgebraError> {
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (i, c) in pairs {
            *acc.entry(i).or_insert_with(BigRational::zero) += c;
        }
        let mut coeffs = BTreeMap::new();
        for (i, c) in acc {
            if let Some(c) = normalize_coeff(ring, c)? {
                coeffs.insert(i, c);
            }
        }
        Ok(AlgebraElement { algebra, coeffs })
    }

    /// self += scale * other.
    pub fn add_scaled(
        &mut self,
        other: &AlgebraElement,
        scale: &BigRational,
        ring: &CoefficientRing,
    ) -> Result<(), AlgebraError> {
        if other.algebra != self.algebra {
            return Err(AlgebraError::AlgebraMismatch(self.algebra, other.algebra));
        }
        for (&i, c) in &other.coeffs {
            let sum = self.coeff(i) + scale * c;
            match normalize_coeff(ring, sum)? {
                Some(v) => {
                    self.coeffs.insert(i, v);
                }
                None => {
                    self.coeffs.remove(&i);
                }
            }
        }
        Ok(())
    }

    pub fn scaled(
        &self,
        scale: &BigRational,
        ring: &CoefficientRing,
    ) -> Result<AlgebraElement, AlgebraError> {
        let mut out = AlgebraElement::zero(self.algebra);
        out.add_scaled(self, scale, ring)?;
        Ok(out)
    }

    /// Renders the element against basis names, for reports and debugging.
    pub fn display_with(&self, algebra: &Algebra) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&i, c) in &self.coeffs {
            let name = algebra.basis_name(i);
            if c.is_one() {
                parts.push(name);
            } else {
                parts.push(format!("{c}*{name}"));
            }
        }
        parts.join(" + ")
    }
}

impl Algebra {
    pub fn zero_element(&self) -> AlgebraElement {
        AlgebraElement::zero(self.id())
    }

    pub fn basis_element(&self, index: u32) -> Result<AlgebraElement, AlgebraError> {
        if index as usize >= self.dim() {
            return Err(AlgebraError::IndexOutOfRange {
                algebra: self.id(),
                index,
                dim: self.dim(),
            });
        }
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, BigRational::one());
        Ok(AlgebraElement { algebra: self.id(), coeffs })
    }

    pub fn unit_element(&self) -> AlgebraElement {
        self.basis_element(self.unit_index()).expect("unit index is in range")
    }

    /// Bilinear product: basis pairs multiply to delta^e times a basis
    /// element, with e the loop exponent.
    pub fn multiply(
        &self,
        x: &AlgebraElement,
        y: &AlgebraElement,
        ring: &CoefficientRing,
    ) -> Result<AlgebraElement, AlgebraError> {
        if x.algebra != self.id() {
            return Err(AlgebraError::AlgebraMismatch(self.id(), x.algebra));
        }
        if y.algebra != self.id() {
            return Err(AlgebraError::AlgebraMismatch(self.id(), y.algebra));
        }
        let delta = BigRational::from_integer(BigInt::from(ring.delta_lift()));
        // Powers of delta up to the strand count, filled on demand.
        let mut delta_pow: Vec<Option<BigRational>> = vec![None; self.n() + 1];
        delta_pow[0] = Some(BigRational::one());
        let mut acc: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (&i, ci) in &x.coeffs {
            for (&j, cj) in &y.coeffs {
                let (k, e) = self.product_indices(i, j);
                let e = e as usize;
                if delta_pow[e].is_none() {
                    let mut p = BigRational::one();
                    for _ in 0..e {
                        p *= &delta;
                    }
                    delta_pow[e] = Some(p);
                }
                let term = ci * cj * delta_pow[e].as_ref().unwrap();
                *acc.entry(k).or_insert_with(BigRational::zero) += term;
            }
        }
        AlgebraElement::from_coeffs(self.id(), ring, acc)
    }

    /// The coefficient sum over full-propagation basis elements, reduced in
    /// the ring. Kills the ideal of deficient diagrams, so it is the algebra
    /// map onto R through the group-algebra augmentation.
    pub fn augmentation(
        &self,
        x: &AlgebraElement,
        ring: &CoefficientRing,
    ) -> Result<BigRational, AlgebraError> {
        if x.algebra != self.id() {
            return Err(AlgebraError::AlgebraMismatch(self.id(), x.algebra));
        }
        let mut sum = BigRational::zero();
        for (&i, c) in &x.coeffs {
            if self.full_prop_image(i).is_some() {
                sum += c;
            }
        }
        Ok(normalize_coeff(ring, sum)?.unwrap_or_else(BigRational::zero))
    }

    /// Image in the full-propagation quotient: deficient diagrams map to
    /// zero, and a full-propagation diagram maps to its permutation or
    /// rotation. Group-algebra elements pass through unchanged.
    pub fn quotient_map(
        &self,
        x: &AlgebraElement,
        ring: &CoefficientRing,
    ) -> Result<AlgebraElement, AlgebraError> {
        if x.algebra != self.id() {
            return Err(AlgebraError::AlgebraMismatch(self.id(), x.algebra));
        }
        let target = match self.id().quotient_target() {
            Some(t) => t,
            None => return Ok(x.clone()),
        };
        let pairs = x.coeffs.iter().filter_map(|(&i, c)| {
            self.full_prop_image(i).map(|g| (g, c.clone()))
        });
        AlgebraElement::from_coeffs(target, ring, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraFamily;
    use crate::diagrams::parse_set_partition;

    fn big(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn alg(family: AlgebraFamily, n: usize) -> Algebra {
        Algebra::new(AlgebraId::new(family, n)).unwrap()
    }

    fn diagram_element(a: &Algebra, text: &str) -> AlgebraElement {
        let d = parse_set_partition(text).unwrap();
        a.basis_element(a.index_of(&d).unwrap()).unwrap()
    }

    #[test]
    fn normalization_per_ring() {
        let z = CoefficientRing::integers(0);
        let q = CoefficientRing::rationals(0);
        let f5 = CoefficientRing::prime_field(5, 0).unwrap();
        let z6 = CoefficientRing::modular(6, 0).unwrap();

        assert_eq!(normalize_coeff(&z, big(7)).unwrap(), Some(big(7)));
        assert_eq!(normalize_coeff(&z, big(0)).unwrap(), None);
        assert!(normalize_coeff(&z, big(1) / big(2)).is_err());
        assert_eq!(normalize_coeff(&q, big(1) / big(2)).unwrap(), Some(big(1) / big(2)));
        assert_eq!(normalize_coeff(&f5, big(7)).unwrap(), Some(big(2)));
        assert_eq!(normalize_coeff(&f5, big(-1)).unwrap(), Some(big(4)));
        assert_eq!(normalize_coeff(&f5, big(10)).unwrap(), None);
        // 1/2 = 3 in F_5.
        assert_eq!(normalize_coeff(&f5, big(1) / big(2)).unwrap(), Some(big(3)));
        // 1/2 has no meaning mod 6.
        assert!(normalize_coeff(&z6, big(1) / big(2)).is_err());
        // 1/5 = 5 mod 6.
        assert_eq!(normalize_coeff(&z6, big(1) / big(5)).unwrap(), Some(big(5)));
    }

    #[test]
    fn unit_is_neutral() {
        let a = alg(AlgebraFamily::JonesAnnular, 3);
        let ring = CoefficientRing::integers(2);
        let one = a.unit_element();
        for i in 0..a.dim() as u32 {
            let x = a.basis_element(i).unwrap();
            assert_eq!(a.multiply(&x, &one, &ring).unwrap(), x);
            assert_eq!(a.multiply(&one, &x, &ring).unwrap(), x);
        }
    }

    #[test]
    fn cap_cup_squares_by_delta() {
        for (ring, expect_zero) in [
            (CoefficientRing::integers(0), true),
            (CoefficientRing::integers(3), false),
            (CoefficientRing::prime_field(3, 3).unwrap(), true),
        ] {
            let a = alg(AlgebraFamily::TemperleyLieb, 2);
            let e = diagram_element(&a, "{1,2}{1',2'}");
            let ee = a.multiply(&e, &e, &ring).unwrap();
            if expect_zero {
                assert!(ee.is_zero());
            } else {
                assert_eq!(ee, e.scaled(&big(3), &ring).unwrap());
            }
        }
    }

    #[test]
    fn sample_product_in_degree_eleven() {
        let a = alg(AlgebraFamily::JonesAnnular, 11);
        let ring = CoefficientRing::integers(5);
        let alpha = diagram_element(
            &a,
            "{1,11}{2,10}{3,7'}{4,5}{6,7}{8,1'}{9,4'}{2',3'}{5',6'}{8',11'}{9',10'}",
        );
        let beta = diagram_element(
            &a,
            "{1,11}{2,10}{3,1'}{4,7}{5,6}{8,9}{2',3'}{4',5'}{6',11'}{7',8'}{9',10'}",
        );
        let expected = diagram_element(
            &a,
            "{1,11}{2,10}{3,9}{4,5}{6,7}{8,1'}{2',3'}{4',5'}{6',11'}{7',8'}{9',10'}",
        );
        let product = a.multiply(&alpha, &beta, &ring).unwrap();
        assert_eq!(product, expected.scaled(&big(5), &ring).unwrap());

        // The same product vanishes at delta = 0.
        let ring0 = CoefficientRing::integers(0);
        assert!(a.multiply(&alpha, &beta, &ring0).unwrap().is_zero());

        // Both factors have deficient propagating number, so they augment
        // to zero.
        assert_eq!(a.augmentation(&alpha, &ring).unwrap(), big(0));
        assert_eq!(a.augmentation(&beta, &ring).unwrap(), big(0));
    }

    #[test]
    fn augmentation_basics() {
        let a = alg(AlgebraFamily::JonesAnnular, 2);
        let ring = CoefficientRing::integers(0);
        let one = a.unit_element();
        assert_eq!(a.augmentation(&one, &ring).unwrap(), big(1));
        let e = diagram_element(&a, "{1,2}{1',2'}");
        assert_eq!(a.augmentation(&e, &ring).unwrap(), big(0));
    }

    #[test]
    fn augmentation_is_multiplicative_on_basis_pairs() {
        for (family, n) in [
            (AlgebraFamily::Partition, 2),
            (AlgebraFamily::JonesAnnular, 3),
        ] {
            let a = alg(family, n);
            let ring = CoefficientRing::integers(7);
            for i in 0..a.dim() as u32 {
                let x = a.basis_element(i).unwrap();
                let ex = a.augmentation(&x, &ring).unwrap();
                for j in 0..a.dim() as u32 {
                    let y = a.basis_element(j).unwrap();
                    let ey = a.augmentation(&y, &ring).unwrap();
                    let xy = a.multiply(&x, &y, &ring).unwrap();
                    assert_eq!(a.augmentation(&xy, &ring).unwrap(), &ex * &ey);
                }
            }
        }
    }

    #[test]
    fn quotient_map_is_a_homomorphism_intertwining_augmentation() {
        let a = alg(AlgebraFamily::JonesAnnular, 3);
        let c3 = alg(AlgebraFamily::GroupAlgebraCyclic, 3);
        let ring = CoefficientRing::integers(2);
        for i in 0..a.dim() as u32 {
            let x = a.basis_element(i).unwrap();
            let px = a.quotient_map(&x, &ring).unwrap();
            assert_eq!(
                a.augmentation(&x, &ring).unwrap(),
                c3.augmentation(&px, &ring).unwrap()
            );
            for j in 0..a.dim() as u32 {
                let y = a.basis_element(j).unwrap();
                let py = a.quotient_map(&y, &ring).unwrap();
                let pxy = a.quotient_map(&a.multiply(&x, &y, &ring).unwrap(), &ring).unwrap();
                assert_eq!(pxy, c3.multiply(&px, &py, &ring).unwrap());
            }
        }
    }

    #[test]
    fn quotient_of_rotations_bijects_with_the_cyclic_group() {
        let a = alg(AlgebraFamily::JonesAnnular, 4);
        let ring = CoefficientRing::integers(0);
        let mut images = Vec::new();
        for i in 0..a.dim() as u32 {
            let x = a.basis_element(i).unwrap();
            let px = a.quotient_map(&x, &ring).unwrap();
            if !px.is_zero() {
                let (idx, c) = px.iter().next().unwrap();
                assert_eq!(px.support_len(), 1);
                assert!(c.is_one());
                images.push(idx);
            }
        }
        images.sort_unstable();
        assert_eq!(images, vec![0, 1, 2, 3]);
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = alg(AlgebraFamily::JonesAnnular, 2);
        let b = alg(AlgebraFamily::TemperleyLieb, 2);
        let ring = CoefficientRing::integers(0);
        let x = a.unit_element();
        let y = b.unit_element();
        assert!(matches!(
            a.multiply(&x, &y, &ring),
            Err(AlgebraError::AlgebraMismatch(..))
        ));
        assert!(a.basis_element(99).is_err());
    }

    #[test]
    fn element_arithmetic_normalizes() {
        let a = alg(AlgebraFamily::TemperleyLieb, 2);
        let f2 = CoefficientRing::prime_field(2, 0).unwrap();
        let e = diagram_element(&a, "{1,2}{1',2'}");
        let mut x = e.clone();
        x.add_scaled(&e, &big(1), &f2).unwrap();
        assert!(x.is_zero(), "e + e = 0 over F_2");

        let z = CoefficientRing::integers(0);
        let mut y = e.clone();
        y.add_scaled(&e, &big(-1), &z).unwrap();
        assert!(y.is_zero());
        assert!(e.scaled(&(big(1) / big(2)), &z).is_err());
    }
}
