//! Coefficient rings: Z, Q, F_p, Z/m, together with the parameter delta.

use serde::{Deserialize, Serialize};
use std::fmt;

/// The four supported coefficient ring kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    Integers,
    Rationals,
    PrimeField(u64),
    ModularRing(u64),
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::PrimeField(p) => write!(f, "Fp:{p}"),
            RingKind::ModularRing(m) => write!(f, "Zmod:{m}"),
        }
    }
}

/// A coefficient ring plus the distinguished element delta.
///
/// Delta is carried as an integer literal and reduced into the ring where
/// needed, so one value serves Z, Q, F_p and Z/m uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoefficientRing {
    pub kind: RingKind,
    pub delta: i64,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("cannot parse ring spec {0:?}; expected Z, Q, Fp:<prime>, or Zmod:<m>")]
    BadSpec(String),
    #[error("operation requires a field ring, got {0}")]
    NotAField(RingKind),
}

impl CoefficientRing {
    pub fn new(kind: RingKind, delta: i64) -> Result<Self, RingError> {
        match kind {
            RingKind::PrimeField(p) if !is_prime_u64(p) => return Err(RingError::NotPrime(p)),
            RingKind::ModularRing(m) if m < 2 => return Err(RingError::BadModulus(m)),
            _ => {}
        }
        Ok(CoefficientRing { kind, delta })
    }

    pub fn integers(delta: i64) -> Self {
        CoefficientRing {
            kind: RingKind::Integers,
            delta,
        }
    }

    pub fn rationals(delta: i64) -> Self {
        CoefficientRing {
            kind: RingKind::Rationals,
            delta,
        }
    }

    pub fn prime_field(p: u64, delta: i64) -> Result<Self, RingError> {
        Self::new(RingKind::PrimeField(p), delta)
    }

    pub fn modular(m: u64, delta: i64) -> Result<Self, RingError> {
        Self::new(RingKind::ModularRing(m), delta)
    }

    pub fn is_field(&self) -> bool {
        matches!(
            self.kind,
            RingKind::Rationals | RingKind::PrimeField(_)
        )
    }

    /// The modulus for F_p and Z/m rings.
    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            RingKind::PrimeField(p) => Some(p),
            RingKind::ModularRing(m) => Some(m),
            _ => None,
        }
    }

    /// Delta reduced into the ring, as a canonical integer lift.
    pub fn delta_lift(&self) -> i64 {
        match self.modulus() {
            Some(m) => self.delta.rem_euclid(m as i64),
            None => self.delta,
        }
    }

    /// Whether delta is a unit of the ring.
    pub fn delta_is_unit(&self) -> bool {
        match self.kind {
            RingKind::Integers => self.delta == 1 || self.delta == -1,
            RingKind::Rationals => self.delta != 0,
            RingKind::PrimeField(p) => self.delta.rem_euclid(p as i64) != 0,
            RingKind::ModularRing(m) => {
                gcd_u64(self.delta.rem_euclid(m as i64) as u64, m) == 1
            }
        }
    }

    /// Parses the ring spec grammar `Z | Q | Fp:<prime> | Zmod:<m>`.
    pub fn parse_kind(spec: &str) -> Result<RingKind, RingError> {
        let bad = || RingError::BadSpec(spec.to_string());
        match spec {
            "Z" => Ok(RingKind::Integers),
            "Q" => Ok(RingKind::Rationals),
            _ => {
                if let Some(p) = spec.strip_prefix("Fp:") {
                    let p: u64 = p.parse().map_err(|_| bad())?;
                    if is_prime_u64(p) {
                        Ok(RingKind::PrimeField(p))
                    } else {
                        Err(RingError::NotPrime(p))
                    }
                } else if let Some(m) = spec.strip_prefix("Zmod:") {
                    let m: u64 = m.parse().map_err(|_| bad())?;
                    if m >= 2 {
                        Ok(RingKind::ModularRing(m))
                    } else {
                        Err(RingError::BadModulus(m))
                    }
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (delta={})", self.kind, self.delta)
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_spec_round_trip() {
        for spec in ["Z", "Q", "Fp:5", "Fp:101", "Zmod:4", "Zmod:12"] {
            let kind = CoefficientRing::parse_kind(spec).unwrap();
            assert_eq!(kind.to_string(), spec);
        }
    }

    #[test]
    fn ring_spec_rejects_garbage() {
        for spec in ["", "F2", "Fp:4", "Fp:x", "Zmod:1", "Zmod:", "GF(2)"] {
            assert!(CoefficientRing::parse_kind(spec).is_err(), "{spec}");
        }
    }

    #[test]
    fn delta_unit_detection() {
        assert!(CoefficientRing::integers(1).delta_is_unit());
        assert!(CoefficientRing::integers(-1).delta_is_unit());
        assert!(!CoefficientRing::integers(0).delta_is_unit());
        assert!(!CoefficientRing::integers(2).delta_is_unit());
        assert!(CoefficientRing::rationals(2).delta_is_unit());
        assert!(!CoefficientRing::rationals(0).delta_is_unit());
        assert!(CoefficientRing::prime_field(5, 7).unwrap().delta_is_unit());
        assert!(!CoefficientRing::prime_field(5, 10).unwrap().delta_is_unit());
        assert!(CoefficientRing::modular(4, 3).unwrap().delta_is_unit());
        assert!(!CoefficientRing::modular(4, 2).unwrap().delta_is_unit());
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (2..100).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![
                2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                79, 83, 89, 97
            ]
        );
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(2_147_483_649));
    }
}
