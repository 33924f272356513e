//! Arithmetic in the prime field F_p.
//!
//! Coefficients are stored as raw `u64` residues in `0..p`; every operation
//! goes through a [`PrimeField`] context carrying the modulus. The session
//! default is p = 32003, large enough that randomized constructions
//! (minimal reductions, filter-regular elements) succeed with overwhelming
//! probability.

use serde::{Deserialize, Serialize};

/// Default session prime.
pub const DEFAULT_PRIME: u64 = 32003;

/// A prime field F_p with p fixed per session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Build the field, checking primality by trial division.
    pub fn new(p: u64) -> Result<Self, String> {
        if p < 2 {
            return Err(format!("characteristic {p} is not prime"));
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p % d == 0 {
                return Err(format!("characteristic {p} is not prime ({d} divides it)"));
            }
            d += 1;
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Canonical residue of a signed integer.
    pub fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }

    pub fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse by extended Euclid. Panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(self.p as i128) as u64
    }

    pub fn div(&self, a: u64, b: u64) -> u64 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Signed representative of minimal magnitude, for display.
    pub fn balanced(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn test_primality_check() {
        assert!(PrimeField::new(32003).is_ok());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(101).is_ok());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(32001).is_err()); // 3 * 10667
    }

    #[test]
    fn test_inverses_form_group() {
        let f = PrimeField::default();
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let a = rng.below(f.p - 1) + 1;
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    // Field axioms on 10^4 random triples.
    #[test]
    fn test_field_axioms_random_triples() {
        let f = PrimeField::default();
        let mut rng = SplitMix64::new(99);
        for _ in 0..10_000 {
            let a = rng.below(f.p);
            let b = rng.below(f.p);
            let c = rng.below(f.p);
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn test_small_characteristic() {
        let f = PrimeField::new(2).unwrap();
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.from_i64(-3), 1);
    }
}
