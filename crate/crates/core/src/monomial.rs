//! Monomials as exponent vectors, and the monomial orders used by the
//! Gröbner engine.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A monomial in a fixed ambient ring: one exponent per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// Degree under an arbitrary weight vector (one weight per variable).
    pub fn weighted_degree(&self, weights: &[u64]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    /// Componentwise division; `None` when not divisible.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (&a, &b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            e.push(a - b);
        }
        Some(Monomial(e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        )
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| e * n).collect())
    }

    /// Extend with zero exponents for new trailing variables.
    pub fn pad(&self, nvars: usize) -> Monomial {
        let mut e = self.0.clone();
        e.resize(nvars, 0);
        Monomial(e)
    }

    /// Total degree restricted to a variable mask.
    pub fn block_degree(&self, block: &[bool]) -> u64 {
        self.0
            .iter()
            .zip(block)
            .filter(|(_, &b)| b)
            .map(|(&e, _)| e as u64)
            .sum()
    }
}

/// Total orders on monomials compatible with multiplication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic (total degree, then revlex tie-break).
    DegRevLex,
    /// Pure lexicographic, first variable strongest.
    Lex,
    /// Block elimination: total degree in the masked block first, then
    /// DegRevLex on the full exponent vector. Monomials touching the block
    /// rank strictly above block-free ones.
    Elim(Vec<bool>),
}

impl MonomialOrder {
    /// Compare `a` vs `b`; `Greater` means `a` ranks higher (leads).
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::Elim(block) => a
                .block_degree(block)
                .cmp(&b.block_degree(block))
                .then_with(|| degrevlex(a, b)),
        }
    }
}

fn degrevlex(a: &Monomial, b: &Monomial) -> Ordering {
    let da = a.total_degree();
    let db = b.total_degree();
    if da != db {
        return da.cmp(&db);
    }
    // Revlex: the last variable with differing exponent decides; smaller
    // exponent there means larger monomial.
    for i in (0..a.0.len()).rev() {
        if a.0[i] != b.0[i] {
            return b.0[i].cmp(&a.0[i]);
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    #[test]
    fn test_mul_div_lcm() {
        let a = m(&[2, 1]);
        let b = m(&[1, 3]);
        assert_eq!(a.mul(&b), m(&[3, 4]));
        assert_eq!(a.lcm(&b), m(&[2, 3]));
        assert_eq!(a.checked_div(&m(&[1, 1])), Some(m(&[1, 0])));
        assert_eq!(a.checked_div(&b), None);
        assert!(m(&[1, 0]).divides(&a));
        assert!(!b.divides(&a));
    }

    #[test]
    fn test_degrevlex() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > xy > y^2 in k[x,y] under degrevlex
        assert_eq!(o.cmp(&m(&[2, 0]), &m(&[1, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 1]), &m(&[0, 2])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2]), &m(&[2, 0])), Ordering::Less);
        // degree dominates
        assert_eq!(o.cmp(&m(&[0, 3]), &m(&[2, 0])), Ordering::Greater);
    }

    #[test]
    fn test_lex() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn test_elim_block_ranks_first() {
        // Eliminate the last variable (t): any t-monomial beats any t-free one.
        let o = MonomialOrder::Elim(vec![false, false, true]);
        assert_eq!(o.cmp(&m(&[0, 0, 1]), &m(&[9, 9, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[3, 0, 0]), &m(&[0, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn test_order_compatible_with_multiplication() {
        let orders = [
            MonomialOrder::DegRevLex,
            MonomialOrder::Lex,
            MonomialOrder::Elim(vec![true, false, false]),
        ];
        let ms = [m(&[1, 2, 0]), m(&[0, 0, 3]), m(&[2, 2, 2]), m(&[0, 1, 1])];
        for o in &orders {
            for a in &ms {
                for b in &ms {
                    for c in &ms {
                        assert_eq!(o.cmp(a, b), o.cmp(&a.mul(c), &b.mul(c)));
                    }
                }
            }
        }
    }
}
