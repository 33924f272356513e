//! Sparse multivariate polynomials over F_p.
//!
//! Terms are kept in canonical form: strictly descending under DegRevLex,
//! no zero coefficients, no duplicate monomials. All operations take the
//! ambient [`RingDescriptor`] explicitly (polynomials do not carry a ring
//! pointer; ideal handles do).

use crate::monomial::{Monomial, MonomialOrder};
use crate::ring::RingDescriptor;
use std::cmp::Ordering;

pub type Term = (Monomial, u64);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    /// Strictly descending under DegRevLex; coefficients nonzero.
    pub terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn constant(ring: &RingDescriptor, c: i64) -> Self {
        let v = ring.field.from_i64(c);
        if v == 0 {
            Self::zero()
        } else {
            Polynomial {
                terms: vec![(Monomial::one(ring.nvars()), v)],
            }
        }
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        Self::constant(ring, 1)
    }

    pub fn var(ring: &RingDescriptor, idx: usize) -> Self {
        Polynomial {
            terms: vec![(ring.var_mono(idx), 1)],
        }
    }

    pub fn monomial(m: Monomial, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Canonicalize an arbitrary term list: merge, prune zeros, sort.
    pub fn from_terms(ring: &RingDescriptor, mut terms: Vec<Term>) -> Self {
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = ring.field.add(last.1, c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|t| t.1 != 0);
        Polynomial { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    /// Leading term under the canonical DegRevLex order.
    pub fn lt(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn add(&self, other: &Polynomial, ring: &RingDescriptor) -> Polynomial {
        self.merge(other, ring, false)
    }

    pub fn sub(&self, other: &Polynomial, ring: &RingDescriptor) -> Polynomial {
        self.merge(other, ring, true)
    }

    fn merge(&self, other: &Polynomial, ring: &RingDescriptor, subtract: bool) -> Polynomial {
        let f = &ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let ord = MonomialOrder::DegRevLex;
        while i < self.terms.len() && j < other.terms.len() {
            match ord.cmp(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = other.terms[j].clone();
                    out.push((m, if subtract { f.neg(c) } else { c }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract {
                        f.sub(self.terms[i].1, other.terms[j].1)
                    } else {
                        f.add(self.terms[i].1, other.terms[j].1)
                    };
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for (m, c) in &other.terms[j..] {
            out.push((m.clone(), if subtract { f.neg(*c) } else { *c }));
        }
        Polynomial { terms: out }
    }

    pub fn neg(&self, ring: &RingDescriptor) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), ring.field.neg(*c)))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64, ring: &RingDescriptor) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), ring.field.mul(*k, c)))
                .collect(),
        }
    }

    /// Multiply by a single term; preserves sortedness.
    pub fn mul_term(&self, m: &Monomial, c: u64, ring: &RingDescriptor) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, k)| (mm.mul(m), ring.field.mul(*k, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial, ring: &RingDescriptor) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                acc.push((m.mul(n), ring.field.mul(*c, *d)));
            }
        }
        Polynomial::from_terms(ring, acc)
    }

    pub fn pow(&self, n: u32, ring: &RingDescriptor) -> Polynomial {
        let mut acc = Polynomial::one(ring);
        for _ in 0..n {
            acc = acc.mul(self, ring);
        }
        acc
    }

    /// Make the canonical leading coefficient 1.
    pub fn monic(&self, ring: &RingDescriptor) -> Polynomial {
        match self.lt() {
            None => Polynomial::zero(),
            Some((_, c)) => self.scale(ring.field.inv(*c), ring),
        }
    }

    /// Exact division: `self = q * g` with zero remainder, else `None`.
    pub fn exact_div(&self, g: &Polynomial, ring: &RingDescriptor) -> Option<Polynomial> {
        let (gm, gc) = g.lt()?;
        let gcinv = ring.field.inv(*gc);
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.lt().cloned() {
            let factor = m.checked_div(gm)?;
            let coeff = ring.field.mul(c, gcinv);
            q.push((factor.clone(), coeff));
            rem = rem.sub(&g.mul_term(&factor, coeff, ring), ring);
        }
        Some(Polynomial::from_terms(ring, q))
    }

    /// Common x-weight of all terms, or `None` when inhomogeneous.
    pub fn x_weight(&self, ring: &RingDescriptor) -> Option<u64> {
        let w = ring.weights();
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(&w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Common t-degree of all terms, or `None` when inhomogeneous.
    pub fn t_degree(&self, ring: &RingDescriptor) -> Option<u64> {
        let w = ring.tdegs();
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(&w));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Pad to a ring with additional trailing variables.
    pub fn pad(&self, nvars: usize) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pad(nvars), *c))
                .collect(),
        }
    }

    /// Restrict to the first `nvars` variables; `None` if any term uses a
    /// dropped variable. DegRevLex order on the truncated exponents is not
    /// automatically preserved, so re-sort.
    pub fn restrict(&self, nvars: usize) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.0[nvars..].iter().any(|&e| e != 0) {
                return None;
            }
            terms.push((Monomial(m.0[..nvars].to_vec()), *c));
        }
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        Some(Polynomial { terms })
    }

    /// Substitute `images[i]` for variable i (all over `target` ring).
    pub fn substitute(&self, images: &[Polynomial], target: &RingDescriptor) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, 0);
            term.terms = vec![(Monomial::one(target.nvars()), *c)];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e, target), target);
                }
            }
            acc = acc.add(&term, target);
        }
        acc
    }

    pub fn display(&self, ring: &RingDescriptor) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let signed = ring.field.balanced(*c);
            let (sign, mag) = if signed < 0 {
                ("-", (-signed) as u64)
            } else {
                ("+", signed as u64)
            };
            if i == 0 {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let mono = display_monomial(m, ring);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn display_monomial(m: &Monomial, ring: &RingDescriptor) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(ring.vars[i].name.clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", ring.vars[i].name, e));
        }
    }
    parts.join("*")
}

/// Result of a weighted-degree query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(u64),
    NonHomogeneous,
}

/// Grading selector for [`weighted_degree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    XWeight,
    TDegree,
}

/// Degree of `f` under the chosen grading; errors on the zero polynomial.
pub fn weighted_degree(
    f: &Polynomial,
    grading: Grading,
    ring: &RingDescriptor,
) -> Result<Homogeneity, String> {
    if f.is_zero() {
        return Err("weighted degree of the zero polynomial".into());
    }
    let d = match grading {
        Grading::XWeight => f.x_weight(ring),
        Grading::TDegree => f.t_degree(ring),
    };
    Ok(match d {
        Some(v) => Homogeneity::Homogeneous(v),
        None => Homogeneity::NonHomogeneous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrimeField;
    use std::sync::Arc;

    fn kxy() -> Arc<RingDescriptor> {
        RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap()
    }

    #[test]
    fn test_difference_of_squares() {
        let r = kxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let lhs = x.add(&y, &r).mul(&x.sub(&y, &r), &r);
        let rhs = x.mul(&x, &r).sub(&y.mul(&y, &r), &r);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn test_additive_identity() {
        let r = kxy();
        let x = Polynomial::var(&r, 0);
        let f = x.mul(&x, &r).add(&Polynomial::constant(&r, 5), &r);
        assert_eq!(f.add(&Polynomial::zero(), &r), f);
    }

    #[test]
    fn test_freshman_dream_char_2() {
        // (x + y)^2 over p = 2 -> x^2 + y^2
        let r = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::new(2).unwrap()).unwrap();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let sq = x.add(&y, &r).pow(2, &r);
        let expect = x.pow(2, &r).add(&y.pow(2, &r), &r);
        assert_eq!(sq, expect);
    }

    #[test]
    fn test_weighted_degree_examples() {
        // x^2*y1 with x-weights (1,1), y1 of weight 0 and t-degree 1
        let r = kxy().with_y_block(&[0]);
        let m = Polynomial::monomial(Monomial(vec![2, 0, 1]), 1);
        assert_eq!(
            weighted_degree(&m, Grading::XWeight, &r).unwrap(),
            Homogeneity::Homogeneous(2)
        );
        assert_eq!(
            weighted_degree(&m, Grading::TDegree, &r).unwrap(),
            Homogeneity::Homogeneous(1)
        );

        // b^2 - ac with weights (3,4,5): the semigroup-ring relation has weight 8.
        let s = RingDescriptor::base(&["a", "b", "c"], &[3, 4, 5], PrimeField::default()).unwrap();
        let b2 = Polynomial::monomial(Monomial(vec![0, 2, 0]), 1);
        let ac = Polynomial::monomial(Monomial(vec![1, 0, 1]), 1);
        let f = b2.sub(&ac, &s);
        assert_eq!(
            weighted_degree(&f, Grading::XWeight, &s).unwrap(),
            Homogeneity::Homogeneous(8)
        );

        // x + y1 is t-inhomogeneous (degrees 0 and 1).
        let g = Polynomial::from_terms(
            &r,
            vec![(Monomial(vec![1, 0, 0]), 1), (Monomial(vec![0, 0, 1]), 1)],
        );
        assert_eq!(
            weighted_degree(&g, Grading::TDegree, &r).unwrap(),
            Homogeneity::NonHomogeneous
        );
        assert!(weighted_degree(&Polynomial::zero(), Grading::XWeight, &r).is_err());
    }

    #[test]
    fn test_canonical_form_idempotent() {
        let r = kxy();
        let f = Polynomial::from_terms(
            &r,
            vec![
                (Monomial(vec![1, 1]), 3),
                (Monomial(vec![2, 0]), 1),
                (Monomial(vec![1, 1]), ring_neg(&r, 3)),
                (Monomial(vec![0, 0]), 7),
            ],
        );
        let again = Polynomial::from_terms(&r, f.terms.clone());
        assert_eq!(f, again);
        assert_eq!(f.terms.len(), 2); // x^2 and constant survive
    }

    fn ring_neg(r: &RingDescriptor, c: u64) -> u64 {
        r.field.neg(c)
    }

    #[test]
    fn test_exact_div() {
        let r = kxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.add(&y, &r);
        let g = x.sub(&y, &r);
        let prod = f.mul(&g, &r);
        assert_eq!(prod.exact_div(&f, &r).unwrap(), g);
        assert!(x.exact_div(&f, &r).is_none());
    }

    #[test]
    fn test_display_balanced() {
        let r = kxy();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.pow(2, &r).sub(&y.pow(2, &r), &r);
        assert_eq!(f.display(&r), "x^2 - y^2");
    }
}
