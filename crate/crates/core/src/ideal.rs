//! Ideal arithmetic over the base ring A = k[x]/Q and its extensions.
//!
//! A handle always represents an ideal of A through its full preimage in the
//! ambient polynomial ring: the quotient generators are folded into every
//! Gröbner basis, so one Buchberger engine serves the quotient ring too.

use crate::engine::{buchberger, normal_form, Budget, MVec, ModuleGB, ModuleOrder};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::RingDescriptor;
use std::sync::{Arc, OnceLock};

/// Krull dimension with a sentinel for the unit ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    NegInf,
    Finite(usize),
}

impl Dim {
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Dim::NegInf => None,
            Dim::Finite(d) => Some(*d as i64),
        }
    }
}

#[derive(Debug)]
pub struct IdealHandle {
    pub ring: Arc<RingDescriptor>,
    pub gens: Vec<Polynomial>,
    gb: OnceLock<std::result::Result<ModuleGB, Error>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            gb: self.gb.clone(),
        }
    }
}

impl IdealHandle {
    /// Public constructor: generators must be x-weighted-homogeneous (the
    /// homogeneity policy that makes graded Nakayama available downstream).
    pub fn new(ring: Arc<RingDescriptor>, gens: Vec<Polynomial>) -> Result<Self> {
        for g in &gens {
            if !g.is_zero() && g.x_weight(&ring).is_none() {
                return Err(Error::invalid(format!(
                    "ideal generator {} is not x-weighted-homogeneous",
                    g.display(&ring)
                )));
            }
        }
        Ok(Self::new_unchecked(ring, gens))
    }

    /// Internal constructor for data already known to be homogeneous.
    pub fn new_unchecked(ring: Arc<RingDescriptor>, mut gens: Vec<Polynomial>) -> Self {
        gens.retain(|g| !g.is_zero());
        IdealHandle {
            ring,
            gens,
            gb: OnceLock::new(),
        }
    }

    pub fn zero(ring: Arc<RingDescriptor>) -> Self {
        Self::new_unchecked(ring, Vec::new())
    }

    pub fn unit(ring: Arc<RingDescriptor>) -> Self {
        let one = Polynomial::one(&ring);
        Self::new_unchecked(ring, vec![one])
    }

    /// Generators of the full preimage in the polynomial ring.
    pub fn full_gens(&self) -> Vec<Polynomial> {
        let mut v = self.gens.clone();
        v.extend(self.ring.quotient_gens.iter().cloned());
        v
    }

    /// Reduced Gröbner basis of the preimage, computed once.
    pub fn gb(&self, budget: &Budget) -> Result<&ModuleGB> {
        let r = self
            .gb
            .get_or_init(|| gb_of(&self.full_gens(), &self.ring, budget));
        r.as_ref().map_err(|e| e.clone())
    }

    pub fn normal_form(&self, f: &Polynomial, budget: &Budget) -> Result<Polynomial> {
        let gb = self.gb(budget)?;
        let v = MVec::from_poly(f, 0, &self.ring, &gb.order);
        let nf = normal_form(&v, &gb.gens, &self.ring, &gb.order, budget)?;
        Ok(nf.component(0, &self.ring))
    }

    pub fn contains(&self, f: &Polynomial, budget: &Budget) -> Result<bool> {
        Ok(self.normal_form(f, budget)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &IdealHandle, budget: &Budget) -> Result<bool> {
        self.check_ring(other)?;
        for g in &other.gens {
            if !self.contains(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equal(&self, other: &IdealHandle, budget: &Budget) -> Result<bool> {
        Ok(self.contains_ideal(other, budget)? && other.contains_ideal(self, budget)?)
    }

    pub fn is_zero_ideal(&self, budget: &Budget) -> Result<bool> {
        // Zero in A: every generator lies in Q.
        let q = IdealHandle::zero(self.ring.clone());
        for g in &self.gens {
            if !q.contains(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit_ideal(&self, budget: &Budget) -> Result<bool> {
        self.contains(&Polynomial::one(&self.ring), budget)
    }

    fn check_ring(&self, other: &IdealHandle) -> Result<()> {
        if !RingDescriptor::same(&self.ring, &other.ring) {
            return Err(Error::RingMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    /// Monomial ideal of a polynomial ring: combinatorial fast paths apply.
    fn is_monomial_plain(&self) -> bool {
        self.ring.quotient_gens.is_empty() && self.gens.iter().all(|g| g.terms.len() == 1)
    }

    fn monomial_exponents(&self) -> Vec<Monomial> {
        self.gens.iter().map(|g| g.terms[0].0.clone()).collect()
    }

    fn from_monomials(&self, monos: Vec<Monomial>) -> IdealHandle {
        let gens = monos
            .into_iter()
            .map(|m| Polynomial::monomial(m, 1))
            .collect();
        IdealHandle::new_unchecked(self.ring.clone(), gens)
    }

    pub fn sum(&self, other: &IdealHandle) -> Result<IdealHandle> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(IdealHandle::new_unchecked(self.ring.clone(), gens))
    }

    pub fn product(&self, other: &IdealHandle, budget: &Budget) -> Result<IdealHandle> {
        self.check_ring(other)?;
        let mut gens = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b, &self.ring));
            }
        }
        let h = IdealHandle::new_unchecked(self.ring.clone(), gens);
        h.minimalized(budget)
    }

    pub fn power(&self, n: u32, budget: &Budget) -> Result<IdealHandle> {
        if n == 0 {
            return Ok(IdealHandle::unit(self.ring.clone()));
        }
        let mut acc = self.minimalized(budget)?;
        for _ in 1..n {
            acc = acc.product(self, budget)?;
        }
        Ok(acc)
    }

    /// Intersection via the single auxiliary variable u: eliminate u from
    /// u*a + (1-u)*b. Operates on full preimages. Monomial ideals intersect
    /// by pairwise lcm instead.
    pub fn intersection(&self, other: &IdealHandle, budget: &Budget) -> Result<IdealHandle> {
        self.check_ring(other)?;
        if self.is_monomial_plain() && other.is_monomial_plain() {
            let mut lcms = Vec::new();
            for a in self.monomial_exponents() {
                for b in other.monomial_exponents() {
                    lcms.push(a.lcm(&b));
                }
            }
            return Ok(self.from_monomials(antichain(lcms)));
        }
        let gens = intersect_plain(
            &self.full_gens(),
            &other.full_gens(),
            &self.ring,
            budget,
        )?;
        Ok(IdealHandle::new_unchecked(self.ring.clone(), gens))
    }

    /// Colon ideal (self : other) = ∩_{g in gens(other)} (self : g).
    pub fn quotient(&self, other: &IdealHandle, budget: &Budget) -> Result<IdealHandle> {
        self.check_ring(other)?;
        if other.is_zero_ideal(budget)? {
            return Err(Error::invalid("colon by zero ideal"));
        }
        if self.is_monomial_plain() && other.is_monomial_plain() {
            // (a : x^v) has generators x^(m - min(m,v)); intersect over v.
            let mut acc: Option<IdealHandle> = None;
            for v in other.monomial_exponents() {
                let cols: Vec<Monomial> = self
                    .monomial_exponents()
                    .iter()
                    .map(|m| {
                        Monomial(
                            m.0.iter()
                                .zip(&v.0)
                                .map(|(&a, &b)| a.saturating_sub(b))
                                .collect(),
                        )
                    })
                    .collect();
                let part = self.from_monomials(antichain(cols));
                acc = Some(match acc {
                    None => part,
                    Some(prev) => prev.intersection(&part, budget)?,
                });
            }
            return Ok(acc.unwrap());
        }
        let mut acc: Option<Vec<Polynomial>> = None;
        for g in &other.gens {
            // Generators already in Q contribute (self : g) = (1..) full ring;
            // skipping them is the same as intersecting with everything.
            if IdealHandle::zero(self.ring.clone()).contains(g, budget)? {
                continue;
            }
            let col = colon_by_element(&self.full_gens(), g, &self.ring, budget)?;
            acc = Some(match acc {
                None => col,
                Some(prev) => intersect_plain(&prev, &col, &self.ring, budget)?,
            });
        }
        match acc {
            None => Err(Error::invalid("colon by zero ideal")),
            Some(gens) => Ok(IdealHandle::new_unchecked(self.ring.clone(), gens)),
        }
    }

    /// Saturation (self : other^∞) by iterated colon until stable.
    pub fn saturation(&self, other: &IdealHandle, budget: &Budget) -> Result<IdealHandle> {
        let mut cur = self.clone();
        for _ in 0..64 {
            let next = cur.quotient(other, budget)?;
            if next.equal(&cur, budget)? {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::math("saturation did not stabilize within 64 steps"))
    }

    /// Elimination ideal: generators free of the masked variables, over the
    /// same ring.
    pub fn eliminate(&self, mask: &[bool], budget: &Budget) -> Result<IdealHandle> {
        if mask.iter().all(|&b| !b) {
            return Ok(self.clone());
        }
        let gens = eliminate_plain(&self.full_gens(), mask, &self.ring, budget)?;
        Ok(IdealHandle::new_unchecked(self.ring.clone(), gens))
    }

    /// Krull dimension of ambient/(self + Q) by maximal independent variable
    /// sets modulo the leading-term ideal.
    pub fn krull_dim(&self, budget: &Budget) -> Result<Dim> {
        if self.is_unit_ideal(budget)? {
            return Ok(Dim::NegInf);
        }
        let gb = self.gb(budget)?;
        let lts: Vec<Monomial> = gb.gens.iter().map(|g| g.lt().unwrap().mono.clone()).collect();
        let n = self.ring.nvars();
        let mut best = 0usize;
        for mask in 0u32..(1u32 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let supported = |m: &Monomial| {
                m.0.iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || mask & (1 << i) != 0)
            };
            if !lts.iter().any(supported) {
                best = size;
            }
        }
        Ok(Dim::Finite(best))
    }

    /// Graded-Nakayama minimalization: drop every generator lying in the
    /// ideal spanned by the others plus (vars)*self (plus Q).
    ///
    /// With the homogeneity policy, a generator of weight w can only be
    /// redundant through same-weight generators with constant coefficients
    /// plus (vars)*self, so processing by ascending weight with a growing
    /// reducer set is a complete test.
    pub fn minimalized(&self, budget: &Budget) -> Result<IdealHandle> {
        let ring = &self.ring;
        for g in &self.gens {
            if g.is_constant() {
                return Ok(IdealHandle::unit(ring.clone()));
            }
        }
        if self.is_monomial_plain() {
            return Ok(self.from_monomials(antichain(self.monomial_exponents())));
        }
        // Ambient maximal graded ideal times self, plus Q.
        let mut base: Vec<Polynomial> = Vec::new();
        for i in 0..ring.nvars() {
            let v = Polynomial::var(ring, i);
            for g in &self.gens {
                base.push(v.mul(g, ring));
            }
        }
        base.extend(ring.quotient_gens.iter().cloned());
        let order = ModuleOrder::pot();
        let mut gb = gb_of(&base, ring, budget)?;
        let mut idx: Vec<usize> = (0..self.gens.len()).collect();
        idx.sort_by_key(|&i| (self.gens[i].x_weight(ring).unwrap_or(u64::MAX), i));
        let mut kept: Vec<Polynomial> = Vec::new();
        for &i in &idx {
            let v = MVec::from_poly(&self.gens[i], 0, ring, &order);
            if !normal_form(&v, &gb.gens, ring, &order, budget)?.is_zero() {
                kept.push(self.gens[i].clone());
                gb = crate::engine::buchberger_extend(
                    &gb.gens,
                    std::slice::from_ref(&v),
                    1,
                    ring,
                    &order,
                    budget,
                )?;
            }
        }
        kept.sort_by_key(|g| g.x_weight(ring).unwrap_or(u64::MAX));
        Ok(IdealHandle::new_unchecked(ring.clone(), kept))
    }

    /// μ(I): size of a graded-Nakayama-minimal generating set.
    pub fn min_generators(&self, budget: &Budget) -> Result<usize> {
        Ok(self.minimalized(budget)?.gens.len())
    }

    /// Is self contained in the radical of the zero ideal of A?
    pub fn contained_in_nilradical(&self, budget: &Budget) -> Result<bool> {
        for g in &self.gens {
            if !radical_membership(&self.ring.quotient_gens.clone(), g, &self.ring, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Divisibility antichain: the minimal monomials of a set, sorted by degree
/// then descending degrevlex (so x precedes y among equal degrees).
pub fn antichain(mut monos: Vec<Monomial>) -> Vec<Monomial> {
    monos.sort();
    monos.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in &monos {
        if !monos.iter().any(|n| n != m && n.divides(m)) {
            out.push(m.clone());
        }
    }
    out.sort_by(|a, b| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| MonomialOrder::DegRevLex.cmp(b, a))
    });
    out
}

/// Reduced DegRevLex Gröbner basis of a plain generator list.
pub fn gb_of(
    gens: &[Polynomial],
    ring: &RingDescriptor,
    budget: &Budget,
) -> std::result::Result<ModuleGB, Error> {
    let order = ModuleOrder::pot();
    let vecs: Vec<MVec> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| MVec::from_poly(g, 0, ring, &order))
        .collect();
    buchberger(&vecs, 1, ring, &order, budget)
}

/// Plain-ideal membership (no quotient folding beyond what's in `gens`).
pub fn member_plain(
    gens: &[Polynomial],
    f: &Polynomial,
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<bool> {
    let gb = gb_of(gens, ring, budget)?;
    let v = MVec::from_poly(f, 0, ring, &gb.order);
    Ok(normal_form(&v, &gb.gens, ring, &gb.order, budget)?.is_zero())
}

/// Intersection of two plain ideals via u*a + (1-u)*b, eliminating u.
pub fn intersect_plain(
    a: &[Polynomial],
    b: &[Polynomial],
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let big = Arc::new(ring.clone()).with_aux();
    let nv = big.nvars();
    let u = Polynomial::var(&big, nv - 1);
    let one_minus_u = Polynomial::one(&big).sub(&u, &big);
    let mut gens = Vec::new();
    for g in a {
        gens.push(u.mul(&g.pad(nv), &big));
    }
    for g in b {
        gens.push(one_minus_u.mul(&g.pad(nv), &big));
    }
    let mut mask = vec![false; nv];
    mask[nv - 1] = true;
    let elim = eliminate_plain(&gens, &mask, &big, budget)?;
    Ok(elim
        .iter()
        .map(|g| g.restrict(ring.nvars()).expect("eliminated variable leaked"))
        .collect())
}

/// Generators of the elimination ideal (kept in the same ring).
pub fn eliminate_plain(
    gens: &[Polynomial],
    mask: &[bool],
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let order = ModuleOrder {
        elim: Some(mask.to_vec()),
        base: MonomialOrder::DegRevLex,
    };
    let vecs: Vec<MVec> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| MVec::from_poly(g, 0, ring, &order))
        .collect();
    let gb = buchberger(&vecs, 1, ring, &order, budget)?;
    Ok(gb
        .gens
        .iter()
        .filter(|g| g.free_of(mask))
        .map(|g| g.component(0, ring))
        .collect())
}

/// (ideal(gens) : g) via ideal(gens) ∩ (g), divided by g.
fn colon_by_element(
    gens: &[Polynomial],
    g: &Polynomial,
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    let inter = intersect_plain(gens, &[g.clone()], ring, budget)?;
    let mut out = Vec::new();
    for h in inter {
        let q = h
            .exact_div(g, ring)
            .ok_or_else(|| Error::math("intersection element not divisible in colon"))?;
        out.push(q);
    }
    Ok(out)
}

/// f ∈ √(ideal(gens)) tested by saturation: ((gens) : f^∞) = (1).
pub fn radical_membership(
    base: &[Polynomial],
    f: &Polynomial,
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<bool> {
    if f.is_zero() {
        return Ok(true);
    }
    let mut cur: Vec<Polynomial> = base.to_vec();
    for _ in 0..64 {
        if member_plain(&cur, &Polynomial::one(ring), ring, budget)? {
            return Ok(true);
        }
        let next = colon_by_element(&cur, f, ring, budget)?;
        // Stable and still proper: f is not in the radical.
        let grew = {
            let gb = gb_of(&cur, ring, budget)?;
            let order = gb.order.clone();
            next.iter().any(|h| {
                let v = MVec::from_poly(h, 0, ring, &order);
                !normal_form(&v, &gb.gens, ring, &order, budget)
                    .map(|r| r.is_zero())
                    .unwrap_or(false)
            })
        };
        if !grew {
            return Ok(false);
        }
        cur = next;
    }
    Err(Error::math("radical membership did not stabilize"))
}

/// The spec's ideal_ops entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealOp {
    Sum,
    Product,
    Intersection,
    Quotient,
    Saturation,
}

pub fn ideal_ops(
    a: &IdealHandle,
    b: &IdealHandle,
    op: IdealOp,
    budget: &Budget,
) -> Result<IdealHandle> {
    match op {
        IdealOp::Sum => a.sum(b),
        IdealOp::Product => a.product(b, budget),
        IdealOp::Intersection => a.intersection(b, budget),
        IdealOp::Quotient => a.quotient(b, budget),
        IdealOp::Saturation => a.saturation(b, budget),
    }
}
