//! Buchberger engine for submodules of free modules B^r.
//!
//! Ideals are the rank-one case; syzygies, eliminations and preimages are all
//! phrased through the same machinery. Pair selection uses the sugar strategy
//! with degree-then-index tie-break, so runs are deterministic for a fixed
//! generator order. Every run charges a shared step budget and fails loudly
//! when it is exhausted, never truncating silently.

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Polynomial;
use crate::ring::RingDescriptor;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

/// Shared, thread-safe reduction-step budget.
#[derive(Debug)]
pub struct Budget {
    used: AtomicU64,
    limit: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget {
            used: AtomicU64::new(0),
            limit,
        }
    }

    pub fn tick(&self, n: u64) -> Result<()> {
        let prev = self.used.fetch_add(n, AtomicOrdering::Relaxed);
        if prev + n > self.limit {
            Err(Error::Budget {
                steps: prev + n,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.load(AtomicOrdering::Relaxed)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(50_000_000)
    }
}

/// One term of an element of B^r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MTerm {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: u64,
}

/// Order on (position, monomial) pairs: optional elimination mask first
/// (block degree across positions), then position-over-term with lower
/// position leading, then the base monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleOrder {
    pub elim: Option<Vec<bool>>,
    pub base: MonomialOrder,
}

impl ModuleOrder {
    pub fn pot() -> Self {
        ModuleOrder {
            elim: None,
            base: MonomialOrder::DegRevLex,
        }
    }

    pub fn elim(mask: Vec<bool>) -> Self {
        ModuleOrder {
            elim: Some(mask),
            base: MonomialOrder::DegRevLex,
        }
    }

    pub fn cmp(&self, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
        if let Some(mask) = &self.elim {
            let c = a.1.block_degree(mask).cmp(&b.1.block_degree(mask));
            if c != Ordering::Equal {
                return c;
            }
        }
        // Lower position ranks higher.
        match b.0.cmp(&a.0) {
            Ordering::Equal => self.base.cmp(a.1, b.1),
            c => c,
        }
    }
}

/// Element of a free module, terms strictly descending under the active order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MVec {
    pub terms: Vec<MTerm>,
}

impl MVec {
    pub fn zero() -> Self {
        MVec { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lt(&self) -> Option<&MTerm> {
        self.terms.first()
    }

    /// Canonicalize: sort under `order`, merge duplicates, prune zeros.
    pub fn normalize(mut terms: Vec<MTerm>, ring: &RingDescriptor, order: &ModuleOrder) -> Self {
        terms.sort_by(|a, b| order.cmp((b.pos, &b.mono), (a.pos, &a.mono)));
        let mut out: Vec<MTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.pos == t.pos && last.mono == t.mono {
                    last.coeff = ring.field.add(last.coeff, t.coeff);
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| t.coeff != 0);
        MVec { terms: out }
    }

    pub fn from_poly(p: &Polynomial, pos: usize, ring: &RingDescriptor, order: &ModuleOrder) -> Self {
        MVec::normalize(
            p.terms
                .iter()
                .map(|(m, c)| MTerm {
                    pos,
                    mono: m.clone(),
                    coeff: *c,
                })
                .collect(),
            ring,
            order,
        )
    }

    /// Build from per-position polynomials (a column vector).
    pub fn from_column(col: &[Polynomial], ring: &RingDescriptor, order: &ModuleOrder) -> Self {
        let mut terms = Vec::new();
        for (pos, p) in col.iter().enumerate() {
            for (m, c) in &p.terms {
                terms.push(MTerm {
                    pos,
                    mono: m.clone(),
                    coeff: *c,
                });
            }
        }
        MVec::normalize(terms, ring, order)
    }

    /// Collect the component at `pos` as a polynomial.
    pub fn component(&self, pos: usize, ring: &RingDescriptor) -> Polynomial {
        Polynomial::from_terms(
            ring,
            self.terms
                .iter()
                .filter(|t| t.pos == pos)
                .map(|t| (t.mono.clone(), t.coeff))
                .collect(),
        )
    }

    pub fn max_pos(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.pos).max()
    }

    /// self - c * m * other, both sorted under `order`.
    pub fn axpy(
        &self,
        c: u64,
        m: &Monomial,
        other: &MVec,
        ring: &RingDescriptor,
        order: &ModuleOrder,
    ) -> MVec {
        let f = &ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() && j < other.terms.len() {
            let ot = &other.terms[j];
            let omono = ot.mono.mul(m);
            match order.cmp(
                (self.terms[i].pos, &self.terms[i].mono),
                (ot.pos, &omono),
            ) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(MTerm {
                        pos: ot.pos,
                        mono: omono,
                        coeff: f.neg(f.mul(c, ot.coeff)),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let coeff = f.sub(self.terms[i].coeff, f.mul(c, ot.coeff));
                    if coeff != 0 {
                        out.push(MTerm {
                            pos: ot.pos,
                            mono: omono,
                            coeff,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        for ot in &other.terms[j..] {
            out.push(MTerm {
                pos: ot.pos,
                mono: ot.mono.mul(m),
                coeff: f.neg(f.mul(c, ot.coeff)),
            });
        }
        MVec { terms: out }
    }

    pub fn scale(&self, c: u64, ring: &RingDescriptor) -> MVec {
        if c == 0 {
            return MVec::zero();
        }
        MVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm {
                    pos: t.pos,
                    mono: t.mono.clone(),
                    coeff: ring.field.mul(t.coeff, c),
                })
                .collect(),
        }
    }

    pub fn monic(&self, ring: &RingDescriptor) -> MVec {
        match self.lt() {
            None => MVec::zero(),
            Some(t) => self.scale(ring.field.inv(t.coeff), ring),
        }
    }

    /// Shift all positions by `delta` (for augmented constructions).
    pub fn shift_pos(&self, delta: usize) -> MVec {
        MVec {
            terms: self
                .terms
                .iter()
                .map(|t| MTerm {
                    pos: t.pos + delta,
                    mono: t.mono.clone(),
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    /// Keep positions in `range`, re-based to start at 0. Term order within a
    /// POT order is preserved by restriction, so no re-sort is needed for POT;
    /// for safety we re-normalize.
    pub fn project(
        &self,
        range: std::ops::Range<usize>,
        ring: &RingDescriptor,
        order: &ModuleOrder,
    ) -> MVec {
        MVec::normalize(
            self.terms
                .iter()
                .filter(|t| range.contains(&t.pos))
                .map(|t| MTerm {
                    pos: t.pos - range.start,
                    mono: t.mono.clone(),
                    coeff: t.coeff,
                })
                .collect(),
            ring,
            order,
        )
    }

    /// True if no term touches a masked variable.
    pub fn free_of(&self, mask: &[bool]) -> bool {
        self.terms.iter().all(|t| t.mono.block_degree(mask) == 0)
    }

    pub fn total_sugar(&self) -> u64 {
        self.terms
            .iter()
            .map(|t| t.mono.total_degree())
            .max()
            .unwrap_or(0)
    }
}

/// A computed (reduced) Gröbner basis of a submodule of B^rank.
#[derive(Debug, Clone)]
pub struct ModuleGB {
    pub rank: usize,
    pub order: ModuleOrder,
    pub gens: Vec<MVec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pair {
    sugar: u64,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; we want the smallest (sugar, i, j) first.
        other
            .sugar
            .cmp(&self.sugar)
            .then_with(|| other.i.cmp(&self.i))
            .then_with(|| other.j.cmp(&self.j))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Full normal form (head and tail) of `v` against `gens`.
pub fn normal_form(
    v: &MVec,
    gens: &[MVec],
    ring: &RingDescriptor,
    order: &ModuleOrder,
    budget: &Budget,
) -> Result<MVec> {
    let mut out: Vec<MTerm> = Vec::new();
    let mut work = v.clone();
    'outer: while let Some(lt) = work.lt().cloned() {
        budget.tick(1)?;
        for g in gens {
            if let Some(glt) = g.lt() {
                if glt.pos == lt.pos {
                    if let Some(q) = lt.mono.checked_div(&glt.mono) {
                        let c = ring.field.div(lt.coeff, glt.coeff);
                        work = work.axpy(c, &q, g, ring, order);
                        continue 'outer;
                    }
                }
            }
        }
        out.push(lt);
        work.terms.remove(0);
    }
    Ok(MVec { terms: out })
}

/// Buchberger with sugar selection; returns a reduced basis (monic leading
/// coefficients, no leading term divides another, tails fully reduced),
/// sorted ascending by leading term for reproducible output.
pub fn buchberger(
    input: &[MVec],
    rank: usize,
    ring: &RingDescriptor,
    order: &ModuleOrder,
    budget: &Budget,
) -> Result<ModuleGB> {
    buchberger_with_known_prefix(&[], input, rank, ring, order, budget)
}

/// Extend a basis already known to be a Gröbner basis by new elements:
/// S-pairs inside the known prefix reduce to zero by assumption, so only
/// (old, new) and (new, new) pairs are processed.
pub fn buchberger_extend(
    known_gb: &[MVec],
    new: &[MVec],
    rank: usize,
    ring: &RingDescriptor,
    order: &ModuleOrder,
    budget: &Budget,
) -> Result<ModuleGB> {
    buchberger_with_known_prefix(known_gb, new, rank, ring, order, budget)
}

fn buchberger_with_known_prefix(
    known_gb: &[MVec],
    input: &[MVec],
    rank: usize,
    ring: &RingDescriptor,
    order: &ModuleOrder,
    budget: &Budget,
) -> Result<ModuleGB> {
    let mut basis: Vec<MVec> = Vec::new();
    let mut sugars: Vec<u64> = Vec::new();
    let mut heap: BinaryHeap<Pair> = BinaryHeap::new();

    let push = |v: MVec,
                pair_floor: usize,
                basis: &mut Vec<MVec>,
                sugars: &mut Vec<u64>,
                heap: &mut BinaryHeap<Pair>| {
        let sugar = v.total_sugar();
        let idx = basis.len();
        for (k, g) in basis.iter().enumerate() {
            if idx < pair_floor && k < pair_floor {
                continue;
            }
            let (a, b) = (g.lt().unwrap(), v.lt().unwrap());
            if a.pos != b.pos {
                continue;
            }
            // Product criterion is only valid in the ideal (rank-one) case.
            if rank == 1 && a.mono.coprime(&b.mono) {
                continue;
            }
            let lcm = a.mono.lcm(&b.mono);
            let s = (sugars[k] + lcm.total_degree() - a.mono.total_degree())
                .max(sugar + lcm.total_degree() - b.mono.total_degree());
            heap.push(Pair { sugar: s, i: k, j: idx });
        }
        basis.push(v);
        sugars.push(sugar);
    };

    let pair_floor = known_gb.len();
    for v in known_gb {
        let v = MVec::normalize(v.terms.clone(), ring, order);
        if !v.is_zero() {
            push(v.monic(ring), pair_floor, &mut basis, &mut sugars, &mut heap);
        }
    }
    for v in input {
        let v = MVec::normalize(v.terms.clone(), ring, order);
        if !v.is_zero() {
            push(v.monic(ring), pair_floor, &mut basis, &mut sugars, &mut heap);
        }
    }

    while let Some(p) = heap.pop() {
        budget.tick(1)?;
        let (fi, fj) = (&basis[p.i], &basis[p.j]);
        let (a, b) = (fi.lt().unwrap(), fj.lt().unwrap());
        debug_assert_eq!(a.pos, b.pos);
        let lcm = a.mono.lcm(&b.mono);
        // Chain criterion: some other basis element's lead strictly divides
        // the lcm away from both endpoints.
        let chained = basis.iter().enumerate().any(|(k, g)| {
            if k == p.i || k == p.j {
                return false;
            }
            let glt = g.lt().unwrap();
            glt.pos == a.pos
                && glt.mono.divides(&lcm)
                && glt.mono.lcm(&a.mono) != lcm
                && glt.mono.lcm(&b.mono) != lcm
        });
        if chained {
            continue;
        }
        let qa = lcm.checked_div(&a.mono).unwrap();
        let qb = lcm.checked_div(&b.mono).unwrap();
        // Both monic: S = qa*fi - qb*fj.
        let s_poly = MVec {
            terms: fi
                .terms
                .iter()
                .map(|t| MTerm {
                    pos: t.pos,
                    mono: t.mono.mul(&qa),
                    coeff: t.coeff,
                })
                .collect(),
        }
        .axpy(1, &qb, fj, ring, order);
        let red = normal_form(&s_poly, &basis, ring, order, budget)?;
        if !red.is_zero() {
            push(red.monic(ring), pair_floor, &mut basis, &mut sugars, &mut heap);
        }
    }

    // Reduce: sort ascending by leading term, drop dominated leads, then
    // tail-reduce each against the rest.
    basis.sort_by(|x, y| {
        let (a, b) = (x.lt().unwrap(), y.lt().unwrap());
        order.cmp((a.pos, &a.mono), (b.pos, &b.mono))
    });
    let mut kept: Vec<MVec> = Vec::new();
    for g in basis {
        let glt = g.lt().unwrap();
        let dominated = kept.iter().any(|h| {
            let hlt = h.lt().unwrap();
            hlt.pos == glt.pos && hlt.mono.divides(&glt.mono)
        });
        if !dominated {
            kept.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<MVec> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&kept[i], &others, ring, order, budget)?;
        // The lead survives (no other lead divides it), tails are reduced.
        debug_assert!(!r.is_zero());
        reduced.push(r.monic(ring));
    }
    reduced.sort_by(|x, y| {
        let (a, b) = (x.lt().unwrap(), y.lt().unwrap());
        order.cmp((a.pos, &a.mono), (b.pos, &b.mono))
    });
    Ok(ModuleGB {
        rank,
        order: order.clone(),
        gens: reduced,
    })
}

impl ModuleGB {
    pub fn contains(&self, v: &MVec, ring: &RingDescriptor, budget: &Budget) -> Result<bool> {
        Ok(normal_form(v, &self.gens, ring, &self.order, budget)?.is_zero())
    }
}

/// Generators of the syzygy module of `columns` inside B^rank: the kernel of
/// B^c -> B^rank sending the c-th basis vector to `columns[c]`. Computed from
/// a Gröbner basis of the graph {(v_j, e_j)} in B^(rank+c) under an order
/// making the first block dominant.
pub fn syzygies(
    columns: &[MVec],
    rank: usize,
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Vec<MVec>> {
    let c = columns.len();
    let order = ModuleOrder::pot();
    let mut aug = Vec::with_capacity(c);
    for (j, col) in columns.iter().enumerate() {
        let mut v = col.clone();
        v.terms.push(MTerm {
            pos: rank + j,
            mono: Monomial::one(ring.nvars()),
            coeff: 1,
        });
        aug.push(MVec::normalize(v.terms, ring, &order));
    }
    let gb = buchberger(&aug, rank + c, ring, &order, budget)?;
    let mut out = Vec::new();
    for g in gb.gens {
        if g.terms.iter().all(|t| t.pos >= rank) {
            out.push(g.project(rank..rank + c, ring, &order));
        }
    }
    Ok(out)
}

/// Generators of the preimage {w in B^a : map(w) in N} where `map_cols[i]`
/// is the image of the i-th basis vector of B^a inside B^b and `sub_gens`
/// generate N.
pub fn preimage(
    map_cols: &[MVec],
    sub_gens: &[MVec],
    rank_b: usize,
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Vec<MVec>> {
    let mut all: Vec<MVec> = map_cols.to_vec();
    all.extend(sub_gens.iter().cloned());
    let syz = syzygies(&all, rank_b, ring, budget)?;
    let order = ModuleOrder::pot();
    Ok(syz
        .iter()
        .map(|s| s.project(0..map_cols.len(), ring, &order))
        .collect())
}

/// Intersect a submodule of B^rank with the subspace where the masked
/// variables vanish: GB under the elimination order, keep mask-free vectors.
pub fn eliminate_module(
    gens: &[MVec],
    rank: usize,
    mask: &[bool],
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Vec<MVec>> {
    let order = ModuleOrder::elim(mask.to_vec());
    let sorted: Vec<MVec> = gens
        .iter()
        .map(|g| MVec::normalize(g.terms.clone(), ring, &order))
        .collect();
    let gb = buchberger(&sorted, rank, ring, &order, budget)?;
    Ok(gb
        .gens
        .into_iter()
        .filter(|g| g.free_of(mask))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::PrimeField;
    use std::sync::Arc;

    fn kxy() -> Arc<RingDescriptor> {
        RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap()
    }

    fn p(s: &str, r: &RingDescriptor) -> Polynomial {
        crate::parse::parse_polynomial(s, r).unwrap()
    }

    fn ideal_gb(gens: &[&str], r: &Arc<RingDescriptor>, order: MonomialOrder) -> Vec<Polynomial> {
        let budget = Budget::default();
        let morder = ModuleOrder {
            elim: None,
            base: order,
        };
        let vecs: Vec<MVec> = gens
            .iter()
            .map(|s| MVec::from_poly(&p(s, r), 0, r, &morder))
            .collect();
        let gb = buchberger(&vecs, 1, r, &morder, &budget).unwrap();
        gb.gens.iter().map(|g| g.component(0, r)).collect()
    }

    #[test]
    fn test_already_reduced() {
        let r = kxy();
        let gb = ideal_gb(&["x", "y"], &r, MonomialOrder::DegRevLex);
        // Output ascending by leading term: y < x under degrevlex.
        assert_eq!(gb.len(), 2);
        assert_eq!(gb[0].display(&r), "y");
        assert_eq!(gb[1].display(&r), "x");
    }

    #[test]
    fn test_principal() {
        let r = kxy();
        let gb = ideal_gb(&["x"], &r, MonomialOrder::DegRevLex);
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0].display(&r), "x");
    }

    #[test]
    fn test_lex_elimination_by_hand() {
        // {x^2 - y, x*y - 1} under lex(x > y): basis {x - y^2, y^3 - 1},
        // the hand elimination substituting x = y^2 into xy - 1.
        let r = kxy();
        let gb = ideal_gb(&["x^2 - y", "x*y - 1"], &r, MonomialOrder::Lex);
        assert_eq!(gb.len(), 2);
        let expect0 = p("y^3 - 1", &r);
        let expect1 = p("x - y^2", &r);
        assert!(gb[0].sub(&expect0, &r).is_zero());
        assert!(gb[1].sub(&expect1, &r).is_zero());
    }

    #[test]
    fn test_koszul_syzygy() {
        let r = kxy();
        let budget = Budget::default();
        let order = ModuleOrder::pot();
        let cols = vec![
            MVec::from_poly(&p("x", &r), 0, &r, &order),
            MVec::from_poly(&p("y", &r), 0, &r, &order),
        ];
        let syz = syzygies(&cols, 1, &r, &budget).unwrap();
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        // s = (y, -x) up to sign: check x*s0 + y*s1 = 0.
        let combo = s
            .component(0, &r)
            .mul(&p("x", &r), &r)
            .add(&s.component(1, &r).mul(&p("y", &r), &r), &r);
        assert!(combo.is_zero());
    }

    #[test]
    fn test_regular_element_no_syzygy() {
        let r = kxy();
        let budget = Budget::default();
        let order = ModuleOrder::pot();
        let cols = vec![MVec::from_poly(&p("x", &r), 0, &r, &order)];
        let syz = syzygies(&cols, 1, &r, &budget).unwrap();
        assert!(syz.is_empty());
    }

    #[test]
    fn test_veronese_syzygies() {
        // x^2, xy, y^2: two syzygies, and every output kills the columns.
        let r = kxy();
        let budget = Budget::default();
        let order = ModuleOrder::pot();
        let cols: Vec<MVec> = ["x^2", "x*y", "y^2"]
            .iter()
            .map(|s| MVec::from_poly(&p(s, &r), 0, &r, &order))
            .collect();
        let syz = syzygies(&cols, 1, &r, &budget).unwrap();
        assert_eq!(syz.len(), 2);
        for s in &syz {
            let mut combo = Polynomial::zero();
            for (j, c) in ["x^2", "x*y", "y^2"].iter().enumerate() {
                combo = combo.add(&s.component(j, &r).mul(&p(c, &r), &r), &r);
            }
            assert!(combo.is_zero());
        }
    }

    #[test]
    fn test_budget_exhaustion_is_loud() {
        let r = kxy();
        let budget = Budget::new(3);
        let order = ModuleOrder::pot();
        let cols: Vec<MVec> = ["x^2 - y", "x*y - 1", "y^3 + x"]
            .iter()
            .map(|s| MVec::from_poly(&p(s, &r), 0, &r, &order))
            .collect();
        let res = buchberger(&cols, 1, &r, &order, &budget);
        assert!(matches!(res, Err(Error::Budget { .. })));
    }

    #[test]
    fn test_normal_form_membership() {
        let r = kxy();
        let budget = Budget::default();
        let order = ModuleOrder::pot();
        let cols: Vec<MVec> = ["x^2", "x*y", "y^2"]
            .iter()
            .map(|s| MVec::from_poly(&p(s, &r), 0, &r, &order))
            .collect();
        let gb = buchberger(&cols, 1, &r, &order, &budget).unwrap();
        let inside = MVec::from_poly(&p("x^3 + 2*x*y^2", &r), 0, &r, &order);
        let outside = MVec::from_poly(&p("x + y^2", &r), 0, &r, &order);
        assert!(gb.contains(&inside, &r, &budget).unwrap());
        assert!(!gb.contains(&outside, &r, &budget).unwrap());
    }
}
