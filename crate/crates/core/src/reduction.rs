//! Reductions of good filtrations: verification, randomized search for
//! minimal reductions, reduction numbers, and the degree-one form maps into
//! G(F)_1 and F(F)_1.
//!
//! A reduction certificate is a finite object: J I_n = I_{n+1} verified on a
//! window of length n0 + 1 starting at the witness index. Goodness makes the
//! tail deterministic, so equality propagates to all larger n. Certificates
//! record the seed and attempt and replay exactly.

use crate::blowup::{analytic_spread, BlowupContext};
use crate::engine::{normal_form, Budget, MVec, ModuleOrder};
use crate::error::{Error, Result};
use crate::filtration::GoodFiltration;
use crate::ideal::IdealHandle;
use crate::poly::Polynomial;
use crate::rng::SplitMix64;
use serde::Serialize;

/// Outcome of an is_reduction test.
#[derive(Debug, Clone)]
pub enum ReductionWitness {
    /// J I_n = I_{n+1} holds from this index on (verified window).
    Reduction { first_n: usize },
    /// A persistent strict containment within the budget window.
    NotReduction { failing_n: usize },
}

/// Test J ⊆ I_1 for being a reduction of F, with a finite certificate.
pub fn is_reduction(
    j: &IdealHandle,
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<ReductionWitness> {
    if !f.i1().contains_ideal(j, budget)? {
        return Err(Error::invalid("J is not contained in I_1"));
    }
    let window = f.n0 + 1;
    let scan = f.n0 + window + 2;
    let pre = f.prefix(scan + 1, budget)?;
    let mut eq = Vec::with_capacity(scan + 1);
    for n in 0..=scan {
        let prod = j.product(&pre[n], budget)?;
        eq.push(prod.equal(&pre[n + 1], budget)?);
    }
    for start in 0..=scan - window + 1 {
        if (start..start + window).all(|n| eq[n]) {
            return Ok(ReductionWitness::Reduction { first_n: start });
        }
    }
    let failing_n = eq.iter().rposition(|&e| !e).unwrap_or(0);
    Ok(ReductionWitness::NotReduction { failing_n })
}

/// r_J(F) = max{ n : I_n != J I_{n-1} }, with I_n = A for n <= 0 so that the
/// value is always >= 0 for proper J.
pub fn reduction_number(
    f: &GoodFiltration,
    j: &IdealHandle,
    budget: &Budget,
) -> Result<usize> {
    let witness = is_reduction(j, f, budget)?;
    let first_n = match witness {
        ReductionWitness::Reduction { first_n } => first_n,
        ReductionWitness::NotReduction { .. } => {
            return Err(Error::invalid("J is not a reduction of F"))
        }
    };
    // Beyond first_n the window plus goodness certify equality; the sup is
    // attained at or below first_n.
    let pre = f.prefix(first_n + 1, budget)?;
    for n in (1..=first_n).rev() {
        let prod = j.product(&pre[n - 1], budget)?;
        if !prod.equal(&pre[n], budget)? {
            return Ok(n);
        }
    }
    // n = 0: I_0 = A vs J·A = J, distinct for proper J.
    Ok(0)
}

/// A seeded, replayable witness that a sampled ideal is a minimal reduction.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionCertificate {
    pub generators: Vec<String>,
    pub r_j: usize,
    /// Largest n with I_n != J I_{n-1} (equals r_j by definition).
    pub witness_n: usize,
    pub seed: u64,
    pub attempt: u64,
    pub spread: usize,
    #[serde(skip)]
    pub ideal: IdealHandle,
}

/// Search for a minimal reduction: ℓ random x-homogeneous combinations of
/// the minimal generators of I_1, one weight class per slot, retried with
/// fresh randomness until the reduction test passes.
pub fn minimal_reduction(
    f: &GoodFiltration,
    seed: u64,
    budget: &Budget,
) -> Result<ReductionCertificate> {
    let p = f.ring.field.characteristic();
    if p < 101 {
        return Err(Error::invalid(
            "residue field too small for randomized reduction search (need p >= 101)",
        ));
    }
    let spread = analytic_spread(f, budget)?;
    if spread == 0 {
        return Err(Error::invalid("analytic spread 0: no reduction search"));
    }
    let i1 = f.i1().minimalized(budget)?;
    // Group minimal generators by x-weight.
    let mut classes: Vec<(u64, Vec<&Polynomial>)> = Vec::new();
    for g in &i1.gens {
        let w = g.x_weight(&f.ring).unwrap();
        match classes.iter_mut().find(|(cw, _)| *cw == w) {
            Some((_, v)) => v.push(g),
            None => classes.push((w, vec![g])),
        }
    }
    classes.sort_by_key(|(w, _)| *w);
    let max_attempts = 60u64;
    for attempt in 0..max_attempts {
        let mut rng = SplitMix64::keyed(seed, attempt);
        let mut gens = Vec::with_capacity(spread);
        for _ in 0..spread {
            let (_, class) = &classes[rng.below(classes.len() as u64) as usize];
            let mut v = Polynomial::zero();
            for g in class {
                let c = rng.below(p - 1) + 1;
                v = v.add(&g.scale(c, &f.ring), &f.ring);
            }
            gens.push(v);
        }
        let j = IdealHandle::new_unchecked(f.ring.clone(), gens.clone());
        if let ReductionWitness::Reduction { .. } = is_reduction(&j, f, budget)? {
            let r_j = reduction_number(f, &j, budget)?;
            return Ok(ReductionCertificate {
                generators: gens.iter().map(|g| g.display(&f.ring)).collect(),
                r_j,
                witness_n: r_j,
                seed,
                attempt,
                spread,
                ideal: j,
            });
        }
    }
    Err(Error::math(format!(
        "reduction search failed: spread {spread}, {max_attempts} attempts"
    )))
}

/// Sampled reduction number: the minimum r_J over `samples` seeds, never
/// asserted to be the true minimum.
#[derive(Debug, Clone, Serialize)]
pub struct SampledReductionNumber {
    pub value: usize,
    pub samples: usize,
    pub best: ReductionCertificate,
}

pub fn sampled_reduction_number(
    f: &GoodFiltration,
    seed: u64,
    samples: usize,
    budget: &Budget,
) -> Result<SampledReductionNumber> {
    let mut best: Option<ReductionCertificate> = None;
    for k in 0..samples {
        let cert = minimal_reduction(f, seed.wrapping_add(k as u64), budget)?;
        if best.as_ref().map_or(true, |b| cert.r_j < b.r_j) {
            best = Some(cert);
        }
    }
    let best = best.ok_or_else(|| Error::invalid("no reduction samples requested"))?;
    Ok(SampledReductionNumber {
        value: best.r_j,
        samples,
        best,
    })
}

/// Coordinates of a° in the fiber basis given by the minimal generators of
/// I_1: solve a ≡ Σ c_i f_i modulo m I_1 + Q with scalar c_i. Errors when
/// a ∉ I_1.
pub fn fiber_form(
    a: &Polynomial,
    f: &GoodFiltration,
    ctx: &BlowupContext,
    budget: &Budget,
) -> Result<Vec<u64>> {
    let ring = &f.ring;
    if !f.i1().contains(a, budget)? {
        return Err(Error::invalid("element is not in I_1"));
    }
    let mm = f.maximal_ideal();
    let mi1 = mm.product(f.i1(), budget)?;
    let gb = crate::ideal::gb_of(&mi1.full_gens(), ring, budget)?;
    let order = ModuleOrder::pot();
    let nf = |g: &Polynomial| -> Result<Polynomial> {
        let v = MVec::from_poly(g, 0, ring, &order);
        Ok(normal_form(&v, &gb.gens, ring, &gb.order, budget)?.component(0, ring))
    };
    let target = nf(a)?;
    let images: Vec<Polynomial> = ctx
        .f_gens
        .iter()
        .map(|g| nf(g))
        .collect::<Result<_>>()?;
    // Solve target = Σ c_i images_i over F_p by elimination on the monomial
    // support.
    let mut monomials: Vec<crate::monomial::Monomial> = Vec::new();
    for p in images.iter().chain(std::iter::once(&target)) {
        for (m, _) in &p.terms {
            if !monomials.contains(m) {
                monomials.push(m.clone());
            }
        }
    }
    monomials.sort();
    let field = ring.field;
    let rows = monomials.len();
    let cols: Vec<Vec<u64>> = images
        .iter()
        .map(|p| {
            monomials
                .iter()
                .map(|m| {
                    p.terms
                        .iter()
                        .find(|(mm, _)| mm == m)
                        .map(|(_, c)| *c)
                        .unwrap_or(0)
                })
                .collect()
        })
        .collect();
    let rhs: Vec<u64> = monomials
        .iter()
        .map(|m| {
            target
                .terms
                .iter()
                .find(|(mm, _)| mm == m)
                .map(|(_, c)| *c)
                .unwrap_or(0)
        })
        .collect();
    // Gaussian elimination on the augmented system.
    let n = cols.len();
    let mut aug: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; n];
    let mut r0 = 0usize;
    for c in 0..n {
        if let Some(pr) = (r0..rows).find(|&r| aug[r][c] != 0) {
            aug.swap(r0, pr);
            let inv = field.inv(aug[r0][c]);
            for x in aug[r0].iter_mut() {
                *x = field.mul(*x, inv);
            }
            for r in 0..rows {
                if r != r0 && aug[r][c] != 0 {
                    let factor = aug[r][c];
                    for k in 0..=n {
                        let sub = field.mul(factor, aug[r0][k]);
                        aug[r][k] = field.sub(aug[r][k], sub);
                    }
                }
            }
            pivot_of_col[c] = r0;
            r0 += 1;
        }
    }
    // Consistency: no row 0 = nonzero.
    for r in r0..rows {
        if aug[r][n] != 0 {
            return Err(Error::math(
                "fiber form solve inconsistent (internal bug trap)",
            ));
        }
    }
    Ok((0..n)
        .map(|c| {
            if pivot_of_col[c] == usize::MAX {
                0
            } else {
                aug[pivot_of_col[c]][n]
            }
        })
        .collect())
}

/// The class of a in G(F)_1 = I_1/I_2 is zero iff a ∈ I_2.
pub fn initial_form_is_zero(
    a: &Polynomial,
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<bool> {
    if !f.i1().contains(a, budget)? {
        return Err(Error::invalid("element is not in I_1"));
    }
    let pre = f.prefix(2, budget)?;
    pre[2].contains(a, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::make_adic;
    use crate::parse::parse_polynomial;
    use crate::ring::RingDescriptor;
    use crate::scalar::PrimeField;
    use std::sync::Arc;

    fn kxy() -> Arc<RingDescriptor> {
        RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap()
    }

    fn ideal(r: &Arc<RingDescriptor>, gens: &[&str]) -> IdealHandle {
        let gs = gens
            .iter()
            .map(|s| parse_polynomial(s, r).unwrap())
            .collect();
        IdealHandle::new(r.clone(), gs).unwrap()
    }

    fn semigroup_ring() -> Arc<RingDescriptor> {
        let base =
            RingDescriptor::base(&["a", "b", "c"], &[3, 4, 5], PrimeField::default()).unwrap();
        let q = vec![
            parse_polynomial("b^2 - a*c", &base).unwrap(),
            parse_polynomial("b*c - a^3", &base).unwrap(),
            parse_polynomial("c^2 - a^2*b", &base).unwrap(),
        ];
        base.with_quotient(q).unwrap()
    }

    #[test]
    fn test_is_reduction_i1_itself() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        match is_reduction(f.i1(), &f, &b).unwrap() {
            ReductionWitness::Reduction { first_n } => assert!(first_n <= f.n0),
            _ => panic!("I_1 must be a reduction of its own filtration"),
        }
    }

    #[test]
    fn test_is_reduction_x2y2_of_m2() {
        // (x^2, y^2) reduces the m^2-adic filtration with witness 1.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let j = ideal(&r, &["x^2", "y^2"]);
        match is_reduction(&j, &f, &b).unwrap() {
            ReductionWitness::Reduction { first_n } => assert_eq!(first_n, 1),
            _ => panic!("expected a reduction"),
        }
        assert_eq!(reduction_number(&f, &j, &b).unwrap(), 1);
        // One quadric alone can never reduce an ideal of spread 2.
        let j1 = ideal(&r, &["x^2"]);
        assert!(matches!(
            is_reduction(&j1, &f, &b).unwrap(),
            ReductionWitness::NotReduction { .. }
        ));
    }

    #[test]
    fn test_reduction_number_of_maximal() {
        // r_m(adic m) = 0.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        assert_eq!(reduction_number(&f, f.i1(), &b).unwrap(), 0);
    }

    #[test]
    fn test_minimal_reduction_maximal_adic() {
        // Generic pair of linear forms generates m itself: r_J = 0.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let cert = minimal_reduction(&f, 42, &b).unwrap();
        assert_eq!(cert.spread, 2);
        assert_eq!(cert.r_j, 0);
    }

    #[test]
    fn test_minimal_reduction_m2() {
        // adic m^2: two generic quadrics, r_J = 1.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let cert = minimal_reduction(&f, 42, &b).unwrap();
        assert_eq!(cert.spread, 2);
        assert_eq!(cert.r_j, 1);
    }

    #[test]
    fn test_minimal_reduction_semigroup() {
        // (3,4,5)-semigroup m-adic: spread 1, J = (unit * a), r_J = 1.
        let ring = semigroup_ring();
        let b = Budget::default();
        let f = make_adic(&ideal(&ring, &["a", "b", "c"]), &b).unwrap();
        let cert = minimal_reduction(&f, 7, &b).unwrap();
        assert_eq!(cert.spread, 1);
        assert_eq!(cert.r_j, 1);
        // The winning generator must be the weight-3 one up to a unit.
        let g = &cert.ideal.gens[0];
        assert_eq!(g.x_weight(&ring), Some(3));
    }

    #[test]
    fn test_certificate_replay() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let c1 = minimal_reduction(&f, 99, &b).unwrap();
        let c2 = minimal_reduction(&f, 99, &b).unwrap();
        assert_eq!(c1.generators, c2.generators);
        assert_eq!(c1.r_j, c2.r_j);
        assert_eq!(c1.attempt, c2.attempt);
    }

    #[test]
    fn test_sampled_min_never_exceeds_single() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let sampled = sampled_reduction_number(&f, 5, 5, &b).unwrap();
        for k in 0..5u64 {
            let single = minimal_reduction(&f, 5 + k, &b).unwrap();
            assert!(sampled.value <= single.r_j);
        }
    }

    #[test]
    fn test_spread_matches_adic_of_i1() {
        // s(F) = s(I_1) across kinds: compare RR filtration to the adic one.
        let r = kxy();
        let b = Budget::default();
        let i = ideal(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let rr = crate::filtration::make_ratliff_rush(&i, 3, &b).unwrap();
        let adic_of_i1 = make_adic(rr.i1(), &b).unwrap();
        assert_eq!(
            analytic_spread(&rr, &b).unwrap(),
            analytic_spread(&adic_of_i1, &b).unwrap()
        );
    }

    #[test]
    fn test_fiber_form_coordinates() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        // x itself: coordinate vector is a standard basis vector.
        let cx = fiber_form(&parse_polynomial("x", &r).unwrap(), &f, &ctx, &b).unwrap();
        assert_eq!(cx.iter().filter(|&&c| c != 0).count(), 1);
        // A generic combination has all coordinates nonzero.
        let gen = parse_polynomial("3*x + 5*y", &r).unwrap();
        let cg = fiber_form(&gen, &f, &ctx, &b).unwrap();
        assert!(cg.iter().all(|&c| c != 0));
        // x^2 ∈ m I_1, so its fiber class is zero.
        let c2 = fiber_form(&parse_polynomial("x^2", &r).unwrap(), &f, &ctx, &b).unwrap();
        assert!(c2.iter().all(|&c| c == 0));
        // Elements outside I_1 are rejected.
        assert!(fiber_form(&Polynomial::one(&r), &f, &ctx, &b).is_err());
    }

    #[test]
    fn test_initial_form_zero_iff_in_i2() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        assert!(initial_form_is_zero(&parse_polynomial("x^2", &r).unwrap(), &f, &b).unwrap());
        assert!(!initial_form_is_zero(&parse_polynomial("x", &r).unwrap(), &f, &b).unwrap());
        assert!(initial_form_is_zero(&Polynomial::one(&r), &f, &b).is_err());
    }
}
