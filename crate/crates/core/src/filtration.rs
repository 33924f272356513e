//! Good filtrations: adic, Ratliff-Rush, integral-closure (monomial),
//! explicit chains, and the derived maximal-ideal filtration.
//!
//! Every constructor verifies the chain and multiplicativity invariants and a
//! finite goodness certificate: a window of consecutive verified equalities
//! I_{n+1} = I_1 I_n starting at the stabilization index n0, after which the
//! extension rule I_n := I_1 I_{n-1} defines the tail. A violation beyond the
//! window would contradict the verified extension rule, so the certificate is
//! decidable and sound.

use crate::engine::Budget;
use crate::error::{Error, Result};
use crate::ideal::IdealHandle;
use crate::monomial::Monomial;
use crate::newton::integral_closure_power_gens;
use crate::poly::Polynomial;
use crate::ring::{RingDescriptor, VarBlock};
use std::sync::Arc;

pub const GOODNESS_WINDOW: usize = 2;
pub const DEFAULT_TABLE_BUDGET: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationKind {
    Adic,
    RatliffRush,
    IntegralClosureMonomial,
    Explicit,
    MFiltration,
}

impl FiltrationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiltrationKind::Adic => "adic",
            FiltrationKind::RatliffRush => "ratliff_rush",
            FiltrationKind::IntegralClosureMonomial => "integral_closure_monomial",
            FiltrationKind::Explicit => "explicit",
            FiltrationKind::MFiltration => "m_filtration_of",
        }
    }
}

#[derive(Debug, Clone)]
pub struct GoodFiltration {
    pub ring: Arc<RingDescriptor>,
    pub kind: FiltrationKind,
    /// table[0] = A; entries through at least n0 + GOODNESS_WINDOW.
    pub table: Vec<IdealHandle>,
    pub n0: usize,
    /// Driver of goodness: I_1 for ordinary kinds; the parent's I_1 for the
    /// derived maximal-ideal filtration (whose own first ideal is m).
    pub base_ideal: IdealHandle,
}

impl GoodFiltration {
    pub fn i1(&self) -> &IdealHandle {
        &self.table[1]
    }

    /// The maximal ideal m = (x-variables) of the base ring.
    pub fn maximal_ideal(&self) -> IdealHandle {
        maximal_ideal(&self.ring)
    }

    /// Table extended by the rule I_n = base * I_{n-1} up to index `upto`
    /// inclusive.
    pub fn prefix(&self, upto: usize, budget: &Budget) -> Result<Vec<IdealHandle>> {
        let mut out: Vec<IdealHandle> = self.table.clone();
        while out.len() <= upto {
            let next = self.base_ideal.product(out.last().unwrap(), budget)?;
            out.push(next);
        }
        out.truncate(upto + 1);
        Ok(out)
    }
}

pub fn maximal_ideal(ring: &Arc<RingDescriptor>) -> IdealHandle {
    let gens = ring
        .indices(VarBlock::X)
        .into_iter()
        .map(|i| Polynomial::var(ring, i))
        .collect();
    IdealHandle::new_unchecked(ring.clone(), gens)
}

/// Chain, multiplicativity and goodness checks for a table with its driver.
/// Multiplicativity is verified for all pairs i, j <= n0 against extended
/// entries, which together with the extension rule certifies it in every
/// degree.
fn validate(
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<()> {
    let table = &f.table;
    if table.len() < 2 {
        return Err(Error::invalid("filtration table needs at least I_1"));
    }
    if !table[0].is_unit_ideal(budget)? {
        return Err(Error::invalid("I_0 must be the unit ideal"));
    }
    if table[1].is_unit_ideal(budget)? {
        return Err(Error::invalid("I_1 = A is not a filtration"));
    }
    for n in 0..table.len() - 1 {
        if !table[n].contains_ideal(&table[n + 1], budget)? {
            return Err(Error::invalid(format!(
                "chain violation: I_{} is not contained in I_{}",
                n + 1,
                n
            )));
        }
    }
    let n0 = f.n0;
    let full = f.prefix(2 * n0.max(1) + GOODNESS_WINDOW + 1, budget)?;
    match f.kind {
        FiltrationKind::MFiltration => {
            // Module multiplicativity over the driver: base^i * F_j ⊆ F_{i+j}.
            for i in 1..=n0 {
                let pow = f.base_ideal.power(i as u32, budget)?;
                for j in 1..=n0 {
                    let prod = pow.product(&full[j], budget)?;
                    if !full[i + j].contains_ideal(&prod, budget)? {
                        return Err(Error::invalid(format!(
                            "module multiplicativity violation at ({i},{j})"
                        )));
                    }
                }
            }
        }
        _ => {
            for i in 1..=n0 {
                for j in i..=n0 {
                    let prod = full[i].product(&full[j], budget)?;
                    if !full[i + j].contains_ideal(&prod, budget)? {
                        return Err(Error::invalid(format!(
                            "multiplicativity violation: I_{i} * I_{j} not inside I_{}",
                            i + j
                        )));
                    }
                }
            }
        }
    }
    // Goodness window on the stored table (beyond it the extension rule is
    // the definition).
    let checkable = table.len().saturating_sub(1).min(n0 + GOODNESS_WINDOW);
    for n in n0..checkable {
        let prod = f.base_ideal.product(&table[n], budget)?;
        if !prod.equal(&table[n + 1], budget)? {
            return Err(Error::invalid(format!(
                "goodness not certified: driver * I_{n} differs from I_{}",
                n + 1
            )));
        }
    }
    Ok(())
}

/// Adic filtration of a proper nonzero ideal.
pub fn make_adic(i: &IdealHandle, budget: &Budget) -> Result<GoodFiltration> {
    if i.is_unit_ideal(budget)? {
        return Err(Error::invalid("adic filtration of the unit ideal"));
    }
    if i.is_zero_ideal(budget)? {
        return Err(Error::invalid("adic filtration of the zero ideal"));
    }
    let i_min = i.minimalized(budget)?;
    let f = GoodFiltration {
        ring: i.ring.clone(),
        kind: FiltrationKind::Adic,
        table: vec![IdealHandle::unit(i.ring.clone()), i_min.clone()],
        n0: 1,
        base_ideal: i_min,
    };
    validate(&f, budget)?;
    Ok(f)
}

/// Ratliff-Rush filtration: entry n is the stabilized union of the colon
/// chain (I^{n+k} : I^k), detected when two consecutive k agree.
pub fn make_ratliff_rush(
    i: &IdealHandle,
    k_max: usize,
    budget: &Budget,
) -> Result<GoodFiltration> {
    if i.is_unit_ideal(budget)? || i.is_zero_ideal(budget)? {
        return Err(Error::invalid("Ratliff-Rush of a trivial ideal"));
    }
    // Precondition: I contains a nonzerodivisor, checked as (0 : I) = 0.
    let zero = IdealHandle::zero(i.ring.clone());
    let ann = zero.quotient(i, budget)?;
    if !ann.is_zero_ideal(budget)? {
        return Err(Error::invalid(
            "Ratliff-Rush undefined: I has nonzero annihilator",
        ));
    }
    let i_min = i.minimalized(budget)?;
    let base = i_min.clone();
    let closure = move |n: usize, budget: &Budget| -> Result<IdealHandle> {
        let mut prev = base.power(n as u32, budget)?;
        for k in 1..=k_max {
            let pow_nk = base.power((n + k) as u32, budget)?;
            let pow_k = base.power(k as u32, budget)?;
            let cur = pow_nk.quotient(&pow_k, budget)?;
            if cur.equal(&prev, budget)? {
                return prev.minimalized(budget);
            }
            prev = cur;
        }
        Err(Error::math(format!(
            "RR budget exceeded: colon chain for n = {n} not stable within k_max = {k_max}"
        )))
    };
    build_closure_filtration(
        i_min,
        FiltrationKind::RatliffRush,
        closure,
        budget,
    )
}

/// Integral-closure filtration of a monomial ideal of a polynomial base ring.
pub fn make_integral_closure_monomial(
    i: &IdealHandle,
    n_max: usize,
    budget: &Budget,
) -> Result<GoodFiltration> {
    if !i.ring.quotient_gens.is_empty() {
        return Err(Error::invalid(
            "integral-closure filtration requires a polynomial base ring",
        ));
    }
    let mut exps: Vec<Vec<u64>> = Vec::new();
    for g in &i.gens {
        if g.terms.len() != 1 {
            return Err(Error::invalid(
                "integral-closure filtration requires a monomial ideal",
            ));
        }
        exps.push(g.terms[0].0 .0.iter().map(|&e| e as u64).collect());
    }
    if exps.is_empty() {
        return Err(Error::invalid("integral closure of the zero ideal"));
    }
    let ring = i.ring.clone();
    let i_min = i.minimalized(budget)?;
    let closure = move |n: usize, budget: &Budget| -> Result<IdealHandle> {
        if n > n_max + GOODNESS_WINDOW + 1 {
            return Err(Error::math(format!(
                "integral-closure budget exceeded at power {n} (n_max = {n_max})"
            )));
        }
        let gens = integral_closure_power_gens(&exps, n as u64)?;
        let polys = gens
            .into_iter()
            .map(|v| {
                Polynomial::monomial(Monomial(v.iter().map(|&e| e as u32).collect()), 1)
            })
            .collect();
        IdealHandle::new_unchecked(ring.clone(), polys).minimalized(budget)
    };
    build_closure_filtration(
        i_min,
        FiltrationKind::IntegralClosureMonomial,
        closure,
        budget,
    )
}

/// Shared driver for closure-type filtrations: compute table entries by the
/// closure operation, find the smallest stabilization index whose goodness
/// window passes, and validate.
fn build_closure_filtration(
    i_min: IdealHandle,
    kind: FiltrationKind,
    closure: impl Fn(usize, &Budget) -> Result<IdealHandle>,
    budget: &Budget,
) -> Result<GoodFiltration> {
    let ring = i_min.ring.clone();
    let mut table = vec![IdealHandle::unit(ring.clone()), closure(1, budget)?];
    let base = table[1].clone();
    // eq[n-1] = (driver * I_n == I_{n+1}); grow the table until a full
    // goodness window starting at some n0 is verified.
    let mut eq: Vec<bool> = Vec::new();
    let max_entries = DEFAULT_TABLE_BUDGET + GOODNESS_WINDOW;
    let mut n0 = None;
    for n in 1..max_entries {
        table.push(closure(n + 1, budget)?);
        let prod = base.product(&table[n], budget)?;
        eq.push(prod.equal(&table[n + 1], budget)?);
        // Longest all-true suffix of eq gives a candidate n0.
        let mut start = None;
        for s in (1..=eq.len()).rev() {
            if eq[s - 1] {
                start = Some(s);
            } else {
                break;
            }
        }
        if let Some(s) = start {
            if eq.len() - (s - 1) >= GOODNESS_WINDOW {
                n0 = Some(s);
                break;
            }
        }
    }
    let n0 = n0.ok_or_else(|| {
        Error::math(format!(
            "goodness not certified within the table budget for {} filtration",
            kind.as_str()
        ))
    })?;
    let f = GoodFiltration {
        ring,
        kind,
        table,
        n0,
        base_ideal: base,
    };
    validate(&f, budget)?;
    Ok(f)
}

/// Explicit descending chain I_1..I_k given by the user; all invariants are
/// verified and failures are loud.
pub fn make_explicit(ideals: Vec<IdealHandle>, budget: &Budget) -> Result<GoodFiltration> {
    if ideals.is_empty() {
        return Err(Error::invalid("explicit filtration needs at least I_1"));
    }
    let ring = ideals[0].ring.clone();
    let mut table = vec![IdealHandle::unit(ring.clone())];
    table.extend(ideals);
    let n0 = table.len() - 1;
    let base = table[1].clone();
    // Shrink n0 where the table already satisfies the extension rule.
    let mut n0_eff = n0;
    for n in (1..n0).rev() {
        let prod = base.product(&table[n], budget)?;
        if prod.equal(&table[n + 1], budget)? {
            n0_eff = n;
        } else {
            break;
        }
    }
    let mut f = GoodFiltration {
        ring,
        kind: FiltrationKind::Explicit,
        table,
        n0: n0_eff,
        base_ideal: base,
    };
    // Ensure the goodness window is materialized past n0.
    f.table = f.prefix(n0_eff + GOODNESS_WINDOW, budget)?;
    validate(&f, budget)?;
    Ok(f)
}

/// The derived maximal-ideal filtration of §-style: A ⊃ m ⊃ m I_1 ⊃ m I_2 ⊃ …
/// Requires the standing hypothesis I_{n+1} ⊆ m I_n, reported with the
/// violating degree otherwise. Its goodness driver is the parent's I_1.
pub fn derive_m_filtration(parent: &GoodFiltration, budget: &Budget) -> Result<GoodFiltration> {
    let ring = parent.ring.clone();
    let mm = maximal_ideal(&ring);
    let parent_table = parent.prefix(parent.n0 + GOODNESS_WINDOW + 1, budget)?;
    // Standing hypothesis in table degrees; the tail follows from goodness
    // since I_{n+1} = I_1 I_n ⊆ m I_n once I_1 ⊆ m.
    if !mm.contains_ideal(parent.i1(), budget)? {
        return Err(Error::invalid("F <= mF fails: I_1 not inside m"));
    }
    for n in 1..=parent.n0 + 1 {
        let rhs = mm.product(&parent_table[n], budget)?;
        if !rhs.contains_ideal(&parent_table[n + 1], budget)? {
            return Err(Error::invalid(format!(
                "F <= mF fails at degree {}: I_{} not inside m I_{}",
                n + 1,
                n + 1,
                n
            )));
        }
    }
    let mut table = vec![IdealHandle::unit(ring.clone()), mm.clone()];
    for n in 1..=parent.n0 + GOODNESS_WINDOW {
        table.push(mm.product(&parent_table[n], budget)?);
    }
    let f = GoodFiltration {
        ring,
        kind: FiltrationKind::MFiltration,
        table,
        n0: parent.n0 + 1,
        base_ideal: parent.i1().clone(),
    };
    validate(&f, budget)?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::scalar::PrimeField;

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

    #[test]
    fn test_adic_maximal() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        assert_eq!(f.n0, 1);
        let pre = f.prefix(3, &b).unwrap();
        assert!(pre[2]
            .equal(&ideal(&r, &["x^2", "x*y", "y^2"]), &b)
            .unwrap());
        assert_eq!(pre[3].gens.len(), 4);
    }

    #[test]
    fn test_adic_rejects_trivial() {
        let r = kxy();
        let b = Budget::default();
        assert!(make_adic(&IdealHandle::unit(r.clone()), &b).is_err());
        assert!(make_adic(&IdealHandle::zero(r.clone()), &b).is_err());
    }

    #[test]
    fn test_ratliff_rush_of_maximal_powers_is_adic() {
        let r = kxy();
        let b = Budget::default();
        let f = make_ratliff_rush(&ideal(&r, &["x", "y"]), 8, &b).unwrap();
        let adic = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        for n in 1..4 {
            let fe = f.prefix(n, &b).unwrap();
            let ae = adic.prefix(n, &b). unwrap();
            assert!(fe[n].equal(&ae[n], &b).unwrap());
        }
    }

    #[test]
    fn test_ratliff_rush_principal() {
        let r = kxy();
        let b = Budget::default();
        let f = make_ratliff_rush(&ideal(&r, &["x^2"]), 8, &b).unwrap();
        let e = f.prefix(3, &b).unwrap();
        assert!(e[3].equal(&ideal(&r, &["x^6"]), &b).unwrap());
    }

    #[test]
    fn test_ratliff_rush_classic_example() {
        // I = (x^4, x^3 y, x y^3, y^4): the closure picks up x^2 y^2, with
        // colon-chain stabilization at k <= 3.
        let r = kxy();
        let b = Budget::default();
        let i = ideal(&r, &["x^4", "x^3*y", "x*y^3", "y^4"]);
        let f = make_ratliff_rush(&i, 3, &b).unwrap();
        let expected = ideal(&r, &["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"]);
        assert!(f.i1().equal(&expected, &b).unwrap());
        // x^2 y^2 was genuinely missing from I.
        let x2y2 = parse_polynomial("x^2*y^2", &r).unwrap();
        assert!(!i.contains(&x2y2, &b).unwrap());
        assert!(f.i1().contains(&x2y2, &b).unwrap());
    }

    #[test]
    fn test_ratliff_rush_needs_nonzerodivisor() {
        let base = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap();
        let ring = base
            .with_quotient(vec![parse_polynomial("x*y", &base).unwrap()])
            .unwrap();
        let b = Budget::default();
        let i =
            IdealHandle::new(ring.clone(), vec![parse_polynomial("x", &ring).unwrap()]).unwrap();
        // (0 : x) = (y) != 0 in k[x,y]/(xy).
        assert!(make_ratliff_rush(&i, 8, &b).is_err());
    }

    #[test]
    fn test_integral_closure_x3_y3() {
        let r = kxy();
        let b = Budget::default();
        let f = make_integral_closure_monomial(&ideal(&r, &["x^3", "y^3"]), 8, &b).unwrap();
        let expected = ideal(&r, &["x^3", "x^2*y", "x*y^2", "y^3"]);
        assert!(f.i1().equal(&expected, &b).unwrap());
    }

    #[test]
    fn test_integral_closure_x2_y3() {
        let r = kxy();
        let b = Budget::default();
        let f = make_integral_closure_monomial(&ideal(&r, &["x^2", "y^3"]), 8, &b).unwrap();
        let xy2 = parse_polynomial("x*y^2", &r).unwrap();
        assert!(f.i1().contains(&xy2, &b).unwrap());
    }

    #[test]
    fn test_integral_closure_rejects_nonmonomial() {
        let r = kxy();
        let b = Budget::default();
        assert!(make_integral_closure_monomial(&ideal(&r, &["x^2 + y^2", "x*y"]), 8, &b).is_err());
    }

    #[test]
    fn test_explicit_accepts_adic_table() {
        let r = kxy();
        let b = Budget::default();
        let m = ideal(&r, &["x", "y"]);
        let m2 = m.power(2, &b).unwrap();
        let m3 = m.power(3, &b).unwrap();
        let f = make_explicit(vec![m.clone(), m2, m3], &b).unwrap();
        assert_eq!(f.n0, 1);
        let adic = make_adic(&m, &b).unwrap();
        for n in 1..4 {
            assert!(f.prefix(n, &b).unwrap()[n]
                .equal(&adic.prefix(n, &b).unwrap()[n], &b)
                .unwrap());
        }
    }

    #[test]
    fn test_explicit_rejects_chain_violation() {
        let r = kxy();
        let b = Budget::default();
        let res = make_explicit(vec![ideal(&r, &["x"]), ideal(&r, &["y^2"])], &b);
        assert!(res.is_err());
        assert!(format!("{}", res.unwrap_err()).contains("chain"));
    }

    #[test]
    fn test_explicit_rejects_multiplicativity_violation() {
        // ((x^4), (x^5)): I_2 I_2 = (x^10) would have to lie in I_4 = (x^13).
        let r = kxy();
        let b = Budget::default();
        let res = make_explicit(vec![ideal(&r, &["x^4"]), ideal(&r, &["x^5"])], &b);
        assert!(res.is_err());
        assert!(format!("{}", res.unwrap_err()).contains("multiplicativity"));
    }

    #[test]
    fn test_explicit_non_adic_good() {
        // I_1 = (x^2, y^2), I_2 = m^4, I_3 = I_1 m^4: good but not adic.
        let r = kxy();
        let b = Budget::default();
        let i1 = ideal(&r, &["x^2", "y^2"]);
        let m4 = ideal(&r, &["x", "y"]).power(4, &b).unwrap();
        let i3 = i1.product(&m4, &b).unwrap();
        let f = make_explicit(vec![i1.clone(), m4.clone(), i3], &b).unwrap();
        assert_eq!(f.n0, 2);
        // Not the adic filtration: x^3 y ∈ I_2 but not in I_1^2.
        let x3y = parse_polynomial("x^3*y", &r).unwrap();
        assert!(f.prefix(2, &b).unwrap()[2].contains(&x3y, &b).unwrap());
        assert!(!i1.power(2, &b).unwrap().contains(&x3y, &b).unwrap());
    }

    #[test]
    fn test_m_filtration_of_adic_maximal() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let mf = derive_m_filtration(&f, &b).unwrap();
        // F_n = m^n here.
        for n in 1..4 {
            let e = mf.prefix(n, &b).unwrap();
            let m = ideal(&r, &["x", "y"]).power(n as u32, &b).unwrap();
            assert!(e[n].equal(&m, &b).unwrap());
        }
    }

    #[test]
    fn test_m_filtration_of_x2y2() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "y^2"]), &b).unwrap();
        let mf = derive_m_filtration(&f, &b).unwrap();
        let e = mf.prefix(2, &b).unwrap();
        let expect = ideal(&r, &["x", "y"])
            .product(&ideal(&r, &["x^2", "y^2"]), &b)
            .unwrap();
        assert!(e[2].equal(&expect, &b).unwrap());
    }

    #[test]
    fn test_m_filtration_principal() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x"]), &b).unwrap();
        assert!(derive_m_filtration(&f, &b).is_ok());
    }
}
