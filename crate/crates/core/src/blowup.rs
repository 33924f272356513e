//! Presentations of the blowup algebras of a good filtration as finitely
//! generated t-graded modules over B0 = k[x][y].
//!
//! Every module here is a subquotient U/V of A[t]: the Rees module R = ⊕ I_n t^n,
//! its irrelevant part R_+, the associated graded ring G (V = ⊕ I_{n+1} t^n),
//! the fiber cone F (V = ⊕ m I_n t^n), m G (U = ⊕ m I_n t^n) and the Rees
//! module of the derived maximal-ideal filtration. Generators are chosen
//! graded-Nakayama-minimally per t-degree; relations are kernels computed by
//! graph-and-eliminate in k[x][y][t]. The y-variables carry the x-weights of
//! the minimal generators of I_1 they present, keeping all data bihomogeneous.

use crate::engine::{
    buchberger, eliminate_module, normal_form, syzygies, Budget, MTerm, MVec, ModuleGB,
    ModuleOrder,
};
use crate::error::{Error, Result};
use crate::filtration::{maximal_ideal, GoodFiltration};
use crate::ideal::{Dim, IdealHandle};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{RingDescriptor, VarBlock};
use std::sync::{Arc, OnceLock};

/// One homogeneous element a·t^n of A[t], with `a` over the base ring.
#[derive(Debug, Clone)]
pub struct SliceElt {
    pub a: Polynomial,
    pub tdeg: usize,
}

/// Shared ambient data for one filtration: the base ring A, the presentation
/// ring B0 = k[x][y], its t-extension E, and the structural map y_i -> f_i t.
#[derive(Debug)]
pub struct BlowupContext {
    pub base: Arc<RingDescriptor>,
    pub b0: Arc<RingDescriptor>,
    pub e: Arc<RingDescriptor>,
    /// Minimal generators of I_1, ascending by x-weight.
    pub f_gens: Vec<Polynomial>,
    /// y_i - f_i t in E.
    pub graph_gens: Vec<Polynomial>,
}

impl BlowupContext {
    pub fn new(f: &GoodFiltration, budget: &Budget) -> Result<Arc<Self>> {
        let base = f.ring.clone();
        let i1 = f.i1().minimalized(budget)?;
        let weights: Vec<u64> = i1
            .gens
            .iter()
            .map(|g| {
                g.x_weight(&base)
                    .ok_or_else(|| Error::invalid("inhomogeneous generator of I_1"))
            })
            .collect::<Result<_>>()?;
        let b0 = base.with_y_block(&weights);
        let e = b0.with_t();
        let nv = e.nvars();
        let t = Polynomial::var(&e, nv - 1);
        let y0 = base.nvars();
        let graph_gens = i1
            .gens
            .iter()
            .enumerate()
            .map(|(i, g)| Polynomial::var(&e, y0 + i).sub(&g.pad(nv).mul(&t, &e), &e))
            .collect();
        Ok(Arc::new(BlowupContext {
            base,
            b0,
            e,
            f_gens: i1.gens,
            graph_gens,
        }))
    }

    pub fn s(&self) -> usize {
        self.f_gens.len()
    }

    /// y-weights (x-weights of the presented generators).
    pub fn y_weights(&self) -> Vec<u64> {
        self.f_gens
            .iter()
            .map(|g| g.x_weight(&self.base).unwrap())
            .collect()
    }

    /// Lift a·t^n to a rank-one element of E.
    fn lift(&self, elt: &SliceElt) -> Polynomial {
        let nv = self.e.nvars();
        let t = Polynomial::var(&self.e, nv - 1);
        elt.a.pad(nv).mul(&t.pow(elt.tdeg as u32, &self.e), &self.e)
    }

    /// Express `a` as Σ c_i(x) f_i modulo Q: the B0-element Σ c_i y_i acts on
    /// every presented module as multiplication by a·t.
    pub fn lift_to_y(&self, a: &Polynomial, budget: &Budget) -> Result<Polynomial> {
        let base = &self.base;
        let order = ModuleOrder::pot();
        let mut cols: Vec<MVec> = self
            .f_gens
            .iter()
            .map(|g| MVec::from_poly(g, 0, base, &order))
            .collect();
        for q in &base.quotient_gens {
            cols.push(MVec::from_poly(q, 0, base, &order));
        }
        cols.push(MVec::from_poly(a, 0, base, &order));
        let syz = syzygies(&cols, 1, base, budget)?;
        let last = cols.len() - 1;
        for s in &syz {
            let c = s.component(last, base);
            if c.is_constant() {
                let scale = base.field.neg(base.field.inv(c.terms[0].1));
                let nv = self.b0.nvars();
                let mut acc = Polynomial::zero();
                for (i, _) in self.f_gens.iter().enumerate() {
                    let ci = s.component(i, base).scale(scale, base).pad(nv);
                    let yi = Polynomial::var(&self.b0, self.base.nvars() + i);
                    acc = acc.add(&ci.mul(&yi, &self.b0), &self.b0);
                }
                return Ok(acc);
            }
        }
        Err(Error::invalid("element does not lie in I_1"))
    }
}

/// A finitely presented t-graded B0-module. `gen_tdeg` carries twist-adjusted
/// presented degrees; `carrier` retains the subquotient data when the module
/// presents a subquotient of A[t] (needed to express elements and build maps).
#[derive(Debug, Clone)]
pub struct BigradedModule {
    pub ring: Arc<RingDescriptor>,
    pub label: String,
    pub gen_tdeg: Vec<i64>,
    pub gen_xwt: Vec<i64>,
    pub relations: Vec<MVec>,
    pub carrier: Option<Carrier>,
    rel_gb: OnceLock<std::result::Result<ModuleGB, Error>>,
}

#[derive(Debug, Clone)]
pub struct Carrier {
    pub ctx: Arc<BlowupContext>,
    pub u: Vec<SliceElt>,
    pub v: Vec<SliceElt>,
    /// Presented degree minus element degree (the twist shift).
    pub shift: i64,
}

impl BigradedModule {
    pub fn new(
        ring: Arc<RingDescriptor>,
        label: String,
        gen_tdeg: Vec<i64>,
        gen_xwt: Vec<i64>,
        relations: Vec<MVec>,
        carrier: Option<Carrier>,
    ) -> Self {
        BigradedModule {
            ring,
            label,
            gen_tdeg,
            gen_xwt,
            relations,
            carrier,
            rel_gb: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.gen_tdeg.len()
    }

    pub fn is_zero(&self) -> bool {
        self.gen_tdeg.is_empty()
    }

    pub fn rel_gb(&self, budget: &Budget) -> Result<&ModuleGB> {
        let r = self.rel_gb.get_or_init(|| {
            let order = ModuleOrder::pot();
            let cols: Vec<MVec> = self
                .relations
                .iter()
                .map(|c| MVec::normalize(c.terms.clone(), &self.ring, &order))
                .collect();
            buchberger(&cols, self.rank().max(1), &self.ring, &order, budget)
        });
        r.as_ref().map_err(|e| e.clone())
    }

    /// k-dimension of the (t-degree, x-weight) piece, by counting standard
    /// monomials against the relation leading terms.
    pub fn hilbert(&self, tdeg: i64, xwt: i64, budget: &Budget) -> Result<usize> {
        let gb = self.rel_gb(budget)?;
        let lts: Vec<(usize, Monomial)> = gb
            .gens
            .iter()
            .map(|g| {
                let t = g.lt().unwrap();
                (t.pos, t.mono.clone())
            })
            .collect();
        let mut count = 0usize;
        for (j, (&gt, &gx)) in self.gen_tdeg.iter().zip(&self.gen_xwt).enumerate() {
            let need_t = tdeg - gt;
            let need_x = xwt - gx;
            if need_t < 0 || need_x < 0 {
                continue;
            }
            for mono in monomials_of_bidegree(&self.ring, need_t as u64, need_x as u64) {
                if !lts
                    .iter()
                    .any(|(p, m)| *p == j && m.divides(&mono))
                {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Dimension of the whole t-slice (finite only when x acts nilpotently,
    /// e.g. fiber cones); sums x-weights up to the given bound.
    pub fn slice_dim(&self, tdeg: i64, xwt_max: i64, budget: &Budget) -> Result<usize> {
        if tdeg < 0 {
            return Ok(0);
        }
        let table = self.hilbert_table(tdeg as usize, xwt_max.max(0) as u64, budget)?;
        Ok(table[tdeg as usize].iter().sum())
    }

    /// The whole bigraded Hilbert table in one sweep: table[n][d] =
    /// dim of the (t = n, weight = d) piece for n <= n_max, d <= d_max.
    pub fn hilbert_table(
        &self,
        n_max: usize,
        d_max: u64,
        budget: &Budget,
    ) -> Result<Vec<Vec<usize>>> {
        let ring = &self.ring;
        let gb = self.rel_gb(budget)?;
        let lts: Vec<(usize, Monomial)> = gb
            .gens
            .iter()
            .map(|g| {
                let t = g.lt().unwrap();
                (t.pos, t.mono.clone())
            })
            .collect();
        let ys: Vec<usize> = (0..ring.nvars())
            .filter(|&i| ring.vars[i].tdeg > 0)
            .collect();
        let xs = ring.indices(VarBlock::X);
        let ywts: Vec<u64> = ys.iter().map(|&i| ring.vars[i].weight).collect();
        let mut table = vec![vec![0usize; d_max as usize + 1]; n_max + 1];
        for (j, (&gt, &gx)) in self.gen_tdeg.iter().zip(&self.gen_xwt).enumerate() {
            if gt > n_max as i64 || gx > d_max as i64 {
                continue;
            }
            let jlts: Vec<&Monomial> = lts
                .iter()
                .filter(|(p, _)| *p == j)
                .map(|(_, m)| m)
                .collect();
            let t_budget = (n_max as i64 - gt.max(0)) as u64;
            // Enumerate y-parts of total degree <= t_budget.
            let mut beta = vec![0u32; ring.nvars()];
            enumerate_y(
                &ys,
                0,
                t_budget,
                &mut beta,
                &mut |beta: &Vec<u32>, ydeg: u64| {
                    let ywt: u64 = ys
                        .iter()
                        .zip(&ywts)
                        .map(|(&i, &w)| beta[i] as u64 * w)
                        .sum();
                    let base_w = gx + ywt as i64;
                    if base_w > d_max as i64 {
                        return;
                    }
                    // Leading terms whose y-part divides beta; if any is
                    // pure-y, the whole branch is dead.
                    let mut xparts: Vec<Vec<u32>> = Vec::new();
                    for lm in &jlts {
                        let ydivides = ys.iter().all(|&i| lm.0[i] <= beta[i]);
                        if !ydivides {
                            continue;
                        }
                        let xp: Vec<u32> = xs.iter().map(|&i| lm.0[i]).collect();
                        if xp.iter().all(|&e| e == 0) {
                            return;
                        }
                        xparts.push(xp);
                    }
                    let n_row = (gt + ydeg as i64) as usize;
                    // Enumerate x-parts of each weight up to the leftover.
                    let left = (d_max as i64 - base_w) as u64;
                    let mut alpha = vec![0u32; xs.len()];
                    enumerate_x(&xs, ring, 0, left, 0, &mut alpha, &mut |alpha: &Vec<u32>,
                                                                          w: u64| {
                        if !xparts
                            .iter()
                            .any(|xp| xp.iter().zip(alpha).all(|(&a, &b)| a <= b))
                        {
                            table[n_row][(base_w + w as i64) as usize] += 1;
                        }
                    });
                },
            );
        }
        Ok(table)
    }

    /// Do all x-variables act as zero? (Fiber-cone detection.)
    pub fn x_acts_trivially(&self, budget: &Budget) -> Result<bool> {
        let gb = self.rel_gb(budget)?;
        let order = gb.order.clone();
        for j in 0..self.rank() {
            for i in self.ring.indices(VarBlock::X) {
                let v = MVec {
                    terms: vec![MTerm {
                        pos: j,
                        mono: self.ring.var_mono(i),
                        coeff: 1,
                    }],
                };
                let v = MVec::normalize(v.terms, &self.ring, &order);
                if !gb.contains(&v, &self.ring, budget)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Express a slice element in terms of the presentation generators, i.e.
    /// find h with Σ h_j u_j ≡ target modulo V. Requires the carrier.
    pub fn express(&self, target: &SliceElt, budget: &Budget) -> Result<Option<MVec>> {
        let carrier = self
            .carrier
            .as_ref()
            .ok_or_else(|| Error::invalid("module has no carrier to express against"))?;
        let mut u = carrier.u.clone();
        u.push(target.clone());
        let ker = subquotient_kernel(&carrier.ctx, &u, &carrier.v, budget)?;
        let g = carrier.u.len();
        let b0 = &self.ring;
        for col in &ker {
            let last = col.component(g, b0);
            if last.is_constant() {
                let scale = b0.field.neg(b0.field.inv(last.terms[0].1));
                let order = ModuleOrder::pot();
                let rep = MVec::normalize(
                    col.terms
                        .iter()
                        .filter(|t| t.pos < g)
                        .map(|t| MTerm {
                            pos: t.pos,
                            mono: t.mono.clone(),
                            coeff: b0.field.mul(t.coeff, scale),
                        })
                        .collect(),
                    b0,
                    &order,
                );
                return Ok(Some(rep));
            }
        }
        Ok(None)
    }
}

fn enumerate_y(
    ys: &[usize],
    k: usize,
    left: u64,
    beta: &mut Vec<u32>,
    f: &mut impl FnMut(&Vec<u32>, u64),
) {
    if k == ys.len() {
        let ydeg: u64 = ys.iter().map(|&i| beta[i] as u64).sum();
        f(beta, ydeg);
        return;
    }
    for e in 0..=left {
        beta[ys[k]] = e as u32;
        enumerate_y(ys, k + 1, left - e, beta, f);
    }
    beta[ys[k]] = 0;
}

fn enumerate_x(
    xs: &[usize],
    ring: &RingDescriptor,
    k: usize,
    left: u64,
    used: u64,
    alpha: &mut Vec<u32>,
    f: &mut impl FnMut(&Vec<u32>, u64),
) {
    if k == xs.len() {
        f(alpha, used);
        return;
    }
    let w = ring.vars[xs[k]].weight;
    let max = left / w;
    for e in 0..=max {
        alpha[k] = e as u32;
        enumerate_x(xs, ring, k + 1, left - e * w, used + e * w, alpha, f);
    }
    alpha[k] = 0;
}

/// All monomials of B0 with the given t-degree (total y-degree) and x-weight.
pub fn monomials_of_bidegree(ring: &RingDescriptor, tdeg: u64, xwt: u64) -> Vec<Monomial> {
    let xs = ring.indices(VarBlock::X);
    let ys: Vec<usize> = (0..ring.nvars())
        .filter(|&i| ring.vars[i].tdeg > 0)
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0u32; ring.nvars()];
    // Enumerate y-parts with total degree tdeg, then x-parts of the leftover
    // weight.
    fn ypart(
        ys: &[usize],
        k: usize,
        left: u64,
        ring: &RingDescriptor,
        current: &mut Vec<u32>,
        xs: &[usize],
        xwt: u64,
        out: &mut Vec<Monomial>,
    ) {
        if k == ys.len() {
            if left == 0 {
                let used: u64 = ys
                    .iter()
                    .map(|&i| current[i] as u64 * ring.vars[i].weight)
                    .sum();
                if used <= xwt {
                    xpart(xs, 0, xwt - used, current, out, ring);
                }
            }
            return;
        }
        for e in 0..=left {
            current[ys[k]] = e as u32;
            ypart(ys, k + 1, left - e, ring, current, xs, xwt, out);
        }
        current[ys[k]] = 0;
    }
    fn xpart(
        xs: &[usize],
        k: usize,
        left: u64,
        current: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
        ring: &RingDescriptor,
    ) {
        if k == xs.len() {
            if left == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let w = ring.vars[xs[k]].weight;
        let max = left / w;
        for e in 0..=max {
            current[xs[k]] = e as u32;
            xpart(xs, k + 1, left - e * w, current, out, ring);
        }
        current[xs[k]] = 0;
    }
    ypart(&ys, 0, tdeg, ring, &mut current, &xs, xwt, &mut out);
    out
}

/// Kernel of B0^g -> U/V, e_j -> u_j: syzygies of [u, v, graph, Q] over E,
/// projected to the u|v block, with t eliminated, then projected to the
/// u-block. Multipliers of the v-block must be t-free so that they act
/// through the structural map, which is why v survives until after the
/// elimination.
pub fn subquotient_kernel(
    ctx: &BlowupContext,
    u: &[SliceElt],
    v: &[SliceElt],
    budget: &Budget,
) -> Result<Vec<MVec>> {
    let e = &ctx.e;
    let order = ModuleOrder::pot();
    let mut cols: Vec<MVec> = Vec::new();
    for elt in u.iter().chain(v.iter()) {
        cols.push(MVec::from_poly(&ctx.lift(elt), 0, e, &order));
    }
    for g in &ctx.graph_gens {
        cols.push(MVec::from_poly(g, 0, e, &order));
    }
    for q in &e.quotient_gens {
        cols.push(MVec::from_poly(q, 0, e, &order));
    }
    let syz = syzygies(&cols, 1, e, budget)?;
    let gk = u.len() + v.len();
    let projected: Vec<MVec> = syz
        .iter()
        .map(|s| s.project(0..gk, e, &order))
        .filter(|s| !s.is_zero())
        .collect();
    let mut tmask = vec![false; e.nvars()];
    *tmask.last_mut().unwrap() = true;
    let tfree = eliminate_module(&projected, gk, &tmask, e, budget)?;
    // Restrict from E to B0 (t is the last variable) and keep the u-block.
    let b0 = &ctx.b0;
    let nv = b0.nvars();
    let out: Vec<MVec> = tfree
        .iter()
        .map(|s| {
            MVec::normalize(
                s.terms
                    .iter()
                    .filter(|t| t.pos < u.len())
                    .map(|t| MTerm {
                        pos: t.pos,
                        mono: Monomial(t.mono.0[..nv].to_vec()),
                        coeff: t.coeff,
                    })
                    .collect(),
                b0,
                &order,
            )
        })
        .filter(|s| !s.is_zero())
        .collect();
    let pos_bideg: Vec<(i64, i64)> = u
        .iter()
        .map(|e| {
            (
                e.tdeg as i64,
                e.a.x_weight(&ctx.base).unwrap_or(0) as i64,
            )
        })
        .collect();
    minimalize_columns(out, Some(&pos_bideg), b0, budget)
}

/// Graded-Nakayama prune of module generators, analogous to ideal
/// minimalization: ascending column bidegree with a growing reducer basis.
/// `pos_bideg`, when known, holds the (t, x) bidegree of each position so the
/// column bidegree is computed correctly for mixed generator degrees.
///
/// Everything here lives over the POLYNOMIAL ring B0: quotient relations of
/// the base ring appear among the columns themselves and are never folded in
/// as implicit reducers.
pub fn minimalize_columns(
    cols: Vec<MVec>,
    pos_bideg: Option<&[(i64, i64)]>,
    ring: &Arc<RingDescriptor>,
    budget: &Budget,
) -> Result<Vec<MVec>> {
    minimalize_columns_mod(cols, &[], pos_bideg, ring, budget)
}

/// As [`minimalize_columns`], with extra always-available reducer columns
/// (e.g. the image submodule when pruning generators of a subquotient).
pub fn minimalize_columns_mod(
    cols: Vec<MVec>,
    modulus: &[MVec],
    pos_bideg: Option<&[(i64, i64)]>,
    ring: &Arc<RingDescriptor>,
    budget: &Budget,
) -> Result<Vec<MVec>> {
    if cols.is_empty() {
        return Ok(cols);
    }
    let rank = match pos_bideg {
        Some(d) => d.len(),
        None => cols.iter().filter_map(|c| c.max_pos()).max().unwrap_or(0) + 1,
    };
    let order = ModuleOrder::pot();
    let mut base: Vec<MVec> = modulus.to_vec();
    for i in 0..ring.nvars() {
        let m = ring.var_mono(i);
        for c in &cols {
            base.push(MVec::normalize(
                c.terms
                    .iter()
                    .map(|t| MTerm {
                        pos: t.pos,
                        mono: t.mono.mul(&m),
                        coeff: t.coeff,
                    })
                    .collect(),
                ring,
                &order,
            ));
        }
    }
    let mut gb = buchberger(&base, rank, ring, &order, budget)?;
    let mut idx: Vec<usize> = (0..cols.len()).collect();
    let degkey = |c: &MVec| -> (i64, i64) {
        let t = c.lt().unwrap();
        let (gt, gx) = pos_bideg.map(|d| d[t.pos]).unwrap_or((0, 0));
        (
            t.mono.weighted_degree(&ring.tdegs()) as i64 + gt,
            t.mono.weighted_degree(&ring.weights()) as i64 + gx,
        )
    };
    idx.sort_by_key(|&i| (degkey(&cols[i]), i));
    let mut kept: Vec<MVec> = Vec::new();
    for &i in &idx {
        if !normal_form(&cols[i], &gb.gens, ring, &order, budget)?.is_zero() {
            kept.push(cols[i].clone());
            gb = crate::engine::buchberger_extend(
                &gb.gens,
                std::slice::from_ref(&cols[i]),
                rank,
                ring,
                &order,
                budget,
            )?;
        }
    }
    Ok(kept)
}

/// Minimal module generators of the subquotient ⊕ S_n t^n / V over B: in each
/// degree n, generators of S_n surviving modulo driver*S_{n-1} + m*S_n (+ V).
fn module_generators(
    slices: &[IdealHandle],
    driver: &IdealHandle,
    v_slices: Option<&[IdealHandle]>,
    budget: &Budget,
) -> Result<Vec<SliceElt>> {
    let ring = &driver.ring;
    let mm = maximal_ideal(ring);
    let mut out = Vec::new();
    for (n, sn) in slices.iter().enumerate() {
        if sn.is_zero_ideal(budget)? {
            continue;
        }
        let cands = sn.minimalized(budget)?;
        if cands.gens.is_empty() {
            continue;
        }
        let mut modulus: Vec<Polynomial> = Vec::new();
        if n > 0 {
            let below = driver.product(&slices[n - 1], budget)?;
            modulus.extend(below.gens);
        }
        let msn = mm.product(sn, budget)?;
        modulus.extend(msn.gens);
        if let Some(vs) = v_slices {
            if n < vs.len() {
                modulus.extend(vs[n].gens.iter().cloned());
            }
        }
        modulus.extend(ring.quotient_gens.iter().cloned());
        let gb = crate::ideal::gb_of(&modulus, ring, budget)?;
        let order = ModuleOrder::pot();
        for g in cands.gens {
            let v = MVec::from_poly(&g, 0, ring, &order);
            if !normal_form(&v, &gb.gens, ring, &order, budget)?.is_zero() {
                out.push(SliceElt { a: g, tdeg: n });
            }
        }
    }
    Ok(out)
}

/// V-side generator lists need only generate, but smaller is faster: same
/// per-degree construction without the m*S_n Nakayama part.
fn submodule_generators(
    slices: &[IdealHandle],
    driver: &IdealHandle,
    budget: &Budget,
) -> Result<Vec<SliceElt>> {
    let ring = &driver.ring;
    let mut out = Vec::new();
    for (n, sn) in slices.iter().enumerate() {
        if sn.is_zero_ideal(budget)? {
            continue;
        }
        let cands = sn.minimalized(budget)?;
        let mut modulus: Vec<Polynomial> = Vec::new();
        if n > 0 {
            let below = driver.product(&slices[n - 1], budget)?;
            modulus.extend(below.gens);
        }
        modulus.extend(ring.quotient_gens.iter().cloned());
        if modulus.is_empty() {
            out.extend(cands.gens.into_iter().map(|a| SliceElt { a, tdeg: n }));
            continue;
        }
        let gb = crate::ideal::gb_of(&modulus, ring, budget)?;
        let order = ModuleOrder::pot();
        for g in cands.gens {
            let v = MVec::from_poly(&g, 0, ring, &order);
            if !normal_form(&v, &gb.gens, ring, &order, budget)?.is_zero() {
                out.push(SliceElt { a: g, tdeg: n });
            }
        }
    }
    Ok(out)
}

fn build_module(
    ctx: &Arc<BlowupContext>,
    label: &str,
    u: Vec<SliceElt>,
    v: Vec<SliceElt>,
    shift: i64,
    budget: &Budget,
) -> Result<BigradedModule> {
    let relations = subquotient_kernel(ctx, &u, &v, budget)?;
    let gen_tdeg = u.iter().map(|e| e.tdeg as i64 + shift).collect();
    let gen_xwt = u
        .iter()
        .map(|e| e.a.x_weight(&ctx.base).unwrap_or(0) as i64)
        .collect();
    Ok(BigradedModule::new(
        ctx.b0.clone(),
        label.to_string(),
        gen_tdeg,
        gen_xwt,
        relations,
        Some(Carrier {
            ctx: ctx.clone(),
            u,
            v,
            shift,
        }),
    ))
}

/// The kernel of k[x][y] -> k[x][t]/Q, y_i -> f_i t: the defining ideal of
/// the special fiber data, obtained by eliminating t from the graph.
#[derive(Debug, Clone)]
pub struct ReesIdealPresentation {
    pub fiber_type_ideal: IdealHandle,
    /// y_i maps to f_gens[i].
    pub f_gens: Vec<Polynomial>,
}

pub fn rees_ideal(ctx: &Arc<BlowupContext>, budget: &Budget) -> Result<ReesIdealPresentation> {
    let e = &ctx.e;
    let mut gens = ctx.graph_gens.clone();
    gens.extend(e.quotient_gens.iter().cloned());
    let h = IdealHandle::new_unchecked(e.clone(), gens);
    let mut mask = vec![false; e.nvars()];
    *mask.last_mut().unwrap() = true;
    let elim = h.eliminate(&mask, budget)?;
    let nv = ctx.b0.nvars();
    let restricted: Vec<Polynomial> = elim
        .gens
        .iter()
        .map(|g| g.restrict(nv).expect("t leaked through elimination"))
        .collect();
    // Substitution check: every generator vanishes under y_i -> f_i t.
    let mut images: Vec<Polynomial> = (0..ctx.base.nvars())
        .map(|i| Polynomial::var(e, i))
        .collect();
    let t = Polynomial::var(e, e.nvars() - 1);
    for g in &ctx.f_gens {
        images.push(g.pad(e.nvars()).mul(&t, e));
    }
    for g in &restricted {
        let val = g.pad(e.nvars()).substitute(&images, e);
        let zero = IdealHandle::new_unchecked(e.clone(), e.quotient_gens.clone());
        if !zero.contains(&val, budget)? {
            return Err(Error::math(
                "rees ideal substitution check failed (internal bug trap)",
            ));
        }
    }
    Ok(ReesIdealPresentation {
        fiber_type_ideal: IdealHandle::new_unchecked(ctx.b0.clone(), restricted),
        f_gens: ctx.f_gens.clone(),
    })
}

/// Analytic spread: Krull dimension of the special fiber
/// k[x][y]/(rees ideal + (x) + Q).
pub fn analytic_spread(f: &GoodFiltration, budget: &Budget) -> Result<usize> {
    let ctx = BlowupContext::new(f, budget)?;
    let rees = rees_ideal(&ctx, budget)?;
    let b0 = &ctx.b0;
    let mut gens = rees.fiber_type_ideal.gens.clone();
    for i in b0.indices(VarBlock::X) {
        gens.push(Polynomial::var(b0, i));
    }
    let h = IdealHandle::new_unchecked(b0.clone(), gens);
    match h.krull_dim(budget)? {
        Dim::Finite(d) => Ok(d),
        Dim::NegInf => Err(Error::math("fiber cone is the zero ring")),
    }
}

/// All presentations of one filtration, built lazily by the callers below.
pub fn present_rees(
    ctx: &Arc<BlowupContext>,
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<BigradedModule> {
    let slices = f.prefix(f.n0, budget)?;
    let u = module_generators(&slices, &f.base_ideal, None, budget)?;
    build_module(ctx, "Rees(F)", u, Vec::new(), 0, budget)
}

/// R_+ with an optional twist: twist = 1 presents R_+(1) (degrees down one).
pub fn present_rees_plus(
    ctx: &Arc<BlowupContext>,
    f: &GoodFiltration,
    twist: i64,
    budget: &Budget,
) -> Result<BigradedModule> {
    let mut slices = f.prefix(f.n0.max(1), budget)?;
    slices[0] = IdealHandle::zero(f.ring.clone());
    let u = module_generators(&slices, &f.base_ideal, None, budget)?;
    let label = if twist == 0 {
        "Rees_+(F)".to_string()
    } else {
        format!("Rees_+(F)({twist})")
    };
    build_module(ctx, &label, u, Vec::new(), -twist, budget)
}

pub fn present_assoc_graded(
    ctx: &Arc<BlowupContext>,
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<BigradedModule> {
    let slices = f.prefix(f.n0 + 1, budget)?;
    let u_slices = &slices[..=f.n0];
    let v_slices: Vec<IdealHandle> = (0..=f.n0).map(|n| slices[n + 1].clone()).collect();
    let u = module_generators(u_slices, &f.base_ideal, Some(&v_slices), budget)?;
    let v = submodule_generators(&v_slices, &f.base_ideal, budget)?;
    build_module(ctx, "AssocGraded(F)", u, v, 0, budget)
}

pub fn present_fiber(
    ctx: &Arc<BlowupContext>,
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<BigradedModule> {
    let slices = f.prefix(f.n0, budget)?;
    let mm = maximal_ideal(&f.ring);
    let v_slices: Vec<IdealHandle> = slices
        .iter()
        .map(|s| mm.product(s, budget))
        .collect::<Result<_>>()?;
    let u = module_generators(&slices, &f.base_ideal, Some(&v_slices), budget)?;
    let v = submodule_generators(&v_slices, &f.base_ideal, budget)?;
    build_module(ctx, "Fiber(F)", u, v, 0, budget)
}

/// m G(F), twisted by `twist` (twist = -1 presents m G(F)(-1)). Requires the
/// standing hypothesis I_{n+1} ⊆ m I_n, verified by derive_m_filtration.
pub fn present_mg(
    ctx: &Arc<BlowupContext>,
    f: &GoodFiltration,
    twist: i64,
    budget: &Budget,
) -> Result<BigradedModule> {
    let slices = f.prefix(f.n0 + 1, budget)?;
    let mm = maximal_ideal(&f.ring);
    let u_slices: Vec<IdealHandle> = (0..=f.n0)
        .map(|n| mm.product(&slices[n], budget))
        .collect::<Result<_>>()?;
    let v_slices: Vec<IdealHandle> = (0..=f.n0).map(|n| slices[n + 1].clone()).collect();
    for n in 0..=f.n0 {
        if !u_slices[n].contains_ideal(&v_slices[n], budget)? {
            return Err(Error::invalid(format!(
                "F <= mF fails at degree {}: I_{} not inside m I_{n}",
                n + 1,
                n + 1
            )));
        }
    }
    let u = module_generators(&u_slices, &f.base_ideal, Some(&v_slices), budget)?;
    let v = submodule_generators(&v_slices, &f.base_ideal, budget)?;
    let label = if twist == 0 {
        "mG(F)".to_string()
    } else {
        format!("mG(F)({twist})")
    };
    build_module(ctx, &label, u, v, -twist, budget)
}

/// R of the derived maximal-ideal filtration, presented over the parent's B.
pub fn present_rees_of_m_filtration(
    ctx: &Arc<BlowupContext>,
    mf: &GoodFiltration,
    budget: &Budget,
) -> Result<BigradedModule> {
    let slices = mf.prefix(mf.n0, budget)?;
    let u = module_generators(&slices, &mf.base_ideal, None, budget)?;
    build_module(ctx, "Rees(mF)", u, Vec::new(), 0, budget)
}

/// The one-generator presentation of the base ring A = R/R_+.
pub fn present_base_ring(
    ctx: &Arc<BlowupContext>,
    f: &GoodFiltration,
    budget: &Budget,
) -> Result<BigradedModule> {
    let mut slices = f.prefix(f.n0.max(1), budget)?;
    let u_slices = vec![IdealHandle::unit(f.ring.clone())];
    slices[0] = IdealHandle::zero(f.ring.clone());
    let v = submodule_generators(&slices, &f.base_ideal, budget)?;
    let u = module_generators(&u_slices, &f.base_ideal, None, budget)?;
    build_module(ctx, "A", u, v, 0, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::make_adic;
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
    fn test_rees_ideal_of_maximal() {
        // I = (x, y): kernel is the Koszul relation x*y2 - y*y1.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let rp = rees_ideal(&ctx, &b).unwrap();
        let expect = parse_polynomial("x*y2 - y*y1", &ctx.b0).unwrap();
        assert!(rp.fiber_type_ideal.contains(&expect, &b).unwrap());
        assert_eq!(rp.fiber_type_ideal.minimalized(&b).unwrap().gens.len(), 1);
    }

    #[test]
    fn test_rees_ideal_of_principal() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let rp = rees_ideal(&ctx, &b).unwrap();
        assert!(rp.fiber_type_ideal.gens.is_empty());
    }

    #[test]
    fn test_rees_ideal_of_m2() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let rp = rees_ideal(&ctx, &b).unwrap();
        for s in ["y2^2 - y1*y3", "x*y2 - y*y1", "x*y3 - y*y2"] {
            let g = parse_polynomial(s, &ctx.b0).unwrap();
            assert!(rp.fiber_type_ideal.contains(&g, &b).unwrap(), "missing {s}");
        }
    }

    #[test]
    fn test_analytic_spread_values() {
        let r = kxy();
        let b = Budget::default();
        for (gens, expect) in [
            (vec!["x", "y"], 2usize),
            (vec!["x^2", "x*y", "y^2"], 2),
            (vec!["x"], 1),
            (vec!["x^2", "x*y"], 2),
        ] {
            let f = make_adic(&ideal(&r, &gens), &b).unwrap();
            assert_eq!(analytic_spread(&f, &b).unwrap(), expect, "{gens:?}");
        }
    }

    #[test]
    fn test_analytic_spread_semigroup() {
        let b = Budget::default();
        let base =
            RingDescriptor::base(&["a", "b", "c"], &[3, 4, 5], PrimeField::default()).unwrap();
        let q = vec![
            parse_polynomial("b^2 - a*c", &base).unwrap(),
            parse_polynomial("b*c - a^3", &base).unwrap(),
            parse_polynomial("c^2 - a^2*b", &base).unwrap(),
        ];
        let ring = base.with_quotient(q).unwrap();
        let m = ideal(&ring, &["a", "b", "c"]);
        let f = make_adic(&m, &b).unwrap();
        assert_eq!(analytic_spread(&f, &b).unwrap(), 1);
    }

    #[test]
    fn test_present_rees_adic_maximal() {
        // R(m) = B/(x*y2 - y*y1): one generator in degree 0, one relation.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let m = present_rees(&ctx, &f, &b).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.gen_tdeg, vec![0]);
        assert_eq!(m.relations.len(), 1);
        // Hilbert check: dim (I_n)_d = dim m^n in degree d: for n=2, d=3: dim = 4
        // (all degree-3 monomials).
        assert_eq!(m.hilbert(2, 3, &b).unwrap(), 4);
        assert_eq!(m.hilbert(2, 1, &b).unwrap(), 0);
        assert_eq!(m.hilbert(0, 0, &b).unwrap(), 1);
    }

    #[test]
    fn test_present_fiber_is_polynomial_ring() {
        // F(m-adic) = k[y1, y2]: slice n has dimension n+1.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let fib = present_fiber(&ctx, &f, &b).unwrap();
        assert!(fib.x_acts_trivially(&b).unwrap());
        for n in 0..5i64 {
            assert_eq!(fib.slice_dim(n, 40, &b).unwrap(), n as usize + 1);
        }
    }

    #[test]
    fn test_present_mg_vanishes_for_maximal() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let mg = present_mg(&ctx, &f, 0, &b).unwrap();
        assert!(mg.is_zero());
    }

    #[test]
    fn test_assoc_graded_slices_of_maximal() {
        // G(m) ≅ k[y1,y2]: slice n is n+1 dimensional, concentrated in
        // x-weight 0 after the quotient.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let g = present_assoc_graded(&ctx, &f, &b).unwrap();
        for n in 0..5i64 {
            assert_eq!(g.slice_dim(n, 40, &b).unwrap(), n as usize + 1);
        }
        assert!(g.x_acts_trivially(&b).unwrap());
    }

    #[test]
    fn test_assoc_graded_slices_of_x2y2() {
        // G((x^2,y^2)): slice n is a free A/I_1-module of rank n+1, so its
        // k-dimension is 4(n+1).
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "y^2"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let g = present_assoc_graded(&ctx, &f, &b).unwrap();
        for n in 0..4i64 {
            assert_eq!(g.slice_dim(n, 40, &b).unwrap(), 4 * (n as usize + 1));
        }
    }

    #[test]
    fn test_fiber_slices_match_min_generators() {
        let r = kxy();
        let b = Budget::default();
        for gens in [vec!["x^2", "y^2"], vec!["x^2", "x*y"], vec!["x"]] {
            let i = ideal(&r, &gens);
            let f = make_adic(&i, &b).unwrap();
            let ctx = BlowupContext::new(&f, &b).unwrap();
            let fib = present_fiber(&ctx, &f, &b).unwrap();
            let pre = f.prefix(4, &b).unwrap();
            for n in 0..=4usize {
                let mu = pre[n].min_generators(&b).unwrap();
                assert_eq!(
                    fib.slice_dim(n as i64, 60, &b).unwrap(),
                    mu,
                    "{gens:?} at degree {n}"
                );
            }
        }
    }

    #[test]
    fn test_express_roundtrip() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let rees = present_rees(&ctx, &f, &b).unwrap();
        // x^2 y t^3 ∈ I_3 t^3 must be expressible; x t^2 ∉ I_2 t^2 must not.
        let good = SliceElt {
            a: parse_polynomial("x^2*y", &r).unwrap(),
            tdeg: 3,
        };
        assert!(rees.express(&good, &b).unwrap().is_some());
        let bad = SliceElt {
            a: parse_polynomial("x", &r).unwrap(),
            tdeg: 2,
        };
        assert!(rees.express(&bad, &b).unwrap().is_none());
    }

    #[test]
    fn test_lift_to_y() {
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let a = parse_polynomial("x^2 + 2*y^2", &r).unwrap();
        let lifted = ctx.lift_to_y(&a, &b).unwrap();
        // Applying y_i -> f_i t must recover a*t modulo nothing (Q empty).
        let e = &ctx.e;
        let t = Polynomial::var(e, e.nvars() - 1);
        let mut images: Vec<Polynomial> = (0..2).map(|i| Polynomial::var(e, i)).collect();
        for g in &ctx.f_gens {
            images.push(g.pad(e.nvars()).mul(&t, e));
        }
        images.push(t.clone());
        let val = lifted.pad(e.nvars()).substitute(&images, e);
        let expect = a.pad(e.nvars()).mul(&t, e);
        assert_eq!(val, expect);
        assert!(ctx
            .lift_to_y(&parse_polynomial("x", &r).unwrap(), &b)
            .is_err());
    }
}
