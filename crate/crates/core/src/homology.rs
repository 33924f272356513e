//! Homological invariants over the regular ambient ring B0 = k[x][y]:
//! minimal bigraded free resolutions, depth and dimension, Ext modules,
//! a-invariants of the y-block local cohomology, Castelnuovo-Mumford
//! regularity, grade, and filter-regular tests.
//!
//! a-invariants are read from H^i_(y)(M) = Tor_{s-i}(W, M), where W is the
//! module of inverse polynomials H^s_(y)(B0) = k[x][y1^-1..ys^-1]·(y1..ys)^-1.
//! Tensoring the minimal free resolution with W and taking one t-degree slice
//! gives a finite complex of free k[x]-modules whose homology is computed
//! exactly; scanning slices downward from a certified top finds the largest
//! nonvanishing degree. Vanishing below the scan floor is windowed and the
//! floor is reported.

use crate::blowup::{minimalize_columns, BigradedModule};
use crate::engine::{
    buchberger, syzygies, Budget, MTerm, MVec, ModuleOrder,
};
use crate::error::{Error, Result};
use crate::ideal::{Dim, IdealHandle};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{RingDescriptor, VarBlock};
use serde::Serialize;
use std::sync::Arc;

/// Integer extended with both infinities (JSON: null for -∞, "+inf" string).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Int(i64),
    PosInf,
}

impl ExtInt {
    pub fn plus(&self, k: i64) -> ExtInt {
        match self {
            ExtInt::Int(n) => ExtInt::Int(n + k),
            other => *other,
        }
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            ExtInt::Int(n) => Some(*n),
            _ => None,
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtInt::NegInf => s.serialize_none(),
            ExtInt::Int(n) => s.serialize_i64(*n),
            ExtInt::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl std::fmt::Display for ExtInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtInt::NegInf => write!(f, "-inf"),
            ExtInt::Int(n) => write!(f, "{n}"),
            ExtInt::PosInf => write!(f, "+inf"),
        }
    }
}

/// A minimal t-graded free resolution: gen_degrees[i] are the (t, x)
/// bidegrees of the free generators of F_i; matrices[i] maps F_{i+1} -> F_i.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    pub ring: Arc<RingDescriptor>,
    pub gen_degrees: Vec<Vec<(i64, i64)>>,
    pub matrices: Vec<Vec<MVec>>,
}

impl FreeResolution {
    pub fn pd(&self) -> usize {
        self.matrices.len()
    }

    /// Betti numbers by step.
    pub fn betti(&self) -> Vec<usize> {
        self.gen_degrees.iter().map(|d| d.len()).collect()
    }
}

/// Minimal resolution by iterated syzygies with graded-Nakayama pruning of
/// every kernel's generators; for bihomogeneous data the pruned matrices have
/// no unit entries, so the result is minimal.
pub fn minimal_resolution(m: &BigradedModule, budget: &Budget) -> Result<FreeResolution> {
    let ring = &m.ring;
    if m.is_zero() {
        return Ok(FreeResolution {
            ring: ring.clone(),
            gen_degrees: vec![Vec::new()],
            matrices: Vec::new(),
        });
    }
    let mut gen_degrees: Vec<Vec<(i64, i64)>> = vec![m
        .gen_tdeg
        .iter()
        .zip(&m.gen_xwt)
        .map(|(&t, &x)| (t, x))
        .collect()];
    let mut matrices: Vec<Vec<MVec>> = Vec::new();
    let mut cols = minimalize_columns(
        m.relations.clone(),
        Some(&gen_degrees[0]),
        ring,
        budget,
    )?;
    let max_len = ring.nvars() + 1;
    while !cols.is_empty() {
        if matrices.len() > max_len {
            return Err(Error::math(
                "resolution exceeded the ambient variable count (internal bug trap)",
            ));
        }
        let prev_deg = gen_degrees.last().unwrap().clone();
        let degs: Vec<(i64, i64)> = cols
            .iter()
            .map(|c| column_bidegree(c, &prev_deg, ring))
            .collect();
        // Minimality: no unit entries may survive the prune.
        debug_assert!(cols.iter().all(|c| c
            .terms
            .iter()
            .all(|t| !t.mono.is_one())));
        let rank = prev_deg.len();
        let next = syzygies(&cols, rank, ring, budget)?;
        matrices.push(cols);
        gen_degrees.push(degs.clone());
        cols = minimalize_columns(next, Some(&degs), ring, budget)?;
    }
    Ok(FreeResolution {
        ring: ring.clone(),
        gen_degrees,
        matrices,
    })
}

pub fn column_bidegree(
    c: &MVec,
    target_deg: &[(i64, i64)],
    ring: &RingDescriptor,
) -> (i64, i64) {
    let t = c.lt().expect("zero column has no bidegree");
    let (gt, gx) = target_deg[t.pos];
    (
        t.mono.weighted_degree(&ring.tdegs()) as i64 + gt,
        t.mono.weighted_degree(&ring.weights()) as i64 + gx,
    )
}

/// depth (Auslander-Buchsbaum over the polynomial ambient) and Krull
/// dimension (of B0/ann M). The zero module reports (+inf, -inf).
pub fn depth_dim(
    m: &BigradedModule,
    res: &FreeResolution,
    budget: &Budget,
) -> Result<(ExtInt, ExtInt)> {
    if m.is_zero() {
        return Ok((ExtInt::PosInf, ExtInt::NegInf));
    }
    let depth = m.ring.nvars() as i64 - res.pd() as i64;
    let ann = annihilator(m, budget)?;
    let dim = match ann.krull_dim(budget)? {
        Dim::NegInf => ExtInt::NegInf,
        Dim::Finite(d) => ExtInt::Int(d as i64),
    };
    Ok((ExtInt::Int(depth), dim))
}

/// ann(M) = ∩_j (relations : e_j).
pub fn annihilator(m: &BigradedModule, budget: &Budget) -> Result<IdealHandle> {
    let ring = &m.ring;
    let order = ModuleOrder::pot();
    let mut acc: Option<IdealHandle> = None;
    for j in 0..m.rank() {
        let mut cols = vec![MVec {
            terms: vec![MTerm {
                pos: j,
                mono: Monomial::one(ring.nvars()),
                coeff: 1,
            }],
        }];
        cols.extend(m.relations.iter().map(|c| MVec::normalize(c.terms.clone(), ring, &order)));
        let syz = syzygies(&cols, m.rank(), ring, budget)?;
        let gens: Vec<Polynomial> = syz
            .iter()
            .map(|s| s.component(0, ring))
            .filter(|p| !p.is_zero())
            .collect();
        let h = IdealHandle::new_unchecked(ring.clone(), gens);
        acc = Some(match acc {
            None => h,
            Some(prev) => prev.intersection(&h, budget)?,
        });
    }
    acc.ok_or_else(|| Error::math("annihilator of a module without generators"))
}

/// Transpose of a matrix given as columns in rank `rows`: returns columns of
/// the dual map (rank = original column count).
fn transpose(cols: &[MVec], rows: usize, ring: &RingDescriptor) -> Vec<MVec> {
    let order = ModuleOrder::pot();
    let mut out: Vec<Vec<MTerm>> = vec![Vec::new(); rows];
    for (j, col) in cols.iter().enumerate() {
        for t in &col.terms {
            out[t.pos].push(MTerm {
                pos: j,
                mono: t.mono.clone(),
                coeff: t.coeff,
            });
        }
    }
    out.into_iter()
        .map(|ts| MVec::normalize(ts, ring, &order))
        .collect()
}

/// Ext^j_{B0}(M, B0), minimally presented, with dual degree bookkeeping.
pub fn ext_module(
    m: &BigradedModule,
    res: &FreeResolution,
    j: usize,
    budget: &Budget,
) -> Result<BigradedModule> {
    let ring = &m.ring;
    let zero = BigradedModule::new(
        ring.clone(),
        format!("Ext^{j}({})", m.label),
        Vec::new(),
        Vec::new(),
        Vec::new(),
        None,
    );
    if j > res.pd() || m.is_zero() {
        return Ok(zero);
    }
    let dual_deg: Vec<Vec<(i64, i64)>> = res
        .gen_degrees
        .iter()
        .map(|d| d.iter().map(|&(t, x)| (-t, -x)).collect())
        .collect();
    let rank_j = res.gen_degrees[j].len();
    // Kernel of the dual map D_j -> D_{j+1}.
    let kernel: Vec<MVec> = if j < res.pd() {
        let tcols = transpose(&res.matrices[j], rank_j, ring);
        // tcols[k] = image of the k-th basis vector of D_j, in D_{j+1}.
        syzygies(&tcols, res.gen_degrees[j + 1].len(), ring, budget)?
    } else {
        // Top of the complex: the kernel is everything.
        (0..rank_j)
            .map(|k| MVec {
                terms: vec![MTerm {
                    pos: k,
                    mono: Monomial::one(ring.nvars()),
                    coeff: 1,
                }],
            })
            .collect()
    };
    // Image of the previous dual map: columns of the transpose of
    // matrices[j-1] (a map D_{j-1} -> D_j).
    let image: Vec<MVec> = if j > 0 {
        transpose(&res.matrices[j - 1], res.gen_degrees[j - 1].len(), ring)
            .into_iter()
            .filter(|c| !c.is_zero())
            .collect()
    } else {
        Vec::new()
    };
    // Prune kernel generators modulo the image to get minimal Ext gens.
    let kernel = crate::blowup::minimalize_columns_mod(
        kernel,
        &image,
        Some(&dual_deg[j]),
        ring,
        budget,
    )?;
    if kernel.is_empty() {
        return Ok(zero);
    }
    let gen_deg: Vec<(i64, i64)> = kernel
        .iter()
        .map(|c| column_bidegree(c, &dual_deg[j], ring))
        .collect();
    // Relations: syzygies among the kernel generators, plus expressions of
    // the image inside them.
    let mut rels = syzygies(&kernel, rank_j, ring, budget)?;
    for im in &image {
        match express_in_submodule(im, &kernel, rank_j, ring, budget)? {
            Some(rep) => rels.push(rep),
            None => {
                return Err(Error::math(
                    "image column not expressible in kernel generators (internal bug trap)",
                ))
            }
        }
    }
    let rels = minimalize_columns(rels, Some(&gen_deg), ring, budget)?;
    let mut ext = BigradedModule::new(
        ring.clone(),
        format!("Ext^{j}({})", m.label),
        gen_deg.iter().map(|d| d.0).collect(),
        gen_deg.iter().map(|d| d.1).collect(),
        rels,
        None,
    );
    minimal_presentation(&mut ext, budget)?;
    Ok(ext)
}

/// Coefficients expressing `target` in the submodule generated by `gens`,
/// when it lies there: a syzygy of [gens, target] with unit last coordinate.
pub fn express_in_submodule(
    target: &MVec,
    gens: &[MVec],
    rank: usize,
    ring: &RingDescriptor,
    budget: &Budget,
) -> Result<Option<MVec>> {
    let mut cols: Vec<MVec> = gens.to_vec();
    cols.push(target.clone());
    let syz = syzygies(&cols, rank, ring, budget)?;
    let last = gens.len();
    let order = ModuleOrder::pot();
    for s in &syz {
        let c = s.component(last, ring);
        if c.is_constant() {
            let scale = ring.field.neg(ring.field.inv(c.terms[0].1));
            return Ok(Some(MVec::normalize(
                s.terms
                    .iter()
                    .filter(|t| t.pos < last)
                    .map(|t| MTerm {
                        pos: t.pos,
                        mono: t.mono.clone(),
                        coeff: ring.field.mul(t.coeff, scale),
                    })
                    .collect(),
                ring,
                &order,
            )));
        }
    }
    Ok(None)
}

/// Cancel relations with unit entries (eliminating the paired generator)
/// until the presentation is minimal.
pub fn minimal_presentation(m: &mut BigradedModule, budget: &Budget) -> Result<()> {
    let ring = m.ring.clone();
    let order = ModuleOrder::pot();
    loop {
        let mut pivot: Option<(usize, usize)> = None;
        'search: for (ri, rel) in m.relations.iter().enumerate() {
            for t in &rel.terms {
                if t.mono.is_one() {
                    pivot = Some((ri, t.pos));
                    break 'search;
                }
            }
        }
        let Some((ri, pos)) = pivot else { break };
        let pivot_rel = m.relations[ri].clone();
        let c = pivot_rel
            .terms
            .iter()
            .find(|t| t.pos == pos && t.mono.is_one())
            .unwrap()
            .coeff;
        let cinv = ring.field.inv(c);
        // Eliminate `pos` from every other relation, then drop gen and rel.
        let mut next: Vec<MVec> = Vec::new();
        for (rj, rel) in m.relations.iter().enumerate() {
            if rj == ri {
                continue;
            }
            let mut cur = rel.clone();
            // Subtract (entry/c) * pivot_rel for each term at `pos`.
            loop {
                let hit = cur
                    .terms
                    .iter()
                    .find(|t| t.pos == pos)
                    .map(|t| (t.mono.clone(), t.coeff));
                let Some((mono, coeff)) = hit else { break };
                cur = cur.axpy(
                    ring.field.mul(coeff, cinv),
                    &mono,
                    &pivot_rel,
                    &ring,
                    &order,
                );
            }
            next.push(cur);
        }
        // Reindex positions above `pos`.
        let reindex = |v: &MVec| -> MVec {
            MVec::normalize(
                v.terms
                    .iter()
                    .filter(|t| t.pos != pos)
                    .map(|t| MTerm {
                        pos: if t.pos > pos { t.pos - 1 } else { t.pos },
                        mono: t.mono.clone(),
                        coeff: t.coeff,
                    })
                    .collect(),
                &ring,
                &order,
            )
        };
        m.relations = next.iter().map(reindex).filter(|v| !v.is_zero()).collect();
        m.gen_tdeg.remove(pos);
        m.gen_xwt.remove(pos);
        *m = BigradedModule::new(
            ring.clone(),
            m.label.clone(),
            m.gen_tdeg.clone(),
            m.gen_xwt.clone(),
            m.relations.clone(),
            m.carrier.clone(),
        );
    }
    let degs: Vec<(i64, i64)> = m
        .gen_tdeg
        .iter()
        .zip(&m.gen_xwt)
        .map(|(&t, &x)| (t, x))
        .collect();
    m.relations = minimalize_columns(m.relations.clone(), Some(&degs), &ring, budget)?;
    *m = BigradedModule::new(
        ring.clone(),
        m.label.clone(),
        m.gen_tdeg.clone(),
        m.gen_xwt.clone(),
        m.relations.clone(),
        m.carrier.clone(),
    );
    Ok(())
}

/// The a-invariant vector of the y-block local cohomology, indices 0..=s.
#[derive(Debug, Clone, Serialize)]
pub struct AVector {
    pub values: Vec<ExtInt>,
    /// Slices below this t-degree were not scanned when declaring -∞.
    pub scan_floor: i64,
    /// Per-index: true when the value is fully certified (found nonzero, or
    /// vanishing proved by resolution length / grade / spread certificates).
    pub certified: Vec<bool>,
}

impl AVector {
    pub fn a(&self, i: usize) -> ExtInt {
        self.values.get(i).copied().unwrap_or(ExtInt::NegInf)
    }

    pub fn regularity(&self) -> ExtInt {
        let mut best = ExtInt::NegInf;
        for (i, v) in self.values.iter().enumerate() {
            if let ExtInt::Int(n) = v {
                let c = ExtInt::Int(n + i as i64);
                if c > best {
                    best = c;
                }
            }
        }
        best
    }

    /// Largest i with nonvanishing cohomology.
    pub fn top_index(&self) -> Option<usize> {
        (0..self.values.len())
            .rev()
            .find(|&i| matches!(self.values[i], ExtInt::Int(_)))
    }
}

/// a_i(M) for the y-block cohomology of a module over B0 = k[x][y].
///
/// `spread_cap`: when a verified reduction certificate exists, H^i vanishes
/// for i > ℓ (the cohomology is computed by a Čech complex on the ℓ reduction
/// generators once the goodness window certifies the radical equality), so
/// those indices are skipped as certified -∞.
pub fn a_invariants(
    m: &BigradedModule,
    res: &FreeResolution,
    spread_cap: Option<usize>,
    budget: &Budget,
) -> Result<AVector> {
    let ring = &m.ring;
    let s = ring.indices(VarBlock::Y).len();
    let mut values = vec![ExtInt::NegInf; s + 1];
    let mut certified = vec![false; s + 1];
    if m.is_zero() {
        return Ok(AVector {
            values,
            scan_floor: 0,
            certified: vec![true; s + 1],
        });
    }
    let g0 = grade_of_y_block(m, res, budget)?;
    let all_degs: Vec<i64> = res
        .gen_degrees
        .iter()
        .flat_map(|d| d.iter().map(|&(t, _)| t))
        .collect();
    let min_deg = all_degs.iter().copied().min().unwrap_or(0);
    let floor = min_deg - s as i64 - (ring.nvars() as i64) - 4;
    for i in 0..=s {
        let j = s as i64 - i as i64;
        if j < 0 || j as usize > res.pd() {
            certified[i] = true;
            continue;
        }
        if i < g0 {
            certified[i] = true;
            continue;
        }
        if let Some(l) = spread_cap {
            if i > l {
                certified[i] = true;
                continue;
            }
        }
        let j = j as usize;
        let top = res.gen_degrees[j]
            .iter()
            .map(|&(t, _)| t)
            .max()
            .unwrap_or(i64::MIN);
        if top == i64::MIN {
            certified[i] = true;
            continue;
        }
        let top = top - s as i64;
        for n in (floor..=top).rev() {
            if slice_homology_nonzero(res, j, n, budget)? {
                values[i] = ExtInt::Int(n);
                certified[i] = true;
                break;
            }
        }
    }
    Ok(AVector {
        values,
        scan_floor: floor,
        certified,
    })
}

/// grade((y), M) via the Koszul-type criterion: the minimal i with
/// Ext^i(B0/(y), M) != 0. Always valid, and certifies H^i_(y)(M) = 0 for
/// i < grade.
pub fn grade_of_y_block(
    m: &BigradedModule,
    res: &FreeResolution,
    budget: &Budget,
) -> Result<usize> {
    let _ = res;
    let ring = &m.ring;
    let ys = ring.indices(VarBlock::Y);
    let gens: Vec<Polynomial> = ys.iter().map(|&i| Polynomial::var(ring, i)).collect();
    match grade_on_from_gens(&gens, m, budget)? {
        ExtInt::Int(g) => Ok(g as usize),
        _ => Ok(usize::MAX), // (y)M = M can only happen for M = 0
    }
}

/// Nonvanishing of H_j((W ⊗ F)_n) over k[x], computed exactly: kernels by
/// syzygies, then membership of each kernel generator in the image.
fn slice_homology_nonzero(
    res: &FreeResolution,
    j: usize,
    n: i64,
    budget: &Budget,
) -> Result<bool> {
    let ring = &res.ring;
    let s = ring.indices(VarBlock::Y).len();
    let ywts: Vec<u64> = ring
        .indices(VarBlock::Y)
        .iter()
        .map(|&i| ring.vars[i].weight)
        .collect();
    let xring = x_only_ring(ring);
    let basis_j = w_slice_basis(res, j, n, s);
    if basis_j.is_empty() {
        return Ok(false);
    }
    let _ = ywts;
    let d_j: Vec<MVec> = if j > 0 {
        let basis_prev = w_slice_basis(res, j - 1, n, s);
        w_slice_matrix(res, j - 1, &basis_j, &basis_prev, &xring)
    } else {
        Vec::new()
    };
    // Kernel of d_j (whole slice when j = 0).
    let kernel: Vec<MVec> = if j == 0 {
        (0..basis_j.len())
            .map(|k| MVec {
                terms: vec![MTerm {
                    pos: k,
                    mono: Monomial::one(xring.nvars()),
                    coeff: 1,
                }],
            })
            .collect()
    } else {
        let basis_prev = w_slice_basis(res, j - 1, n, s);
        if basis_prev.is_empty() {
            (0..basis_j.len())
                .map(|k| MVec {
                    terms: vec![MTerm {
                        pos: k,
                        mono: Monomial::one(xring.nvars()),
                        coeff: 1,
                    }],
                })
                .collect()
        } else {
            syzygies(&d_j, basis_prev.len(), &xring, budget)?
        }
    };
    if kernel.is_empty() {
        return Ok(false);
    }
    // Image of d_{j+1}.
    let image: Vec<MVec> = if j < res.pd() {
        let basis_next = w_slice_basis(res, j + 1, n, s);
        w_slice_matrix(res, j, &basis_next, &basis_j, &xring)
            .into_iter()
            .filter(|c| !c.is_zero())
            .collect()
    } else {
        Vec::new()
    };
    if image.is_empty() {
        return Ok(true); // nonzero kernel, nothing to quotient by
    }
    let order = ModuleOrder::pot();
    let gb = buchberger(&image, basis_j.len(), &xring, &order, budget)?;
    for k in &kernel {
        if !gb.contains(k, &xring, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn x_only_ring(ring: &Arc<RingDescriptor>) -> Arc<RingDescriptor> {
    let vars = ring
        .vars
        .iter()
        .filter(|v| v.block == VarBlock::X)
        .cloned()
        .collect();
    Arc::new(RingDescriptor {
        vars,
        field: ring.field,
        quotient_gens: Vec::new(),
    })
}

/// Basis of (W ⊗ F_step)_n: pairs (generator index, composition a >= 1 with
/// |a| = gen_tdeg - n).
fn w_slice_basis(res: &FreeResolution, step: usize, n: i64, s: usize) -> Vec<(usize, Vec<u32>)> {
    let mut out = Vec::new();
    if step >= res.gen_degrees.len() {
        return out;
    }
    for (k, &(t, _)) in res.gen_degrees[step].iter().enumerate() {
        let total = t - n;
        if total < s as i64 {
            continue;
        }
        compositions(total as u64, s, &mut |a| out.push((k, a.to_vec())));
    }
    out
}

/// All vectors a in Z^s with a_i >= 1 and |a| = total.
fn compositions(total: u64, s: usize, f: &mut impl FnMut(&[u32])) {
    if s == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    let mut cur = vec![1u32; s];
    fn rec(cur: &mut Vec<u32>, idx: usize, left: u64, f: &mut impl FnMut(&[u32])) {
        if idx + 1 == cur.len() {
            cur[idx] = 1 + left as u32;
            f(cur);
            return;
        }
        for extra in 0..=left {
            cur[idx] = 1 + extra as u32;
            rec(cur, idx + 1, left - extra, f);
        }
    }
    if total < s as u64 {
        return;
    }
    rec(&mut cur, 0, total - s as u64, f);
}

/// Matrix of W ⊗ matrices[idx] between slice bases: columns indexed by
/// `src_basis` (elements of step idx+1), rows by `dst_basis` (step idx).
/// The y-part of each entry contracts: y^b · y^(-a') survives only when
/// a := a' - b stays >= 1 componentwise.
fn w_slice_matrix(
    res: &FreeResolution,
    idx: usize,
    src_basis: &[(usize, Vec<u32>)],
    dst_basis: &[(usize, Vec<u32>)],
    xring: &Arc<RingDescriptor>,
) -> Vec<MVec> {
    let ring = &res.ring;
    let ys = ring.indices(VarBlock::Y);
    let xs = ring.indices(VarBlock::X);
    let order = ModuleOrder::pot();
    let mut index = std::collections::BTreeMap::new();
    for (row, b) in dst_basis.iter().enumerate() {
        index.insert((b.0, b.1.clone()), row);
    }
    let mut out = Vec::with_capacity(src_basis.len());
    for (kprime, aprime) in src_basis {
        let col = &res.matrices[idx][*kprime];
        let mut terms = Vec::new();
        for t in &col.terms {
            // Split the monomial into its x- and y-parts.
            let mut a = aprime.clone();
            let mut ok = true;
            for (yi, &var) in ys.iter().enumerate() {
                let b = t.mono.0[var];
                if a[yi] <= b {
                    ok = false;
                    break;
                }
                a[yi] -= b;
            }
            if !ok {
                continue;
            }
            if let Some(&row) = index.get(&(t.pos, a)) {
                let xmono = Monomial(xs.iter().map(|&i| t.mono.0[i]).collect());
                terms.push(MTerm {
                    pos: row,
                    mono: xmono,
                    coeff: t.coeff,
                });
            }
        }
        out.push(MVec::normalize(terms, xring, &order));
    }
    out
}

/// grade(J, M) = min{ i : Ext^i(B0/J', M) != 0 }, +inf when J M = M.
pub fn grade_on(j_ideal: &IdealHandle, m: &BigradedModule, budget: &Budget) -> Result<ExtInt> {
    let ring = &m.ring;
    // J' = preimage of J in B0: generators plus Q.
    let mut gens: Vec<Polynomial> = j_ideal
        .gens
        .iter()
        .map(|g| g.pad(ring.nvars()))
        .collect();
    gens.extend(ring.quotient_gens.iter().cloned());
    grade_on_from_gens(&gens, m, budget)
}

fn grade_on_from_gens(
    gens: &[Polynomial],
    m: &BigradedModule,
    budget: &Budget,
) -> Result<ExtInt> {
    let ring = &m.ring;
    if m.is_zero() {
        return Ok(ExtInt::PosInf);
    }
    // Resolve B0/J' minimally.
    let order = ModuleOrder::pot();
    let rel: Vec<MVec> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| MVec::from_poly(g, 0, ring, &order))
        .collect();
    let quot = BigradedModule::new(
        ring.clone(),
        "B0/J".to_string(),
        vec![0],
        vec![0],
        rel,
        None,
    );
    let res = minimal_resolution(&quot, budget)?;
    for i in 0..=res.pd() {
        if hom_cohomology_nonzero(&res, i, m, budget)? {
            return Ok(ExtInt::Int(i as i64));
        }
    }
    Ok(ExtInt::PosInf)
}

/// Nonvanishing of H^i(Hom(F_•, M)) for a finitely presented M.
fn hom_cohomology_nonzero(
    res: &FreeResolution,
    i: usize,
    m: &BigradedModule,
    budget: &Budget,
) -> Result<bool> {
    let ring = &m.ring;
    let g = m.rank();
    let r_i = res.gen_degrees[i].len();
    // Hom(F_i, M) = M^{r_i}, flattened into B^{g·r_i} (copy u, gen j) -> u*g + j.
    // The dual map Hom(F_i, M) -> Hom(F_{i+1}, M) is composition with
    // matrices[i].
    let order = ModuleOrder::pot();
    let spread_rel = |copies: usize| -> Vec<MVec> {
        let mut out = Vec::new();
        for u in 0..copies {
            for rel in &m.relations {
                out.push(MVec::normalize(
                    rel.terms
                        .iter()
                        .map(|t| MTerm {
                            pos: u * g + t.pos,
                            mono: t.mono.clone(),
                            coeff: t.coeff,
                        })
                        .collect(),
                    ring,
                    &order,
                ));
            }
        }
        out
    };
    // Kernel of the outgoing map (as submodule of B^{g·r_i} containing rel).
    let kernel: Vec<MVec> = if i < res.pd() {
        let r_next = res.gen_degrees[i + 1].len();
        // Φ: B^{g·r_i} -> B^{g·r_next}: basis (u, j) maps by the transpose
        // action: φ(e_u ⊗ m) has component at copy v equal to entry(u of
        // column v)·m; entry (v, u) of the dual matrix = matrices[i][v]'s
        // coefficient at position u.
        let mut phi_cols = Vec::with_capacity(g * r_i);
        for u in 0..r_i {
            for jj in 0..g {
                let mut terms = Vec::new();
                for v in 0..r_next {
                    let col = &res.matrices[i][v];
                    for t in &col.terms {
                        if t.pos == u {
                            terms.push(MTerm {
                                pos: v * g + jj,
                                mono: t.mono.clone(),
                                coeff: t.coeff,
                            });
                        }
                    }
                }
                phi_cols.push(MVec::normalize(terms, ring, &order));
            }
        }
        crate::engine::preimage(&phi_cols, &spread_rel(r_next), g * r_next, ring, budget)?
    } else {
        (0..g * r_i)
            .map(|p| MVec {
                terms: vec![MTerm {
                    pos: p,
                    mono: Monomial::one(ring.nvars()),
                    coeff: 1,
                }],
            })
            .collect()
    };
    // Image of the incoming map plus the relations.
    let mut modulus = spread_rel(r_i);
    if i > 0 {
        let r_prev = res.gen_degrees[i - 1].len();
        for u in 0..r_prev {
            for jj in 0..g {
                let mut terms = Vec::new();
                for (v, col) in res.matrices[i - 1].iter().enumerate() {
                    for t in &col.terms {
                        if t.pos == u {
                            terms.push(MTerm {
                                pos: v * g + jj,
                                mono: t.mono.clone(),
                                coeff: t.coeff,
                            });
                        }
                    }
                }
                let v = MVec::normalize(terms, ring, &order);
                if !v.is_zero() {
                    modulus.push(v);
                }
            }
        }
    }
    let gb = buchberger(&modulus, g * r_i, ring, &order, budget)?;
    for k in &kernel {
        if !gb.contains(k, ring, budget)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Regularity from the a-vector; for modules with trivial x-action the
/// Betti-degree route max(gen degree - step) must agree and is cross-checked.
pub fn regularity(
    m: &BigradedModule,
    res: &FreeResolution,
    avec: &AVector,
    budget: &Budget,
) -> Result<ExtInt> {
    if m.is_zero() {
        return Err(Error::invalid("regularity of the zero module"));
    }
    let duality = avec.regularity();
    if m.x_acts_trivially(budget)? {
        let mut betti = ExtInt::NegInf;
        for (step, degs) in res.gen_degrees.iter().enumerate() {
            for &(t, _) in degs {
                let c = ExtInt::Int(t - step as i64);
                if c > betti {
                    betti = c;
                }
            }
        }
        if betti != duality {
            return Err(Error::math(format!(
                "regularity mismatch for {}: duality {} vs Betti {} (internal bug trap)",
                m.label, duality, betti
            )));
        }
    }
    Ok(duality)
}

/// (0 :_M v) = 0, exactly: every kernel generator of multiplication by v lies
/// in the relations.
pub fn is_regular_element(
    v: &Polynomial,
    m: &BigradedModule,
    budget: &Budget,
) -> Result<bool> {
    let kernel = mult_kernel(v, m, budget)?;
    let gb = m.rel_gb(budget)?;
    for k in &kernel {
        if !gb.contains(k, &m.ring, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kernel generators of multiplication by v on M (inside B^g, containing rel).
fn mult_kernel(v: &Polynomial, m: &BigradedModule, budget: &Budget) -> Result<Vec<MVec>> {
    let ring = &m.ring;
    let order = ModuleOrder::pot();
    let g = m.rank();
    let map_cols: Vec<MVec> = (0..g)
        .map(|j| MVec::from_poly(v, j, ring, &order))
        .collect();
    let rel: Vec<MVec> = m
        .relations
        .iter()
        .map(|c| MVec::normalize(c.terms.clone(), ring, &order))
        .collect();
    crate::engine::preimage(&map_cols, &rel, g, ring, budget)
}

/// Filter-regularity of a t-degree-1 element v on M: (0 :_M v) is
/// (y)-power-torsion, tested per kernel generator by radical membership of
/// every y-variable in (relations : κ).
pub fn is_filter_regular(
    v: &Polynomial,
    m: &BigradedModule,
    budget: &Budget,
) -> Result<bool> {
    let ring = &m.ring;
    let kernel = mult_kernel(v, m, budget)?;
    let gb = m.rel_gb(budget)?;
    let ys = ring.indices(VarBlock::Y);
    for k in &kernel {
        if gb.contains(k, ring, budget)? {
            continue;
        }
        // (rel : κ): first components of syzygies of [κ, rel].
        let order = ModuleOrder::pot();
        let mut cols = vec![MVec::normalize(k.terms.clone(), ring, &order)];
        cols.extend(
            m.relations
                .iter()
                .map(|c| MVec::normalize(c.terms.clone(), ring, &order)),
        );
        let syz = syzygies(&cols, m.rank(), ring, budget)?;
        let colon: Vec<Polynomial> = syz
            .iter()
            .map(|s| s.component(0, ring))
            .filter(|p| !p.is_zero())
            .collect();
        for &yi in &ys {
            let yvar = Polynomial::var(ring, yi);
            if !crate::ideal::radical_membership(&colon, &yvar, ring, budget)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// M/(v_1..v_k)M for t-degree-one elements given as B0-polynomials.
pub fn quotient_by_elements(m: &BigradedModule, elts: &[Polynomial]) -> BigradedModule {
    let ring = m.ring.clone();
    let order = ModuleOrder::pot();
    let mut rels = m.relations.clone();
    for v in elts {
        for j in 0..m.rank() {
            rels.push(MVec::from_poly(v, j, &ring, &order));
        }
    }
    BigradedModule::new(
        ring,
        format!("{}/({} elts)", m.label, elts.len()),
        m.gen_tdeg.clone(),
        m.gen_xwt.clone(),
        rels,
        None,
    )
}

/// Random degree-one elements, each filter-regular on all listed modules
/// modulo the previously chosen ones; bounded retries, seeded.
pub fn find_filter_regular_sequence(
    modules: &[&BigradedModule],
    len: usize,
    seed: u64,
    budget: &Budget,
) -> Result<Vec<Polynomial>> {
    if modules.is_empty() {
        return Err(Error::invalid("no modules given"));
    }
    let ring = modules[0].ring.clone();
    let ys = ring.indices(VarBlock::Y);
    let p = ring.field.characteristic();
    let mut chosen: Vec<Polynomial> = Vec::new();
    for slot in 0..len {
        let mut found = false;
        for attempt in 0..40u64 {
            let mut rng = crate::rng::SplitMix64::keyed(seed, (slot as u64) << 8 | attempt);
            let mut v = Polynomial::zero();
            for &yi in &ys {
                let c = rng.below(p);
                if c != 0 {
                    v = v.add(
                        &Polynomial::var(&ring, yi).scale(c, &ring),
                        &ring,
                    );
                }
            }
            if v.is_zero() {
                continue;
            }
            let mut ok = true;
            for m in modules {
                let q = quotient_by_elements(m, &chosen);
                if !is_filter_regular(&v, &q, budget)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                chosen.push(v);
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::math(
                "filter-regular sequence search exhausted its retries",
            ));
        }
    }
    Ok(chosen)
}

/// Free rank-one bigraded module over `ring` (for calibration tests).
pub fn free_module(ring: &Arc<RingDescriptor>, label: &str) -> BigradedModule {
    BigradedModule::new(
        ring.clone(),
        label.to_string(),
        vec![0],
        vec![0],
        Vec::new(),
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{present_assoc_graded, present_fiber, present_rees, BlowupContext};
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

    fn pure_y_ring(s: usize) -> Arc<RingDescriptor> {
        let base = RingDescriptor::base(&[], &[], PrimeField::default()).unwrap();
        base.with_y_block(&vec![1; s])
    }

    #[test]
    fn test_koszul_resolution_of_k() {
        // k = B0/(x, y1) over one x-var and one y-var: Betti 1, 2, 1.
        let b = Budget::default();
        let base = RingDescriptor::base(&["x"], &[1], PrimeField::default()).unwrap();
        let ring = base.with_y_block(&[1]);
        let order = ModuleOrder::pot();
        let rels = vec![
            MVec::from_poly(&Polynomial::var(&ring, 0), 0, &ring, &order),
            MVec::from_poly(&Polynomial::var(&ring, 1), 0, &ring, &order),
        ];
        let m = BigradedModule::new(ring.clone(), "k".into(), vec![0], vec![0], rels, None);
        let res = minimal_resolution(&m, &b).unwrap();
        assert_eq!(res.betti(), vec![1, 2, 1]);
        // Composition is zero.
        let comp_zero = {
            let m1 = &res.matrices[0];
            let m2 = &res.matrices[1];
            m2.iter().all(|col| {
                // Apply m1 to col.
                let mut acc: Vec<MTerm> = Vec::new();
                for t in &col.terms {
                    for u in &m1[t.pos].terms {
                        acc.push(MTerm {
                            pos: u.pos,
                            mono: u.mono.mul(&t.mono),
                            coeff: ring.field.mul(u.coeff, t.coeff),
                        });
                    }
                }
                MVec::normalize(acc, &ring, &order).is_zero()
            })
        };
        assert!(comp_zero);
    }

    #[test]
    fn test_hypersurface_resolution() {
        let b = Budget::default();
        let ring = pure_y_ring(2);
        let order = ModuleOrder::pot();
        let f = parse_polynomial("y1*y2", &ring).unwrap();
        let m = BigradedModule::new(
            ring.clone(),
            "hypersurface".into(),
            vec![0],
            vec![0],
            vec![MVec::from_poly(&f, 0, &ring, &order)],
            None,
        );
        let res = minimal_resolution(&m, &b).unwrap();
        assert_eq!(res.betti(), vec![1, 1]);
        // y1 y2 has t-degree 2 and x-weight 2 (each y carries weight 1 here).
        assert_eq!(res.gen_degrees[1], vec![(2, 2)]);
    }

    #[test]
    fn test_duality_calibration_free_modules() {
        // a_s(B0) = -s for s = 1, 2, 3 over pure y-rings; all other a_i = -∞.
        let b = Budget::default();
        for s in 1..=3usize {
            let ring = pure_y_ring(s);
            let m = free_module(&ring, "B0");
            let res = minimal_resolution(&m, &b).unwrap();
            let av = a_invariants(&m, &res, None, &b).unwrap();
            for i in 0..=s {
                if i == s {
                    assert_eq!(av.a(i), ExtInt::Int(-(s as i64)), "s = {s}");
                } else {
                    assert_eq!(av.a(i), ExtInt::NegInf, "s = {s}, i = {i}");
                }
                assert!(av.certified[i]);
            }
        }
    }

    #[test]
    fn test_a_vector_of_g_adic_maximal() {
        // G(m-adic) over k[x,y]: a = (-∞, -∞, -2), reg = 0.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let g = present_assoc_graded(&ctx, &f, &b).unwrap();
        let res = minimal_resolution(&g, &b).unwrap();
        let av = a_invariants(&g, &res, None, &b).unwrap();
        assert_eq!(av.a(0), ExtInt::NegInf);
        assert_eq!(av.a(1), ExtInt::NegInf);
        assert_eq!(av.a(2), ExtInt::Int(-2));
        assert_eq!(av.regularity(), ExtInt::Int(0));
    }

    #[test]
    fn test_a_vector_of_rees_adic_maximal() {
        // R(m-adic): a = (-∞, -1, -2), reg = 0.
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x", "y"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let rees = present_rees(&ctx, &f, &b).unwrap();
        let res = minimal_resolution(&rees, &b).unwrap();
        let av = a_invariants(&rees, &res, None, &b).unwrap();
        assert_eq!(av.a(0), ExtInt::NegInf);
        assert_eq!(av.a(1), ExtInt::Int(-1));
        assert_eq!(av.a(2), ExtInt::Int(-2));
        assert_eq!(av.regularity(), ExtInt::Int(0));
    }

    #[test]
    fn test_reg_of_fiber_m2() {
        // F(m^2-adic) = k[y1,y2,y3]/(y2^2 - y1 y3): reg = 1 by both routes,
        // a-vector (-∞, -∞, -1, -∞).
        let r = kxy();
        let b = Budget::default();
        let f = make_adic(&ideal(&r, &["x^2", "x*y", "y^2"]), &b).unwrap();
        let ctx = BlowupContext::new(&f, &b).unwrap();
        let fib = present_fiber(&ctx, &f, &b).unwrap();
        let res = minimal_resolution(&fib, &b).unwrap();
        let av = a_invariants(&fib, &res, None, &b).unwrap();
        assert_eq!(av.a(2), ExtInt::Int(-1));
        assert_eq!(av.a(3), ExtInt::NegInf);
        assert_eq!(regularity(&fib, &res, &av, &b).unwrap(), ExtInt::Int(1));
    }

    #[test]
    fn test_ext_calibration() {
        // Ext^1(B0/(y1), B0) ≅ (B0/(y1))(1): generator degree -1.
        let b = Budget::default();
        let ring = pure_y_ring(2);
        let order = ModuleOrder::pot();
        let m = BigradedModule::new(
            ring.clone(),
            "B0/(y1)".into(),
            vec![0],
            vec![0],
            vec![MVec::from_poly(
                &Polynomial::var(&ring, 0),
                0,
                &ring,
                &order,
            )],
            None,
        );
        let res = minimal_resolution(&m, &b).unwrap();
        let e0 = ext_module(&m, &res, 0, &b).unwrap();
        assert!(e0.is_zero());
        let e1 = ext_module(&m, &res, 1, &b).unwrap();
        assert_eq!(e1.gen_tdeg, vec![-1]);
        assert_eq!(e1.relations.len(), 1);
    }

    #[test]
    fn test_ext_of_k_koszul_self_duality() {
        let b = Budget::default();
        let ring = pure_y_ring(2);
        let order = ModuleOrder::pot();
        let rels = vec![
            MVec::from_poly(&Polynomial::var(&ring, 0), 0, &ring, &order),
            MVec::from_poly(&Polynomial::var(&ring, 1), 0, &ring, &order),
        ];
        let m = BigradedModule::new(ring.clone(), "k".into(), vec![0], vec![0], rels, None);
        let res = minimal_resolution(&m, &b).unwrap();
        assert!(ext_module(&m, &res, 0, &b).unwrap().is_zero());
        assert!(ext_module(&m, &res, 1, &b).unwrap().is_zero());
        let top = ext_module(&m, &res, 2, &b).unwrap();
        assert_eq!(top.rank(), 1);
        assert_eq!(top.gen_tdeg, vec![-2]);
    }

    #[test]
    fn test_grade_examples() {
        let b = Budget::default();
        // grade((x), k[x,y]) = 1 and grade((x,y), k[x,y]) = 2, over a ring
        // with no y-block (s = 0 degenerate case).
        let r = kxy();
        let ring = r.with_y_block(&[]);
        let free = free_module(&ring, "A");
        let gx = grade_on(&ideal(&r, &["x"]), &free, &b).unwrap();
        assert_eq!(gx, ExtInt::Int(1));
        let gm = grade_on(&ideal(&r, &["x", "y"]), &free, &b).unwrap();
        assert_eq!(gm, ExtInt::Int(2));
    }

    #[test]
    fn test_grade_on_quotient_by_xy() {
        // grade(m, k[x,y]/(xy)) = 1.
        let b = Budget::default();
        let r = kxy();
        let ring = r.with_y_block(&[]);
        let order = ModuleOrder::pot();
        let f = parse_polynomial("x*y", &ring).unwrap();
        let m = BigradedModule::new(
            ring.clone(),
            "A/(xy)".into(),
            vec![0],
            vec![0],
            vec![MVec::from_poly(&f, 0, &ring, &order)],
            None,
        );
        let g = grade_on(&ideal(&r, &["x", "y"]), &m, &b).unwrap();
        assert_eq!(g, ExtInt::Int(1));
    }

    #[test]
    fn test_depth_dim() {
        let b = Budget::default();
        let ring = pure_y_ring(2);
        // Free module: depth = dim = 2.
        let free = free_module(&ring, "B0");
        let res = minimal_resolution(&free, &b).unwrap();
        let (depth, dim) = depth_dim(&free, &res, &b).unwrap();
        assert_eq!(depth, ExtInt::Int(2));
        assert_eq!(dim, ExtInt::Int(2));
        // k: depth = dim = 0.
        let order = ModuleOrder::pot();
        let rels = vec![
            MVec::from_poly(&Polynomial::var(&ring, 0), 0, &ring, &order),
            MVec::from_poly(&Polynomial::var(&ring, 1), 0, &ring, &order),
        ];
        let k = BigradedModule::new(ring.clone(), "k".into(), vec![0], vec![0], rels, None);
        let kres = minimal_resolution(&k, &b).unwrap();
        let (kd, kdim) = depth_dim(&k, &kres, &b).unwrap();
        assert_eq!(kd, ExtInt::Int(0));
        assert_eq!(kdim, ExtInt::Int(0));
    }

    #[test]
    fn test_filter_regular() {
        let b = Budget::default();
        let ring = pure_y_ring(2);
        let free = free_module(&ring, "k[y1,y2]");
        let y1 = Polynomial::var(&ring, 0);
        assert!(is_filter_regular(&y1, &free, &b).unwrap());
        assert!(is_regular_element(&y1, &free, &b).unwrap());
        // On k[y1,y2]/(y1): y1 annihilates everything, not torsion.
        let order = ModuleOrder::pot();
        let m = BigradedModule::new(
            ring.clone(),
            "k[y]/(y1)".into(),
            vec![0],
            vec![0],
            vec![MVec::from_poly(&y1, 0, &ring, &order)],
            None,
        );
        assert!(!is_filter_regular(&y1, &m, &b).unwrap());
        // Filter-regular but not regular: on k[y] ⊕ k (second summand killed
        // by y1 and y2), y1 kills exactly the finite-length summand.
        let rels = vec![
            MVec::from_poly(&y1, 1, &ring, &order),
            MVec::from_poly(&Polynomial::var(&ring, 1), 1, &ring, &order),
        ];
        let m2 = BigradedModule::new(
            ring.clone(),
            "free+k".into(),
            vec![0, 0],
            vec![0, 0],
            rels,
            None,
        );
        assert!(is_filter_regular(&y1, &m2, &b).unwrap());
        assert!(!is_regular_element(&y1, &m2, &b).unwrap());
    }

    #[test]
    fn test_find_filter_regular_sequence() {
        let b = Budget::default();
        let ring = pure_y_ring(2);
        let free = free_module(&ring, "k[y1,y2]");
        let seq = find_filter_regular_sequence(&[&free], 2, 7, &b).unwrap();
        assert_eq!(seq.len(), 2);
        let empty = find_filter_regular_sequence(&[&free], 0, 7, &b).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn test_reg_shift_compatibility() {
        // reg(M(-1)) = reg(M) + 1 on a sampled module.
        let b = Budget::default();
        let ring = pure_y_ring(2);
        let order = ModuleOrder::pot();
        let f = parse_polynomial("y2^2 - y1*y2", &ring).unwrap();
        for shift in [0i64, 1] {
            let m = BigradedModule::new(
                ring.clone(),
                "M".into(),
                vec![shift],
                vec![0],
                vec![MVec::from_poly(&f, 0, &ring, &order)],
                None,
            );
            let res = minimal_resolution(&m, &b).unwrap();
            let av = a_invariants(&m, &res, None, &b).unwrap();
            assert_eq!(av.regularity(), ExtInt::Int(1 + shift));
        }
    }
}
