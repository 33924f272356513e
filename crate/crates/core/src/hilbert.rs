//! Hilbert series of the fiber cone and the rank-one decomposition of
//! fiber cones with analytic spread one.
//!
//! When s(F) = 1 with minimal reduction (a), the fiber cone is a finitely
//! generated graded module over F((a)) = k[u] and splits as
//! ⊕ k[u](-b_i) ⊕ ⊕ (k[u]/u^{c_j})(-d_j); the shifts and torsion pairs are
//! computed by graded Smith normal form of a slicewise-built presentation,
//! and reg and the reduction number are read from the displayed pair
//! reg = max{b_e, c_j + d_j - 1}, r = max{b_e, d_f}.

use crate::blowup::BigradedModule;
use crate::engine::{normal_form, Budget, MTerm, MVec};
use crate::error::{Error, Result};
use crate::filtration::GoodFiltration;
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{RingDescriptor, VarBlock};
use serde::Serialize;

/// Rational form of the fiber Hilbert series: numerator over (1-x)^spread.
#[derive(Debug, Clone, Serialize)]
pub struct FiberHilbert {
    pub spread: usize,
    pub numerator: Vec<i64>,
    pub mu_sequence: Vec<usize>,
}

/// μ(I_n) for n <= n_check and the rational form with denominator
/// (1-x)^spread; fails loudly when the μ-sequence is not eventually
/// polynomial of degree spread-1 within the window.
pub fn hilbert_series_fiber(
    f: &GoodFiltration,
    spread: usize,
    n_check: usize,
    budget: &Budget,
) -> Result<FiberHilbert> {
    let pre = f.prefix(n_check, budget)?;
    let mut mu = Vec::with_capacity(n_check + 1);
    for h in &pre {
        mu.push(h.min_generators(budget)?);
    }
    // numerator = mu-series * (1-x)^spread, truncated to the window.
    let mut binom = vec![1i64];
    for _ in 0..spread {
        let mut next = vec![0i64; binom.len() + 1];
        for (i, &c) in binom.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        binom = next;
    }
    let mut conv = vec![0i64; n_check + 1];
    for (n, c) in conv.iter_mut().enumerate() {
        for (k, &b) in binom.iter().enumerate() {
            if k <= n {
                *c += b * mu[n - k] as i64;
            }
        }
    }
    // The tail must vanish: at least spread+2 trailing zeros certify the
    // eventual-polynomial shape within this window.
    let last_nonzero = conv.iter().rposition(|&c| c != 0);
    let tail_zeros = n_check - last_nonzero.unwrap_or(0);
    if tail_zeros < spread + 2 {
        return Err(Error::math(format!(
            "mu-sequence does not match a degree-{} polynomial within n_check = {}",
            spread.saturating_sub(1),
            n_check
        )));
    }
    let numerator = conv[..=last_nonzero.unwrap_or(0)].to_vec();
    Ok(FiberHilbert {
        spread,
        numerator,
        mu_sequence: mu,
    })
}

/// Decomposition data of a graded k[u]-module.
#[derive(Debug, Clone, Serialize)]
pub struct PIDDecomposition {
    pub free_shifts: Vec<i64>,
    /// (c_j, d_j): summand (k[u]/u^{c_j})(-d_j).
    pub torsion_pairs: Vec<(u32, i64)>,
    pub reg: i64,
    pub reduction_number: i64,
}

impl PIDDecomposition {
    pub fn hilbert(&self, n: i64) -> usize {
        let free = self.free_shifts.iter().filter(|&&b| b <= n).count();
        let tors = self
            .torsion_pairs
            .iter()
            .filter(|&&(c, d)| d <= n && n < d + c as i64)
            .count();
        free + tors
    }

    fn from_formulas(free_shifts: Vec<i64>, torsion_pairs: Vec<(u32, i64)>) -> Self {
        let b_top = free_shifts.iter().copied().max().unwrap_or(0);
        let reg = torsion_pairs
            .iter()
            .map(|&(c, d)| c as i64 + d - 1)
            .chain(std::iter::once(b_top))
            .max()
            .unwrap_or(0);
        let r = torsion_pairs
            .iter()
            .map(|&(_, d)| d)
            .chain(std::iter::once(b_top))
            .max()
            .unwrap_or(0);
        PIDDecomposition {
            free_shifts,
            torsion_pairs,
            reg,
            reduction_number: r,
        }
    }
}

/// Slicewise data of a fiber cone as a k[u]-module: bases of the t-slices
/// and the matrices of multiplication by u.
struct FiberAction {
    /// Basis of slice n: standard monomials (position, y-monomial).
    bases: Vec<Vec<(usize, Monomial)>>,
    /// maps[n]: slice n -> slice n+1, dense column-major over F_p.
    maps: Vec<Vec<Vec<u64>>>,
}

fn fiber_action(
    fiber: &BigradedModule,
    u_elt: &Polynomial,
    upto: usize,
    budget: &Budget,
) -> Result<FiberAction> {
    let ring = &fiber.ring;
    let gb = fiber.rel_gb(budget)?;
    let lts: Vec<(usize, Monomial)> = gb
        .gens
        .iter()
        .map(|g| {
            let t = g.lt().unwrap();
            (t.pos, t.mono.clone())
        })
        .collect();
    let ys = ring.indices(VarBlock::Y);
    // Standard monomials are pure-y since x acts as zero on a fiber cone.
    let mut bases: Vec<Vec<(usize, Monomial)>> = Vec::new();
    for n in 0..=upto {
        let mut basis = Vec::new();
        for (j, &gt) in fiber.gen_tdeg.iter().enumerate() {
            let need = n as i64 - gt;
            if need < 0 {
                continue;
            }
            y_monomials(ring, &ys, need as u64, &mut |m| {
                if !lts.iter().any(|(p, lm)| *p == j && lm.divides(m)) {
                    basis.push((j, m.clone()));
                }
            });
        }
        basis.sort();
        bases.push(basis);
    }
    let mut maps = Vec::new();
    for n in 0..upto {
        let src = &bases[n];
        let dst = &bases[n + 1];
        let mut cols = Vec::with_capacity(src.len());
        for (j, m) in src {
            let prod = MVec::normalize(
                u_elt
                    .terms
                    .iter()
                    .map(|(um, uc)| MTerm {
                        pos: *j,
                        mono: um.mul(m),
                        coeff: *uc,
                    })
                    .collect(),
                ring,
                &gb.order,
            );
            let nf = normal_form(&prod, &gb.gens, ring, &gb.order, budget)?;
            let mut col = vec![0u64; dst.len()];
            for t in &nf.terms {
                let key = (t.pos, t.mono.clone());
                match dst.binary_search(&key) {
                    Ok(row) => col[row] = t.coeff,
                    Err(_) => {
                        return Err(Error::math(
                            "normal form left the standard basis (internal bug trap)",
                        ))
                    }
                }
            }
            cols.push(col);
        }
        maps.push(cols);
    }
    Ok(FiberAction { bases, maps })
}

fn y_monomials(
    ring: &RingDescriptor,
    ys: &[usize],
    total: u64,
    f: &mut impl FnMut(&Monomial),
) {
    let mut cur = vec![0u32; ring.nvars()];
    fn rec(
        ys: &[usize],
        k: usize,
        left: u64,
        cur: &mut Vec<u32>,
        f: &mut impl FnMut(&Monomial),
    ) {
        if k + 1 == ys.len() {
            cur[ys[k]] = left as u32;
            f(&Monomial(cur.clone()));
            cur[ys[k]] = 0;
            return;
        }
        for e in 0..=left {
            cur[ys[k]] = e as u32;
            rec(ys, k + 1, left - e, cur, f);
        }
        cur[ys[k]] = 0;
    }
    if ys.is_empty() {
        if total == 0 {
            f(&Monomial(cur));
        }
        return;
    }
    rec(ys, 0, total, &mut cur, f);
}

/// Dense F_p linear algebra helpers.
fn rank_and_rref(
    field: &crate::scalar::PrimeField,
    cols: &[Vec<u64>],
    rows: usize,
) -> (usize, Vec<Vec<u64>>, Vec<usize>) {
    // Returns (rank, row-echelon basis of the column space as rows, pivot rows).
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        assert_eq!(v.len(), rows);
        for (b, &p) in basis.iter().zip(&pivots) {
            if v[p] != 0 {
                let factor = v[p];
                for i in 0..rows {
                    v[i] = field.sub(v[i], field.mul(factor, b[i]));
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let inv = field.inv(v[p]);
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            basis.push(v);
            pivots.push(p);
        }
    }
    (basis.len(), basis, pivots)
}

fn in_span(
    field: &crate::scalar::PrimeField,
    basis: &[Vec<u64>],
    pivots: &[usize],
    v: &[u64],
) -> bool {
    let mut v = v.to_vec();
    for (b, &p) in basis.iter().zip(pivots) {
        if v[p] != 0 {
            let factor = v[p];
            for i in 0..v.len() {
                v[i] = field.sub(v[i], field.mul(factor, b[i]));
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

fn nullspace(field: &crate::scalar::PrimeField, cols: &[Vec<u64>], rows: usize) -> Vec<Vec<u64>> {
    // Kernel of the matrix with the given columns: solve by RREF on the
    // transpose-augmented system. Columns index the kernel coordinates.
    let n = cols.len();
    if n == 0 {
        return Vec::new();
    }
    // Build augmented rows: each column with an identity tag.
    let mut rows_aug: Vec<(Vec<u64>, Vec<u64>)> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut tag = vec![0u64; n];
            tag[i] = 1;
            (c.clone(), tag)
        })
        .collect();
    let mut kernel = Vec::new();
    let mut reduced: Vec<(Vec<u64>, Vec<u64>, usize)> = Vec::new();
    for (mut v, mut tag) in rows_aug.drain(..) {
        for (b, btag, p) in &reduced {
            if v[*p] != 0 {
                let factor = v[*p];
                for i in 0..rows {
                    v[i] = field.sub(v[i], field.mul(factor, b[i]));
                }
                for i in 0..n {
                    tag[i] = field.sub(tag[i], field.mul(factor, btag[i]));
                }
            }
        }
        if let Some(p) = v.iter().position(|&x| x != 0) {
            let inv = field.inv(v[p]);
            for x in v.iter_mut() {
                *x = field.mul(*x, inv);
            }
            for x in tag.iter_mut() {
                *x = field.mul(*x, inv);
            }
            reduced.push((v, tag, p));
        } else {
            kernel.push(tag);
        }
    }
    kernel
}

/// Decompose a fiber cone with spread one over k[u], u acting as the class
/// of the reduction generator `a` (already lifted to a y-linear form).
pub fn pid_decompose(
    fiber: &BigradedModule,
    u_elt: &Polynomial,
    stab_hint: usize,
    budget: &Budget,
) -> Result<PIDDecomposition> {
    let field = fiber.ring.field;
    let upto = stab_hint.max(2) + 4;
    let action = fiber_action(fiber, u_elt, upto, budget)?;
    let dims: Vec<usize> = action.bases.iter().map(|b| b.len()).collect();
    // Require stabilization: equal dims and bijective u at the tail.
    let tail_ok = {
        let k = dims.len();
        k >= 3 && dims[k - 1] == dims[k - 2] && dims[k - 2] == dims[k - 3] && {
            let (r1, _, _) = rank_and_rref(&field, &action.maps[k - 2], dims[k - 1]);
            let (r2, _, _) = rank_and_rref(&field, &action.maps[k - 3], dims[k - 2]);
            r1 == dims[k - 1] && r2 == dims[k - 2]
        }
    };
    if !tail_ok {
        return Err(Error::math(
            "fiber cone not visibly finitely generated over k[u] within the window",
        ));
    }
    // Generators: at each degree, standard basis vectors completing the image
    // of the previous slice.
    let mut gens: Vec<(i64, usize)> = Vec::new(); // (degree, basis index at that degree)
    for n in 0..=upto {
        let img: Vec<Vec<u64>> = if n == 0 {
            Vec::new()
        } else {
            action.maps[n - 1].clone()
        };
        let (_, mut span, mut pivots) = rank_and_rref(&field, &img, dims[n]);
        for idx in 0..dims[n] {
            let mut e = vec![0u64; dims[n]];
            e[idx] = 1;
            if !in_span(&field, &span, &pivots, &e) {
                gens.push((n as i64, idx));
                let mut cols: Vec<Vec<u64>> = span.clone();
                cols.push(e);
                let (_, s2, p2) = rank_and_rref(&field, &cols, dims[n]);
                span = s2;
                pivots = p2;
            }
        }
    }
    // Trajectories u^k(gen) per degree.
    let mut traj: Vec<Vec<Vec<u64>>> = Vec::new(); // per gen: vectors at degrees g..upto
    for &(g, idx) in &gens {
        let mut v = vec![0u64; dims[g as usize]];
        v[idx] = 1;
        let mut list = vec![v.clone()];
        for n in g as usize..upto {
            let next_dim = dims[n + 1];
            let mut w = vec![0u64; next_dim];
            for (src, coeff) in list.last().unwrap().iter().enumerate() {
                if *coeff != 0 {
                    for (row, &m) in action.maps[n][src].iter().enumerate() {
                        w[row] = field.add(w[row], field.mul(m, *coeff));
                    }
                }
            }
            list.push(w);
        }
        traj.push(list);
    }
    // Kernel slices: scalar vectors (one coordinate per generator of degree
    // <= n) with Σ c_k u^{n-g_k}(gen_k) = 0.
    let mut kernel_gens: Vec<(i64, Vec<u64>)> = Vec::new(); // (degree, coords per gens order)
    let mut prev_kernel: Vec<Vec<u64>> = Vec::new();
    for n in 0..=upto {
        let active: Vec<usize> = (0..gens.len()).filter(|&k| gens[k].0 <= n as i64).collect();
        let cols: Vec<Vec<u64>> = active
            .iter()
            .map(|&k| traj[k][(n as i64 - gens[k].0) as usize].clone())
            .collect();
        let null = nullspace(&field, &cols, dims[n]);
        // Expand to full coordinates.
        let expand = |v: &Vec<u64>| -> Vec<u64> {
            let mut full = vec![0u64; gens.len()];
            for (pos, &k) in active.iter().enumerate() {
                full[k] = v[pos];
            }
            full
        };
        let full_null: Vec<Vec<u64>> = null.iter().map(expand).collect();
        // New kernel generators: extend the span of the previous kernel.
        let (_, mut span, mut pivots) = rank_and_rref(&field, &prev_kernel, gens.len());
        for v in &full_null {
            if !in_span(&field, &span, &pivots, v) {
                kernel_gens.push((n as i64, v.clone()));
                let mut cols2 = span.clone();
                cols2.push(v.clone());
                let (_, s2, p2) = rank_and_rref(&field, &cols2, gens.len());
                span = s2;
                pivots = p2;
            }
        }
        prev_kernel = full_null;
    }
    // Presentation matrix over k[u]: entry (k, l) = c_k u^{n_l - g_k}.
    #[derive(Clone, Copy, PartialEq)]
    struct Entry {
        coeff: u64,
        deg: i64,
    }
    let mut rows: Vec<i64> = gens.iter().map(|g| g.0).collect();
    let mut mat: Vec<Vec<Option<Entry>>> = rows
        .iter()
        .enumerate()
        .map(|(k, &g)| {
            kernel_gens
                .iter()
                .map(|(n, v)| {
                    if v[k] != 0 {
                        Some(Entry {
                            coeff: v[k],
                            deg: n - g,
                        })
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let mut torsion: Vec<(u32, i64)> = Vec::new();
    loop {
        // Deterministic minimal-degree pivot.
        let mut pivot: Option<(i64, usize, usize)> = None;
        for (r, row) in mat.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if let Some(e) = e {
                    if pivot.map_or(true, |(d, _, _)| e.deg < d) {
                        pivot = Some((e.deg, r, c));
                    }
                }
            }
        }
        let Some((pdeg, pr, pc)) = pivot else { break };
        let pe = mat[pr][pc].unwrap();
        // Clear the pivot row with column ops.
        for c in 0..mat[pr].len() {
            if c == pc {
                continue;
            }
            if let Some(e) = mat[pr][c] {
                let factor = field.div(e.coeff, pe.coeff);
                let shift = e.deg - pdeg;
                for r in 0..mat.len() {
                    if let Some(p) = mat[r][pc] {
                        let sub = Entry {
                            coeff: field.mul(p.coeff, factor),
                            deg: p.deg + shift,
                        };
                        mat[r][c] = match mat[r][c] {
                            None => Some(Entry {
                                coeff: field.neg(sub.coeff),
                                deg: sub.deg,
                            }),
                            Some(cur) => {
                                debug_assert_eq!(cur.deg, sub.deg);
                                let nc = field.sub(cur.coeff, sub.coeff);
                                if nc == 0 {
                                    None
                                } else {
                                    Some(Entry {
                                        coeff: nc,
                                        deg: cur.deg,
                                    })
                                }
                            }
                        };
                    }
                }
            }
        }
        // Pivot column now only intersects the pivot row after row ops; the
        // row ops only touch the pivot column since the row is clean.
        for r in 0..mat.len() {
            if r != pr {
                mat[r][pc] = None;
            }
        }
        // Record: degree-0 pivot cancels a generator with a relation; a
        // positive-degree pivot is a torsion summand.
        if pdeg > 0 {
            torsion.push((pdeg as u32, rows[pr]));
        }
        // Remove the pivot row and column.
        mat.remove(pr);
        rows.remove(pr);
        for row in mat.iter_mut() {
            row.remove(pc);
        }
    }
    let free_shifts: Vec<i64> = rows;
    let mut decomp = PIDDecomposition::from_formulas(free_shifts, torsion);
    decomp.free_shifts.sort();
    decomp.torsion_pairs.sort();
    // Reconstruction invariant: the assembled Hilbert function matches the
    // slice dimensions on the whole computed window.
    for (n, &d) in dims.iter().enumerate() {
        if decomp.hilbert(n as i64) != d {
            return Err(Error::math(format!(
                "PID decomposition Hilbert mismatch at degree {n}: {} vs {}",
                decomp.hilbert(n as i64),
                d
            )));
        }
    }
    Ok(decomp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::make_adic;
    use crate::ideal::IdealHandle;
    use crate::parse::parse_polynomial;
    use crate::scalar::PrimeField;

    #[test]
    fn test_synthetic_formulas() {
        // k[u] ⊕ (k[u]/(u))(-2): b = {0}, (c,d) = (1,2); reg = 2, r = 2.
        let d = PIDDecomposition::from_formulas(vec![0], vec![(1, 2)]);
        assert_eq!(d.reg, 2);
        assert_eq!(d.reduction_number, 2);
        // k[u] alone: reg 0.
        let d2 = PIDDecomposition::from_formulas(vec![0], vec![]);
        assert_eq!(d2.reg, 0);
    }

    #[test]
    fn test_fiber_series_maximal_adic() {
        let r = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap();
        let b = Budget::default();
        let m = IdealHandle::new(
            r.clone(),
            vec![
                parse_polynomial("x", &r).unwrap(),
                parse_polynomial("y", &r).unwrap(),
            ],
        )
        .unwrap();
        let f = make_adic(&m, &b).unwrap();
        let h = hilbert_series_fiber(&f, 2, 10, &b).unwrap();
        assert_eq!(h.numerator, vec![1]);
        assert_eq!(h.mu_sequence[..4], [1, 2, 3, 4]);
    }

    #[test]
    fn test_fiber_series_principal() {
        let r = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap();
        let b = Budget::default();
        let i = IdealHandle::new(r.clone(), vec![parse_polynomial("x", &r).unwrap()]).unwrap();
        let f = make_adic(&i, &b).unwrap();
        let h = hilbert_series_fiber(&f, 1, 10, &b).unwrap();
        assert_eq!(h.numerator, vec![1]);
        assert!(h.mu_sequence.iter().all(|&m| m == 1));
    }

    #[test]
    fn test_fiber_series_semigroup() {
        // (3,4,5)-semigroup ring, m-adic: series (1 + 2x)/(1 - x).
        let b = Budget::default();
        let base =
            RingDescriptor::base(&["a", "b", "c"], &[3, 4, 5], PrimeField::default()).unwrap();
        let q = vec![
            parse_polynomial("b^2 - a*c", &base).unwrap(),
            parse_polynomial("b*c - a^3", &base).unwrap(),
            parse_polynomial("c^2 - a^2*b", &base).unwrap(),
        ];
        let ring = base.with_quotient(q).unwrap();
        let gens = ["a", "b", "c"]
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        let m = IdealHandle::new(ring.clone(), gens).unwrap();
        let f = make_adic(&m, &b).unwrap();
        let h = hilbert_series_fiber(&f, 1, 12, &b).unwrap();
        assert_eq!(h.numerator, vec![1, 2]);
        assert_eq!(h.mu_sequence[..5], [1, 3, 3, 3, 3]);
    }

    #[test]
    fn test_pid_decompose_free_rank_one() {
        // F((x)-adic) = k[y1]: decomposition {0}, no torsion.
        let r = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap();
        let b = Budget::default();
        let i = IdealHandle::new(r.clone(), vec![parse_polynomial("x", &r).unwrap()]).unwrap();
        let f = make_adic(&i, &b).unwrap();
        let ctx = crate::blowup::BlowupContext::new(&f, &b).unwrap();
        let fib = crate::blowup::present_fiber(&ctx, &f, &b).unwrap();
        let u = ctx.lift_to_y(&parse_polynomial("x", &r).unwrap(), &b).unwrap();
        let d = pid_decompose(&fib, &u, 2, &b).unwrap();
        assert_eq!(d.free_shifts, vec![0]);
        assert!(d.torsion_pairs.is_empty());
        assert_eq!(d.reg, 0);
        assert_eq!(d.reduction_number, 0);
    }

    #[test]
    fn test_pid_decompose_semigroup() {
        // The semigroup fiber cone over u = a°: shifts {0, 1, 1}, no torsion,
        // reg = r = 1.
        let b = Budget::default();
        let base =
            RingDescriptor::base(&["a", "b", "c"], &[3, 4, 5], PrimeField::default()).unwrap();
        let q = vec![
            parse_polynomial("b^2 - a*c", &base).unwrap(),
            parse_polynomial("b*c - a^3", &base).unwrap(),
            parse_polynomial("c^2 - a^2*b", &base).unwrap(),
        ];
        let ring = base.with_quotient(q).unwrap();
        let gens: Vec<_> = ["a", "b", "c"]
            .iter()
            .map(|s| parse_polynomial(s, &ring).unwrap())
            .collect();
        let m = IdealHandle::new(ring.clone(), gens).unwrap();
        let f = make_adic(&m, &b).unwrap();
        let ctx = crate::blowup::BlowupContext::new(&f, &b).unwrap();
        let fib = crate::blowup::present_fiber(&ctx, &f, &b).unwrap();
        let u = ctx
            .lift_to_y(&parse_polynomial("a", &ring).unwrap(), &b)
            .unwrap();
        let d = pid_decompose(&fib, &u, 2, &b).unwrap();
        assert_eq!(d.free_shifts, vec![0, 1, 1]);
        assert!(d.torsion_pairs.is_empty());
        assert_eq!(d.reg, 1);
        assert_eq!(d.reduction_number, 1);
    }

    #[test]
    fn test_pid_rejects_big_spread() {
        // F(m-adic) over k[x,y] is k[y1,y2]; u = one linear form cannot make
        // it finitely generated.
        let r = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap();
        let b = Budget::default();
        let m = IdealHandle::new(
            r.clone(),
            vec![
                parse_polynomial("x", &r).unwrap(),
                parse_polynomial("y", &r).unwrap(),
            ],
        )
        .unwrap();
        let f = make_adic(&m, &b).unwrap();
        let ctx = crate::blowup::BlowupContext::new(&f, &b).unwrap();
        let fib = crate::blowup::present_fiber(&ctx, &f, &b).unwrap();
        let u = ctx.lift_to_y(&parse_polynomial("x", &r).unwrap(), &b).unwrap();
        assert!(pid_decompose(&fib, &u, 2, &b).is_err());
    }
}
