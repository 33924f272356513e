//! Newton-polyhedron membership for monomial ideals, by exact rational
//! linear programming (Fourier-Motzkin elimination).
//!
//! A monomial x^v lies in the integral closure of I^n, I monomial with
//! exponent vectors e_1..e_m, iff v ∈ n·conv(e_j) + R_+^d, i.e. iff there
//! are rational λ_j ≥ 0 with Σλ_j = n and Σλ_j e_j ≤ v componentwise.

use crate::error::{Error, Result};

/// Rational with i128 backing; inputs are tiny so this never overflows in
/// practice, and checked ops panic rather than wrap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat {
    num: i128,
    den: i128, // > 0
}

impl Rat {
    pub fn new(num: i128, den: i128) -> Rat {
        assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd(n.unsigned_abs(), d.unsigned_abs()) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        Rat { num: n, den: d }
    }

    pub fn int(n: i128) -> Rat {
        Rat { num: n, den: 1 }
    }

    pub fn is_nonneg(&self) -> bool {
        self.num >= 0
    }

    pub fn add(&self, o: &Rat) -> Rat {
        Rat::new(
            self.num
                .checked_mul(o.den)
                .and_then(|a| a.checked_add(o.num.checked_mul(self.den).unwrap()))
                .unwrap(),
            self.den.checked_mul(o.den).unwrap(),
        )
    }

    pub fn sub(&self, o: &Rat) -> Rat {
        self.add(&Rat {
            num: -o.num,
            den: o.den,
        })
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        Rat::new(
            self.num.checked_mul(o.num).unwrap(),
            self.den.checked_mul(o.den).unwrap(),
        )
    }

    pub fn is_neg(&self) -> bool {
        self.num < 0
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// One inequality c_0 + c_1 λ_1 + .. + c_m λ_m >= 0.
type Ineq = Vec<Rat>;

/// Feasibility of a system of linear inequalities over the rationals by
/// Fourier-Motzkin elimination of all variables.
pub fn fm_feasible(mut system: Vec<Ineq>, nvars: usize) -> bool {
    for var in (1..=nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for ineq in system {
            let c = ineq[var];
            if c.num > 0 {
                pos.push(ineq);
            } else if c.num < 0 {
                neg.push(ineq);
            } else {
                rest.push(ineq);
            }
        }
        // Combine each (positive, negative) pair to cancel the variable.
        for p in &pos {
            for n in &neg {
                let a = p[var];
                let b = n[var]; // negative
                let mut combo = vec![Rat::int(0); var];
                for k in 0..var {
                    // (-b) * p[k] + a * n[k]: nonnegative combination
                    // cancelling the variable.
                    let t1 = p[k].mul(&Rat::new(-b.num, b.den));
                    let t2 = n[k].mul(&a);
                    combo[k] = t1.add(&t2);
                }
                rest.push(combo);
            }
        }
        // Truncate survivors to the remaining variables.
        system = rest
            .into_iter()
            .map(|mut i| {
                i.truncate(var);
                i
            })
            .collect();
    }
    // Only constants remain: feasible iff none is negative.
    system.iter().all(|i| i[0].is_nonneg())
}

/// Is v in n * NewtonPolyhedron(exps)?
pub fn in_scaled_newton_polyhedron(v: &[u64], n: u64, exps: &[Vec<u64>]) -> bool {
    let m = exps.len();
    if m == 0 {
        return false;
    }
    let d = v.len();
    let mut system: Vec<Ineq> = Vec::new();
    // λ_j >= 0
    for j in 0..m {
        let mut row = vec![Rat::int(0); m + 1];
        row[j + 1] = Rat::int(1);
        system.push(row);
    }
    // Σ λ_j = n as two inequalities.
    let mut up = vec![Rat::int(0); m + 1];
    up[0] = Rat::int(n as i128);
    for j in 0..m {
        up[j + 1] = Rat::int(-1);
    }
    system.push(up);
    let mut down = vec![Rat::int(0); m + 1];
    down[0] = Rat::int(-(n as i128));
    for j in 0..m {
        down[j + 1] = Rat::int(1);
    }
    system.push(down);
    // v_i - Σ λ_j e_{j,i} >= 0
    for i in 0..d {
        let mut row = vec![Rat::int(0); m + 1];
        row[0] = Rat::int(v[i] as i128);
        for j in 0..m {
            row[j + 1] = Rat::int(-(exps[j][i] as i128));
        }
        system.push(row);
    }
    fm_feasible(system, m)
}

/// Minimal monomial generators (as exponent vectors) of the integral closure
/// of I^n for a monomial ideal with exponent vectors `exps`. Any minimal
/// generator v of the closure satisfies v_i <= n * max_j e_{j,i}: if some
/// coordinate exceeded the bound, subtracting a unit vector there would stay
/// in the polyhedron, contradicting minimality. So the box search is exact.
pub fn integral_closure_power_gens(exps: &[Vec<u64>], n: u64) -> Result<Vec<Vec<u64>>> {
    if exps.is_empty() {
        return Err(Error::invalid("integral closure of the zero ideal"));
    }
    let d = exps[0].len();
    let mut bound = vec![0u64; d];
    for e in exps {
        for i in 0..d {
            bound[i] = bound[i].max(e[i] * n);
        }
    }
    let total: u64 = bound.iter().map(|b| b + 1).product();
    if total > 2_000_000 {
        return Err(Error::Budget {
            steps: total,
            limit: 2_000_000,
        });
    }
    let mut members: Vec<Vec<u64>> = Vec::new();
    let mut v = vec![0u64; d];
    'outer: loop {
        // Skip points dominated by an already-found member.
        let dominated = members.iter().any(|m| m.iter().zip(&v).all(|(a, b)| a <= b));
        if !dominated && in_scaled_newton_polyhedron(&v, n, exps) {
            members.push(v.clone());
        }
        // Odometer increment within the box.
        let mut i = d;
        while i > 0 {
            i -= 1;
            if v[i] < bound[i] {
                v[i] += 1;
                for k in i + 1..d {
                    v[k] = 0;
                }
                continue 'outer;
            }
        }
        break;
    }
    Ok(minimal_points(members))
}

fn minimal_points(points: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = Vec::new();
    for p in &points {
        if !points
            .iter()
            .any(|q| q != p && q.iter().zip(p).all(|(a, b)| a <= b))
        {
            out.push(p.clone());
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_closure_of_x3_y3() {
        // Ibar((x^3, y^3)) = (x^3, x^2 y, x y^2, y^3): (2,1) = 2/3(3,0) + 1/3(0,3).
        let exps = vec![vec![3, 0], vec![0, 3]];
        assert!(in_scaled_newton_polyhedron(&[2, 1], 1, &exps));
        assert!(!in_scaled_newton_polyhedron(&[1, 1], 1, &exps));
        let gens = integral_closure_power_gens(&exps, 1).unwrap();
        assert_eq!(
            gens,
            vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]
        );
    }

    #[test]
    fn test_closure_of_x2_y3() {
        // xy^2 ∈ Ibar((x^2, y^3)): (1,2) with λ = 1/2, μ = 2/3.
        let exps = vec![vec![2, 0], vec![0, 3]];
        assert!(in_scaled_newton_polyhedron(&[1, 2], 1, &exps));
        assert!(!in_scaled_newton_polyhedron(&[1, 1], 1, &exps));
        let gens = integral_closure_power_gens(&exps, 1).unwrap();
        assert_eq!(gens, vec![vec![0, 3], vec![1, 2], vec![2, 0]]);
    }

    #[test]
    fn test_maximal_ideal_closed() {
        let exps = vec![vec![1, 0], vec![0, 1]];
        for n in 1..5u64 {
            let gens = integral_closure_power_gens(&exps, n).unwrap();
            // (x,y)^n is integrally closed: all degree-n monomials.
            assert_eq!(gens.len(), n as usize + 1);
            assert!(gens.iter().all(|v| v[0] + v[1] == n));
        }
    }
}
