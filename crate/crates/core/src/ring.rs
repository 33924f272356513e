//! The ambient ring descriptor.
//!
//! The base ring A = k[x_1..x_d]/Q is weighted-graded and treated as local at
//! (x): units are exactly the nonzero constants. Blowup constructions extend
//! the descriptor with a y-block (one variable per minimal generator of I_1,
//! each of t-degree 1) and optionally the auxiliary Rees variable t. The
//! y-variables carry the x-weight of the generator they present, so that all
//! derived data stays bihomogeneous and graded Nakayama applies.

use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::scalar::PrimeField;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarBlock {
    X,
    Y,
    T,
    Aux,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    /// Weight in the x-grading. Positive for x-variables; for y-variables
    /// this is the weight of the presented generator (0 in user-facing rings).
    pub weight: u64,
    /// Degree in the t-grading: 0 for x-variables, 1 for y-variables and t.
    pub tdeg: u64,
    pub block: VarBlock,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDescriptor {
    pub vars: Vec<VarInfo>,
    pub field: PrimeField,
    /// Generators of the defining ideal Q of the base ring, in x-variables
    /// only, each x-weighted-homogeneous.
    pub quotient_gens: Vec<Polynomial>,
}

impl RingDescriptor {
    /// Base ring k[x]/Q. Quotient generators are attached afterwards via
    /// [`RingDescriptor::with_quotient`] because they are parsed over the
    /// bare ring.
    pub fn base(names: &[&str], weights: &[u64], field: PrimeField) -> Result<Arc<Self>, String> {
        if names.len() != weights.len() {
            return Err("variable and weight counts differ".into());
        }
        let mut vars = Vec::new();
        for (n, &w) in names.iter().zip(weights) {
            if w == 0 {
                return Err(format!("variable {n} has weight 0; weights must be positive"));
            }
            if names.iter().filter(|m| *m == n).count() > 1 {
                return Err(format!("duplicate variable name {n}"));
            }
            vars.push(VarInfo {
                name: n.to_string(),
                weight: w,
                tdeg: 0,
                block: VarBlock::X,
            });
        }
        Ok(Arc::new(RingDescriptor {
            vars,
            field,
            quotient_gens: Vec::new(),
        }))
    }

    /// Attach quotient generators (must be x-weighted-homogeneous and
    /// nonconstant).
    pub fn with_quotient(self: &Arc<Self>, gens: Vec<Polynomial>) -> Result<Arc<Self>, String> {
        for g in &gens {
            if g.is_zero() {
                return Err("zero quotient generator".into());
            }
            if g.x_weight(self).is_none() {
                return Err(format!(
                    "quotient generator {} is not x-weighted-homogeneous",
                    g.display(self)
                ));
            }
            if g.terms.iter().any(|t| t.0.is_one()) {
                return Err("quotient generator has a constant term; the quotient would not be graded-local".into());
            }
        }
        let mut r = (**self).clone();
        r.quotient_gens = gens;
        Ok(Arc::new(r))
    }

    /// Extend with a y-block; `gens_weights[i]` is the x-weight of the
    /// presented generator. Names are y1..ys, suffixed on collision.
    pub fn with_y_block(self: &Arc<Self>, gens_weights: &[u64]) -> Arc<Self> {
        let mut r = (**self).clone();
        for (i, &w) in gens_weights.iter().enumerate() {
            let mut name = format!("y{}", i + 1);
            while r.vars.iter().any(|v| v.name == name) {
                name.push('_');
            }
            r.vars.push(VarInfo {
                name,
                weight: w,
                tdeg: 1,
                block: VarBlock::Y,
            });
        }
        // Quotient generators live in the x-variables; pad them.
        let nv = r.vars.len();
        r.quotient_gens = r.quotient_gens.iter().map(|g| g.pad(nv)).collect();
        Arc::new(r)
    }

    /// Extend with the Rees variable t (x-weight 0, t-degree 1).
    pub fn with_t(self: &Arc<Self>) -> Arc<Self> {
        let mut r = (**self).clone();
        let mut name = "t".to_string();
        while r.vars.iter().any(|v| v.name == name) {
            name.push('_');
        }
        r.vars.push(VarInfo {
            name,
            weight: 0,
            tdeg: 1,
            block: VarBlock::T,
        });
        let nv = r.vars.len();
        r.quotient_gens = r.quotient_gens.iter().map(|g| g.pad(nv)).collect();
        Arc::new(r)
    }

    /// Extend with one auxiliary variable (for intersections).
    pub fn with_aux(self: &Arc<Self>) -> Arc<Self> {
        let mut r = (**self).clone();
        let mut name = "u@".to_string();
        while r.vars.iter().any(|v| v.name == name) {
            name.push('@');
        }
        r.vars.push(VarInfo {
            name,
            weight: 0,
            tdeg: 0,
            block: VarBlock::Aux,
        });
        let nv = r.vars.len();
        r.quotient_gens = r.quotient_gens.iter().map(|g| g.pad(nv)).collect();
        Arc::new(r)
    }

    /// Drop trailing variables down to `nvars`, checking nothing refers to
    /// them is the caller's job (polynomials are restricted separately).
    pub fn truncated(self: &Arc<Self>, nvars: usize) -> Arc<Self> {
        let mut r = (**self).clone();
        assert!(nvars <= r.vars.len());
        r.vars.truncate(nvars);
        r.quotient_gens = r
            .quotient_gens
            .iter()
            .map(|g| {
                g.restrict(nvars)
                    .expect("quotient generator uses a dropped variable")
            })
            .collect();
        Arc::new(r)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn var_mono(&self, idx: usize) -> Monomial {
        Monomial::var(self.nvars(), idx)
    }

    pub fn weights(&self) -> Vec<u64> {
        self.vars.iter().map(|v| v.weight).collect()
    }

    pub fn tdegs(&self) -> Vec<u64> {
        self.vars.iter().map(|v| v.tdeg).collect()
    }

    /// Mask of the variables in a given block.
    pub fn block_mask(&self, block: VarBlock) -> Vec<bool> {
        self.vars.iter().map(|v| v.block == block).collect()
    }

    pub fn indices(&self, block: VarBlock) -> Vec<usize> {
        (0..self.nvars())
            .filter(|&i| self.vars[i].block == block)
            .collect()
    }

    pub fn x_weight_of(&self, m: &Monomial) -> u64 {
        m.weighted_degree(&self.weights())
    }

    pub fn t_degree_of(&self, m: &Monomial) -> u64 {
        m.weighted_degree(&self.tdegs())
    }

    /// Same ring up to structural equality.
    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.vars.iter().map(|v| v.name.as_str()).collect();
        write!(f, "F_{}[{}]", self.field.characteristic(), names.join(","))?;
        if !self.quotient_gens.is_empty() {
            let q: Vec<_> = self
                .quotient_gens
                .iter()
                .map(|g| g.display(self))
                .collect();
            write!(f, "/({})", q.join(", "))?;
        }
        Ok(())
    }
}
