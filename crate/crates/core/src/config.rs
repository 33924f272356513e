//! Job configuration: one TOML file describing the ring, the filtration, the
//! windows and budgets, and the output target.

use crate::engine::Budget;
use crate::error::{Error, Result};
use crate::filtration::{
    make_adic, make_explicit, make_integral_closure_monomial, make_ratliff_rush, GoodFiltration,
};
use crate::harness::Limits;
use crate::ideal::IdealHandle;
use crate::parse::parse_polynomial;
use crate::ring::RingDescriptor;
use crate::scalar::{PrimeField, DEFAULT_PRIME};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobConfig {
    #[serde(default)]
    pub name: String,
    pub ring: RingBlock,
    pub filtration: FiltrationBlock,
    #[serde(default)]
    pub limits: LimitsBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingBlock {
    pub vars: Vec<String>,
    pub weights: Vec<u64>,
    #[serde(default = "default_char")]
    pub char: u64,
    #[serde(default)]
    pub quotient: Vec<String>,
}

fn default_char() -> u64 {
    DEFAULT_PRIME
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiltrationBlock {
    pub kind: String,
    #[serde(default)]
    pub ideal: Vec<String>,
    #[serde(default)]
    pub chain: Vec<Vec<String>>,
    #[serde(default = "default_budget8")]
    pub rr_k_max: usize,
    #[serde(default = "default_budget8")]
    pub ic_n_max: usize,
}

fn default_budget8() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitsBlock {
    /// 0 means automatic (2(n0 + reg estimate) + 4).
    #[serde(default)]
    pub n_check: usize,
    #[serde(default = "default_deg_bound")]
    pub deg_bound: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub reduction_samples: usize,
}

fn default_deg_bound() -> u64 {
    50_000_000
}

fn default_seed() -> u64 {
    42
}

fn default_samples() -> usize {
    5
}

impl Default for LimitsBlock {
    fn default() -> Self {
        LimitsBlock {
            n_check: 0,
            deg_bound: default_deg_bound(),
            seed: default_seed(),
            reduction_samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OutputBlock {
    #[serde(default)]
    pub format: String,
    #[serde(default)]
    pub path: String,
}

impl JobConfig {
    pub fn parse_toml(text: &str) -> Result<JobConfig> {
        toml::from_str(text).map_err(|e| Error::invalid(format!("config parse error: {e}")))
    }

    pub fn build_ring(&self) -> Result<Arc<RingDescriptor>> {
        let field = PrimeField::new(self.ring.char).map_err(Error::invalid)?;
        let names: Vec<&str> = self.ring.vars.iter().map(|s| s.as_str()).collect();
        let base =
            RingDescriptor::base(&names, &self.ring.weights, field).map_err(Error::invalid)?;
        if self.ring.quotient.is_empty() {
            return Ok(base);
        }
        let q: Result<Vec<_>> = self
            .ring
            .quotient
            .iter()
            .map(|s| {
                parse_polynomial(s, &base)
                    .map_err(|e| Error::invalid(format!("quotient generator '{s}': {e}")))
            })
            .collect();
        base.with_quotient(q?).map_err(Error::invalid)
    }

    pub fn build_filtration(&self, budget: &Budget) -> Result<GoodFiltration> {
        let ring = self.build_ring()?;
        let parse_ideal = |gens: &[String]| -> Result<IdealHandle> {
            let ps: Result<Vec<_>> = gens
                .iter()
                .map(|s| {
                    parse_polynomial(s, &ring)
                        .map_err(|e| Error::invalid(format!("generator '{s}': {e}")))
                })
                .collect();
            IdealHandle::new(ring.clone(), ps?)
        };
        match self.filtration.kind.as_str() {
            "adic" => make_adic(&parse_ideal(&self.filtration.ideal)?, budget),
            "ratliff_rush" => make_ratliff_rush(
                &parse_ideal(&self.filtration.ideal)?,
                self.filtration.rr_k_max,
                budget,
            ),
            "integral_closure" | "integral_closure_monomial" => make_integral_closure_monomial(
                &parse_ideal(&self.filtration.ideal)?,
                self.filtration.ic_n_max,
                budget,
            ),
            "explicit" => {
                let chain: Result<Vec<_>> = self
                    .filtration
                    .chain
                    .iter()
                    .map(|gens| parse_ideal(gens))
                    .collect();
                make_explicit(chain?, budget)
            }
            other => Err(Error::invalid(format!("unknown filtration kind '{other}'"))),
        }
    }

    pub fn limits(&self) -> Limits {
        Limits {
            n_check: if self.limits.n_check == 0 {
                None
            } else {
                Some(self.limits.n_check)
            },
            seed: self.limits.seed,
            reduction_samples: self.limits.reduction_samples.max(1),
        }
    }

    pub fn budget(&self) -> Budget {
        Budget::new(self.limits.deg_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_parse_minimal_config() {
        let cfg = JobConfig::parse_toml(
            r#"
            name = "m-adic"
            [ring]
            vars = ["x", "y"]
            weights = [1, 1]
            [filtration]
            kind = "adic"
            ideal = ["x", "y"]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.name, "m-adic");
        assert_eq!(cfg.ring.char, DEFAULT_PRIME);
        let b = Budget::default();
        let f = cfg.build_filtration(&b).unwrap();
        assert_eq!(f.n0, 1);
    }

    #[test]
    fn test_bad_variable_rejected() {
        let cfg = JobConfig::parse_toml(
            r#"
            [ring]
            vars = ["x"]
            weights = [1]
            [filtration]
            kind = "adic"
            ideal = ["x + w"]
            "#,
        )
        .unwrap();
        let b = Budget::default();
        let err = cfg.build_filtration(&b).unwrap_err();
        assert!(format!("{err}").contains("undeclared"));
    }

    #[test]
    fn test_explicit_chain_config() {
        let cfg = JobConfig::parse_toml(
            r#"
            [ring]
            vars = ["x", "y"]
            weights = [1, 1]
            [filtration]
            kind = "explicit"
            chain = [["x^2", "y^2"], ["x^4", "x^3*y", "x^2*y^2", "x*y^3", "y^4"], ["x^6", "x^5*y", "x^4*y^2", "x^3*y^3", "x^2*y^4", "x*y^5", "y^6"]]
            "#,
        )
        .unwrap();
        let b = Budget::default();
        // (x^2,y^2) followed by m^4, m^6: a good non-adic chain with n0 = 2.
        let f = cfg.build_filtration(&b).unwrap();
        assert_eq!(f.n0, 2);
    }
}
