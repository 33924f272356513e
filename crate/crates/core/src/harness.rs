//! Executable checks for the structural statements relating the regularity
//! and a-invariants of R(F), G(F), F(F), mG(F) and R(mF), with hypothesis
//! gating, plus the per-filtration invariant report.
//!
//! A FAIL is never asserted away: the statements are theorems, so a FAIL
//! indicates an artifact bug or a genuine discrepancy and the check carries
//! both computed sides as the debugging witness. NOT_APPLICABLE always names
//! the violated hypothesis.

use crate::blowup::BigradedModule;
use crate::engine::Budget;
use crate::error::{Error, Result};
use crate::filtration::{derive_m_filtration, GoodFiltration};
use crate::hilbert::{hilbert_series_fiber, pid_decompose, FiberHilbert};
use crate::homology::{
    a_invariants, depth_dim, grade_of_y_block, grade_on, is_regular_element, minimal_resolution,
    quotient_by_elements, regularity, AVector, ExtInt, FreeResolution,
};
use crate::ideal::{Dim, IdealHandle};
use crate::reduction::{
    minimal_reduction, sampled_reduction_number, ReductionCertificate, SampledReductionNumber,
};
use crate::sequences::{
    build_exact_sequences, build_presentations, verify_presentations, Presentations,
};
use serde::Serialize;
use serde_json::json;

pub const ALL_CHECK_IDS: [&str; 16] = [
    "L3.1", "T3.2.i", "T3.2.ii", "T3.2.iii", "T3.2.iv", "C3.3", "C3.4", "L4.1", "L4.2", "T4.3",
    "C4.4", "L4.5", "T4.6", "P4.7", "P4.8", "P4.9",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "NOT_APPLICABLE")]
    NotApplicable,
    #[serde(rename = "BUDGET")]
    Budget,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremCheck {
    pub id: String,
    pub status: Status,
    pub hypotheses: Vec<(String, String)>,
    pub lhs: serde_json::Value,
    pub rhs: serde_json::Value,
    pub window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TheoremCheck {
    fn new(id: &str, window: usize) -> Self {
        TheoremCheck {
            id: id.to_string(),
            status: Status::Pass,
            hypotheses: Vec::new(),
            lhs: serde_json::Value::Null,
            rhs: serde_json::Value::Null,
            window,
            note: None,
        }
    }

    fn hyp(mut self, name: &str, value: impl ToString) -> Self {
        self.hypotheses.push((name.to_string(), value.to_string()));
        self
    }

    fn gate(mut self, name: &str, ok: bool) -> Self {
        self.hypotheses.push((name.to_string(), ok.to_string()));
        if !ok && self.status == Status::Pass {
            self.status = Status::NotApplicable;
            self.note = Some(format!("hypothesis violated: {name}"));
        }
        self
    }

    fn verdict(mut self, ok: bool) -> Self {
        if self.status == Status::Pass && !ok {
            self.status = Status::Fail;
        }
        self
    }
}

/// Per-module homological data.
pub struct ModuleData {
    pub module: BigradedModule,
    pub resolution: FreeResolution,
    pub avec: AVector,
    pub reg: ExtInt,
    pub depth: ExtInt,
    pub dim: ExtInt,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleInvariants {
    pub label: String,
    pub generators: usize,
    pub betti: Vec<usize>,
    pub a_invariants: Vec<ExtInt>,
    pub scan_floor: i64,
    pub reg: ExtInt,
    pub depth: ExtInt,
    pub dim: ExtInt,
}

impl ModuleData {
    fn build(
        module: BigradedModule,
        spread_cap: Option<usize>,
        budget: &Budget,
    ) -> Result<ModuleData> {
        let resolution = minimal_resolution(&module, budget)?;
        let avec = a_invariants(&module, &resolution, spread_cap, budget)?;
        let reg = if module.is_zero() {
            ExtInt::NegInf
        } else {
            regularity(&module, &resolution, &avec, budget)?
        };
        let (depth, dim) = depth_dim(&module, &resolution, budget)?;
        Ok(ModuleData {
            module,
            resolution,
            avec,
            reg,
            depth,
            dim,
        })
    }

    fn invariants(&self) -> ModuleInvariants {
        ModuleInvariants {
            label: self.module.label.clone(),
            generators: self.module.rank(),
            betti: self.resolution.betti(),
            a_invariants: self.avec.values.clone(),
            scan_floor: self.avec.scan_floor,
            reg: self.reg,
            depth: self.depth,
            dim: self.dim,
        }
    }
}

/// Everything computed for one filtration.
pub struct Pipeline {
    pub f: GoodFiltration,
    pub mf: Option<GoodFiltration>,
    pub mf_error: Option<String>,
    pub pres: Presentations,
    pub spread: usize,
    pub cert: ReductionCertificate,
    pub sampled_r: SampledReductionNumber,
    pub rees: ModuleData,
    pub graded: ModuleData,
    pub fiber: ModuleData,
    pub base: ModuleData,
    pub mg: Option<ModuleData>,
    pub rees_mf: Option<ModuleData>,
    pub dim_a: ExtInt,
    pub grade_i1: ExtInt,
    pub grade_gplus: ExtInt,
    pub hilbert_fiber: FiberHilbert,
    pub n_check: usize,
    pub d_check: u64,
    pub sequences_checked: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub ring: String,
    pub kind: String,
    pub i1_generators: Vec<String>,
    pub n0: usize,
    pub f_le_mf: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_le_mf_violation: Option<String>,
    pub analytic_spread: usize,
    pub reduction: ReductionCertificate,
    pub sampled_reduction_number: usize,
    pub reduction_samples: usize,
    pub dim_a: ExtInt,
    pub grade_i1: ExtInt,
    pub grade_g_plus: ExtInt,
    pub hilbert_numerator_fiber: Vec<i64>,
    pub mu_sequence: Vec<usize>,
    pub modules: Vec<ModuleInvariants>,
    pub n_check: usize,
    pub d_check: u64,
    pub sequences_checked: usize,
}

/// Window and sampling knobs for a pipeline run.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub n_check: Option<usize>,
    pub seed: u64,
    pub reduction_samples: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            n_check: None,
            seed: 42,
            reduction_samples: 5,
        }
    }
}

pub fn run_pipeline(f: &GoodFiltration, limits: &Limits, budget: &Budget) -> Result<Pipeline> {
    let (mf, mf_error) = match derive_m_filtration(f, budget) {
        Ok(mf) => (Some(mf), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let cert = minimal_reduction(f, limits.seed, budget)?;
    let spread = cert.spread;
    let sampled_r = sampled_reduction_number(f, limits.seed, limits.reduction_samples, budget)?;
    let pres = build_presentations(f, mf.as_ref(), budget)?;
    let cap = Some(spread);
    let rees = ModuleData::build(pres.rees.clone(), cap, budget)?;
    let graded = ModuleData::build(pres.graded.clone(), cap, budget)?;
    let fiber = ModuleData::build(pres.fiber.clone(), cap, budget)?;
    let base = ModuleData::build(pres.base.clone(), None, budget)?;
    let mg = match &pres.mg {
        Some(m) => Some(ModuleData::build(m.clone(), cap, budget)?),
        None => None,
    };
    let rees_mf = match &pres.rees_mf {
        Some(m) => Some(ModuleData::build(m.clone(), cap, budget)?),
        None => None,
    };
    // Window: 2(n0 + reg estimate) + 4 unless overridden.
    let reg_est = [rees.reg, graded.reg, fiber.reg]
        .iter()
        .filter_map(|r| r.finite())
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let n_check = limits.n_check.unwrap_or(2 * (f.n0 + reg_est) + 4);
    let wmax = pres
        .ctx
        .y_weights()
        .iter()
        .copied()
        .max()
        .unwrap_or(1)
        .max(1);
    let d_check = wmax * (n_check as u64 + 1) + 2;
    verify_presentations(&pres, f, mf.as_ref(), n_check, d_check, budget)?;
    let seqs = build_exact_sequences(&pres, budget)?;
    for s in &seqs {
        if !s.composition_is_zero(budget)? {
            return Err(Error::math(format!(
                "composition not zero in {} (internal bug trap)",
                s.id.label()
            )));
        }
        if !s.hilbert_additivity(n_check, d_check, budget)? {
            return Err(Error::math(format!(
                "Hilbert additivity fails in {} (internal bug trap)",
                s.id.label()
            )));
        }
    }
    let dim_a = match IdealHandle::zero(f.ring.clone()).krull_dim(budget)? {
        Dim::Finite(d) => ExtInt::Int(d as i64),
        Dim::NegInf => ExtInt::NegInf,
    };
    let grade_i1 = grade_on(f.i1(), &base.module, budget)?;
    let grade_gplus = match grade_of_y_block(&graded.module, &graded.resolution, budget)? {
        usize::MAX => ExtInt::PosInf,
        g => ExtInt::Int(g as i64),
    };
    let hilbert_fiber = hilbert_series_fiber(f, spread, n_check.max(12), budget)?;
    Ok(Pipeline {
        f: f.clone(),
        mf,
        mf_error,
        pres,
        spread,
        cert,
        sampled_r,
        rees,
        graded,
        fiber,
        base,
        mg,
        rees_mf,
        dim_a,
        grade_i1,
        grade_gplus,
        hilbert_fiber,
        n_check,
        d_check,
        sequences_checked: seqs.len(),
    })
}

impl Pipeline {
    pub fn invariant_report(&self, limits: &Limits) -> InvariantReport {
        let mut modules = vec![
            self.rees.invariants(),
            self.graded.invariants(),
            self.fiber.invariants(),
        ];
        if let Some(mg) = &self.mg {
            modules.push(mg.invariants());
        }
        if let Some(rmf) = &self.rees_mf {
            modules.push(rmf.invariants());
        }
        InvariantReport {
            ring: self.f.ring.to_string(),
            kind: self.f.kind.as_str().to_string(),
            i1_generators: self
                .f
                .i1()
                .gens
                .iter()
                .map(|g| g.display(&self.f.ring))
                .collect(),
            n0: self.f.n0,
            f_le_mf: self.mf.is_some(),
            f_le_mf_violation: self.mf_error.clone(),
            analytic_spread: self.spread,
            reduction: self.cert.clone(),
            sampled_reduction_number: self.sampled_r.value,
            reduction_samples: limits.reduction_samples,
            dim_a: self.dim_a,
            grade_i1: self.grade_i1,
            grade_g_plus: self.grade_gplus,
            hilbert_numerator_fiber: self.hilbert_fiber.numerator.clone(),
            mu_sequence: self.hilbert_fiber.mu_sequence.clone(),
            modules,
            n_check: self.n_check,
            d_check: self.d_check,
            sequences_checked: self.sequences_checked,
        }
    }

    fn a_r(&self, i: usize) -> ExtInt {
        self.rees.avec.a(i)
    }

    fn a_g(&self, i: usize) -> ExtInt {
        self.graded.avec.a(i)
    }

    fn s(&self) -> usize {
        self.pres.ctx.s()
    }

    /// Standing hypotheses of the fiber-cone section: positive dimension,
    /// infinite-residue-field surrogate, positive spread, and F <= mF.
    fn section4_gates(&self, c: TheoremCheck) -> TheoremCheck {
        let d_pos = matches!(self.dim_a, ExtInt::Int(d) if d > 0);
        let p_big = self.f.ring.field.characteristic() >= 101;
        c.gate("dim A > 0", d_pos)
            .gate("residue field large (p >= 101)", p_big)
            .gate("analytic spread > 0", self.spread > 0)
            .gate("F <= mF (I_{n+1} inside m I_n)", self.mf.is_some())
    }

    pub fn run_check(&self, id: &str, budget: &Budget) -> Result<TheoremCheck> {
        match id {
            "L3.1" => Ok(self.check_l31()),
            "T3.2.i" => Ok(self.check_t32i()),
            "T3.2.ii" => Ok(self.check_t32ii()),
            "T3.2.iii" => self.check_t32iii(budget),
            "T3.2.iv" => self.check_t32iv(budget),
            "C3.3" => self.check_c33(budget),
            "C3.4" => Ok(self.check_c34()),
            "L4.1" => Ok(self.check_l41()),
            "L4.2" => self.check_l42(budget),
            "T4.3" => Ok(self.check_t43()),
            "C4.4" => self.check_c44(budget),
            "L4.5" => self.check_l45(budget),
            "T4.6" => Ok(self.check_t46()),
            "P4.7" => Ok(self.check_p47()),
            "P4.8" => self.check_p48(budget),
            "P4.9" => Ok(self.check_p49()),
            _ => Err(Error::invalid(format!("unknown theorem id {id}"))),
        }
    }

    /// Vanishing of H^i(R)_n for n >= max{0, a_i(G)+1} (i = 0, 1) and for
    /// n >= a_i(G)+1 (i >= 2), rephrased on top degrees.
    fn check_l31(&self) -> TheoremCheck {
        let s = self.s();
        let mut ok = true;
        for i in 0..=s {
            let ar = self.a_r(i);
            let ag = self.a_g(i);
            let bound = if i <= 1 {
                std::cmp::max(ExtInt::Int(-1), ag)
            } else {
                ag
            };
            if ar > bound {
                ok = false;
            }
        }
        let mut c = TheoremCheck::new("L3.1", self.n_check);
        c.lhs = json!(self.rees.avec.values);
        c.rhs = json!(self.graded.avec.values);
        c.verdict(ok)
    }

    fn check_t32i(&self) -> TheoremCheck {
        let s = self.s();
        let ok = (0..=s)
            .filter(|&i| i != 1)
            .all(|i| self.a_r(i) <= self.a_g(i));
        let mut c = TheoremCheck::new("T3.2.i", self.n_check);
        c.lhs = json!(self.rees.avec.values);
        c.rhs = json!(self.graded.avec.values);
        c.verdict(ok)
    }

    fn check_t32ii(&self) -> TheoremCheck {
        let s = self.s();
        let mut ok = true;
        let mut applicable = 0;
        for i in (0..=s).filter(|&i| i != 1) {
            let next = if i + 1 <= s { self.a_g(i + 1) } else { ExtInt::NegInf };
            if self.a_g(i) >= next && matches!(self.a_g(i), ExtInt::Int(_)) {
                applicable += 1;
                if self.a_r(i) != self.a_g(i) {
                    ok = false;
                }
            }
        }
        let mut c = TheoremCheck::new("T3.2.ii", self.n_check)
            .hyp("indices with a_i(G) >= a_{i+1}(G)", applicable);
        c.lhs = json!(self.rees.avec.values);
        c.rhs = json!(self.graded.avec.values);
        c.verdict(ok)
    }

    fn check_t32iii(&self, budget: &Budget) -> Result<TheoremCheck> {
        let h1_nonzero = matches!(self.a_g(1), ExtInt::Int(_));
        let nilp = self.f.i1().contained_in_nilradical(budget)?;
        let mut c = TheoremCheck::new("T3.2.iii", self.n_check)
            .hyp("H^1(G) != 0", h1_nonzero)
            .hyp("I_1 in sqrt(0)", nilp);
        if !h1_nonzero && !nilp {
            c.status = Status::NotApplicable;
            c.note = Some("hypothesis violated: H^1(G) != 0 or I_1 in sqrt(0)".into());
            return Ok(c);
        }
        // (i) and (ii) at i = 1.
        let mut ok = self.a_r(1) <= self.a_g(1);
        let next = if self.s() >= 2 { self.a_g(2) } else { ExtInt::NegInf };
        if self.a_g(1) >= next && matches!(self.a_g(1), ExtInt::Int(_)) && self.a_r(1) != self.a_g(1)
        {
            ok = false;
        }
        c.lhs = json!(self.a_r(1));
        c.rhs = json!(self.a_g(1));
        Ok(c.verdict(ok))
    }

    fn check_t32iv(&self, budget: &Budget) -> Result<TheoremCheck> {
        let h1_zero = !matches!(self.a_g(1), ExtInt::Int(_));
        let nilp = self.f.i1().contained_in_nilradical(budget)?;
        let c = TheoremCheck::new("T3.2.iv", self.n_check)
            .gate("H^1(G) = 0", h1_zero)
            .gate("I_1 not in sqrt(0)", !nilp);
        if c.status != Status::Pass {
            return Ok(c);
        }
        let mut c = c;
        c.lhs = json!(self.a_r(1));
        c.rhs = json!(-1);
        Ok(c.verdict(self.a_r(1) == ExtInt::Int(-1)))
    }

    fn check_c33(&self, budget: &Budget) -> Result<TheoremCheck> {
        let top_g = self.graded.avec.top_index();
        let top_r = self.rees.avec.top_index();
        let mut c = TheoremCheck::new("C3.3", self.n_check);
        let Some(lg) = top_g else {
            c.status = Status::NotApplicable;
            c.note = Some("no nonvanishing cohomology of G detected".into());
            return Ok(c);
        };
        let mut ok = self.a_r(lg) == self.a_g(lg);
        let nilp = self.f.i1().contained_in_nilradical(budget)?;
        let gate2 = nilp || lg >= 1;
        if gate2 && top_r != Some(lg) {
            ok = false;
        }
        c.lhs = json!({ "top_index_G": lg, "a_top_G": self.a_g(lg) });
        c.rhs = json!({ "top_index_R": top_r, "a_top_R": self.a_r(lg) });
        c = c.hyp("(ii) gated by I_1 in sqrt(0) or top >= 1", gate2);
        Ok(c.verdict(ok))
    }

    fn check_c34(&self) -> TheoremCheck {
        let mut c = TheoremCheck::new("C3.4", self.n_check);
        c.lhs = json!(self.rees.reg);
        c.rhs = json!(self.graded.reg);
        c.verdict(self.rees.reg == self.graded.reg)
    }

    fn check_l41(&self) -> TheoremCheck {
        let c = self.section4_gates(TheoremCheck::new("L4.1", self.n_check));
        if c.status != Status::Pass {
            return c;
        }
        let rmf = self.rees_mf.as_ref().expect("mf exists when gated");
        let l = self.spread;
        let lhs = rmf.avec.a(l).plus(-1);
        let rhs = self.a_r(l);
        let mut c = c;
        c.lhs = json!(lhs);
        c.rhs = json!(rhs);
        c.verdict(lhs <= rhs)
    }

    fn check_l42(&self, budget: &Budget) -> Result<TheoremCheck> {
        let c = self
            .section4_gates(TheoremCheck::new("L4.2", self.n_check))
            .gate("analytic spread = 1", self.spread == 1)
            .gate("grade I_1 = 1", self.grade_i1 == ExtInt::Int(1));
        if c.status != Status::Pass {
            return Ok(c);
        }
        // Three routes: direct regularity of the fiber cone, the reduction
        // number of the certificate, and the PID decomposition's pair.
        let a = self
            .cert
            .ideal
            .gens
            .first()
            .cloned()
            .ok_or_else(|| Error::math("empty reduction certificate"))?;
        let u = self.pres.ctx.lift_to_y(&a, budget)?;
        let stab = self.f.n0 + self.cert.r_j + 2;
        let pid = pid_decompose(&self.fiber.module, &u, stab, budget)?;
        let reg_f = self.fiber.reg;
        let ok = reg_f == ExtInt::Int(self.cert.r_j as i64)
            && pid.reg == self.cert.r_j as i64
            && pid.reduction_number == self.cert.r_j as i64
            && reg_f == ExtInt::Int(pid.reg);
        let mut c = c;
        c.lhs = json!({ "reg_F_duality": reg_f, "reg_F_pid": pid.reg });
        c.rhs = json!({ "r_J": self.cert.r_j, "r_J_pid": pid.reduction_number });
        c.note = Some(format!(
            "pid free shifts {:?}, torsion {:?}",
            pid.free_shifts, pid.torsion_pairs
        ));
        Ok(c.verdict(ok))
    }

    fn check_t43(&self) -> TheoremCheck {
        let c = self
            .section4_gates(TheoremCheck::new("T4.3", self.n_check))
            .gate("analytic spread = 1", self.spread == 1);
        if c.status != Status::Pass {
            return c;
        }
        let mut ok = self.fiber.reg <= self.graded.reg;
        let equality_gate = self.grade_i1 == ExtInt::Int(1);
        if equality_gate {
            ok = ok
                && self.fiber.reg == self.graded.reg
                && self.fiber.reg == ExtInt::Int(self.sampled_r.value as i64);
        }
        let mut c = c.hyp("grade I_1 = 1 (equality branch)", equality_gate);
        c.lhs = json!(self.fiber.reg);
        c.rhs = json!({ "reg_G": self.graded.reg, "sampled_r": self.sampled_r.value });
        c.note = Some("equality with r uses the sampled minimum".into());
        c.verdict(ok)
    }

    fn check_c44(&self, budget: &Budget) -> Result<TheoremCheck> {
        // A Cohen-Macaulay, F equimultiple (s(I_1) = ht I_1), spread 1.
        let cm = match (self.base.depth, self.base.dim) {
            (ExtInt::Int(a), ExtInt::Int(b)) => a == b,
            _ => false,
        };
        let ht = match (self.dim_a, self.f.i1().krull_dim(budget)?) {
            (ExtInt::Int(d), Dim::Finite(q)) => Some(d - q as i64),
            _ => None,
        };
        let equimultiple = ht == Some(self.spread as i64);
        let c = self
            .section4_gates(TheoremCheck::new("C4.4", self.n_check))
            .gate("A Cohen-Macaulay", cm)
            .gate("equimultiple (s(I_1) = ht I_1)", equimultiple)
            .gate("analytic spread = 1", self.spread == 1);
        if c.status != Status::Pass {
            return Ok(c);
        }
        let ok = self.fiber.reg == self.graded.reg
            && self.fiber.reg == ExtInt::Int(self.sampled_r.value as i64);
        let mut c = c;
        c.lhs = json!(self.fiber.reg);
        c.rhs = json!({ "reg_G": self.graded.reg, "sampled_r": self.sampled_r.value });
        c.note = Some("equality with r uses the sampled minimum".into());
        Ok(c.verdict(ok))
    }

    fn check_l45(&self, budget: &Budget) -> Result<TheoremCheck> {
        let c = self.section4_gates(TheoremCheck::new("L4.5", self.n_check));
        if c.status != Status::Pass {
            return Ok(c);
        }
        // Find a minimal generator of I_1 whose initial form is regular on G.
        let mut chosen: Option<(crate::poly::Polynomial, crate::poly::Polynomial)> = None;
        for a in &self.pres.ctx.f_gens {
            let u = self.pres.ctx.lift_to_y(a, budget)?;
            if is_regular_element(&u, &self.graded.module, budget)? {
                chosen = Some((a.clone(), u));
                break;
            }
        }
        let c = c.gate("some a in I_1 with a* regular on G", chosen.is_some());
        if c.status != Status::Pass {
            return Ok(c);
        }
        let (a, u) = chosen.unwrap();
        // Left side: F(F)/a°F(F).
        let lhs_mod = quotient_by_elements(&self.fiber.module, &[u]);
        // Right side: the quotient filtration F/(a) in A/(a).
        let qring = self
            .f
            .ring
            .with_quotient({
                let mut q = self.f.ring.quotient_gens.clone();
                q.push(a.clone());
                q
            })
            .map_err(Error::invalid)?;
        let pre = self.f.prefix(self.n_check + 1, budget)?;
        let lhs_table = lhs_mod.hilbert_table(self.n_check, self.d_check, budget)?;
        let mut lhs_dims = Vec::new();
        let mut rhs_dims = Vec::new();
        for n in 0..=self.n_check {
            lhs_dims.push(lhs_table[n].iter().sum::<usize>());
            let image = IdealHandle::new_unchecked(qring.clone(), pre[n].gens.clone());
            rhs_dims.push(image.min_generators(budget)?);
        }
        let ok = lhs_dims == rhs_dims;
        let mut c = c.hyp("chosen a", a.display(&self.f.ring));
        c.lhs = json!(lhs_dims);
        c.rhs = json!(rhs_dims);
        Ok(c.verdict(ok))
    }

    fn check_t46(&self) -> TheoremCheck {
        let grade_ok = self.grade_i1 == ExtInt::Int(self.spread as i64);
        let gplus_ok = match self.grade_gplus {
            ExtInt::Int(g) => g >= self.spread as i64 - 1,
            ExtInt::PosInf => true,
            ExtInt::NegInf => false,
        };
        let c = self
            .section4_gates(TheoremCheck::new("T4.6", self.n_check))
            .gate("grade I_1 = spread", grade_ok)
            .gate("grade G_+ >= spread - 1", gplus_ok);
        if c.status != Status::Pass {
            return c;
        }
        let mut ok = self.fiber.reg >= self.graded.reg;
        let depth_gate = match self.fiber.depth {
            ExtInt::Int(d) => d >= self.spread as i64 - 1,
            ExtInt::PosInf => true,
            ExtInt::NegInf => false,
        };
        if depth_gate {
            ok = ok && self.fiber.reg == self.graded.reg;
        }
        let mut c = c.hyp("depth F >= spread - 1 (equality branch)", depth_gate);
        c.lhs = json!(self.fiber.reg);
        c.rhs = json!(self.graded.reg);
        c.verdict(ok)
    }

    fn check_p47(&self) -> TheoremCheck {
        let c = self.section4_gates(TheoremCheck::new("P4.7", self.n_check));
        if c.status != Status::Pass {
            return c;
        }
        let rmf = self.rees_mf.as_ref().unwrap();
        let antecedent = rmf.reg <= self.rees.reg;
        let c = c.gate("reg R(mF) <= reg R(F)", antecedent);
        if c.status != Status::Pass {
            let mut c = c;
            c.lhs = json!(rmf.reg);
            c.rhs = json!(self.rees.reg);
            return c;
        }
        let mut c = c;
        c.lhs = json!(self.fiber.reg);
        c.rhs = json!(self.graded.reg);
        c.verdict(self.fiber.reg == self.graded.reg)
    }

    fn check_p48(&self, budget: &Budget) -> Result<TheoremCheck> {
        // Hypotheses: grade I_1 > 0 and I_n = m I_{n-1} for large n, detected
        // on the window n0 <= n <= n0 + 2.
        let grade_pos = matches!(self.grade_i1, ExtInt::Int(g) if g > 0)
            || self.grade_i1 == ExtInt::PosInf;
        let mm = self.f.maximal_ideal();
        let pre = self.f.prefix(self.f.n0 + 3, budget)?;
        let mut tail = true;
        for n in self.f.n0..=self.f.n0 + 2 {
            let prod = mm.product(&pre[n - 1], budget)?;
            if !prod.equal(&pre[n], budget)? {
                tail = false;
                break;
            }
        }
        let c = self
            .section4_gates(TheoremCheck::new("P4.8", self.n_check))
            .gate("grade I_1 > 0", grade_pos)
            .gate("I_n = m I_{n-1} for large n", tail);
        if c.status != Status::Pass {
            return Ok(c);
        }
        let mut c = c;
        c.lhs = json!(self.fiber.reg);
        c.rhs = json!(self.graded.reg);
        Ok(c.verdict(self.fiber.reg == self.graded.reg))
    }

    fn check_p49(&self) -> TheoremCheck {
        let c = self.section4_gates(TheoremCheck::new("P4.9", self.n_check));
        if c.status != Status::Pass {
            return c;
        }
        let mg = self.mg.as_ref().unwrap();
        let rmf = self.rees_mf.as_ref().unwrap();
        let nonzero = !mg.module.is_zero();
        let c = c.gate("mG != 0", nonzero);
        if c.status != Status::Pass {
            return c;
        }
        let cm_dim_l = match (mg.depth, mg.dim) {
            (ExtInt::Int(a), ExtInt::Int(b)) => a == b && b == self.spread as i64,
            _ => false,
        };
        let c = c.gate("mG Cohen-Macaulay of dimension = spread", cm_dim_l);
        if c.status != Status::Pass {
            return c;
        }
        let l = self.spread;
        let lhs_a = rmf.avec.a(l).plus(-1);
        let rhs_a = self.a_r(l);
        // (i) always under the hypothesis.
        let mut ok = self.fiber.reg <= self.graded.reg;
        let mut branches = Vec::new();
        if lhs_a < rhs_a {
            branches.push("a_l(R(mF))-1 < a_l(R(F)): reg F = reg R");
            ok = ok && self.fiber.reg == self.rees.reg;
        } else if lhs_a == rhs_a {
            branches.push("a_l(R(mF))-1 = a_l(R(F)): reg mG <= reg R and reg F <= reg R");
            ok = ok && mg.reg <= self.rees.reg && self.fiber.reg <= self.rees.reg;
        }
        if mg.reg < self.graded.reg {
            branches.push("reg mG < reg G: reg F = reg R");
            ok = ok && self.fiber.reg == self.rees.reg;
        }
        let mut c = c.hyp("branches", branches.join("; "));
        c.lhs = json!({ "reg_F": self.fiber.reg, "reg_mG": mg.reg, "a_l(R(mF))-1": lhs_a });
        c.rhs = json!({ "reg_G": self.graded.reg, "reg_R": self.rees.reg, "a_l(R(F))": rhs_a });
        c.verdict(ok)
    }

    pub fn run_checks(&self, which: &[String], budget: &Budget) -> Result<Vec<TheoremCheck>> {
        let mut out = Vec::new();
        for id in which {
            match self.run_check(id, budget) {
                Ok(c) => out.push(c),
                Err(Error::Budget { .. }) => {
                    let mut c = TheoremCheck::new(id, self.n_check);
                    c.status = Status::Budget;
                    c.note = Some("per-check budget exhausted".into());
                    out.push(c);
                }
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::make_adic;
    use crate::parse::parse_polynomial;
    use crate::ring::RingDescriptor;
    use crate::scalar::PrimeField;
    use std::sync::Arc;

    fn pipeline_for(gens: &[&str]) -> Pipeline {
        let r = RingDescriptor::base(&["x", "y"], &[1, 1], PrimeField::default()).unwrap();
        let b = Budget::default();
        let gs = gens
            .iter()
            .map(|s| parse_polynomial(s, &r).unwrap())
            .collect();
        let i = IdealHandle::new(r, gs).unwrap();
        let f = make_adic(&i, &b).unwrap();
        run_pipeline(&f, &Limits::default(), &b).unwrap()
    }

    fn all_ids() -> Vec<String> {
        ALL_CHECK_IDS.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn test_adic_maximal_full_checks() {
        let b = Budget::default();
        let p = pipeline_for(&["x", "y"]);
        assert_eq!(p.spread, 2);
        assert_eq!(p.rees.reg, ExtInt::Int(0));
        assert_eq!(p.graded.reg, ExtInt::Int(0));
        assert_eq!(p.fiber.reg, ExtInt::Int(0));
        let checks = p.run_checks(&all_ids(), &b).unwrap();
        for c in &checks {
            assert_ne!(c.status, Status::Fail, "{} failed: {:?}", c.id, c);
        }
        // Spot-check specific gates.
        let get = |id: &str| checks.iter().find(|c| c.id == id).unwrap().status;
        assert_eq!(get("C3.4"), Status::Pass);
        assert_eq!(get("T3.2.iv"), Status::Pass);
        assert_eq!(get("L4.2"), Status::NotApplicable); // spread 2
        assert_eq!(get("T4.3"), Status::NotApplicable);
        assert_eq!(get("P4.8"), Status::Pass);
        assert_eq!(get("T4.6"), Status::Pass);
        assert_eq!(get("P4.9"), Status::NotApplicable); // mG = 0
        assert_eq!(get("L4.5"), Status::Pass);
    }

    #[test]
    fn test_adic_principal_checks() {
        let b = Budget::default();
        let p = pipeline_for(&["x"]);
        assert_eq!(p.spread, 1);
        let checks = p.run_checks(&all_ids(), &b).unwrap();
        for c in &checks {
            assert_ne!(c.status, Status::Fail, "{} failed: {:?}", c.id, c);
        }
        let get = |id: &str| checks.iter().find(|c| c.id == id).unwrap().status;
        assert_eq!(get("L4.2"), Status::Pass);
        assert_eq!(get("T4.3"), Status::Pass);
        assert_eq!(get("C4.4"), Status::Pass);
    }

    #[test]
    fn test_semigroup_checks() {
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
        let i = IdealHandle::new(ring, gens).unwrap();
        let f = make_adic(&i, &Budget::default()).unwrap();
        let p = run_pipeline(&f, &Limits::default(), &b).unwrap();
        assert_eq!(p.spread, 1);
        assert_eq!(p.fiber.reg, ExtInt::Int(1));
        assert_eq!(p.cert.r_j, 1);
        let checks = p.run_checks(&all_ids(), &b).unwrap();
        for c in &checks {
            assert_ne!(c.status, Status::Fail, "{} failed: {:?}", c.id, c);
        }
        let get = |id: &str| checks.iter().find(|c| c.id == id).unwrap().status;
        assert_eq!(get("L4.2"), Status::Pass);
        assert_eq!(get("T4.3"), Status::Pass);
        assert_eq!(get("C4.4"), Status::Pass);
        assert_eq!(get("C3.4"), Status::Pass);
        assert_eq!(get("T4.6"), Status::Pass);
    }

    #[test]
    fn test_unknown_id_rejected() {
        let b = Budget::default();
        let p = pipeline_for(&["x"]);
        assert!(p.run_check("X9.9", &b).is_err());
    }
}
