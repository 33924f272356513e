//! Corpus reports: deterministic JSON and a CSV summary with one row per
//! (entry, check). Runtime stats are reduction-step counters, not wall time,
//! so identical (config, seed) runs produce byte-identical reports.

use crate::config::JobConfig;
use crate::engine::Budget;
use crate::error::{Error, Result};
use crate::harness::{run_pipeline, InvariantReport, Status, TheoremCheck, ALL_CHECK_IDS};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub entry: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantReport>,
    pub checks: Vec<TheoremCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_note: Option<String>,
    pub steps_used: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub tool_version: String,
    pub global_seed: u64,
    pub which: Vec<String>,
    pub entries: Vec<EntryReport>,
    pub total_steps: u64,
}

impl CorpusReport {
    pub fn any_fail(&self) -> bool {
        self.entries
            .iter()
            .any(|e| e.checks.iter().any(|c| c.status == Status::Fail))
    }

    pub fn any_budget(&self) -> bool {
        self.entries.iter().any(|e| {
            e.budget_note.is_some() || e.checks.iter().any(|c| c.status == Status::Budget)
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("entry,check,status,lhs,rhs,window\n");
        for e in &self.entries {
            for c in &e.checks {
                out.push_str(&format!(
                    "{},{},{:?},{},{},{}\n",
                    e.entry,
                    c.id,
                    c.status,
                    csv_field(&c.lhs.to_string()),
                    csv_field(&c.rhs.to_string()),
                    c.window
                ));
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn check_ids(which: &str) -> Result<Vec<String>> {
    if which == "all" {
        return Ok(ALL_CHECK_IDS.iter().map(|s| s.to_string()).collect());
    }
    let mut out = Vec::new();
    for part in which.split(',') {
        let id = part.trim();
        if !ALL_CHECK_IDS.contains(&id) {
            return Err(Error::invalid(format!("unknown theorem id '{id}'")));
        }
        out.push(id.to_string());
    }
    Ok(out)
}

/// Run one entry end to end; budget exhaustion downgrades the entry instead
/// of failing the suite.
pub fn run_entry(cfg: &JobConfig, which: &[String], seed_override: Option<u64>) -> EntryReport {
    let budget = cfg.budget();
    let mut limits = cfg.limits();
    if let Some(s) = seed_override {
        limits.seed = s;
    }
    let name = if cfg.name.is_empty() {
        "unnamed".to_string()
    } else {
        cfg.name.clone()
    };
    let result = cfg
        .build_filtration(&budget)
        .and_then(|f| run_pipeline(&f, &limits, &budget))
        .and_then(|p| {
            let checks = p.run_checks(which, &budget)?;
            Ok((p.invariant_report(&limits), checks))
        });
    match result {
        Ok((invariants, checks)) => EntryReport {
            entry: name,
            invariants: Some(invariants),
            checks,
            budget_note: None,
            steps_used: budget.used(),
        },
        Err(Error::Budget { steps, limit }) => EntryReport {
            entry: name,
            invariants: None,
            checks: which
                .iter()
                .map(|id| TheoremCheck {
                    id: id.clone(),
                    status: Status::Budget,
                    hypotheses: Vec::new(),
                    lhs: serde_json::Value::Null,
                    rhs: serde_json::Value::Null,
                    window: 0,
                    note: Some(format!("entry budget exhausted: {steps} > {limit}")),
                })
                .collect(),
            budget_note: Some(format!("budget exhausted after {steps} steps (limit {limit})")),
            steps_used: budget.used(),
        },
        Err(e) => EntryReport {
            entry: name.clone(),
            invariants: None,
            checks: Vec::new(),
            budget_note: Some(format!("entry '{name}' failed: {e}")),
            steps_used: budget.used(),
        },
    }
}

/// Entries run concurrently; the report is assembled in input order.
pub fn run_corpus(
    configs: &[JobConfig],
    which: &[String],
    global_seed: Option<u64>,
) -> Result<CorpusReport> {
    let mut entries: Vec<Option<EntryReport>> = (0..configs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for cfg in configs {
            let which = which.to_vec();
            handles.push(scope.spawn(move || run_entry(cfg, &which, global_seed)));
        }
        for (slot, h) in entries.iter_mut().zip(handles) {
            *slot = Some(h.join().expect("corpus worker panicked"));
        }
    });
    let entries: Vec<EntryReport> = entries.into_iter().map(|e| e.unwrap()).collect();
    // A malformed entry (non-budget failure with no checks) is a structured
    // error naming the entry.
    for e in &entries {
        if e.checks.is_empty() && e.invariants.is_none() && !which.is_empty() {
            if let Some(note) = &e.budget_note {
                if !note.contains("budget") {
                    return Err(Error::invalid(note.clone()));
                }
            }
        }
    }
    let total_steps = entries.iter().map(|e| e.steps_used).sum();
    Ok(CorpusReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        global_seed: global_seed.unwrap_or(42),
        which: which.to_vec(),
        entries,
        total_steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_check_ids_parsing() {
        assert_eq!(check_ids("all").unwrap().len(), 16);
        assert_eq!(check_ids("C3.4, L4.2").unwrap(), vec!["C3.4", "L4.2"]);
        assert!(check_ids("Z1.1").is_err());
    }

    #[test]
    fn test_empty_corpus() {
        let r = run_corpus(&[], &check_ids("all").unwrap(), None).unwrap();
        assert!(r.entries.is_empty());
        assert!(!r.any_fail());
    }

    #[test]
    fn test_malformed_entry_is_structured_error() {
        let cfg = JobConfig::parse_toml(
            r#"
            name = "broken"
            [ring]
            vars = ["x"]
            weights = [1]
            [filtration]
            kind = "adic"
            ideal = ["x + q"]
            "#,
        )
        .unwrap();
        let err = run_corpus(&[cfg], &check_ids("C3.4").unwrap(), None).unwrap_err();
        assert!(format!("{err}").contains("broken"));
    }
}
