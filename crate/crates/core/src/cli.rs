//! Batch front end. Exit codes: 0 success, 1 verification FAIL, 2 config
//! error, 3 budget-only incompleteness.

use crate::config::JobConfig;
use crate::corpus::bundled_configs;

use crate::harness::run_pipeline;
use crate::report::{check_ids, run_corpus};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "fibercone", version, about = "Blowup algebras of good filtrations: invariants and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the invariant report for one configured filtration.
    Invariants {
        #[arg(long)]
        config: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n_check: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<String>,
    },
    /// Run theorem checks over a configured filtration or the bundled corpus.
    Verify {
        #[arg(long)]
        config: Option<String>,
        /// Use the bundled ten-entry corpus.
        #[arg(long)]
        corpus: Option<String>,
        /// Comma-separated theorem ids, or "all".
        #[arg(long, default_value = "all")]
        which: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n_check: Option<usize>,
        #[arg(long)]
        out: Option<String>,
    },
}

fn emit(text: &str, out: &Option<String>) -> std::io::Result<()> {
    match out {
        None => {
            println!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text),
    }
}

pub fn run_cli() -> i32 {
    let cli = Cli::parse();
    match cli.command {
        Command::Invariants {
            config,
            format,
            seed,
            n_check,
            out,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read {config}: {e}");
                    return 2;
                }
            };
            let cfg = match JobConfig::parse_toml(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let budget = cfg.budget();
            let mut limits = cfg.limits();
            if let Some(s) = seed {
                limits.seed = s;
            }
            if let Some(n) = n_check {
                limits.n_check = Some(n);
            }
            let started = std::time::Instant::now();
            let result = cfg
                .build_filtration(&budget)
                .and_then(|f| run_pipeline(&f, &limits, &budget))
                .map(|p| p.invariant_report(&limits));
            match result {
                Ok(report) => {
                    let text = match format.as_str() {
                        "json" => serde_json::to_string_pretty(&report).unwrap(),
                        other => {
                            eprintln!("error: unknown format '{other}'");
                            return 2;
                        }
                    };
                    eprintln!(
                        "computed in {:.1}s, {} reduction steps",
                        started.elapsed().as_secs_f64(),
                        budget.used()
                    );
                    if emit(&text, &out).is_err() {
                        eprintln!("error: cannot write output");
                        return 2;
                    }
                    0
                }
                Err(crate::error::Error::Budget { steps, limit }) => {
                    eprintln!("error: budget exhausted ({steps} > {limit})");
                    3
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Command::Verify {
            config,
            corpus,
            which,
            format,
            seed,
            n_check,
            out,
        } => {
            let ids = match check_ids(&which) {
                Ok(ids) => ids,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let mut configs: Vec<JobConfig> = Vec::new();
            match (&config, &corpus) {
                (Some(path), None) => {
                    let text = match std::fs::read_to_string(path) {
                        Ok(t) => t,
                        Err(e) => {
                            eprintln!("error: cannot read {path}: {e}");
                            return 2;
                        }
                    };
                    match JobConfig::parse_toml(&text) {
                        Ok(c) => configs.push(c),
                        Err(e) => {
                            eprintln!("error: {e}");
                            return 2;
                        }
                    }
                }
                (None, Some(name)) if name == "bundled" => match bundled_configs() {
                    Ok(cs) => configs = cs,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return 2;
                    }
                },
                _ => {
                    eprintln!("error: pass exactly one of --config PATH or --corpus bundled");
                    return 2;
                }
            }
            if let Some(n) = n_check {
                for c in &mut configs {
                    c.limits.n_check = n;
                }
            }
            let started = std::time::Instant::now();
            let report = match run_corpus(&configs, &ids, seed) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            eprintln!(
                "verified {} entries in {:.1}s, {} reduction steps",
                report.entries.len(),
                started.elapsed().as_secs_f64(),
                report.total_steps
            );
            let text = match format.as_str() {
                "json" => report.to_json(),
                "csv" => report.to_csv(),
                other => {
                    eprintln!("error: unknown format '{other}'");
                    return 2;
                }
            };
            if emit(&text, &out).is_err() {
                eprintln!("error: cannot write output");
                return 2;
            }
            if report.any_fail() {
                1
            } else if report.any_budget() {
                3
            } else {
                0
            }
        }
    }
}

