//! Verification runner and expression tools behind the `holocheck` binary.

pub mod commands;
pub mod config;
pub mod report;
pub mod suites;

pub use config::{parse_suites, CSetting, Suite, SuiteConfig};
pub use report::{Record, Report, Status};

use rayon::prelude::*;

/// Runs the configured suites on `workers` threads. Records come back in
/// suite order, then check order, whatever the scheduling.
pub fn run_suites(cfg: &SuiteConfig, workers: usize) -> Report {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
    let per_suite: Vec<Vec<Record>> = pool.install(|| cfg.suites.par_iter().map(|s| suites::run_suite(*s, cfg)).collect());
    Report::new(
        cfg.seed,
        cfg.c_label(),
        cfg.suites.iter().map(|s| s.name().to_string()).collect(),
        per_suite.into_iter().flatten().collect(),
    )
}
