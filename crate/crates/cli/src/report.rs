//! Check records and the report they are collected into.

use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub suite: String,
    pub status: Status,
    /// The claim this check certifies.
    pub paper_ref: String,
    pub dims: Value,
    pub certificate: Value,
    pub wall_time_ms: u64,
}

/// Outcome of a check body: whether it passed, its dimension data and its
/// certificate.
pub struct Outcome {
    pub passed: bool,
    pub dims: Value,
    pub certificate: Value,
}

impl Outcome {
    pub fn new<T: Serialize>(passed: bool, dims: Value, certificate: &T) -> Outcome {
        let certificate = serde_json::to_value(certificate).unwrap_or_else(|e| Value::String(e.to_string()));
        Outcome { passed, dims, certificate }
    }
}

/// Runs a check body, timing it and turning errors into failures.
pub fn run_check<E: std::fmt::Display>(
    suite: &str,
    check: &str,
    claim: &str,
    body: impl FnOnce() -> Result<Outcome, E>,
) -> Record {
    let start = Instant::now();
    let (status, dims, certificate) = match body() {
        Ok(o) => (if o.passed { Status::Pass } else { Status::Fail }, o.dims, o.certificate),
        Err(e) => (Status::Fail, Value::Null, serde_json::json!({ "error": e.to_string() })),
    };
    Record {
        check: check.to_string(),
        suite: suite.to_string(),
        status,
        paper_ref: claim.to_string(),
        dims,
        certificate,
        wall_time_ms: start.elapsed().as_millis() as u64,
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub c: String,
    pub suites: Vec<String>,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(seed: u64, c: String, suites: Vec<String>, records: Vec<Record>) -> Report {
        let mut summary = Summary::default();
        for r in &records {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skip => summary.skip += 1,
            }
        }
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            c,
            suites,
            summary,
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// The same report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.wall_time_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let tag = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let _ = writeln!(out, "{tag} {}/{} [{}] {} ({} ms)", r.suite, r.check, r.paper_ref, r.dims, r.wall_time_ms);
        }
        let _ = writeln!(
            out,
            "seed {} c {}: {} passed, {} failed, {} skipped",
            self.seed, self.c, self.summary.pass, self.summary.fail, self.summary.skip
        );
        out
    }
}
