//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use groupoid_cstar::{ALGEBRAIC_TOL, SPECTRAL_TOL};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not run, e.g. because the instance failed an earlier prerequisite.
    Skipped,
    /// An observation with no pass criterion.
    Recorded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: ALGEBRAIC_TOL,
            spectral: SPECTRAL_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub suite: String,
    pub instance: String,
    pub check: String,
    /// The property being checked, in words.
    pub anchor: String,
    pub status: Status,
    pub passed: usize,
    pub total: usize,
    /// The tolerance this check compares against.
    pub tolerance: f64,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub witness: Map<String, Value>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub entries: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub recorded: usize,
    /// Individual comparisons across all passing and failing entries.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub tool_version: String,
    pub seed: u64,
    pub count: usize,
    pub suites: Vec<String>,
    pub instances: Vec<String>,
    pub entries: Vec<ReportEntry>,
    pub summary: Summary,
}

impl VerificationReport {
    /// Sorts entries by `(suite, instance, check)` and tallies them.
    pub fn new(seed: u64, count: usize, suites: Vec<String>, mut instances: Vec<String>, mut entries: Vec<ReportEntry>) -> Self {
        entries.sort_by(|a, b| (&a.suite, &a.instance, &a.check).cmp(&(&b.suite, &b.instance, &b.check)));
        instances.sort();
        instances.dedup();
        let mut summary = Summary {
            entries: entries.len(),
            ..Summary::default()
        };
        for e in &entries {
            match e.status {
                Status::Pass => summary.passed += 1,
                Status::Fail => summary.failed += 1,
                Status::Skipped => summary.skipped += 1,
                Status::Recorded => summary.recorded += 1,
            }
            if matches!(e.status, Status::Pass | Status::Fail) {
                summary.samples += e.total;
            }
        }
        Self {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            count,
            suites,
            instances,
            entries,
            summary,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers and strings")
    }

    /// One line per entry, then the summary.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let status = match e.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
                Status::Recorded => "NOTE",
            };
            out.push_str(&format!(
                "{status} {}/{}/{} {}/{}",
                e.suite, e.instance, e.check, e.passed, e.total
            ));
            if e.status != Status::Pass && !e.witness.is_empty() {
                out.push_str(&format!(" {}", Value::Object(e.witness.clone())));
            }
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} entries: {} passed, {} failed, {} skipped, {} recorded ({} comparisons)\n",
            s.entries, s.passed, s.failed, s.skipped, s.recorded, s.samples
        ));
        out
    }
}
