//! Check reports: one record per check, canonical JSON output.
//!
//! Records are sorted by name and every float is printed with 17
//! significant digits, so reruns with the same inputs and seed produce
//! the same bytes except for the measured `runtime_ms` values.

use serde::Serialize;
use serde_json::Value;

#[derive(Serialize, Clone)]
pub struct CheckRecord {
    pub name: String,
    /// what the check verifies, in words
    pub claim: String,
    /// truncation the check ran at: level cutoff for exact sweeps,
    /// Fourier window for smeared checks
    pub window: i64,
    pub verdict: String,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub runtime_ms: u64,
}

impl CheckRecord {
    pub fn exact(name: &str, claim: &str, window: i64, pass: bool) -> Self {
        CheckRecord {
            name: name.into(),
            claim: claim.into(),
            window,
            verdict: verdict(pass),
            exact: true,
            residual: None,
            tolerance: None,
            details: None,
            runtime_ms: 0,
        }
    }

    pub fn residual(
        name: &str,
        claim: &str,
        window: i64,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            claim: claim.into(),
            window,
            verdict: verdict(residual <= tolerance),
            exact: false,
            residual: Some(residual),
            tolerance: Some(tolerance),
            details: None,
            runtime_ms: 0,
        }
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

fn verdict(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.into()
}

#[derive(Serialize)]
pub struct CheckReport {
    pub tool_version: String,
    pub model_name: String,
    pub model_fingerprint: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
}

impl CheckReport {
    pub fn new(model_name: &str, fingerprint: &str, seed: u64) -> Self {
        CheckReport {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            model_name: model_name.into(),
            model_fingerprint: fingerprint.into(),
            seed,
            records: Vec::new(),
        }
    }

    pub fn push(&mut self, rec: CheckRecord) {
        self.records.push(rec);
    }

    pub fn finish(&mut self) {
        self.records.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed())
    }

    pub fn to_json(&self) -> String {
        voa_core::json::to_canonical_string(self)
    }
}

/// Wraps a record builder with wall-clock timing.
pub fn timed(f: impl FnOnce() -> CheckRecord) -> CheckRecord {
    let t = std::time::Instant::now();
    let mut rec = f();
    rec.runtime_ms = t.elapsed().as_millis() as u64;
    rec
}

/// Same, for builders that can fail before producing a record.
pub fn timed_try<E>(f: impl FnOnce() -> Result<CheckRecord, E>) -> Result<CheckRecord, E> {
    let t = std::time::Instant::now();
    f().map(|mut rec| {
        rec.runtime_ms = t.elapsed().as_millis() as u64;
        rec
    })
}
