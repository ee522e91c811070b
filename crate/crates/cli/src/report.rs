//! Machine-readable verification reports.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// One named check with its measured value and the tolerance it was held to.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `measured ≤ tolerance`.
    pub fn le(name: &str, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured <= tolerance,
            measured,
            tolerance,
        }
    }

    /// Passes when `measured > threshold` (for negative controls and
    /// non-commutation witnesses).
    pub fn gt(name: &str, measured: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            pass: measured > threshold,
            measured,
            tolerance: threshold,
        }
    }

    pub fn flag(name: &str, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            measured: if pass { 1.0 } else { 0.0 },
            tolerance: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Verification report emitted as JSON on stdout. Exit code 0 iff every
/// check passed; the human summary goes to stderr.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            inputs: Vec::new(),
            checks: Vec::new(),
            data: serde_json::Value::Null,
            exit_code: 0,
        }
    }

    pub fn record_input(&mut self, path: &str, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        });
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Seals the exit code: 0 iff all checks pass.
    pub fn finalize(mut self) -> Self {
        self.exit_code = if self.checks.iter().all(|c| c.pass) {
            0
        } else {
            1
        };
        self
    }

    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{}\n", self.command));
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "  [{status}] {}: measured {:.3e} (tolerance {:.3e})\n",
                c.name, c.measured, c.tolerance
            ));
        }
        if self.checks.is_empty() {
            out.push_str("  (no checks; report only)\n");
        }
        out
    }
}
