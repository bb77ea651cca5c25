//! Machine-readable run reports. Serialisation is deterministic: maps are
//! ordered, and the timing field is the only part allowed to differ between
//! identical runs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// One named check: pass/fail with the residual measured and the tolerance
/// it was held to.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl Verdict {
    pub fn from_residual(residual: f64, tolerance: f64) -> Self {
        Self {
            pass: residual <= tolerance,
            residual,
            tolerance,
        }
    }

    /// A boolean check reported through the same shape: residual 0 when the
    /// condition holds, 1 when it does not.
    pub fn from_bool(pass: bool, tolerance: f64) -> Self {
        Self {
            pass,
            residual: if pass { 0.0 } else { 1.0 },
            tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputRecord {
    pub path: String,
    pub digest: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputRecord>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub details: BTreeMap<String, serde_json::Value>,
    pub timing_seconds: f64,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: Vec::new(),
            verdicts: BTreeMap::new(),
            details: BTreeMap::new(),
            timing_seconds: 0.0,
        }
    }

    pub fn record_input(&mut self, path: &Path, contents: &[u8]) {
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            digest: format!("fnv1a:{:016x}", fnv1a(contents)),
        });
    }

    pub fn verdict(&mut self, name: &str, verdict: Verdict) {
        self.verdicts.insert(name.to_string(), verdict);
    }

    pub fn detail(&mut self, name: &str, value: serde_json::Value) {
        self.details.insert(name.to_string(), value);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        for input in &self.inputs {
            let _ = writeln!(out, "input: {} ({})", input.path, input.digest);
        }
        for (name, v) in &self.verdicts {
            let _ = writeln!(
                out,
                "{}: {} (residual {:e}, tolerance {:e})",
                name,
                if v.pass { "pass" } else { "FAIL" },
                v.residual,
                v.tolerance
            );
        }
        for (name, value) in &self.details {
            let _ = writeln!(out, "note {name}: {value}");
        }
        let _ = writeln!(out, "timing: {:.6}s", self.timing_seconds);
        out
    }

    /// Equality up to the timing field, for determinism checks.
    pub fn same_modulo_timing(&self, other: &RunReport) -> bool {
        self.command == other.command
            && self.inputs == other.inputs
            && self.verdicts == other.verdicts
            && self.details == other.details
    }
}

/// 64-bit FNV-1a over the raw bytes. Stable and dependency-free; used only
/// to fingerprint input files inside reports.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_matches_known_vectors() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
    }

    #[test]
    fn reports_serialise_with_sorted_keys_and_compare_modulo_timing() {
        let mut r1 = RunReport::new("algebra check");
        r1.verdict("zebra", Verdict::from_residual(0.0, 1e-9));
        r1.verdict("aardvark", Verdict::from_residual(2.0, 1e-9));
        r1.timing_seconds = 0.5;
        let mut r2 = r1.clone();
        r2.timing_seconds = 0.9;
        assert!(r1.same_modulo_timing(&r2));
        assert!(!r1.all_pass());
        let json = r1.to_json();
        assert!(json.find("aardvark").unwrap() < json.find("zebra").unwrap());
    }
}
