//! Run reports as JSON-lines: a header, one record per instance, and a
//! summary. Records are deterministic for a fixed seed and configuration
//! once the timing fields are stripped.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ReportRecord {
    Header {
        suite: String,
        seed: u64,
        version: String,
        config: serde_json::Value,
    },
    Instance {
        id: String,
        hypothesis: Option<String>,
        conclusion: Option<String>,
        detail: serde_json::Value,
        timing_ms: u64,
    },
    Summary {
        total: usize,
        passed: usize,
        refuted: usize,
        inconclusive: usize,
        violations: usize,
        lp_calls: u64,
        certificates_verified: u64,
        certificate_failures: u64,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub records: Vec<ReportRecord>,
}

impl RunReport {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("report records serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(s: &str) -> anyhow::Result<Self> {
        let mut records = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            records.push(serde_json::from_str(line)?);
        }
        Ok(RunReport { records })
    }

    /// The JSONL body with environment-dependent fields zeroed (timings,
    /// and the process-wide solver counters which other threads may share);
    /// equal across reruns of the same seed and configuration.
    pub fn deterministic_body(&self) -> String {
        let mut clone = self.clone();
        for r in clone.records.iter_mut() {
            match r {
                ReportRecord::Instance { timing_ms, .. } => *timing_ms = 0,
                ReportRecord::Summary {
                    lp_calls, certificates_verified, certificate_failures, ..
                } => {
                    *lp_calls = 0;
                    *certificates_verified = 0;
                    *certificate_failures = 0;
                }
                ReportRecord::Header { .. } => {}
            }
        }
        clone.to_jsonl()
    }

    pub fn summary(&self) -> Option<&ReportRecord> {
        self.records
            .iter()
            .find(|r| matches!(r, ReportRecord::Summary { .. }))
    }

    /// Process exit code: 0 all pass, 1 expected negatives present,
    /// 2 a theorem-violation fail occurred.
    pub fn exit_code(&self) -> i32 {
        match self.summary() {
            Some(ReportRecord::Summary { violations, refuted, .. }) => {
                if *violations > 0 {
                    2
                } else if *refuted > 0 {
                    1
                } else {
                    0
                }
            }
            _ => 0,
        }
    }
}

/// Short stable digest of any serializable witness.
pub fn digest<T: Serialize>(value: &T) -> String {
    let json = serde_json::to_string(value).unwrap_or_default();
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    let hash = hasher.finalize();
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Plain-string digest for values that only implement Debug.
pub fn digest_debug<T: std::fmt::Debug>(value: &T) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{value:?}").as_bytes());
    let hash = hasher.finalize();
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
