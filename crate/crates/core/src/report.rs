//! Machine-readable sweep outcomes.

use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Verdict {
    Pass,
    Fail {
        reason: String,
    },
    Skipped {
        reason: String,
    },
    /// Recorded but not part of the claim (e.g. a sufficient condition that
    /// is false while the target is represented anyway).
    Info {
        note: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<u64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<i64>>,
}

impl Cell {
    pub fn new(label: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            label: label.into(),
            target: None,
            verdict,
            witness: None,
        }
    }

    pub fn pass(label: impl Into<String>) -> Self {
        Self::new(label, Verdict::Pass)
    }

    pub fn fail(label: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::new(
            label,
            Verdict::Fail {
                reason: reason.into(),
            },
        )
    }

    pub fn skipped(label: impl Into<String>, reason: impl Into<String>) -> Self {
        Self::new(
            label,
            Verdict::Skipped {
                reason: reason.into(),
            },
        )
    }

    pub fn info(label: impl Into<String>, note: impl Into<String>) -> Self {
        Self::new(label, Verdict::Info { note: note.into() })
    }

    pub fn with_target(mut self, target: u64) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_witness(mut self, witness: Vec<i64>) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn is_failure(&self) -> bool {
        matches!(self.verdict, Verdict::Fail { .. })
    }
}

/// Work counters. Deterministic for a fixed configuration, unlike wall time.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    pub cells: u64,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub informational: u64,
    /// Escalation nodes or search nodes visited, when the claim tracks them.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub claim: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    /// Work counters; wall time is left out so a fixed seed gives identical bytes.
    #[serde(rename = "runtime")]
    pub stats: RunStats,
    pub cells: Vec<Cell>,
    pub failures: Vec<Cell>,
}

impl VerificationReport {
    /// Builds a report; `pass` holds exactly when no cell failed.
    pub fn from_cells(claim: impl Into<String>, cells: Vec<Cell>) -> Self {
        let mut stats = RunStats {
            cells: cells.len() as u64,
            ..RunStats::default()
        };
        for c in &cells {
            match c.verdict {
                Verdict::Pass => stats.passed += 1,
                Verdict::Fail { .. } => stats.failed += 1,
                Verdict::Skipped { .. } => stats.skipped += 1,
                Verdict::Info { .. } => stats.informational += 1,
            }
        }
        let failures: Vec<Cell> = cells.iter().filter(|c| c.is_failure()).cloned().collect();
        Self {
            schema: REPORT_SCHEMA,
            claim: claim.into(),
            pass: failures.is_empty(),
            seed: None,
            stats,
            cells,
            failures,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_nodes(mut self, nodes: u64) -> Self {
        self.stats.nodes = nodes;
        self
    }

    /// Concatenates reports under a new claim id, keeping cell order.
    pub fn merge(claim: impl Into<String>, parts: Vec<VerificationReport>) -> Self {
        let nodes = parts.iter().map(|p| p.stats.nodes).sum();
        let seed = parts.iter().find_map(|p| p.seed);
        let cells = parts.into_iter().flat_map(|p| p.cells).collect();
        let mut r = Self::from_cells(claim, cells).with_nodes(nodes);
        r.seed = seed;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_tracks_failures() {
        let r = VerificationReport::from_cells("x", vec![Cell::pass("a"), Cell::info("b", "n")]);
        assert!(r.pass && r.failures.is_empty());
        assert_eq!(r.stats.informational, 1);
        let r = VerificationReport::from_cells("x", vec![Cell::pass("a"), Cell::fail("b", "no")]);
        assert!(!r.pass);
        assert_eq!(r.failures.len(), 1);
        let merged = VerificationReport::merge("y", vec![r.clone(), r]);
        assert_eq!(merged.stats.failed, 2);
        assert_eq!(merged.claim, "y");
    }
}
