use serde::{Deserialize, Serialize};

use crate::harmonic::classify::MapClassification;

/// How a residual is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// Passes when `residual ≤ tolerance`.
    AtMost,
    /// Passes when `residual ≥ tolerance`; used for quantities that must not vanish.
    AtLeast,
}

impl Comparison {
    pub fn holds(self, residual: f64, tolerance: f64) -> bool {
        match self {
            Comparison::AtMost => residual <= tolerance,
            Comparison::AtLeast => residual >= tolerance,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        }
    }
}

/// One comparison of a closed form (or claim) with the generic engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    /// The formula or claim being checked.
    pub anchor: String,
    /// Sample at which the residual is attained.
    pub point: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub generic: Vec<f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    /// Failing gating records fail the run; the others document which reading
    /// of an ambiguous formula holds.
    pub gating: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let residual = if residual.is_nan() { f64::MAX } else { residual.min(f64::MAX) };
        CheckRecord {
            id: id.into(),
            anchor: anchor.into(),
            point: Vec::new(),
            closed_form: Vec::new(),
            generic: Vec::new(),
            residual,
            tolerance,
            comparison: Comparison::AtMost,
            pass: residual <= tolerance,
            gating: true,
            note: None,
        }
    }

    pub fn at_least(mut self) -> Self {
        self.comparison = Comparison::AtLeast;
        self.pass = self.comparison.holds(self.residual, self.tolerance);
        self
    }

    pub fn at(mut self, point: &[f64]) -> Self {
        self.point = point.to_vec();
        self
    }

    pub fn values(mut self, closed_form: Vec<f64>, generic: Vec<f64>) -> Self {
        self.closed_form = closed_form.into_iter().map(finite).collect();
        self.generic = generic.into_iter().map(finite).collect();
        self
    }

    pub fn advisory(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn gating(mut self, gating: bool) -> Self {
        self.gating = gating;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn status(&self) -> &'static str {
        match (self.pass, self.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "MISMATCH",
        }
    }
}

fn finite(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX.copysign(x)
    }
}

/// An adjudicated question with its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub topic: String,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub map: String,
    pub result: MapClassification,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub mismatches: usize,
    pub classifications: Vec<Classification>,
    pub findings: Vec<Finding>,
}

/// Records of one or more verification runs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    pub fn finding(&mut self, topic: impl Into<String>, outcome: impl Into<String>) {
        self.summary.findings.push(Finding {
            topic: topic.into(),
            outcome: outcome.into(),
        });
    }

    pub fn classification(&mut self, map: impl Into<String>, result: MapClassification) {
        self.summary.classifications.push(Classification {
            map: map.into(),
            result,
        });
    }

    /// Appends `other`, keeping record order.
    pub fn merge(&mut self, other: Report) {
        self.records.extend(other.records);
        self.summary.classifications.extend(other.summary.classifications);
        self.summary.findings.extend(other.summary.findings);
        self.recount();
    }

    pub fn recount(&mut self) {
        let s = &mut self.summary;
        s.checks = self.records.len();
        s.passed = self.records.iter().filter(|r| r.pass).count();
        s.failed = self.records.iter().filter(|r| !r.pass && r.gating).count();
        s.mismatches = self.records.iter().filter(|r| !r.pass && !r.gating).count();
    }

    pub fn ok(&self) -> bool {
        self.records.iter().all(|r| r.pass || !r.gating)
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}
