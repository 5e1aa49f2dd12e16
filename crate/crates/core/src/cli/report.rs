//! Machine-readable verification report.

use serde::Serialize;

use crate::potentials::FamilyParams;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub identity: String,
    /// Stable identifier of the identity being checked.
    pub anchor: &'static str,
    pub max_gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub offending_points: Vec<f64>,
}

impl Record {
    /// Pass when `max_gap <= tolerance`; offending points are those whose
    /// own gap exceeds the tolerance.
    pub fn with_points(
        identity: impl Into<String>,
        anchor: &'static str,
        tolerance: f64,
        points: &[f64],
        per_point: &[f64],
        max_gap: f64,
    ) -> Self {
        let offending_points = points
            .iter()
            .zip(per_point)
            .filter(|(_, g)| !(**g <= tolerance))
            .map(|(x, _)| *x)
            .collect();
        Record {
            identity: identity.into(),
            anchor,
            max_gap,
            tolerance,
            pass: max_gap <= tolerance,
            offending_points,
        }
    }

    /// Single-number check; `worst` is reported as offending on failure.
    pub fn scalar(identity: impl Into<String>, anchor: &'static str, tolerance: f64, gap: f64, worst: Option<f64>) -> Self {
        let pass = gap <= tolerance;
        Record {
            identity: identity.into(),
            anchor,
            max_gap: gap,
            tolerance,
            pass,
            offending_points: if pass { vec![] } else { worst.into_iter().collect() },
        }
    }

    /// Check that must hold with a gap of exactly zero.
    pub fn exact(identity: impl Into<String>, anchor: &'static str, points: &[f64], per_point: &[f64]) -> Self {
        let max_gap = per_point.iter().fold(0.0_f64, |m, g| if g.is_nan() { f64::NAN } else { m.max(*g) });
        Self::with_points(identity, anchor, 0.0, points, per_point, max_gap)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub family: FamilyParams,
    pub levels: usize,
    pub order: usize,
    pub records: Vec<Record>,
    /// Suites not applicable to this family (e.g. no parameter flow).
    pub skipped: Vec<String>,
    pub status: &'static str,
}

impl Report {
    pub fn new(suite: &str, family: FamilyParams, levels: usize, order: usize, records: Vec<Record>, skipped: Vec<String>) -> Self {
        let status = if records.iter().all(|r| r.pass) { "pass" } else { "fail" };
        Report { suite: suite.to_string(), family, levels, order, records, skipped, status }
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}
