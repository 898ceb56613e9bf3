use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::solver::fmt17;

/// Default relative slack on every inequality.
pub const DEFAULT_SLACK: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub id: String,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    /// Node time where `lhs / rhs` is largest.
    pub worst_t: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
    pub intervals: usize,
    pub grading: f64,
    pub scheme: String,
}

impl EstimateReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EstimateRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn row(&self, id: &str) -> Option<&EstimateRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn extend(&mut self, other: EstimateReport) {
        self.rows.extend(other.rows);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("inequality_id,alpha,lhs,rhs,slack,pass\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.id,
                fmt17(r.alpha),
                fmt17(r.lhs),
                fmt17(r.rhs),
                fmt17(r.slack),
                r.pass
            );
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Collects `(t, lhs, rhs)` samples and keeps the worst ratio.
pub(crate) struct RowBuilder {
    id: &'static str,
    alpha: f64,
    slack: f64,
    worst: Option<(f64, f64, f64, f64)>,
    pass: bool,
    note: String,
}

impl RowBuilder {
    pub fn new(id: &'static str, alpha: f64, slack: f64) -> Self {
        Self {
            id,
            alpha,
            slack,
            worst: None,
            pass: true,
            note: String::new(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn push(&mut self, t: f64, lhs: f64, rhs: f64) {
        let ok = lhs <= rhs * (1.0 + self.slack) || (lhs == 0.0 && rhs == 0.0);
        self.pass &= ok && !lhs.is_nan();
        let ratio = if lhs == 0.0 {
            0.0
        } else if rhs > 0.0 {
            lhs / rhs
        } else {
            f64::INFINITY
        };
        match self.worst {
            Some((r, _, _, prev)) if r > ratio || (r == ratio && !(rhs.is_infinite() && prev.is_finite())) => {}
            _ => self.worst = Some((ratio, t, lhs, rhs)),
        }
    }

    pub fn finish(self) -> EstimateRow {
        let (_, t, lhs, rhs) = self.worst.unwrap_or((0.0, 0.0, 0.0, 0.0));
        let mut note = self.note;
        if rhs.is_infinite() {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str("bound overflows");
        }
        EstimateRow {
            id: self.id.to_string(),
            alpha: self.alpha,
            lhs,
            rhs,
            slack: self.slack,
            pass: self.pass,
            worst_t: t,
            note,
        }
    }
}
