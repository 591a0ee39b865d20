//! The record every bound check returns.

use serde::{Deserialize, Serialize};

/// Default tolerance for inequality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Outcome of one verified inequality (or identity).
///
/// For an inequality `lhs <= rhs`, `slack = rhs - lhs` and the check passes
/// when `slack >= -tol`. For an identity `lhs ≈ rhs` checked to a tolerance,
/// see [`BoundReport::identity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl BoundReport {
    /// `lhs <= rhs`, passing when `rhs - lhs >= -tol`.
    pub fn upper(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        BoundReport { name: name.into(), lhs, rhs, slack, pass: slack >= -tol }
    }

    /// `|lhs - rhs| <= tol`. The slack is the unused part of the tolerance,
    /// `tol - |lhs - rhs|`, so `pass` is again `slack >= 0`.
    pub fn identity(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = tol - (lhs - rhs).abs();
        BoundReport { name: name.into(), lhs, rhs, slack, pass: slack >= 0.0 }
    }

    /// Re-evaluates an inequality report against a different tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.pass = self.slack >= -tol;
        self
    }

    pub const CSV_HEADER: &'static str = "name,lhs,rhs,slack,pass";

    pub fn to_csv_row(&self) -> String {
        format!("{},{},{},{},{}", self.name, fmt_sig(self.lhs), fmt_sig(self.rhs), fmt_sig(self.slack), self.pass)
    }
}

/// A float with 12 significant digits, in a form that is stable across runs.
pub fn fmt_sig(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        format!("{x}")
    }
}
