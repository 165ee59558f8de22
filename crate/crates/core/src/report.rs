//! Pass/fail records for identity checks.

use serde::{Deserialize, Serialize};

use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Row, degree or basis index at which the identity broke.
    pub index: i64,
    pub detail: String,
    /// Canonical text of the residual (exact checks) or the offending value.
    pub residual: String,
}

/// Outcome of checking one identity over a range of indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    /// The identity being checked, written out as a formula.
    #[serde(rename = "paper_ref")]
    pub formula: String,
    /// `true` for zero-residual checks, `false` for tolerance-based ones.
    pub exact: bool,
    pub indices_checked: Vec<i64>,
    /// Indices left out because a finite truncation cannot represent them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<i64>,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn exact(identity: impl Into<String>, formula: impl Into<String>) -> Self {
        Self::new(identity, formula, true)
    }

    pub fn numeric(identity: impl Into<String>, formula: impl Into<String>) -> Self {
        Self::new(identity, formula, false)
    }

    fn new(identity: impl Into<String>, formula: impl Into<String>, exact: bool) -> Self {
        Self {
            identity: identity.into(),
            formula: formula.into(),
            exact,
            indices_checked: Vec::new(),
            skipped: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.indices_checked.is_empty()
    }

    /// Records `index` as checked; a nonzero residual is a failure.
    pub fn check_zero<T: Scalar>(&mut self, index: i64, residual: &LaurentPoly<T>) -> bool {
        self.check_zero_with(index, "", residual)
    }

    pub fn check_zero_with<T: Scalar>(
        &mut self,
        index: i64,
        detail: impl Into<String>,
        residual: &LaurentPoly<T>,
    ) -> bool {
        self.indices_checked.push(index);
        let ok = residual.is_zero();
        if !ok {
            self.failures.push(Failure {
                index,
                detail: detail.into(),
                residual: residual.to_string(),
            });
        }
        ok
    }

    /// Exact scalar comparison.
    pub fn check_equal<T: Scalar>(&mut self, index: i64, got: &T, want: &T) -> bool {
        self.indices_checked.push(index);
        let ok = got == want;
        if !ok {
            self.failures.push(Failure {
                index,
                detail: format!("expected {want}"),
                residual: got.to_string(),
            });
        }
        ok
    }

    /// Numeric check `|value| <= tol`.
    pub fn check_small(&mut self, index: i64, detail: impl Into<String>, value: f64, tol: f64) -> bool {
        self.indices_checked.push(index);
        let ok = value.abs() <= tol;
        if !ok {
            self.failures.push(Failure {
                index,
                detail: detail.into(),
                residual: format!("{value:e}"),
            });
        }
        ok
    }

    /// Records a check decided elsewhere.
    pub fn record(&mut self, index: i64, ok: bool, detail: impl Into<String>, residual: impl Into<String>) -> bool {
        self.indices_checked.push(index);
        if !ok {
            self.failures.push(Failure {
                index,
                detail: detail.into(),
                residual: residual.into(),
            });
        }
        ok
    }

    pub fn skip(&mut self, index: i64) {
        self.skipped.push(index);
    }

    /// One-line human summary.
    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{status} {:<28} checked={:<4} failures={}",
            self.identity,
            self.indices_checked.len(),
            self.failures.len()
        );
        if !self.skipped.is_empty() {
            line.push_str(&format!(" skipped={}", self.skipped.len()));
        }
        line
    }
}

pub fn all_passed<'a, I: IntoIterator<Item = &'a VerificationReport>>(reports: I) -> bool {
    reports.into_iter().all(VerificationReport::passed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Laurent;

    #[test]
    fn empty_report_does_not_pass() {
        let r = VerificationReport::exact("x", "x = x");
        assert!(!r.passed());
    }

    #[test]
    fn nonzero_residual_is_recorded() {
        let mut r = VerificationReport::exact("x", "x = x");
        assert!(r.check_zero(0, &Laurent::zero()));
        assert!(!r.check_zero(1, &Laurent::z_pow(2)));
        assert!(!r.passed());
        assert_eq!(r.failures[0].index, 1);
        assert_eq!(r.failures[0].residual, "z^2");
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["paper_ref"], "x = x");
        assert_eq!(json["indices_checked"], serde_json::json!([0, 1]));
    }

    #[test]
    fn numeric_check_uses_tolerance() {
        let mut r = VerificationReport::numeric("n", "|v| small");
        assert!(r.check_small(0, "", 1e-12, 1e-10));
        assert!(!r.check_small(1, "off", 1e-3, 1e-10));
        assert_eq!(r.failures.len(), 1);
    }
}
