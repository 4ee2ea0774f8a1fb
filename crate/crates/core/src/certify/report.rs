use serde::{Deserialize, Serialize};

/// Outcome of one certificate check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub check: String,
    pub holds: bool,
    /// Index of the first violated instance, if any.
    pub first_violation: Option<usize>,
    /// Smallest `lhs − rhs` observed; negative beyond the tolerance means failure.
    pub margin: f64,
    pub checked: usize,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl CertificateReport {
    pub fn new(check: &str) -> Self {
        CertificateReport {
            check: check.to_string(),
            holds: true,
            first_violation: None,
            margin: f64::INFINITY,
            checked: 0,
            details: serde_json::Value::Null,
        }
    }

    /// Records one instance `slack ≥ −tol` at index `k`.
    pub fn observe(&mut self, k: usize, slack: f64, tol: f64) {
        self.checked += 1;
        self.margin = self.margin.min(slack);
        if !(slack >= -tol) && self.first_violation.is_none() {
            self.holds = false;
            self.first_violation = Some(k);
        }
    }
}
