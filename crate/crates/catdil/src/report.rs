//! Named-residual reports emitted by every verifier.

use serde::Serialize;

/// A single named residual against its threshold.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Collection of residual checks; `pass` is the conjunction of the gating
/// checks (informational residuals may be recorded without gating).
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<ResidualCheck>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self {
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Record a residual that gates the overall verdict.
    pub fn gate(&mut self, name: &str, value: f64, threshold: f64) -> &mut Self {
        let pass = value < threshold;
        self.pass &= pass;
        self.checks.push(ResidualCheck {
            name: name.to_string(),
            value,
            threshold,
            pass,
        });
        self
    }

    /// Record a residual for diagnostics only.
    pub fn info(&mut self, name: &str, value: f64) -> &mut Self {
        self.checks.push(ResidualCheck {
            name: name.to_string(),
            value,
            threshold: f64::INFINITY,
            pass: true,
        });
        self
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.value)
    }

    /// Largest gated residual, for witness output.
    pub fn worst(&self) -> Option<&ResidualCheck> {
        self.checks
            .iter()
            .filter(|c| c.threshold.is_finite())
            .max_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
    }
}

impl Default for VerificationReport {
    fn default() -> Self {
        Self::new()
    }
}
