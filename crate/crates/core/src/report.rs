//! Structured outcome of one inequality check.

use serde::{Deserialize, Serialize};

/// One checked case: both sides of an inequality, the margin by which it
/// holds, and the tolerance that decides pass/fail.
///
/// `pass` is always `margin >= -tolerance`; constructors never set it
/// independently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statement_id: String,
    pub domain: String,
    /// Named scalar inputs in emission order.
    pub inputs: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Estimated numerical error of the computed sides.
    pub err: f64,
}

impl VerificationReport {
    pub fn new(statement_id: impl Into<String>, domain: impl Into<String>) -> Self {
        VerificationReport {
            statement_id: statement_id.into(),
            domain: domain.into(),
            inputs: Vec::new(),
            lhs: 0.0,
            rhs: 0.0,
            margin: 0.0,
            tolerance: 0.0,
            pass: true,
            err: 0.0,
        }
    }

    pub fn input(mut self, name: impl Into<String>, value: f64) -> Self {
        self.inputs.push((name.into(), value));
        self
    }

    /// Records `lhs ≥ rhs` style sides with an explicit margin.
    pub fn sides(mut self, lhs: f64, rhs: f64, margin: f64) -> Self {
        self.lhs = lhs;
        self.rhs = rhs;
        self.margin = margin;
        self.refresh();
        self
    }

    /// `lhs ≥ rhs`: margin `lhs − rhs`.
    pub fn at_least(self, lhs: f64, rhs: f64) -> Self {
        self.sides(lhs, rhs, lhs - rhs)
    }

    /// `lhs ≤ rhs`: margin `rhs − lhs`.
    pub fn at_most(self, lhs: f64, rhs: f64) -> Self {
        self.sides(lhs, rhs, rhs - lhs)
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.refresh();
        self
    }

    pub fn error_estimate(mut self, err: f64) -> Self {
        self.err = err;
        self
    }

    fn refresh(&mut self) {
        // NaN margins fail.
        self.pass = self.margin >= -self.tolerance;
    }

    /// Adds `{prefix}{j}_re` / `{prefix}{j}_im` entries for a complex point
    /// (1-based coordinate index; a one-dimensional point drops the index).
    pub fn point(mut self, prefix: &str, z: &[crate::C64]) -> Self {
        for (j, c) in z.iter().enumerate() {
            let tag = if z.len() == 1 { prefix.to_string() } else { format!("{prefix}{}", j + 1) };
            self.inputs.push((format!("{tag}_re"), c.re));
            self.inputs.push((format!("{tag}_im"), c.im));
        }
        self
    }

    pub fn input_value(&self, name: &str) -> Option<f64> {
        self.inputs.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}
