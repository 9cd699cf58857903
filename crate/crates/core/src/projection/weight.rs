//! Radial weights `e^ψ` on the unit disc.
//!
//! Every supported weight has the form `e^ψ = (−log ρ)^b (1 − ρ)^c`, so
//! products with the radial profiles of [`super::DiscFunction`] stay in the
//! same family and all integrals reduce to [`super::radial::radial_integral`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WeightSpec {
    /// `ψ = 0`.
    Flat,
    /// `ψ = −r log(−log ρ)`.
    LogLog(f64),
    /// `ψ = −r log δ` with `δ = 1 − ρ`.
    LogDelta(f64),
    /// `ψ = −(t/t′) log(−h)` with `h = −δ^{t′}`, i.e. `e^ψ = δ^{−t}` and
    /// curvature parameter `r = t/t′`. The disc has Diederich–Fornaess
    /// index 1, so any `0 < t < t′ ≤ 1` is admissible.
    DFIndex { t: f64, t_prime: f64 },
}

impl WeightSpec {
    pub fn log_log(r: f64) -> Result<Self> {
        check_r(r)?;
        Ok(WeightSpec::LogLog(r))
    }

    pub fn log_delta(r: f64) -> Result<Self> {
        check_r(r)?;
        Ok(WeightSpec::LogDelta(r))
    }

    pub fn df_index(t: f64, t_prime: f64) -> Result<Self> {
        if !(t > 0.0 && t < t_prime && t_prime <= 1.0) {
            return Err(Error::InvalidArgument(format!("DF-index weight needs 0 < t < t′ ≤ 1 (t={t}, t′={t_prime})")));
        }
        Ok(WeightSpec::DFIndex { t, t_prime })
    }

    /// Re-validates a deserialized weight.
    pub fn validate(self) -> Result<Self> {
        match self {
            WeightSpec::Flat => Ok(self),
            WeightSpec::LogLog(r) => Self::log_log(r),
            WeightSpec::LogDelta(r) => Self::log_delta(r),
            WeightSpec::DFIndex { t, t_prime } => Self::df_index(t, t_prime),
        }
    }

    /// Curvature parameter `r` in `r i∂∂̄ψ ≥ i∂ψ ∧ ∂̄ψ`.
    pub fn r(&self) -> f64 {
        match *self {
            WeightSpec::Flat => 0.0,
            WeightSpec::LogLog(r) | WeightSpec::LogDelta(r) => r,
            WeightSpec::DFIndex { t, t_prime } => t / t_prime,
        }
    }

    /// `1/(1 − r)`.
    pub fn bound(&self) -> f64 {
        1.0 / (1.0 - self.r())
    }

    /// `(b, c)` with `e^ψ = (−log ρ)^b (1 − ρ)^c`.
    pub fn exp_psi(&self) -> (f64, f64) {
        match *self {
            WeightSpec::Flat => (0.0, 0.0),
            WeightSpec::LogLog(r) => (-r, 0.0),
            WeightSpec::LogDelta(r) => (0.0, -r),
            WeightSpec::DFIndex { t, .. } => (0.0, -t),
        }
    }

    /// `(b, c)` with `e^{−ψ} = (−log ρ)^b (1 − ρ)^c`.
    pub fn exp_neg_psi(&self) -> (f64, f64) {
        let (b, c) = self.exp_psi();
        (-b, -c)
    }

    pub fn psi(&self, rho: f64) -> f64 {
        let (b, c) = self.exp_psi();
        let mut v = 0.0;
        if b != 0.0 {
            v += b * (-rho.ln()).ln();
        }
        if c != 0.0 {
            v += c * (1.0 - rho).ln();
        }
        v
    }

    /// `−e^{−ψ/r}` as a function of `ρ`; the curvature condition is
    /// equivalent to this being subharmonic. For `Flat` returns `ρ − 1`.
    ///
    /// * `LogLog(r)`: `log ρ`, harmonic off the origin with a log pole.
    /// * `LogDelta(r)`: `ρ − 1 = |z| − 1`.
    /// * `DFIndex`: `−(1 − ρ)^{t′}`, a convex increasing function of `|z|`
    ///   for `t′ ≤ 1`.
    pub fn exhaustion(&self, rho: f64) -> f64 {
        match *self {
            WeightSpec::Flat => rho - 1.0,
            WeightSpec::LogLog(_) => rho.ln(),
            WeightSpec::LogDelta(_) => rho - 1.0,
            WeightSpec::DFIndex { t_prime, .. } => -(1.0 - rho).powf(t_prime),
        }
    }

    /// Numeric tag for report inputs: 0 flat, 1 log-log, 2 log-δ, 3 index.
    pub fn code(&self) -> f64 {
        match self {
            WeightSpec::Flat => 0.0,
            WeightSpec::LogLog(_) => 1.0,
            WeightSpec::LogDelta(_) => 2.0,
            WeightSpec::DFIndex { .. } => 3.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            WeightSpec::Flat => "flat".into(),
            WeightSpec::LogLog(r) => format!("loglog({r})"),
            WeightSpec::LogDelta(r) => format!("logdelta({r})"),
            WeightSpec::DFIndex { t, t_prime } => format!("dfindex({t},{t_prime})"),
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!("weight parameter r must lie in (0, 1), got {r}")));
    }
    Ok(())
}
