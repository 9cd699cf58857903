//! Weighted integrals of powers of the Bergman kernel on the disc and ball
//! and their growth exponents as the pole approaches the boundary.
//!
//! By unitary invariance `∫|K(z,w)|^p δ(w)^α dV(w)` depends only on
//! `x = ‖z‖`, so the pole is moved to `(x, 0, …, 0)`. With
//! `w₁ = R cos φ e^{iθ}` the ball measure is
//! `R^{2n−1} dR · cos φ sin^{2n−3} φ dφ dθ · |S^{2n−3}|`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{norm, DomainModel};
use crate::quadrature::{graded_jacobi, graded_panels, TensorRule};
use crate::report::VerificationReport;
use crate::special::{ln_beta, ln_factorial, ln_gamma};
use crate::tolerances;
use crate::C64;

const MAX_SERIES_TERMS: usize = 50_000_000;

fn ball_dim(d: DomainModel) -> Result<usize> {
    match d.canonical() {
        DomainModel::UnitDisc => Ok(1),
        DomainModel::Ball(n) => Ok(n),
        other => {
            Err(Error::Unsupported(format!("kernel power integrals are implemented for disc and ball, not {other}")))
        }
    }
}

/// `ln` of the ball kernel constant `n!/πⁿ`.
fn ln_kernel_const(n: usize) -> f64 {
    ln_factorial(n as u64) - n as f64 * PI.ln()
}

/// `|1 − a e^{iθ}|²` without cancellation near `a = 1, θ = 0`.
fn gap_sq(a: f64, theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    (1.0 - a) * (1.0 - a) + 4.0 * a * s * s
}

/// `∫_Ω |K(z,w)|^p δ(w)^α dV(w)` on the disc or ball by graded tensor
/// quadrature; `α > −1`.
pub fn kernel_power_integral(d: DomainModel, z: &[C64], p: f64, alpha: f64, resolution: usize) -> Result<f64> {
    let n = ball_dim(d)?;
    d.check_dim(z)?;
    if !(p > 0.0) || !(alpha > -1.0) {
        return Err(Error::InvalidArgument(format!("need p > 0 and α > −1 (p={p}, α={alpha})")));
    }
    if resolution < 4 {
        return Err(Error::InvalidArgument(format!("resolution must be ≥ 4, got {resolution}")));
    }
    let x = norm(z);
    if !(x < 1.0) {
        return Err(Error::NotInterior { value: x * x - 1.0 });
    }
    let h0 = (0.5 * (1.0 - x)).min(0.25);
    let power = -0.5 * (n as f64 + 1.0) * p;
    let scale = (p * ln_kernel_const(n)).exp();
    let radial = Arc::new(graded_jacobi(0.0, 1.0, alpha, h0, resolution)?);
    let theta = Arc::new(graded_panels(-PI, PI, 0.0, h0, resolution)?);
    if n == 1 {
        let rule = TensorRule::new(vec![radial, theta]);
        let v = rule.integrate(|u| u[0] * gap_sq(x * u[0], u[1]).powf(power))?;
        return Ok(scale * v);
    }
    let phi = Arc::new(graded_panels(0.0, PI / 2.0, 0.0, h0, resolution)?);
    let sphere = (2.0f64.ln() + (n as f64 - 1.0) * PI.ln() - ln_gamma(n as f64 - 1.0)).exp();
    let rule = TensorRule::new(vec![radial, phi, theta]);
    let v = rule.integrate(|u| {
        let (r, ph, th) = (u[0], u[1], u[2]);
        r.powi(2 * n as i32 - 1) * ph.cos() * ph.sin().powi(2 * n as i32 - 3) * gap_sq(x * r * ph.cos(), th).powf(power)
    })?;
    Ok(scale * sphere * v)
}

/// The same integral from the power series of `(1 − ⟨z,w⟩)^{−(n+1)p/2}`:
///
/// ```text
/// (n!/πⁿ)^p Σ_k ((s)_k/k!)² x^{2k} · 2πⁿ k!/(n−1+k)! · B(2n+2k, α+1),  s = (n+1)p/2.
/// ```
///
/// Returns the value and an estimate of the truncated tail.
pub fn kernel_power_series(d: DomainModel, x: f64, p: f64, alpha: f64) -> Result<(f64, f64)> {
    let n = ball_dim(d)?;
    if !(0.0..1.0).contains(&x) || !(p > 0.0) || !(alpha > -1.0) {
        return Err(Error::InvalidArgument(format!("need 0 ≤ x < 1, p > 0, α > −1 (x={x}, p={p}, α={alpha})")));
    }
    let nf = n as f64;
    let s = 0.5 * (nf + 1.0) * p;
    let beta = alpha + 1.0;
    let x2 = x * x;
    let ln_t0 = p * ln_kernel_const(n) + 2.0f64.ln() + nf * PI.ln() - ln_gamma(nf) + ln_beta(2.0 * nf, beta);
    let mut term = ln_t0.exp();
    // Neumaier summation.
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in 0..MAX_SERIES_TERMS {
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        let kf = k as f64;
        let a = 2.0 * nf + 2.0 * kf;
        let ratio = ((s + kf) / (kf + 1.0)).powi(2) * x2 * (kf + 1.0) / (nf + kf) * a * (a + 1.0)
            / ((a + beta) * (a + beta + 1.0));
        term *= ratio;
        let q = ratio.max(x2);
        if q < 1.0 {
            let tail = term / (1.0 - q);
            if tail <= 1e-17 * (sum + comp) || term == 0.0 {
                return Ok((sum + comp, tail));
            }
        }
    }
    Err(Error::NonConvergence(format!("kernel power series did not converge within {MAX_SERIES_TERMS} terms (x={x})")))
}

/// `∫_Ω |K(z,w)|² δ(w)^α dV(w)`, `α ≥ 0`.
pub fn weighted_square_integral(d: DomainModel, z: &[C64], alpha: f64, resolution: usize) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("α must be ≥ 0, got {alpha}")));
    }
    kernel_power_integral(d, z, 2.0, alpha, resolution)
}

/// `‖K(z,·)‖_{L^p(Ω)}`, `p > 1`.
pub fn kernel_lp_norm(d: DomainModel, z: &[C64], p: f64, resolution: usize) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidArgument(format!("p must exceed 1, got {p}")));
    }
    Ok(kernel_power_integral(d, z, p, 0.0, resolution)?.powf(1.0 / p))
}

/// Least-squares slope of `log value` against `log δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub alpha: f64,
    /// Kernel power: 2 for the weighted square integral, `p` for an `L^p` norm.
    pub p: f64,
    pub sample_deltas: Vec<f64>,
    pub sample_values: Vec<f64>,
    pub slope: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ExponentFit {
    fn new(alpha: f64, p: f64, deltas: Vec<f64>, values: Vec<f64>, expected: f64, tolerance: f64) -> Self {
        let slope = ls_slope(&deltas, &values);
        let pass = (slope - expected).abs() <= tolerance;
        ExponentFit { alpha, p, sample_deltas: deltas, sample_values: values, slope, expected, tolerance, pass }
    }

    pub fn to_report(&self, d: DomainModel) -> VerificationReport {
        let lo = self.sample_deltas.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self.sample_deltas.iter().cloned().fold(0.0, f64::max);
        VerificationReport::new("prop3.4.slope", d.to_string())
            .input("alpha", self.alpha)
            .input("p", self.p)
            .input("delta_min", lo)
            .input("delta_max", hi)
            .input("samples", self.sample_deltas.len() as f64)
            .sides(self.slope, self.expected, -(self.slope - self.expected).abs())
            .tolerance(self.tolerance)
    }
}

fn ls_slope(deltas: &[f64], values: &[f64]) -> f64 {
    let xs: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn check_schedule(deltas: &[f64]) -> Result<()> {
    let lo = deltas.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = deltas.iter().cloned().fold(0.0, f64::max);
    if deltas.len() < 3 || !(hi / lo >= 100.0 * (1.0 - 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "slope fit needs ≥ 3 samples spanning ≥ 2 decades of δ (got {} in [{lo}, {hi}])",
            deltas.len()
        )));
    }
    if deltas.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
        return Err(Error::InvalidArgument("δ samples must lie in (0, 1)".into()));
    }
    Ok(())
}

fn samples(d: DomainModel, deltas: &[f64], f: impl Fn(&[C64]) -> Result<f64> + Sync) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    let n = d.complex_dim();
    deltas
        .par_iter()
        .map(|&delta| {
            let mut z = vec![C64::new(0.0, 0.0); n];
            z[0] = C64::new(1.0 - delta, 0.0);
            f(&z)
        })
        .collect()
}

/// Growth exponent of `∫|K(z,w)|² δ^α(w) dV(w)` along `z = (1 − δ, 0, …)`.
///
/// Expected slope is `α − (n+1)` below `α = n + 1` and 0 above; the window
/// is [`tolerances::SLOPE`] widened by [`tolerances::SLOPE_LOG_ALLOWANCE`]
/// for `α > 0`, where the lower estimate carries a `|log δ|^{−α}` factor.
pub fn exponent_fit(d: DomainModel, alpha: f64, deltas: &[f64], resolution: usize) -> Result<ExponentFit> {
    let n = ball_dim(d)? as f64;
    check_schedule(deltas)?;
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("α must be ≥ 0, got {alpha}")));
    }
    let values = samples(d, deltas, |z| weighted_square_integral(d, z, alpha, resolution))?;
    let expected = if alpha < n + 1.0 { alpha - (n + 1.0) } else { 0.0 };
    let tolerance = tolerances::SLOPE + if alpha > 0.0 { tolerances::SLOPE_LOG_ALLOWANCE } else { 0.0 };
    Ok(ExponentFit::new(alpha, 2.0, deltas.to_vec(), values, expected, tolerance))
}

/// Growth exponent of `‖K(z,·)‖_{L^p}`; expected `−(n+1)(1 − 1/p)`.
pub fn lp_norm_fit(d: DomainModel, p: f64, deltas: &[f64], resolution: usize) -> Result<ExponentFit> {
    let n = ball_dim(d)? as f64;
    check_schedule(deltas)?;
    let values = samples(d, deltas, |z| kernel_lp_norm(d, z, p, resolution))?;
    let expected = -(n + 1.0) * (1.0 - 1.0 / p);
    Ok(ExponentFit::new(0.0, p, deltas.to_vec(), values, expected, tolerances::SLOPE))
}
