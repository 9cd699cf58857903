//! Radial integrals `∫₀¹ ρ^a (−log ρ)^b (1 − ρ)^c dρ`.
//!
//! With `s = −log ρ` and `v = (a + 1)s` the integral becomes
//!
//! ```text
//! (a+1)^{−(β+1)} ∫₀^∞ e^{−v} v^β φ(v/(a+1))^c dv,   β = b + c,
//! φ(s) = (1 − e^{−s})/s,
//! ```
//!
//! where `φ` is entire and positive on the real axis. The endpoint power
//! `v^β` on `[0, 1]` is folded into a Gauss–Jacobi rule; unit-width
//! Gauss–Legendre panels take over until the exponential tail is negligible.

use crate::error::{Error, Result};
use crate::quadrature::{gauss_jacobi, gauss_legendre, pairwise_sum};

/// Default points per panel.
pub const DEFAULT_RESOLUTION: usize = 24;

const MAX_PANELS: usize = 100_000;

/// `∫₀¹ ρ^a (−log ρ)^b (1 − ρ)^c dρ` with `resolution` nodes per panel.
pub fn radial_integral(a: f64, b: f64, c: f64, resolution: usize) -> Result<f64> {
    if !(a > -1.0) || !(b + c > -1.0) {
        return Err(Error::Divergent(format!(
            "∫ρ^a(−log ρ)^b(1−ρ)^c dρ needs a > −1 and b + c > −1 (a={a}, b={b}, c={c})"
        )));
    }
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::InvalidArgument("non-finite exponent".into()));
    }
    let beta = b + c;
    let scale = a + 1.0;
    let smooth = |v: f64| -> f64 {
        let s = v / scale;
        if c == 0.0 {
            return 1.0;
        }
        let phi = if s < 1e-300 { 1.0 } else { -(-s).exp_m1() / s };
        phi.powf(c)
    };

    // First panel [0, 1]: weight v^β is (1 + x)^β after v = (1 + x)/2.
    let gj = gauss_jacobi(resolution, 0.0, beta)?;
    let half_pow = 0.5f64.powf(beta + 1.0);
    let mut parts = Vec::new();
    let first: Vec<f64> = gj
        .nodes
        .iter()
        .zip(&gj.weights)
        .map(|(&x, &w)| {
            let v = 0.5 * (1.0 + x);
            w * half_pow * (-v).exp() * smooth(v)
        })
        .collect();
    parts.push(pairwise_sum(&first));

    let gl = gauss_legendre(resolution)?;
    let peak = beta.max(0.0);
    let mut lo = 1.0f64;
    let mut panels = 0;
    loop {
        let hi = lo + 1.0;
        let vals: Vec<f64> = gl
            .nodes
            .iter()
            .zip(&gl.weights)
            .map(|(&x, &w)| {
                let v = lo + 0.5 * (1.0 + x);
                0.5 * w * (beta * v.ln() - v).exp() * smooth(v)
            })
            .collect();
        let contribution = pairwise_sum(&vals);
        parts.push(contribution);
        lo = hi;
        panels += 1;
        let total: f64 = parts.iter().sum();
        if lo > peak + 40.0 && contribution.abs() <= 1e-20 * total.abs() {
            break;
        }
        if panels > MAX_PANELS {
            return Err(Error::NonConvergence(format!("radial tail did not decay (a={a}, b={b}, c={c})")));
        }
    }
    Ok(pairwise_sum(&parts) * scale.powf(-(beta + 1.0)))
}
