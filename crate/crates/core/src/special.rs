//! Log-space Gamma and Beta helpers.

use statrs::function::gamma;

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    gamma::gamma(x)
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

pub fn beta(a: f64, b: f64) -> f64 {
    ln_beta(a, b).exp()
}

/// ln n! for small non-negative integers, exact up to rounding.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_small_values() {
        assert!((beta(1.0, 1.0) - 1.0).abs() < 1e-14);
        assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-14);
        assert!((beta(0.5, 0.5) - std::f64::consts::PI).abs() < 1e-13);
    }

    #[test]
    fn gamma_half_integer() {
        let g = gamma(1.5);
        assert!((g - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((ln_factorial(10) - 3628800f64.ln()).abs() < 1e-12);
    }
}
