//! Bergman and Szegő kernels.
//!
//! `ClosedForm` covers every model. For the ellipsoid
//! `{|z₁|² + |z₂|^{2m} < 1}` the closed form comes from summing the moment
//! series in `j` first:
//!
//! ```text
//! K = (1/(mπ²)) (1 − t₁)^{−2−1/m} [2/(1 − X)³ + (m − 1)/(1 − X)²],
//! t₁ = z₁w̄₁, t₂ = z₂w̄₂, X = t₂ (1 − t₁)^{−1/m}
//! ```
//!
//! with principal powers. `MomentSeries` sums `z^α w̄^α / c_α` directly and
//! refuses when its tail cannot be certified below `tail_tol`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::polynomial::Polynomial;
use crate::quadrature::pairwise_sum;
use crate::special::ln_gamma;
use crate::tolerances;
use crate::C64;

/// Hard cap on series terms before giving up on certification.
const MAX_SERIES_TERMS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelMode {
    ClosedForm,
    MomentSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEvaluator {
    pub domain: DomainModel,
    pub mode: KernelMode,
    /// Absolute truncation target for `MomentSeries`.
    pub tail_tol: f64,
}

fn hermitian(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

impl KernelEvaluator {
    pub fn new(domain: DomainModel, mode: KernelMode, tail_tol: f64) -> Result<Self> {
        if !(tail_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tail_tol must be positive, got {tail_tol}")));
        }
        Ok(KernelEvaluator { domain, mode, tail_tol })
    }

    pub fn closed_form(domain: DomainModel) -> Self {
        KernelEvaluator { domain, mode: KernelMode::ClosedForm, tail_tol: tolerances::TAIL_TOL }
    }

    pub fn moment_series(domain: DomainModel, tail_tol: f64) -> Result<Self> {
        Self::new(domain, KernelMode::MomentSeries, tail_tol)
    }

    fn check_points(&self, z: &[C64], w: &[C64]) -> Result<()> {
        for p in [z, w] {
            if !self.domain.contains(p)? {
                return Err(Error::NotInterior { value: self.domain.defining_function(p)? });
            }
        }
        Ok(())
    }

    /// K(z, w).
    pub fn bergman_eval(&self, z: &[C64], w: &[C64]) -> Result<C64> {
        self.check_points(z, w)?;
        match self.mode {
            KernelMode::ClosedForm => Ok(closed_form(self.domain, z, w)),
            KernelMode::MomentSeries => Ok(moment_series(self.domain, z, w, self.tail_tol)?.0),
        }
    }

    /// K(w, w) computed in real arithmetic.
    pub fn kernel_diag(&self, w: &[C64]) -> Result<f64> {
        self.check_points(w, w)?;
        match self.mode {
            KernelMode::ClosedForm => Ok(closed_form_diag(self.domain, w)),
            KernelMode::MomentSeries => Ok(moment_series(self.domain, w, w, self.tail_tol)?.0.re),
        }
    }

    /// Moment-series value together with its certified tail bound.
    pub fn series_with_bound(&self, z: &[C64], w: &[C64]) -> Result<(C64, f64)> {
        self.check_points(z, w)?;
        moment_series(self.domain, z, w, self.tail_tol)
    }

    /// `|∫_Ω K(z, w) p(w) dV(w) − p(z)|` on the tensor volume rule.
    pub fn reproduce_check(&self, p: &Polynomial, z: &[C64], resolution: usize) -> Result<f64> {
        self.domain.check_dim(z)?;
        if p.dim != self.domain.complex_dim() {
            return Err(Error::DimensionMismatch { expected: self.domain.complex_dim(), got: p.dim });
        }
        self.check_points(z, z)?;
        let rule = self.domain.volume_rule(resolution)?;
        let integral: C64 = match self.mode {
            KernelMode::ClosedForm => rule.integrate(|w| closed_form(self.domain, z, w) * p.eval(w))?,
            KernelMode::MomentSeries => {
                let values: Vec<Result<C64>> = (0..rule.len())
                    .map(|i| {
                        let w = rule.point(i);
                        Ok(moment_series(self.domain, z, w, self.tail_tol)?.0 * p.eval(w) * rule.weights[i])
                    })
                    .collect();
                let values: Vec<C64> = values.into_iter().collect::<Result<_>>()?;
                pairwise_sum(&values)
            }
        };
        Ok((integral - p.eval(z)).norm())
    }
}

fn ln_factorial(n: usize) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

pub(crate) fn closed_form(domain: DomainModel, z: &[C64], w: &[C64]) -> C64 {
    match domain.canonical() {
        DomainModel::UnitDisc => {
            let d = one() - z[0] * w[0].conj();
            (d * d).inv() / PI
        }
        DomainModel::Polydisc(_) => z
            .iter()
            .zip(w)
            .map(|(a, b)| {
                let d = one() - a * b.conj();
                (d * d).inv() / PI
            })
            .product(),
        DomainModel::Ball(n) => {
            let c = (ln_factorial(n) - n as f64 * PI.ln()).exp();
            (one() - hermitian(z, w)).powi(-(n as i32 + 1)) * c
        }
        DomainModel::Ellipsoid(m) => {
            let mf = m as f64;
            let t1 = z[0] * w[0].conj();
            let t2 = z[1] * w[1].conj();
            let base = one() - t1;
            let x = t2 * base.powf(-1.0 / mf);
            let bracket = (one() - x).powi(-3) * 2.0 + (one() - x).powi(-2) * (mf - 1.0);
            base.powf(-2.0 - 1.0 / mf) * bracket / (mf * PI * PI)
        }
    }
}

pub(crate) fn closed_form_diag(domain: DomainModel, w: &[C64]) -> f64 {
    match domain.canonical() {
        DomainModel::UnitDisc => {
            let d = 1.0 - w[0].norm_sqr();
            1.0 / (PI * d * d)
        }
        DomainModel::Polydisc(_) => w
            .iter()
            .map(|a| {
                let d = 1.0 - a.norm_sqr();
                1.0 / (PI * d * d)
            })
            .product(),
        DomainModel::Ball(n) => {
            let s: f64 = w.iter().map(|a| a.norm_sqr()).sum();
            (ln_factorial(n) - n as f64 * PI.ln() - (n as f64 + 1.0) * (1.0 - s).ln()).exp()
        }
        DomainModel::Ellipsoid(m) => {
            let mf = m as f64;
            let base = 1.0 - w[0].norm_sqr();
            let x = w[1].norm_sqr() * base.powf(-1.0 / mf);
            let bracket = 2.0 / (1.0 - x).powi(3) + (mf - 1.0) / (1.0 - x).powi(2);
            base.powf(-2.0 - 1.0 / mf) * bracket / (mf * PI * PI)
        }
    }
}

/// Multi-indices of total degree `d` in `n` variables, lexicographic.
fn multi_indices(n: usize, d: usize) -> Vec<Vec<i64>> {
    if n == 1 {
        return vec![vec![d as i64]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in multi_indices(n - 1, d - first) {
            rest.insert(0, first as i64);
            out.push(rest);
        }
    }
    out
}

fn series_term(domain: DomainModel, alpha: &[i64], t: &[C64]) -> Result<C64> {
    let ln_c = domain.ln_monomial_moment(alpha)?;
    let mono: C64 = alpha.iter().zip(t).map(|(&k, &tj)| tj.powu(k as u32)).product();
    Ok(mono * (-ln_c).exp())
}

/// Σ_α z^α w̄^α / c_α with a certified absolute tail bound.
///
/// Blocks of fixed total degree are bounded by majorants whose successive
/// ratios decrease in the degree, so once the ratio drops below one the
/// remaining tail is dominated by a geometric series.
fn moment_series(domain: DomainModel, z: &[C64], w: &[C64], tol: f64) -> Result<(C64, f64)> {
    let d = domain.canonical();
    let t: Vec<C64> = z.iter().zip(w).map(|(a, b)| a * b.conj()).collect();
    let rho: Vec<f64> = t.iter().map(|c| c.norm()).collect();
    match d {
        DomainModel::UnitDisc | DomainModel::Ball(_) | DomainModel::Polydisc(_) => {
            let n = d.complex_dim();
            let nf = n as f64;
            // Majorant of block d:
            //   ball:     (n!/πⁿ) C(n+d, n) ρ^d,       ρ = Σ ρ_j
            //   polydisc: π^{−n} C(d+2n−1, 2n−1) ρ^d,   ρ = max ρ_j
            let (ln_lead, shift, r) = match d {
                DomainModel::Polydisc(_) => (-nf * PI.ln(), 2 * n - 1, rho.iter().cloned().fold(0.0, f64::max)),
                _ => (ln_factorial(n) - nf * PI.ln(), n, rho.iter().sum::<f64>()),
            };
            let sf = shift as f64;
            let block = |deg: usize| -> f64 {
                let df = deg as f64;
                (ln_lead + ln_gamma(df + sf + 1.0) - ln_gamma(df + 1.0) - ln_gamma(sf + 1.0) + df * r.ln()).exp()
            };
            let ratio = |deg: usize| (deg as f64 + sf + 1.0) / (deg as f64 + 1.0) * r;
            if r == 0.0 {
                let zero = vec![0i64; n];
                return Ok((series_term(d, &zero, &t)?, 0.0));
            }
            let mut terms = Vec::new();
            let mut deg = 0usize;
            loop {
                for alpha in multi_indices(n, deg) {
                    terms.push(series_term(d, &alpha, &t)?);
                }
                deg += 1;
                let q = ratio(deg);
                if q < 1.0 {
                    let bound = block(deg) / (1.0 - q);
                    if bound <= tol {
                        return Ok((pairwise_sum(&terms), bound));
                    }
                }
                if terms.len() > MAX_SERIES_TERMS {
                    let q = q.min(1.0 - 1e-300);
                    return Err(Error::TailNotCertified { bound: block(deg) / (1.0 - q), tol, terms: terms.len() });
                }
            }
        }
        DomainModel::Ellipsoid(m) => ellipsoid_series(d, m, &t, &rho, tol),
    }
}

/// Ellipsoid series, outer sum over the z₂-degree `k`, inner over `j`.
///
/// For fixed `k` with `a = (k+1)/m` the absolute terms are
/// `(m/π²) a(a+1) (a+2)_j/j! ρ₁^j ρ₂^k`, whose full `j`-sum is
/// `B_k = (m/π²) a(a+1) (1 − ρ₁)^{−(a+2)} ρ₂^k`.
fn ellipsoid_series(d: DomainModel, m: u32, t: &[C64], rho: &[f64], tol: f64) -> Result<(C64, f64)> {
    let mf = m as f64;
    let (r1, r2) = (rho[0], rho[1]);
    let lead = (mf / (PI * PI)).ln();
    let ln_block = |k: usize| {
        let a = (k as f64 + 1.0) / mf;
        lead + (a * (a + 1.0)).ln() - (a + 2.0) * (1.0 - r1).ln() + if k == 0 { 0.0 } else { k as f64 * r2.ln() }
    };
    let outer_ratio = |k: usize| -> f64 {
        if r2 == 0.0 {
            return 0.0;
        }
        (ln_block(k + 1) - ln_block(k)).exp()
    };
    let mut terms: Vec<C64> = Vec::new();
    let mut inner_total = 0.0;
    let mut k = 0usize;
    loop {
        let a = (k as f64 + 1.0) / mf;
        let inner_tol = 0.5 * tol * 0.5f64.powi(k.min(1000) as i32 + 1);
        let ln_t0 = lead + (a * (a + 1.0)).ln() + if k == 0 { 0.0 } else { k as f64 * r2.ln() };
        let mut j = 0usize;
        loop {
            terms.push(series_term(d, &[j as i64, k as i64], t)?);
            j += 1;
            if r1 == 0.0 {
                break;
            }
            let q = (a + 2.0 + j as f64) / (j as f64 + 1.0) * r1;
            if q < 1.0 {
                // T_j = T_0 (a+2)_j/j! ρ₁^j.
                let ln_tj = ln_t0 + ln_gamma(a + 2.0 + j as f64) - ln_gamma(a + 2.0) - ln_gamma(j as f64 + 1.0)
                    + j as f64 * r1.ln();
                let bound = ln_tj.exp() / (1.0 - q);
                if bound <= inner_tol {
                    inner_total += bound;
                    break;
                }
            }
            if terms.len() > MAX_SERIES_TERMS {
                return Err(Error::TailNotCertified { bound: f64::INFINITY, tol, terms: terms.len() });
            }
        }
        k += 1;
        let q = outer_ratio(k);
        if r2 == 0.0 {
            return Ok((pairwise_sum(&terms), inner_total));
        }
        if q < 1.0 {
            let bound = ln_block(k).exp() / (1.0 - q);
            if bound <= 0.5 * tol {
                return Ok((pairwise_sum(&terms), bound + inner_total));
            }
        }
        if terms.len() > MAX_SERIES_TERMS {
            return Err(Error::TailNotCertified { bound: ln_block(k).exp(), tol, terms: terms.len() });
        }
    }
}

/// Szegő kernel S(z, w) of the disc or a ball.
pub fn szego_eval(domain: DomainModel, z: &[C64], w: &[C64]) -> Result<C64> {
    for p in [z, w] {
        if !domain.contains(p)? {
            return Err(Error::NotInterior { value: domain.defining_function(p)? });
        }
    }
    match domain.canonical() {
        DomainModel::UnitDisc => Ok((one() - z[0] * w[0].conj()).inv() / (2.0 * PI)),
        DomainModel::Ball(n) => {
            let c = (ln_factorial(n - 1) - (2.0f64).ln() - n as f64 * PI.ln()).exp();
            Ok((one() - hermitian(z, w)).powi(-(n as i32)) * c)
        }
        other => Err(Error::Unsupported(format!("Szegő kernel is only implemented on disc and balls, not {other}"))),
    }
}

/// S(w, w) in real arithmetic.
pub fn szego_diag(domain: DomainModel, w: &[C64]) -> Result<f64> {
    if !domain.contains(w)? {
        return Err(Error::NotInterior { value: domain.defining_function(w)? });
    }
    let s: f64 = w.iter().map(|a| a.norm_sqr()).sum();
    match domain.canonical() {
        DomainModel::UnitDisc => Ok(1.0 / (2.0 * PI * (1.0 - s))),
        DomainModel::Ball(n) => {
            Ok((ln_factorial(n - 1) - (2.0f64).ln() - n as f64 * PI.ln() - n as f64 * (1.0 - s).ln()).exp())
        }
        other => Err(Error::Unsupported(format!("Szegő kernel is only implemented on disc and balls, not {other}"))),
    }
}
