//! Pluricomplex Green functions of the disc and the balls.
//!
//! With `φ_w` the involutive automorphism exchanging `0` and `w`,
//! `G(z, w) = log ‖φ_w(z)‖` and
//! `1 − ‖φ_w(z)‖² = (1 − |w|²)(1 − |z|²)/|1 − ⟨z, w⟩|²`.
//!
//! The sublevel set `{G(·, w) < −t}` is the image of the ball of radius
//! `ε = e^{−t}` under `φ_w`. In a frame where `w = (a, 0, …, 0)` it is the
//! ellipsoid
//!
//! ```text
//! |z₁ − c|²/R₁² + |z'|²/R₂² < 1,   A = 1 − a²ε²,
//! c = a(1 − ε²)/A,  R₁ = ε(1 − a²)/A,  R₂ = ε √(1 − a²)/√A.
//! ```

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{norm, DomainModel, UnitaryFrame};
use crate::kernel::KernelEvaluator;
use crate::polynomial::Polynomial;
use crate::report::VerificationReport;
use crate::tolerances;
use crate::C64;

const OPTIMIZER_STARTS: usize = 16;

fn inner(z: &[C64], w: &[C64]) -> C64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenEvaluator {
    pub domain: DomainModel,
    pub pole: Vec<C64>,
}

/// Sublevel set `{G(·, w) < −t}` as an ellipsoid in the frame of `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelEllipsoid {
    pub frame: UnitaryFrame,
    pub dim: usize,
    pub center: f64,
    pub r1: f64,
    pub r2: f64,
}

impl SublevelEllipsoid {
    /// Image of `y` in the unit ball under the affine chart.
    pub fn chart(&self, y: &[C64]) -> Vec<C64> {
        let mut local: Vec<C64> = y.iter().map(|c| c * self.r2).collect();
        local[0] = C64::new(self.center, 0.0) + y[0] * self.r1;
        self.frame.from_local(&local)
    }

    /// Real Jacobian of [`chart`](Self::chart).
    pub fn jacobian(&self) -> f64 {
        self.r1 * self.r1 * self.r2.powi(2 * (self.dim as i32 - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SublevelReport {
    pub t: f64,
    pub delta_w: f64,
    pub delta_min: f64,
    pub delta_max: f64,
    pub annulus_lo: f64,
    pub annulus_hi: f64,
    pub included: bool,
}

impl SublevelReport {
    /// Inclusion `annulus_lo ≤ δ ≤ annulus_hi` as a report; the margin is the
    /// smaller of the two gaps, relative to `δ(w)`.
    pub fn to_report(&self, domain: DomainModel, pole: &[C64]) -> VerificationReport {
        let lo_gap = (self.delta_min - self.annulus_lo) / self.delta_w;
        let hi_gap = (self.annulus_hi - self.delta_max) / self.delta_w;
        let (lhs, rhs, margin) = if lo_gap <= hi_gap {
            (self.delta_min, self.annulus_lo, lo_gap)
        } else {
            (self.delta_max, self.annulus_hi, hi_gap)
        };
        VerificationReport::new("prop3.2.inclusion", domain.to_string())
            .point("w", pole)
            .input("t", self.t)
            .input("delta_w", self.delta_w)
            .input("delta_min", self.delta_min)
            .input("delta_max", self.delta_max)
            .tolerance(tolerances::SUBLEVEL_INCLUSION)
            .sides(lhs, rhs, margin)
            .error_estimate(tolerances::SUBLEVEL_OPTIMIZER)
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("sublevel parameter t must be positive, got {t}")));
    }
    Ok(())
}

impl GreenEvaluator {
    pub fn new(domain: DomainModel, pole: &[C64]) -> Result<Self> {
        match domain.canonical() {
            DomainModel::UnitDisc | DomainModel::Ball(_) => {}
            other => {
                return Err(Error::Unsupported(format!(
                    "Green function is only available in closed form on disc and balls, not {other}"
                )))
            }
        }
        if !domain.contains(pole)? {
            return Err(Error::NotInterior { value: domain.defining_function(pole)? });
        }
        Ok(GreenEvaluator { domain, pole: pole.to_vec() })
    }

    pub fn dim(&self) -> usize {
        self.pole.len()
    }

    /// `φ_w(z) = −(P_w(z − w) + s_w Q_w(z − w)) / (1 − ⟨z, w⟩)`.
    pub fn automorphism(&self, z: &[C64]) -> Vec<C64> {
        let w = &self.pole;
        let diff: Vec<C64> = z.iter().zip(w).map(|(a, b)| a - b).collect();
        let denom = C64::new(1.0, 0.0) - inner(z, w);
        let ww = w.iter().map(|c| c.norm_sqr()).sum::<f64>();
        if ww == 0.0 {
            return z.iter().map(|c| -c).collect();
        }
        let s = (1.0 - ww).sqrt();
        let coef = inner(&diff, w) / ww;
        diff.iter()
            .zip(w)
            .map(|(d, wi)| {
                let p = coef * wi;
                -(p + (d - p) * s) / denom
            })
            .collect()
    }

    /// `1 − ‖φ_w(z)‖²`.
    fn one_minus_phi_sq(&self, z: &[C64]) -> f64 {
        let a = 1.0 - self.pole.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let nz = 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let b = (C64::new(1.0, 0.0) - inner(z, &self.pole)).norm_sqr();
        a * nz / b
    }

    /// `‖φ_w(z)‖²`, accurate both near the pole and near the boundary.
    pub fn phi_norm_sq(&self, z: &[C64]) -> f64 {
        let q = self.one_minus_phi_sq(z);
        if q < 0.5 {
            1.0 - q
        } else {
            self.automorphism(z).iter().map(|c| c.norm_sqr()).sum()
        }
    }

    pub fn green_eval(&self, z: &[C64]) -> Result<f64> {
        self.domain.check_dim(z)?;
        if !self.domain.contains(z)? {
            return Err(Error::NotInterior { value: self.domain.defining_function(z)? });
        }
        let q = self.one_minus_phi_sq(z);
        if q < 0.5 {
            return Ok(0.5 * (-q).ln_1p());
        }
        let phi = self.automorphism(z);
        let r = norm(&phi);
        if r == 0.0 {
            return Err(Error::InvalidArgument("Green function evaluated at its pole".into()));
        }
        Ok(r.ln())
    }

    /// Closed-form description of `{G(·, w) < −t}`.
    pub fn sublevel_ellipsoid(&self, t: f64) -> Result<SublevelEllipsoid> {
        check_t(t)?;
        let eps = (-t).exp();
        let a = norm(&self.pole);
        let big_a = 1.0 - a * a * eps * eps;
        Ok(SublevelEllipsoid {
            frame: UnitaryFrame::aligned_with(&self.pole),
            dim: self.dim(),
            center: a * (1.0 - eps * eps) / big_a,
            r1: eps * (1.0 - a * a) / big_a,
            r2: eps * (1.0 - a * a).sqrt() / big_a.sqrt(),
        })
    }

    /// Extremes of δ over the sublevel set `{G(·, w) < −t}` and the annulus
    /// test `(e^t−1)/(e^t+1)·δ(w) ≤ δ ≤ (e^t+1)/(e^t−1)·δ(w)`.
    pub fn sublevel_extremes(&self, t: f64) -> Result<SublevelReport> {
        check_t(t)?;
        let delta_w = self.domain.boundary_distance(&self.pole)?;
        let (norm_min, norm_max) = match self.domain.canonical() {
            DomainModel::UnitDisc => {
                let e = self.sublevel_ellipsoid(t)?;
                ((e.center - e.r1).max(0.0), e.center + e.r1)
            }
            _ => self.optimize_norm_extremes(t)?,
        };
        let delta_min = 1.0 - norm_max;
        let delta_max = 1.0 - norm_min;
        let et = t.exp();
        let annulus_lo = (et - 1.0) / (et + 1.0) * delta_w;
        let annulus_hi = (et + 1.0) / (et - 1.0) * delta_w;
        let slack = tolerances::SUBLEVEL_INCLUSION * delta_w;
        Ok(SublevelReport {
            t,
            delta_w,
            delta_min,
            delta_max,
            annulus_lo,
            annulus_hi,
            included: delta_min >= annulus_lo - slack && delta_max <= annulus_hi + slack,
        })
    }

    /// Real gradient of `g(z) = ‖φ_w(z)‖²`:
    /// `∇g = −(1 − |w|²)(−2zB + 2(1 − |z|²)(1 − s)w)/B²`, `s = ⟨z, w⟩`,
    /// `B = |1 − s|²`.
    fn grad_g(&self, z: &[C64]) -> Vec<C64> {
        let w = &self.pole;
        let a = 1.0 - w.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let n = 1.0 - z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let one_s = C64::new(1.0, 0.0) - inner(z, w);
        let b = one_s.norm_sqr();
        z.iter().zip(w).map(|(zi, wi)| -(zi * (-2.0 * b) + one_s * wi * (2.0 * n)) * a / (b * b)).collect()
    }

    /// Newton steps along `∇g` back onto `g = level`.
    fn retract(&self, z: &mut [C64], level: f64) {
        for _ in 0..60 {
            let g = self.phi_norm_sq(z);
            let r = g - level;
            if r.abs() <= 1e-16 * level.max(1e-300) {
                return;
            }
            let grad = self.grad_g(z);
            let gg: f64 = grad.iter().map(|c| c.norm_sqr()).sum();
            if gg == 0.0 {
                return;
            }
            for (zi, gi) in z.iter_mut().zip(&grad) {
                *zi -= gi * (r / gg);
            }
        }
    }

    /// Finite, strictly inside the unit ball and on the level set.
    fn on_level(&self, z: &[C64], level: f64) -> bool {
        let h: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        h.is_finite() && h < 1.0 && (self.phi_norm_sq(z) - level).abs() <= 1e-12 * level
    }

    /// Multistart projected gradient for the extremes of `‖z‖` on the level
    /// set `‖φ_w(z)‖ = ε`, each start finished by Newton on the Lagrange
    /// system.
    fn optimize_norm_extremes(&self, t: f64) -> Result<(f64, f64)> {
        let eps = (-t).exp();
        let level = eps * eps;
        let n = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_6e11);
        let mut starts: Vec<Vec<C64>> = Vec::with_capacity(OPTIMIZER_STARTS);
        for j in 0..n {
            for unit in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
                if starts.len() < OPTIMIZER_STARTS / 2 {
                    let mut u = vec![C64::new(0.0, 0.0); n];
                    u[j] = unit;
                    starts.push(u);
                }
            }
        }
        while starts.len() < OPTIMIZER_STARTS {
            let u: Vec<C64> =
                (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
            let r = norm(&u);
            if r > 1e-3 {
                starts.push(u.iter().map(|c| c / r).collect());
            }
        }
        let mut best_max = f64::NEG_INFINITY;
        let mut best_min = f64::INFINITY;
        for u in &starts {
            let z0 = self.automorphism(&u.iter().map(|c| c * eps).collect::<Vec<_>>());
            for sense in [1.0, -1.0] {
                let z = self.local_extreme(z0.clone(), level, sense);
                let h: f64 = z.iter().map(|c| c.norm_sqr()).sum();
                if sense > 0.0 {
                    best_max = best_max.max(h);
                } else {
                    best_min = best_min.min(h);
                }
            }
        }
        // The solid set contains the origin exactly when the pole is close
        // enough: then min ‖z‖ over the closure is 0.
        let w2: f64 = self.pole.iter().map(|c| c.norm_sqr()).sum();
        if w2 < level {
            best_min = 0.0;
        }
        if !(best_max.is_finite() && best_min.is_finite()) {
            return Err(Error::NonConvergence("sublevel optimizer produced non-finite extremes".into()));
        }
        Ok((best_min.sqrt(), best_max.sqrt()))
    }

    fn local_extreme(&self, mut z: Vec<C64>, level: f64, sense: f64) -> Vec<C64> {
        let h = |z: &[C64]| z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        self.retract(&mut z, level);
        let mut step = 0.1 * level.sqrt();
        for _ in 0..200 {
            let grad_g = self.grad_g(&z);
            let gg: f64 = grad_g.iter().map(|c| c.norm_sqr()).sum();
            let dot: f64 = z.iter().zip(&grad_g).map(|(a, b)| 2.0 * (a * b.conj()).re).sum();
            let p: Vec<C64> = z.iter().zip(&grad_g).map(|(zi, gi)| zi * 2.0 - gi * (dot / gg)).collect();
            let pn = norm(&p);
            if pn < 1e-15 {
                break;
            }
            let mut trial: Vec<C64> = z.iter().zip(&p).map(|(zi, pi)| zi + pi * (sense * step / pn)).collect();
            self.retract(&mut trial, level);
            if self.on_level(&trial, level) && sense * h(&trial) > sense * h(&z) {
                z = trial;
                step *= 1.5;
            } else {
                step *= 0.5;
                if step < 1e-14 {
                    break;
                }
            }
        }
        self.kkt_polish(z, level, sense)
    }

    /// Newton on `∇h − λ∇g = 0, g = level` in real coordinates, with the
    /// Hessian of `g` by central differences of the analytic gradient.
    fn kkt_polish(&self, z: Vec<C64>, level: f64, sense: f64) -> Vec<C64> {
        let n = self.dim();
        let m = 2 * n;
        let to_real = |v: &[C64]| -> Vec<f64> { v.iter().flat_map(|c| [c.re, c.im]).collect() };
        let to_complex = |x: &[f64]| -> Vec<C64> { x.chunks(2).map(|p| C64::new(p[0], p[1])).collect() };
        let h = |z: &[C64]| z.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let mut x = to_real(&z);
        let g0 = to_real(&self.grad_g(&z));
        let gg: f64 = g0.iter().map(|v| v * v).sum();
        let mut lambda = x.iter().zip(&g0).map(|(a, b)| 2.0 * a * b).sum::<f64>() / gg;
        let start = z.clone();
        for _ in 0..40 {
            let zc = to_complex(&x);
            let grad = to_real(&self.grad_g(&zc));
            let mut jac = DMatrix::<f64>::zeros(m + 1, m + 1);
            let mut rhs = DVector::<f64>::zeros(m + 1);
            let scale = x.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3);
            let hstep = 1e-6 * scale;
            for j in 0..m {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += hstep;
                xm[j] -= hstep;
                let gp = to_real(&self.grad_g(&to_complex(&xp)));
                let gm = to_real(&self.grad_g(&to_complex(&xm)));
                for i in 0..m {
                    let hg = (gp[i] - gm[i]) / (2.0 * hstep);
                    jac[(i, j)] = if i == j { 2.0 } else { 0.0 } - lambda * hg;
                }
                jac[(j, m)] = -grad[j];
                jac[(m, j)] = grad[j];
                rhs[j] = -(2.0 * x[j] - lambda * grad[j]);
            }
            rhs[m] = -(self.phi_norm_sq(&zc) - level);
            let Some(step) = jac.lu().solve(&rhs) else { break };
            let size = step.rows(0, m).norm();
            for j in 0..m {
                x[j] += step[j];
            }
            lambda += step[m];
            if !(x.iter().map(|v| v * v).sum::<f64>() < 1.0) {
                break;
            }
            if size < 1e-15 * scale {
                break;
            }
        }
        let mut polished = to_complex(&x);
        self.retract(&mut polished, level);
        if self.on_level(&polished, level) && sense * h(&polished) >= sense * h(&start) - 1e-15 {
            polished
        } else {
            start
        }
    }

    /// `∫_{G<−t} |f|² dV ≥ e^{−2nt} |f(w)|²/K(w, w)`.
    ///
    /// The left side is integrated on the sublevel ellipsoid through its
    /// affine chart from the unit ball, which is exact for polynomial `f`
    /// once the volume rule resolves degree `2 deg f`.
    pub fn herbort_check(&self, t: f64, f: &Polynomial, resolution: usize) -> Result<VerificationReport> {
        check_t(t)?;
        if f.dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: f.dim });
        }
        let n = self.dim();
        let unit = if n == 1 { DomainModel::UnitDisc } else { DomainModel::Ball(n) };
        let ell = self.sublevel_ellipsoid(t)?;
        let lhs_at = |res: usize| -> Result<f64> {
            let rule = unit.volume_rule(res)?;
            Ok(rule.integrate(|y| f.eval(&ell.chart(y)).norm_sqr())? * ell.jacobian())
        };
        let lhs = lhs_at(resolution)?;
        let lhs_fine = lhs_at(resolution + 2)?;
        let kd = KernelEvaluator::closed_form(self.domain).kernel_diag(&self.pole)?;
        let rhs = (-2.0 * n as f64 * t).exp() * f.eval(&self.pole).norm_sqr() / kd;
        Ok(VerificationReport::new("prop3.1.herbo1", self.domain.to_string())
            .point("w", &self.pole)
            .input("t", t)
            .input("deg", f.degree() as f64)
            .tolerance(tolerances::HERBORT * (1.0 + rhs.abs()))
            .at_least(lhs, rhs)
            .error_estimate((lhs - lhs_fine).abs()))
    }

    /// `K(w, w) ≥ e^{−2nt} K_{G<−t}(w, w)` on the disc, where the sublevel set
    /// is the Euclidean disc `D(c, R)` with kernel diagonal
    /// `R²/(π(R² − |w − c|²)²)`.
    pub fn sublevel_kernel_check(&self, t: f64) -> Result<VerificationReport> {
        check_t(t)?;
        if self.domain.canonical() != DomainModel::UnitDisc {
            return Err(Error::Unsupported(format!(
                "sublevel kernel comparison needs a disc sublevel set; {} is not supported",
                self.domain
            )));
        }
        // With ε = e^{−t}, s = |w|², A = 1 − sε²: R = ε(1 − s)/A and
        // R² − |w − c|² = ε²(1 − s)²/A. The factored form avoids the
        // cancellation of subtracting nearly equal squares near the boundary.
        let eps = (-t).exp();
        let s = self.pole[0].norm_sqr();
        let big_a = 1.0 - s * eps * eps;
        let r = eps * (1.0 - s) / big_a;
        let gap = eps * eps * (1.0 - s) * (1.0 - s) / big_a;
        let k_sub = r * r / (PI * gap * gap);
        let lhs = KernelEvaluator::closed_form(self.domain).kernel_diag(&self.pole)?;
        let rhs = (-2.0 * t).exp() * k_sub;
        Ok(VerificationReport::new("prop3.1.herbo2", self.domain.to_string())
            .point("w", &self.pole)
            .input("t", t)
            .tolerance(tolerances::SUBLEVEL_KERNEL * (1.0 + rhs.abs()))
            .at_least(lhs, rhs)
            .error_estimate(4.0 * f64::EPSILON * rhs.abs()))
    }
}

/// For each `δ(w)` in `deltas`, with `w = (1 − δ, 0, …)` and `t = 1`, the
/// smallest `C` with
/// `C^{−1} δ(w)|log δ(w)|^{−1} ≤ δ ≤ C δ(w)|log δ(w)|^n` on `{G < −1}`,
/// compared against `c`. The input `c_convex` is the same constant computed
/// from the annulus bounds alone.
pub fn log_inclusion_check(domain: DomainModel, deltas: &[f64], c: f64) -> Result<Vec<VerificationReport>> {
    let n = domain.complex_dim();
    deltas
        .iter()
        .map(|&delta| {
            if !(delta > 0.0 && delta < 1.0) {
                return Err(Error::InvalidArgument(format!("δ(w) must lie in (0, 1), got {delta}")));
            }
            let mut w = vec![C64::new(0.0, 0.0); n];
            w[0] = C64::new(1.0 - delta, 0.0);
            let g = GreenEvaluator::new(domain, &w)?;
            let rep = g.sublevel_extremes(1.0)?;
            let lg = delta.ln().abs();
            let lower = rep.delta_w / lg;
            let upper = rep.delta_w * lg.powi(n as i32);
            let c_emp = (lower / rep.delta_min).max(rep.delta_max / upper);
            let c_convex = (lower / rep.annulus_lo).max(rep.annulus_hi / upper);
            Ok(VerificationReport::new("prop3.2.log", domain.to_string())
                .input("delta_w", rep.delta_w)
                .input("t", 1.0)
                .input("c", c)
                .input("c_convex", c_convex)
                .at_most(c_emp, c))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn green_examples() {
        let g = GreenEvaluator::new(DomainModel::UnitDisc, &[c(0.0)]).unwrap();
        assert!((g.green_eval(&[c(0.5)]).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        let g = GreenEvaluator::new(DomainModel::Ball(2), &[c(0.0), c(0.0)]).unwrap();
        assert!((g.green_eval(&[c(0.3), c(0.4)]).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        let g = GreenEvaluator::new(DomainModel::UnitDisc, &[c(0.5)]).unwrap();
        assert!((g.green_eval(&[c(0.8)]).unwrap() - 0.5f64.ln()).abs() < 1e-15);
        assert!(g.green_eval(&[c(0.5)]).is_err());
        assert!(GreenEvaluator::new(DomainModel::Polydisc(2), &[c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn green_vanishes_at_boundary() {
        let g = GreenEvaluator::new(DomainModel::Ball(2), &[c(0.3), C64::new(0.0, 0.4)]).unwrap();
        let v = g.green_eval(&[c(0.0), C64::new(0.0, 1.0 - 1e-6)]).unwrap();
        assert!(v < 0.0 && v.abs() < 1e-5);
    }

    #[test]
    fn disc_sublevel_at_origin() {
        let g = GreenEvaluator::new(DomainModel::UnitDisc, &[c(0.0)]).unwrap();
        let r = g.sublevel_extremes(1.0).unwrap();
        assert!((r.delta_min - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert_eq!(r.delta_max, 1.0);
        assert!(r.included);
        assert!(g.sublevel_extremes(0.0).is_err());
    }

    #[test]
    fn herbort_equality_at_centre() {
        let g = GreenEvaluator::new(DomainModel::UnitDisc, &[c(0.0)]).unwrap();
        let f = Polynomial::constant(1, c(1.0));
        let r = g.herbort_check(1.0, &f, 8).unwrap();
        let expect = PI * (-2.0f64).exp();
        assert!((r.lhs - expect).abs() < 1e-14 && (r.rhs - expect).abs() < 1e-14);
        assert!(r.pass);
    }

    #[test]
    fn sublevel_kernel_equality_at_origin() {
        let g = GreenEvaluator::new(DomainModel::UnitDisc, &[c(0.0)]).unwrap();
        let r = g.sublevel_kernel_check(1.0).unwrap();
        assert!((r.lhs - 1.0 / PI).abs() < 1e-15 && r.margin.abs() < 1e-12 && r.pass);
        let b = GreenEvaluator::new(DomainModel::Ball(2), &[c(0.0), c(0.0)]).unwrap();
        assert!(matches!(b.sublevel_kernel_check(1.0), Err(Error::Unsupported(_))));
    }
}
