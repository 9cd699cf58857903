//! Boundary L² norms of `K(·, w)`, the ratio `δ(w)‖K(·,w)‖²_{∂Ω}/K(w,w)`,
//! and the checks that sit on top of them.
//!
//! Surface integrals run on an atlas graded toward the boundary point
//! nearest to `w`. The disc and balls are first rotated so that
//! `w = (|w|, 0, …, 0)`; the ellipsoid is reduced to `(|w₁|, |w₂|)` by its
//! torus symmetry. Phases the integrand then ignores are integrated exactly.

use std::f64::consts::{E, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{norm, BoundaryAtlas, DomainModel};
use crate::kernel::{closed_form, szego_diag, KernelEvaluator};
use crate::quadrature::graded_jacobi;
use crate::report::VerificationReport;
use crate::tolerances;
use crate::C64;

/// Default points per graded panel.
pub const DEFAULT_RESOLUTION: usize = 16;

/// `4en + 1`.
pub fn upper_constant(n: usize) -> f64 {
    4.0 * E * n as f64 + 1.0
}

/// Boundary integral at two resolutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNorm {
    /// Value at `2·resolution` points per panel.
    pub value: f64,
    /// Value at `resolution`.
    pub coarse: f64,
    pub err: f64,
}

fn reduce(d: DomainModel, w: &[C64]) -> Result<(Vec<C64>, Vec<usize>)> {
    let zero = C64::new(0.0, 0.0);
    match d.canonical() {
        DomainModel::UnitDisc | DomainModel::Ball(_) => {
            let mut local = vec![zero; w.len()];
            local[0] = C64::new(norm(w), 0.0);
            Ok((local, (1..w.len()).collect()))
        }
        DomainModel::Ellipsoid(_) => {
            let local: Vec<C64> = w.iter().map(|c| C64::new(c.norm(), 0.0)).collect();
            let invariant = (0..2).filter(|&j| w[j] == zero).collect();
            Ok((local, invariant))
        }
        other => Err(Error::Unsupported(format!("boundary integrals need a C² boundary; {other} has none"))),
    }
}

/// `∫_{∂Ω} |K(ζ, w)|² dσ(ζ)` with a resolution-doubling error estimate.
/// Fails when the two resolutions differ by more than
/// [`tolerances::SELF_CONVERGENCE`] relative.
pub fn boundary_norm_sq(d: DomainModel, w: &[C64], resolution: usize) -> Result<BoundaryNorm> {
    d.check_dim(w)?;
    let (local, invariant) = reduce(d, w)?;
    if !d.contains(w)? {
        return Err(Error::NotInterior { value: d.defining_function(w)? });
    }
    let delta = d.boundary_distance(&local)?;
    let focus = d.nearest_boundary_point(&local)?;
    let atlas = BoundaryAtlas::new(d, 8)?;
    let h0 = (0.5 * delta).min(0.25);
    let at = |per_panel: usize| -> Result<f64> {
        atlas
            .nodes_focused_reduced(&focus, h0, per_panel, &invariant)?
            .integrate(|z| closed_form(d, z, &local).norm_sqr())
    };
    let coarse = at(resolution)?;
    let value = at(2 * resolution)?;
    let err = (value - coarse).abs();
    if !(err <= tolerances::SELF_CONVERGENCE * value.abs()) {
        return Err(Error::NonConvergence(format!(
            "boundary integral changed by {err:e} (relative {:e}) under resolution doubling",
            err / value.abs()
        )));
    }
    Ok(BoundaryNorm { value, coarse, err })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub w: Vec<C64>,
    pub delta_w: f64,
    pub boundary_norm_sq: f64,
    pub diag: f64,
    /// `δ(w) ‖K(·,w)‖²_{∂Ω} / K(w,w)`.
    pub ratio: f64,
    /// The same ratio from the coarse boundary integral.
    pub ratio_coarse: f64,
    pub upper_bound: f64,
    pub pass_upper: bool,
    /// Running minimum of `ratio` along a sweep (the ratio itself for a
    /// single point).
    pub empirical_floor: f64,
    pub err: f64,
}

impl RatioReport {
    pub fn to_report(&self, d: DomainModel) -> VerificationReport {
        VerificationReport::new("thm1.upper", d.to_string())
            .point("w", &self.w)
            .input("delta_w", self.delta_w)
            .input("floor", self.empirical_floor)
            .at_most(self.ratio, self.upper_bound)
            .tolerance(tolerances::RATIO_UPPER)
            .error_estimate(self.err)
    }
}

pub fn ratio_r(d: DomainModel, w: &[C64], resolution: usize) -> Result<RatioReport> {
    let bn = boundary_norm_sq(d, w, resolution)?;
    let delta_w = d.boundary_distance(w)?;
    let diag = KernelEvaluator::closed_form(d).kernel_diag(w)?;
    let ratio = delta_w * bn.value / diag;
    let upper_bound = upper_constant(d.complex_dim());
    Ok(RatioReport {
        w: w.to_vec(),
        delta_w,
        boundary_norm_sq: bn.value,
        diag,
        ratio,
        ratio_coarse: delta_w * bn.coarse / diag,
        upper_bound,
        pass_upper: ratio <= upper_bound + tolerances::RATIO_UPPER,
        empirical_floor: ratio,
        err: delta_w * bn.err / diag,
    })
}

/// Ratio reports along a ray, ordered as the schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub domain: DomainModel,
    pub direction: Vec<C64>,
    pub reports: Vec<RatioReport>,
    pub floor: f64,
    /// Floor recomputed from the coarse boundary integrals.
    pub floor_coarse: f64,
}

impl Sweep {
    /// Floor positive and stable under resolution doubling: the margin is
    /// the smaller of the floor itself and the unused part of the
    /// [`tolerances::FLOOR_STABILITY`] band.
    pub fn floor_report(&self) -> VerificationReport {
        let drift = (self.floor / self.floor_coarse - 1.0).abs();
        let lo = self.reports.iter().map(|r| r.delta_w).fold(f64::INFINITY, f64::min);
        VerificationReport::new("thm1.floor", self.domain.to_string())
            .point("dir", &self.direction)
            .input("delta_min", lo)
            .input("points", self.reports.len() as f64)
            .sides(self.floor, self.floor_coarse, (tolerances::FLOOR_STABILITY - drift).min(self.floor))
    }

    pub fn verification_reports(&self) -> Vec<VerificationReport> {
        let mut out: Vec<VerificationReport> = self.reports.iter().map(|r| r.to_report(self.domain)).collect();
        out.push(self.floor_report());
        out
    }
}

/// Point on the ray `s ↦ s·u` at parameter `s* − δ`, with `s*` the exit
/// parameter.
pub fn ray_point(d: DomainModel, direction: &[C64], delta: f64) -> Result<Vec<C64>> {
    d.check_dim(direction)?;
    let len = norm(direction);
    if !(len > 0.0) {
        return Err(Error::InvalidArgument("ray direction must be non-zero".into()));
    }
    let u: Vec<C64> = direction.iter().map(|c| c / len).collect();
    let at = |s: f64| -> Vec<C64> { u.iter().map(|c| c * s).collect() };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while d.contains(&at(hi))? {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if d.contains(&at(mid))? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if !(delta > 0.0 && delta < lo) {
        return Err(Error::InvalidArgument(format!("δ = {delta} must lie in (0, {lo})")));
    }
    Ok(at(lo - delta))
}

/// Ratio reports for `w` on the ray toward `direction` at each `δ` of the
/// schedule. On the ellipsoid `δ` is capped below by
/// [`tolerances::ELLIPSOID_MIN_DELTA`].
pub fn theorem1_sweep(d: DomainModel, direction: &[C64], deltas: &[f64], resolution: usize) -> Result<Sweep> {
    if deltas.is_empty() {
        return Err(Error::InvalidArgument("empty δ schedule".into()));
    }
    if matches!(d.canonical(), DomainModel::Ellipsoid(_)) {
        if let Some(&bad) = deltas.iter().find(|&&x| x < tolerances::ELLIPSOID_MIN_DELTA) {
            return Err(Error::InvalidArgument(format!(
                "ellipsoid sweeps stop at δ = {}, got {bad}",
                tolerances::ELLIPSOID_MIN_DELTA
            )));
        }
    }
    let mut reports: Vec<RatioReport> = deltas
        .par_iter()
        .map(|&delta| ratio_r(d, &ray_point(d, direction, delta)?, resolution))
        .collect::<Result<_>>()?;
    let mut floor = f64::INFINITY;
    let mut floor_coarse = f64::INFINITY;
    for r in &mut reports {
        floor = floor.min(r.ratio);
        floor_coarse = floor_coarse.min(r.ratio_coarse);
        r.empirical_floor = floor;
    }
    Ok(Sweep { domain: d, direction: direction.to_vec(), reports, floor, floor_coarse })
}

/// `S(w,w)/K(w,w) ≥ δ(w)/(4en + 1)`.
pub fn szego_bergman_ratio(d: DomainModel, w: &[C64]) -> Result<VerificationReport> {
    let s = szego_diag(d, w)?;
    let k = KernelEvaluator::closed_form(d).kernel_diag(w)?;
    let delta = d.boundary_distance(w)?;
    Ok(VerificationReport::new("cor1.szego", d.to_string())
        .point("w", w)
        .input("delta_w", delta)
        .at_least(s / k, delta / upper_constant(d.complex_dim()))
        .tolerance(tolerances::SZEGO))
}

/// `(1 − r) ∫_𝔻 |K(z, w)|² (1 − |z|)^{−r} dV(z)`.
///
/// The angular integral is summed in closed form,
/// `∫|1 − aρe^{iθ}|^{−4} dθ = 2π(1 + y)/(1 − y)³` with `y = a²ρ²`; the
/// radial one carries the `(1 − ρ)^{−r}` endpoint in a Gauss–Jacobi panel.
pub fn hardy_weighted_integral(w: C64, r: f64, resolution: usize) -> Result<f64> {
    if !(r < 1.0) {
        return Err(Error::Divergent(format!("∫|K|²δ^{{−r}} diverges for r ≥ 1 (r = {r})")));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    let x = w.norm();
    if !(x < 1.0) {
        return Err(Error::NotInterior { value: x * x - 1.0 });
    }
    let h0 = (0.5 * (1.0 - x)).min(0.25);
    let rule = graded_jacobi(0.0, 1.0, -r, h0, resolution)?;
    let v = rule.integrate(|rho| {
        let y = x * x * rho * rho;
        rho * 2.0 * PI * (1.0 + y) / (1.0 - y).powi(3)
    })?;
    Ok((1.0 - r) * v / (PI * PI))
}

/// Polynomial extrapolation of `(xᵢ, yᵢ)` to `x = 0` (Neville).
fn extrapolate_to_zero(xs: &[f64], ys: &[f64]) -> f64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardySequence {
    pub w: C64,
    pub rs: Vec<f64>,
    pub values: Vec<f64>,
    pub extrapolated: f64,
    pub extrapolation_err: f64,
    pub boundary: BoundaryNorm,
    /// Whether the values increase with `r`.
    pub increasing: bool,
}

impl HardySequence {
    pub fn to_report(&self) -> VerificationReport {
        let rel = (self.extrapolated / self.boundary.value - 1.0).abs();
        let r_min = self.rs.iter().cloned().fold(f64::INFINITY, f64::min);
        let r_max = self.rs.iter().cloned().fold(0.0, f64::max);
        VerificationReport::new("lemma4.1", "disc")
            .point("w", &[self.w])
            .input("r_min", r_min)
            .input("r_max", r_max)
            .input("increasing", if self.increasing { 1.0 } else { 0.0 })
            .sides(self.extrapolated, self.boundary.value, -rel)
            .tolerance(tolerances::HARDY_IDENTITY)
            .error_estimate(self.extrapolation_err + self.boundary.err)
    }
}

/// `(1 − r) ∫|K(·,w)|² δ^{−r}` along `r → 1⁻`, extrapolated in `1 − r`
/// and compared with `∫_{∂𝔻} |K(·,w)|²`.
pub fn hardy_identity_check(w: C64, rs: &[f64], resolution: usize) -> Result<HardySequence> {
    if rs.len() < 2 {
        return Err(Error::InvalidArgument("extrapolation needs at least two values of r".into()));
    }
    let mut rs = rs.to_vec();
    rs.sort_by(|a, b| a.partial_cmp(b).expect("finite r"));
    rs.dedup();
    let values: Vec<f64> = rs.iter().map(|&r| hardy_weighted_integral(w, r, resolution)).collect::<Result<_>>()?;
    let eps: Vec<f64> = rs.iter().map(|r| 1.0 - r).collect();
    let extrapolated = extrapolate_to_zero(&eps, &values);
    let lower = extrapolate_to_zero(&eps[1..], &values[1..]);
    let boundary = boundary_norm_sq(DomainModel::UnitDisc, &[w], resolution)?;
    let increasing = values.windows(2).all(|p| p[1] >= p[0]);
    Ok(HardySequence {
        w,
        rs,
        values,
        extrapolated,
        extrapolation_err: (extrapolated - lower).abs(),
        boundary,
        increasing,
    })
}

/// Minimum of `g(t) = (e^t + 1) e^{2nt} / (e^t − 1)` over `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Infimum {
    pub n: usize,
    pub t_star: f64,
    pub value: f64,
    /// Stationary point from `e^{t} = (1 + √(1 + 4n²))/(2n)`.
    pub t_closed: f64,
    pub value_closed: f64,
    pub bound: f64,
}

fn infimum_objective(n: usize, t: f64) -> f64 {
    (t.exp() + 1.0) * (2.0 * n as f64 * t).exp() / t.exp_m1()
}

/// `(log g)'(t) = e^t/(e^t + 1) + 2n − e^t/(e^t − 1)`, increasing in `t`.
fn infimum_slope(n: usize, t: f64) -> f64 {
    1.0 / (1.0 + (-t).exp()) + 2.0 * n as f64 + 1.0 / (-t).exp_m1()
}

/// Bisection on the monotone derivative of `log g`.
pub fn infimum_constant(n: usize) -> Result<Infimum> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be ≥ 1".into()));
    }
    let (mut lo, mut hi) = (1e-12, 1.0);
    while infimum_slope(n, hi) < 0.0 {
        hi *= 2.0;
    }
    while hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if infimum_slope(n, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_star = 0.5 * (lo + hi);
    let nf = n as f64;
    let t_closed = ((1.0 + (1.0 + 4.0 * nf * nf).sqrt()) / (2.0 * nf)).ln();
    Ok(Infimum {
        n,
        t_star,
        value: infimum_objective(n, t_star),
        t_closed,
        value_closed: infimum_objective(n, t_closed),
        bound: upper_constant(n),
    })
}

impl Infimum {
    pub fn reports(&self) -> Vec<VerificationReport> {
        let nf = self.n as f64;
        let rel = (self.value / self.value_closed - 1.0).abs().max((self.t_star / self.t_closed - 1.0).abs());
        vec![
            VerificationReport::new("proof.infimum", "-")
                .input("n", nf)
                .input("t_star", self.t_star)
                .input("ratio_to_4en", self.value / (4.0 * E * nf))
                .at_most(self.value, self.bound),
            VerificationReport::new("proof.infimum.stationary", "-")
                .input("n", nf)
                .input("t_star", self.t_star)
                .input("t_closed", self.t_closed)
                .sides(self.value, self.value_closed, -rel)
                .tolerance(tolerances::INFIMUM_STATIONARY),
        ]
    }
}
