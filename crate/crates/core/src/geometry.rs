//! Model domains: membership, boundary distance, boundary atlases with
//! surface measure, volume rules and monomial moments.
//!
//! All four models are complete Reinhardt domains, so most quantities depend
//! only on the moduli `|z_j|`. [`DomainModel::canonical`] folds the
//! coincident models (`Ball(1)` is the disc, `Ellipsoid(1)` is `Ball(2)`)
//! before dispatch so that aliases give bit-identical answers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    gauss_legendre, graded_panels, pairwise_sum, periodic_trapezoid, QuadratureRule, Scalar, Support,
};
use crate::special::{ln_beta, ln_gamma};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DomainModel {
    UnitDisc,
    Polydisc(usize),
    Ball(usize),
    /// `{|z₁|² + |z₂|^{2m} < 1}` in ℂ².
    Ellipsoid(u32),
}

impl fmt::Display for DomainModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainModel::UnitDisc => write!(f, "disc"),
            DomainModel::Polydisc(n) => write!(f, "polydisc{n}"),
            DomainModel::Ball(n) => write!(f, "ball{n}"),
            DomainModel::Ellipsoid(m) => write!(f, "ellipsoid{m}"),
        }
    }
}

impl FromStr for DomainModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let parse_index = |rest: &str| -> Result<usize> {
            rest.parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::InvalidArgument(format!("bad domain index in '{s}'")))
        };
        if s == "disc" || s == "unitdisc" {
            Ok(DomainModel::UnitDisc)
        } else if let Some(rest) = s.strip_prefix("polydisc") {
            Ok(DomainModel::Polydisc(parse_index(rest)?))
        } else if let Some(rest) = s.strip_prefix("ball") {
            Ok(DomainModel::Ball(parse_index(rest)?))
        } else if let Some(rest) = s.strip_prefix("ellipsoid") {
            Ok(DomainModel::Ellipsoid(parse_index(rest)? as u32))
        } else {
            Err(Error::InvalidArgument(format!(
                "unknown domain '{s}' (expected disc, polydisc<n>, ball<n>, ellipsoid<m>)"
            )))
        }
    }
}

impl TryFrom<String> for DomainModel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<DomainModel> for String {
    fn from(d: DomainModel) -> String {
        d.to_string()
    }
}

/// Moduli `(x, y) = (|z₁|, |z₂|)` of the nearest boundary point of an
/// ellipsoid, with the distance to it.
#[derive(Debug, Clone, Copy, PartialEq)]
struct EllipsoidFoot {
    x: f64,
    y: f64,
    dist: f64,
}

impl DomainModel {
    /// Representative of the alias class.
    pub fn canonical(self) -> DomainModel {
        match self {
            DomainModel::Ball(1) | DomainModel::Polydisc(1) => DomainModel::UnitDisc,
            DomainModel::Ellipsoid(1) => DomainModel::Ball(2),
            other => other,
        }
    }

    pub fn complex_dim(&self) -> usize {
        match self.canonical() {
            DomainModel::UnitDisc => 1,
            DomainModel::Polydisc(n) | DomainModel::Ball(n) => n,
            DomainModel::Ellipsoid(_) => 2,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.canonical() {
            DomainModel::Polydisc(n) => 2.0 * (n as f64).sqrt(),
            _ => 2.0,
        }
    }

    /// Whether the boundary is C² (the models admitted for surface work).
    pub fn has_smooth_boundary(&self) -> bool {
        !matches!(self.canonical(), DomainModel::Polydisc(_))
    }

    pub(crate) fn check_dim(&self, z: &[C64]) -> Result<()> {
        let expected = self.complex_dim();
        if z.len() != expected {
            return Err(Error::DimensionMismatch { expected, got: z.len() });
        }
        Ok(())
    }

    /// Value of the defining function; negative exactly on the domain.
    pub fn defining_function(&self, z: &[C64]) -> Result<f64> {
        self.check_dim(z)?;
        Ok(match self.canonical() {
            DomainModel::UnitDisc | DomainModel::Ball(_) => z.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0,
            DomainModel::Polydisc(_) => z.iter().map(|c| c.norm()).fold(0.0, f64::max) - 1.0,
            DomainModel::Ellipsoid(m) => z[0].norm_sqr() + z[1].norm_sqr().powi(m as i32) - 1.0,
        })
    }

    pub fn contains(&self, z: &[C64]) -> Result<bool> {
        Ok(self.defining_function(z)? < 0.0)
    }

    fn require_interior(&self, z: &[C64]) -> Result<()> {
        let value = self.defining_function(z)?;
        if value < 0.0 {
            Ok(())
        } else {
            Err(Error::NotInterior { value })
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, z: &[C64]) -> Result<f64> {
        self.require_interior(z)?;
        Ok(match self.canonical() {
            DomainModel::UnitDisc | DomainModel::Ball(_) => 1.0 - norm(z),
            DomainModel::Polydisc(_) => z.iter().map(|c| 1.0 - c.norm()).fold(f64::INFINITY, f64::min),
            DomainModel::Ellipsoid(m) => ellipsoid_foot(m, z[0].norm(), z[1].norm()).dist,
        })
    }

    /// A boundary point realizing [`boundary_distance`](Self::boundary_distance).
    pub fn nearest_boundary_point(&self, z: &[C64]) -> Result<Vec<C64>> {
        self.require_interior(z)?;
        let phase = |c: C64| if c.norm() > 0.0 { c / c.norm() } else { C64::new(1.0, 0.0) };
        Ok(match self.canonical() {
            DomainModel::UnitDisc | DomainModel::Ball(_) => {
                let r = norm(z);
                if r == 0.0 {
                    let mut p = vec![C64::new(0.0, 0.0); z.len()];
                    p[0] = C64::new(1.0, 0.0);
                    p
                } else {
                    z.iter().map(|c| c / r).collect()
                }
            }
            DomainModel::Polydisc(_) => {
                let (j, _) = z
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).expect("finite"))
                    .expect("non-empty point");
                let mut p = z.to_vec();
                p[j] = phase(z[j]);
                p
            }
            DomainModel::Ellipsoid(m) => {
                let foot = ellipsoid_foot(m, z[0].norm(), z[1].norm());
                vec![phase(z[0]) * foot.x, phase(z[1]) * foot.y]
            }
        })
    }

    /// Natural log of `c_α = ∫_Ω |z^α|² dV`.
    pub fn ln_monomial_moment(&self, alpha: &[i64]) -> Result<f64> {
        if alpha.len() != self.complex_dim() {
            return Err(Error::DimensionMismatch { expected: self.complex_dim(), got: alpha.len() });
        }
        if let Some(&k) = alpha.iter().find(|&&k| k < 0) {
            return Err(Error::InvalidArgument(format!("negative monomial index {k}")));
        }
        let a: Vec<f64> = alpha.iter().map(|&k| k as f64).collect();
        Ok(match self.canonical() {
            DomainModel::UnitDisc | DomainModel::Ball(_) => {
                let n = a.len() as f64;
                let total: f64 = a.iter().sum();
                n * PI.ln() + a.iter().map(|&k| ln_gamma(k + 1.0)).sum::<f64>() - ln_gamma(n + total + 1.0)
            }
            DomainModel::Polydisc(_) => a.iter().map(|&k| PI.ln() - (k + 1.0).ln()).sum(),
            DomainModel::Ellipsoid(m) => {
                let (j, k, m) = (a[0], a[1], m as f64);
                (4.0 * PI * PI).ln() - (2.0 * j + 2.0).ln() - (2.0 * m).ln() + ln_beta((k + 1.0) / m, j + 2.0)
            }
        })
    }

    pub fn monomial_moment(&self, alpha: &[i64]) -> Result<f64> {
        Ok(self.ln_monomial_moment(alpha)?.exp())
    }

    pub fn volume(&self) -> f64 {
        let zero = vec![0i64; self.complex_dim()];
        self.monomial_moment(&zero).expect("origin moment is always defined")
    }

    pub fn boundary_atlas(&self, resolution: usize) -> Result<BoundaryAtlas> {
        BoundaryAtlas::new(*self, resolution)
    }

    /// Tensor volume rule built from the Reinhardt structure: a rule on the
    /// modulus region times `resolution` trapezoid nodes per angle.
    pub fn volume_rule(&self, resolution: usize) -> Result<PointSet> {
        if resolution < 2 {
            return Err(Error::InvalidArgument("volume rule needs resolution ≥ 2".into()));
        }
        let moduli: Vec<(Vec<f64>, f64)> = match self.canonical() {
            DomainModel::UnitDisc | DomainModel::Ball(_) => {
                let n = self.complex_dim();
                let radial = gauss_legendre(resolution)?.on_interval(0.0, 1.0);
                let sphere = sphere_modulus_rule(n, resolution)?;
                let mut out = Vec::new();
                for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                    for (dir, ws) in &sphere {
                        let m: Vec<f64> = dir.iter().map(|d| r * d).collect();
                        // dV = R^{2n−1} dR dσ; the torus factor Π r_j is in `ws`.
                        out.push((m, wr * ws * r.powi(2 * n as i32 - 1)));
                    }
                }
                out
            }
            DomainModel::Polydisc(n) => {
                let radial = gauss_legendre(resolution)?.on_interval(0.0, 1.0);
                let mut out = vec![(Vec::new(), 1.0)];
                for _ in 0..n {
                    let mut next = Vec::with_capacity(out.len() * radial.len());
                    for (m, w) in &out {
                        for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
                            let mut m2 = m.clone();
                            m2.push(r);
                            next.push((m2, w * wr * r));
                        }
                    }
                    out = next;
                }
                out
            }
            DomainModel::Ellipsoid(m) => {
                let gl = gauss_legendre(resolution)?;
                let outer = gl.on_interval(0.0, 1.0);
                let mut out = Vec::new();
                for (&r2, &w2) in outer.nodes.iter().zip(&outer.weights) {
                    let top = (1.0 - r2.powi(2 * m as i32)).max(0.0).sqrt();
                    let inner = gl.on_interval(0.0, top);
                    for (&r1, &w1) in inner.nodes.iter().zip(&inner.weights) {
                        out.push((vec![r1, r2], w1 * w2 * r1 * r2));
                    }
                }
                out
            }
        };
        let n = self.complex_dim();
        let angles = periodic_trapezoid(resolution)?;
        Ok(PointSet::torus_product(n, &moduli, &angles))
    }
}

pub(crate) fn norm(z: &[C64]) -> f64 {
    z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Nodes on the positive part of the unit sphere `S^{n−1}` in modulus space,
/// weighted by `Π r_j` times the hyperspherical Jacobian, so that summing
/// against `(2π)^n` angles integrates over `S^{2n−1}`.
fn sphere_modulus_rule(n: usize, resolution: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    if n == 1 {
        return Ok(vec![(vec![1.0], 1.0)]);
    }
    let phi = gauss_legendre(resolution)?.on_interval(0.0, PI / 2.0);
    let mut out = Vec::new();
    let count = phi.len().pow(n as u32 - 1);
    for flat in 0..count {
        let mut idx = flat;
        let mut angles = vec![0.0; n - 1];
        let mut w = 1.0;
        for a in angles.iter_mut().rev() {
            let i = idx % phi.len();
            idx /= phi.len();
            *a = phi.nodes[i];
            w *= phi.weights[i];
        }
        let (m, jac) = hyperspherical(&angles);
        out.push((m, w * jac));
    }
    Ok(out)
}

/// Moduli `r ∈ S^{n−1}_+` from `n − 1` angles, and the density
/// `Π r_j · Π_k sin^{n−1−k} φ_k` of the surface measure of `S^{2n−1}`.
fn hyperspherical(angles: &[f64]) -> (Vec<f64>, f64) {
    let n = angles.len() + 1;
    let mut r = Vec::with_capacity(n);
    let mut s = 1.0;
    let mut jac = 1.0;
    for (k, &phi) in angles.iter().enumerate() {
        r.push(s * phi.cos());
        jac *= phi.sin().powi((n - 2 - k) as i32);
        s *= phi.sin();
    }
    r.push(s);
    let torus: f64 = r.iter().product();
    (r, jac * torus)
}

/// Flat list of points in ℂⁿ with positive weights.
#[derive(Debug, Clone)]
pub struct PointSet {
    pub dim: usize,
    pub coords: Vec<C64>,
    pub weights: Vec<f64>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[C64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn torus_product(n: usize, moduli: &[(Vec<f64>, f64)], angles: &QuadratureRule) -> PointSet {
        let na = angles.len();
        let per = na.pow(n as u32);
        let mut coords = Vec::with_capacity(moduli.len() * per * n);
        let mut weights = Vec::with_capacity(moduli.len() * per);
        for (m, w) in moduli {
            for flat in 0..per {
                let mut idx = flat;
                let mut wt = *w;
                let start = coords.len();
                coords.resize(start + n, C64::new(0.0, 0.0));
                for j in (0..n).rev() {
                    let i = idx % na;
                    idx /= na;
                    coords[start + j] = C64::from_polar(m[j], angles.nodes[i]);
                    wt *= angles.weights[i];
                }
                weights.push(wt);
            }
        }
        PointSet { dim: n, coords, weights }
    }

    /// `Σ wᵢ f(zᵢ)` with parallel evaluation and fixed-order reduction.
    pub fn integrate<T: Scalar>(&self, f: impl Fn(&[C64]) -> T + Sync) -> Result<T> {
        let values: Vec<T> = (0..self.len()).into_par_iter().map(|i| f(self.point(i)) * self.weights[i]).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite_value()) {
            let node = self.point(i).iter().flat_map(|c| [c.re, c.im]).collect();
            return Err(Error::NonFinite { node });
        }
        Ok(pairwise_sum(&values))
    }
}

/// Orthonormal frame of ℂⁿ whose first vector is `w/‖w‖`.
///
/// `to_local(w) = (‖w‖, 0, …, 0)`; used to exploit unitary invariance of
/// the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryFrame {
    basis: Vec<Vec<C64>>,
}

impl UnitaryFrame {
    pub fn aligned_with(w: &[C64]) -> Self {
        let n = w.len();
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
        let r = norm(w);
        if r > 0.0 {
            basis.push(w.iter().map(|c| c / r).collect());
        }
        // Gram–Schmidt on the standard basis, twice for stability.
        for j in 0..n {
            if basis.len() == n {
                break;
            }
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[j] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in &basis {
                    let proj: C64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= proj * bi;
                    }
                }
            }
            let len = norm(&v);
            if len > 1e-8 {
                basis.push(v.iter().map(|c| c / len).collect());
            }
        }
        UnitaryFrame { basis }
    }

    /// Coordinates `⟨z, b_k⟩`.
    pub fn to_local(&self, z: &[C64]) -> Vec<C64> {
        self.basis.iter().map(|b| z.iter().zip(b).map(|(zi, bi)| zi * bi.conj()).sum()).collect()
    }

    pub fn from_local(&self, y: &[C64]) -> Vec<C64> {
        let n = y.len();
        let mut z = vec![C64::new(0.0, 0.0); n];
        for (yk, b) in y.iter().zip(&self.basis) {
            for (zi, bi) in z.iter_mut().zip(b) {
                *zi += yk * bi;
            }
        }
        z
    }
}

// ---------------------------------------------------------------------------
// Ellipsoid profile curve x² + y^{2m} = 1 in the modulus quadrant.
//
// Two charts split at the locus x = y so that each stays away from the
// vertical tangent of the other:
//   chart Y: y = s ∈ [0, s_c], x = (1 − s^{2m})^{1/2}
//   chart X: x = u ∈ [0, s_c], y = (1 − u²)^{1/(2m)}

/// Value and first two derivatives of `(1 − t^k)^p` in `t`.
fn power_profile(t: f64, k: f64, p: f64) -> (f64, f64, f64) {
    let h = 1.0 - t.powf(k);
    let h1 = if t == 0.0 && k > 1.0 { 0.0 } else { -k * t.powf(k - 1.0) };
    let h2 = if t == 0.0 && k > 2.0 { 0.0 } else { -k * (k - 1.0) * t.powf(k - 2.0) };
    let v = h.powf(p);
    let d1 = p * h.powf(p - 1.0) * h1;
    let d2 = p * (p - 1.0) * h.powf(p - 2.0) * h1 * h1 + p * h.powf(p - 1.0) * h2;
    (v, d1, d2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ProfileChart {
    /// Parameter is `y = |z₂|`.
    Y,
    /// Parameter is `x = |z₁|`.
    X,
}

/// `(x, y, x', y', x'', y'')` along a chart of the profile curve.
fn profile_point(m: u32, chart: ProfileChart, t: f64) -> [f64; 6] {
    let m = m as f64;
    match chart {
        ProfileChart::Y => {
            let (x, x1, x2) = power_profile(t, 2.0 * m, 0.5);
            [x, t, x1, 1.0, x2, 0.0]
        }
        ProfileChart::X => {
            let (y, y1, y2) = power_profile(t, 2.0, 0.5 / m);
            [t, y, 1.0, y1, 0.0, y2]
        }
    }
}

/// Split parameter `s_c` with `s_c² + s_c^{2m} = 1`.
pub fn ellipsoid_split(m: u32) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid * mid + mid.powi(2 * m as i32) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn ellipsoid_foot(m: u32, a: f64, b: f64) -> EllipsoidFoot {
    let sc = ellipsoid_split(m);
    let samples = 256;
    let mut best = EllipsoidFoot { x: 1.0, y: 0.0, dist: f64::INFINITY };
    for chart in [ProfileChart::Y, ProfileChart::X] {
        let d2 = |t: f64| {
            let p = profile_point(m, chart, t);
            (p[0] - a).powi(2) + (p[1] - b).powi(2)
        };
        // Coarse sampling, then a safeguarded Newton solve of the
        // nearest-point condition D'(t) = 0 inside the best bracket.
        let ts: Vec<f64> = (0..=samples).map(|i| sc * i as f64 / samples as f64).collect();
        let (imin, _) = ts
            .iter()
            .map(|&t| d2(t))
            .enumerate()
            .min_by(|x, y| x.1.partial_cmp(&y.1).expect("finite distances"))
            .expect("non-empty samples");
        let lo = ts[imin.saturating_sub(1)];
        let hi = ts[(imin + 1).min(samples)];
        let t = refine_nearest(m, chart, a, b, lo, hi, ts[imin]);
        let p = profile_point(m, chart, t);
        let dist = d2(t).sqrt();
        if dist < best.dist {
            best = EllipsoidFoot { x: p[0], y: p[1], dist };
        }
    }
    best
}

/// Minimizes the squared distance on `[lo, hi]`: Newton on its derivative
/// with bisection fallback whenever a step leaves the bracket.
fn refine_nearest(m: u32, chart: ProfileChart, a: f64, b: f64, lo: f64, hi: f64, start: f64) -> f64 {
    let deriv = |t: f64| {
        let p = profile_point(m, chart, t);
        let g = 2.0 * ((p[0] - a) * p[2] + (p[1] - b) * p[3]);
        let h = 2.0 * (p[2] * p[2] + (p[0] - a) * p[4] + p[3] * p[3] + (p[1] - b) * p[5]);
        (g, h)
    };
    let d2 = |t: f64| {
        let p = profile_point(m, chart, t);
        (p[0] - a).powi(2) + (p[1] - b).powi(2)
    };
    let (glo, _) = deriv(lo);
    let (ghi, _) = deriv(hi);
    if glo >= 0.0 && ghi >= 0.0 {
        return if d2(lo) <= d2(start) { lo } else { start };
    }
    if glo <= 0.0 && ghi <= 0.0 {
        return if d2(hi) <= d2(start) { hi } else { start };
    }
    // Sign change: a minimum sits inside.
    let (mut l, mut h) = (lo, hi);
    let mut t = start.clamp(lo, hi);
    for _ in 0..200 {
        let (g, gp) = deriv(t);
        if g < 0.0 {
            l = t;
        } else {
            h = t;
        }
        let newton = t - g / gp;
        let next = if gp > 0.0 && newton > l && newton < h { newton } else { 0.5 * (l + h) };
        if (next - t).abs() < 1e-16 || h - l < 1e-16 {
            t = next;
            break;
        }
        t = next;
    }
    t
}

// ---------------------------------------------------------------------------
// Boundary atlases.

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartKind {
    /// θ ↦ e^{iθ}.
    Circle,
    /// Hyperspherical moduli angles `φ₁..φ_{n−1}` and phases `θ₁..θ_n` on `S^{2n−1}`.
    Sphere { n: usize },
    /// `(s, θ₁, θ₂) ↦ (√(1 − s^{2m}) e^{iθ₁}, s e^{iθ₂})`.
    EllipsoidY { m: u32 },
    /// `(u, θ₁, θ₂) ↦ (u e^{iθ₁}, (1 − u²)^{1/(2m)} e^{iθ₂})`.
    EllipsoidX { m: u32 },
}

/// One parametrized patch of the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub kind: ChartKind,
    /// Parameter box; periodic parameters are flagged in `periodic`.
    pub bounds: Vec<(f64, f64)>,
    pub periodic: Vec<bool>,
}

impl Chart {
    /// Boundary point and surface-measure density at `params`.
    pub fn eval(&self, params: &[f64]) -> (Vec<C64>, f64) {
        match self.kind {
            ChartKind::Circle => (vec![C64::from_polar(1.0, params[0])], 1.0),
            ChartKind::Sphere { n } => {
                let (moduli, density) = hyperspherical(&params[..n - 1]);
                let z = moduli.iter().zip(&params[n - 1..]).map(|(&r, &th)| C64::from_polar(r, th)).collect();
                (z, density)
            }
            ChartKind::EllipsoidY { m } | ChartKind::EllipsoidX { m } => {
                let chart =
                    if matches!(self.kind, ChartKind::EllipsoidY { .. }) { ProfileChart::Y } else { ProfileChart::X };
                let p = profile_point(m, chart, params[0]);
                let arc = (p[2] * p[2] + p[3] * p[3]).sqrt();
                (vec![C64::from_polar(p[0], params[1]), C64::from_polar(p[1], params[2])], p[0] * p[1] * arc)
            }
        }
    }

    /// Index of the parameter holding the phase of coordinate `j`.
    pub fn phase_param(&self, j: usize) -> usize {
        match self.kind {
            ChartKind::Circle => j,
            ChartKind::Sphere { n } => n - 1 + j,
            ChartKind::EllipsoidY { .. } | ChartKind::EllipsoidX { .. } => 1 + j,
        }
    }

    /// Chart parameters of a boundary point assumed to lie in this chart
    /// (clamped to the parameter box otherwise).
    pub fn params_of(&self, zeta: &[C64]) -> Vec<f64> {
        let arg = |c: C64| if c.norm() > 0.0 { c.arg() } else { 0.0 };
        let mut out = match self.kind {
            ChartKind::Circle => vec![arg(zeta[0])],
            ChartKind::Sphere { n } => {
                let mut angles = Vec::with_capacity(2 * n - 1);
                let moduli: Vec<f64> = zeta.iter().map(|c| c.norm()).collect();
                let mut tail: f64 = moduli.iter().map(|r| r * r).sum::<f64>().sqrt();
                for r in moduli.iter().take(n - 1) {
                    let phi = if tail > 0.0 { (r / tail).clamp(-1.0, 1.0).acos() } else { 0.0 };
                    angles.push(phi);
                    tail = (tail * tail - r * r).max(0.0).sqrt();
                }
                angles.extend(zeta.iter().map(|&c| arg(c)));
                angles
            }
            ChartKind::EllipsoidY { .. } => vec![zeta[1].norm(), arg(zeta[0]), arg(zeta[1])],
            ChartKind::EllipsoidX { .. } => vec![zeta[0].norm(), arg(zeta[0]), arg(zeta[1])],
        };
        for (p, (&(lo, hi), &per)) in out.iter_mut().zip(self.bounds.iter().zip(&self.periodic)) {
            if per {
                *p = p.rem_euclid(2.0 * PI);
            } else {
                *p = p.clamp(lo, hi);
            }
        }
        out
    }
}

/// Upper limit on the tensor size of one chart of a boundary rule.
pub const MAX_FOCUSED_NODES: usize = 8_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryAtlas {
    pub domain: DomainModel,
    pub charts: Vec<Chart>,
    pub resolution: usize,
    pub total_area: f64,
}

impl BoundaryAtlas {
    pub fn new(domain: DomainModel, resolution: usize) -> Result<Self> {
        if resolution < 4 {
            return Err(Error::InvalidArgument(format!("atlas resolution must be ≥ 4, got {resolution}")));
        }
        let two_pi = 2.0 * PI;
        let charts = match domain.canonical() {
            DomainModel::UnitDisc => {
                vec![Chart { kind: ChartKind::Circle, bounds: vec![(0.0, two_pi)], periodic: vec![true] }]
            }
            DomainModel::Ball(n) => {
                let mut bounds = vec![(0.0, PI / 2.0); n - 1];
                bounds.extend(std::iter::repeat_n((0.0, two_pi), n));
                let mut periodic = vec![false; n - 1];
                periodic.extend(std::iter::repeat_n(true, n));
                vec![Chart { kind: ChartKind::Sphere { n }, bounds, periodic }]
            }
            DomainModel::Ellipsoid(m) => {
                let sc = ellipsoid_split(m);
                let bounds = vec![(0.0, sc), (0.0, two_pi), (0.0, two_pi)];
                let periodic = vec![false, true, true];
                vec![
                    Chart { kind: ChartKind::EllipsoidY { m }, bounds: bounds.clone(), periodic: periodic.clone() },
                    Chart { kind: ChartKind::EllipsoidX { m }, bounds, periodic },
                ]
            }
            DomainModel::Polydisc(_) => {
                return Err(Error::Unsupported("polydisc boundary is only Lipschitz; no surface quadrature".into()))
            }
        };
        let mut atlas = BoundaryAtlas { domain, charts, resolution, total_area: 0.0 };
        atlas.total_area = match domain.canonical() {
            DomainModel::UnitDisc => two_pi,
            DomainModel::Ball(n) => 2.0 * PI.powi(n as i32) / ln_gamma(n as f64).exp(),
            _ => atlas.integrate(|_| 1.0)?,
        };
        Ok(atlas)
    }

    /// Uniform nodes: `resolution` Gauss–Legendre nodes per bounded
    /// parameter, `resolution` trapezoid nodes per phase.
    pub fn nodes(&self) -> Result<PointSet> {
        let mut sets = Vec::new();
        for chart in &self.charts {
            let rules: Vec<Arc<QuadratureRule>> = chart
                .bounds
                .iter()
                .zip(&chart.periodic)
                .map(|(&(lo, hi), &per)| -> Result<Arc<QuadratureRule>> {
                    if per {
                        periodic_trapezoid(self.resolution)
                    } else {
                        Ok(Arc::new(gauss_legendre(self.resolution)?.on_interval(lo, hi)))
                    }
                })
                .collect::<Result<_>>()?;
            let count: f64 = rules.iter().map(|r| r.nodes.len() as f64).product();
            if count > MAX_FOCUSED_NODES as f64 {
                return Err(Error::Unsupported(format!(
                    "boundary rule needs {count:.3e} nodes per chart (limit {MAX_FOCUSED_NODES}); lower the resolution"
                )));
            }
            sets.push(chart_points(chart, &rules));
        }
        Ok(concat(sets))
    }

    /// Nodes graded toward the boundary point `focus`: panels of width
    /// `h0` at the focus doubling outward, `per_panel` points each.
    pub fn nodes_focused(&self, focus: &[C64], h0: f64, per_panel: usize) -> Result<PointSet> {
        self.nodes_focused_reduced(focus, h0, per_panel, &[])
    }

    /// As [`nodes_focused`](Self::nodes_focused), for integrands that do not
    /// depend on the phases of the coordinates listed in `invariant`: each
    /// such phase gets a single node of weight 2π.
    pub fn nodes_focused_reduced(
        &self,
        focus: &[C64],
        h0: f64,
        per_panel: usize,
        invariant: &[usize],
    ) -> Result<PointSet> {
        let mut sets = Vec::new();
        for chart in &self.charts {
            let centre = chart.params_of(focus);
            let frozen: Vec<usize> = invariant.iter().map(|&j| chart.phase_param(j)).collect();
            let rules: Vec<Arc<QuadratureRule>> = chart
                .bounds
                .iter()
                .zip(&chart.periodic)
                .zip(&centre)
                .enumerate()
                .map(|(d, ((&(lo, hi), &per), &c))| -> Result<Arc<QuadratureRule>> {
                    if frozen.contains(&d) {
                        return Ok(Arc::new(QuadratureRule {
                            nodes: vec![c],
                            weights: vec![2.0 * PI],
                            support: Support::Circle,
                            exactness: "phase-invariant integrands".into(),
                        }));
                    }
                    let rule = if per {
                        // One full period centred on the focus.
                        graded_panels(c - PI, c + PI, c, h0, per_panel)?
                    } else {
                        graded_panels(lo, hi, c, h0, per_panel)?
                    };
                    Ok(Arc::new(rule))
                })
                .collect::<Result<_>>()?;
            let count: f64 = rules.iter().map(|r| r.nodes.len() as f64).product();
            if count > MAX_FOCUSED_NODES as f64 {
                return Err(Error::Unsupported(format!(
                    "focused boundary rule needs {count:.3e} nodes per chart (limit {MAX_FOCUSED_NODES}); \
                     only points with a phase-invariant reduction are affordable this close to the boundary"
                )));
            }
            sets.push(chart_points(chart, &rules));
        }
        Ok(concat(sets))
    }

    /// Uniform-node surface integral.
    pub fn integrate<T: Scalar>(&self, f: impl Fn(&[C64]) -> T + Sync) -> Result<T> {
        self.nodes()?.integrate(f)
    }
}

fn chart_points(chart: &Chart, rules: &[Arc<QuadratureRule>]) -> PointSet {
    let dims = rules.len();
    let count: usize = rules.iter().map(|r| r.len()).product();
    let entries: Vec<(Vec<C64>, f64)> = (0..count)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut params = vec![0.0; dims];
            let mut w = 1.0;
            for d in (0..dims).rev() {
                let r = &rules[d];
                let i = idx % r.len();
                idx /= r.len();
                params[d] = r.nodes[i];
                w *= r.weights[i];
            }
            let (z, density) = chart.eval(&params);
            (z, w * density)
        })
        .collect();
    let dim = entries.first().map(|e| e.0.len()).unwrap_or(0);
    let mut coords = Vec::with_capacity(count * dim);
    let mut weights = Vec::with_capacity(count);
    for (z, w) in entries {
        coords.extend(z);
        weights.push(w);
    }
    PointSet { dim, coords, weights }
}

fn concat(sets: Vec<PointSet>) -> PointSet {
    let dim = sets.first().map(|s| s.dim).unwrap_or(0);
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    for s in sets {
        coords.extend(s.coords);
        weights.extend(s.weights);
    }
    PointSet { dim, coords, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn membership_examples() {
        assert!(DomainModel::UnitDisc.contains(&[c(0.0)]).unwrap());
        assert!(!DomainModel::Ball(2).contains(&[c(0.8), c(0.7)]).unwrap());
        assert!(DomainModel::Ellipsoid(2).contains(&[c(0.5), c(0.9)]).unwrap());
        assert_eq!(DomainModel::Ball(2).contains(&[c(0.1)]), Err(Error::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(DomainModel::UnitDisc.boundary_distance(&[c(0.0)]).unwrap(), 1.0);
        let d = DomainModel::Ball(2).boundary_distance(&[c(0.3), c(0.4)]).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        let d = DomainModel::Polydisc(2).boundary_distance(&[c(0.3), c(0.9)]).unwrap();
        assert!((d - 0.1).abs() < 1e-15);
        assert!(matches!(DomainModel::UnitDisc.boundary_distance(&[c(1.0)]), Err(Error::NotInterior { .. })));
    }

    #[test]
    fn aliases_are_identical() {
        let z = [C64::new(0.3, -0.2), C64::new(0.1, 0.5)];
        let e1 = DomainModel::Ellipsoid(1);
        let b2 = DomainModel::Ball(2);
        assert_eq!(e1.boundary_distance(&z).unwrap(), b2.boundary_distance(&z).unwrap());
        assert_eq!(e1.ln_monomial_moment(&[3, 4]).unwrap(), b2.ln_monomial_moment(&[3, 4]).unwrap());
        let w = [C64::new(0.2, 0.6)];
        assert_eq!(
            DomainModel::Ball(1).boundary_distance(&w).unwrap(),
            DomainModel::UnitDisc.boundary_distance(&w).unwrap()
        );
    }

    #[test]
    fn moment_examples() {
        let d = DomainModel::UnitDisc;
        assert!((d.monomial_moment(&[0]).unwrap() - PI).abs() < 1e-14);
        for k in 0..30 {
            let v = d.monomial_moment(&[k]).unwrap();
            assert!((v - PI / (k as f64 + 1.0)).abs() < 1e-13 * v.max(1.0));
        }
        assert!(d.monomial_moment(&[-1]).is_err());
        // Large indices stay finite in log space.
        assert!(DomainModel::Ball(2).ln_monomial_moment(&[400, 300]).unwrap().is_finite());
    }

    #[test]
    fn atlas_areas() {
        let a = DomainModel::UnitDisc.boundary_atlas(8).unwrap();
        assert!((a.integrate(|_| 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        let b = DomainModel::Ball(2).boundary_atlas(64).unwrap();
        assert!((b.total_area - 2.0 * PI * PI).abs() < 1e-10);
        assert!((b.integrate(|_| 1.0).unwrap() - 2.0 * PI * PI).abs() < 1e-10);
        assert!(DomainModel::Polydisc(2).boundary_atlas(8).is_err());
        assert!(DomainModel::Ball(2).boundary_atlas(3).is_err());
    }

    #[test]
    fn atlas_points_on_boundary() {
        for d in [DomainModel::Ball(2), DomainModel::Ball(3), DomainModel::Ellipsoid(2), DomainModel::Ellipsoid(3)] {
            let nodes = d.boundary_atlas(6).unwrap().nodes().unwrap();
            for i in 0..nodes.len() {
                let v = d.defining_function(nodes.point(i)).unwrap();
                assert!(v.abs() < 1e-12, "{d}: {v}");
            }
        }
    }

    #[test]
    fn ball_volume_rule_is_exact_for_moments() {
        let d = DomainModel::Ball(2);
        let rule = d.volume_rule(12).unwrap();
        let v = rule.integrate(|z| z[0].norm_sqr().powi(2) * z[1].norm_sqr()).unwrap();
        let expect = d.monomial_moment(&[2, 1]).unwrap();
        assert!((v - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn unitary_frame_aligns() {
        let w = [C64::new(0.3, -0.1), C64::new(0.0, 0.4), C64::new(-0.2, 0.2)];
        let f = UnitaryFrame::aligned_with(&w);
        let y = f.to_local(&w);
        assert!((y[0] - c(norm(&w))).norm() < 1e-15);
        assert!(y[1].norm() < 1e-15 && y[2].norm() < 1e-15);
        let z = [C64::new(0.1, 0.2), C64::new(-0.5, 0.0), C64::new(0.3, 0.3)];
        let back = f.from_local(&f.to_local(&z));
        assert!(z.iter().zip(&back).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!((norm(&f.to_local(&z)) - norm(&z)).abs() < 1e-15);
    }

    #[test]
    fn domain_parse_roundtrip() {
        for d in [DomainModel::UnitDisc, DomainModel::Polydisc(3), DomainModel::Ball(2), DomainModel::Ellipsoid(4)] {
            assert_eq!(d.to_string().parse::<DomainModel>().unwrap(), d);
        }
        assert!("torus".parse::<DomainModel>().is_err());
        assert!("ball0".parse::<DomainModel>().is_err());
    }
}
