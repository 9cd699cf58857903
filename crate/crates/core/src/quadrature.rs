//! One-dimensional and tensor-product quadrature.
//!
//! All rules are immutable and built once per `(kind, n, a, b)` key; the
//! constructors hand out shared references into a process-wide cache.
//! Every reduction goes through [`pairwise_sum`] over values laid out in
//! node order, so results do not depend on how many threads evaluated the
//! integrand.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::ln_gamma;
use crate::C64;

/// Values that can be accumulated by a quadrature rule.
pub trait Scalar: Copy + Send + Sync + Default + Add<Output = Self> + Mul<f64, Output = Self> {
    fn is_finite_value(&self) -> bool;
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for C64 {
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

const PAIRWISE_BLOCK: usize = 8;

/// Cascade summation with a fixed split order.
pub fn pairwise_sum<T: Scalar>(values: &[T]) -> T {
    if values.len() <= PAIRWISE_BLOCK {
        let mut acc = T::default();
        for &v in values {
            acc = acc + v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Where a rule lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Interval {
        a: f64,
        b: f64,
    },
    /// `[0, 2π)` with periodic wrap-around.
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub support: Support,
    pub exactness: String,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total mass of the rule, i.e. the integral of the constant 1.
    pub fn measure(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    /// Affine image of an interval rule on `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> QuadratureRule {
        let (lo, hi) = match self.support {
            Support::Interval { a, b } => (a, b),
            Support::Circle => (0.0, 2.0 * PI),
        };
        let scale = (b - a) / (hi - lo);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            support: Support::Interval { a, b },
            exactness: self.exactness.clone(),
        }
    }

    /// Weighted sum `Σ wᵢ f(xᵢ)`; fails on the first non-finite value.
    pub fn integrate<T: Scalar>(&self, f: impl Fn(f64) -> T) -> Result<T> {
        let mut terms = Vec::with_capacity(self.len());
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !v.is_finite_value() {
                return Err(Error::NonFinite { node: vec![x] });
            }
            terms.push(v * w);
        }
        Ok(pairwise_sum(&terms))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum RuleKey {
    Legendre(usize),
    Jacobi(usize, u64, u64),
    Trapezoid(usize),
}

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<QuadratureRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<QuadratureRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: RuleKey, build: impl FnOnce() -> Result<QuadratureRule>) -> Result<Arc<QuadratureRule>> {
    if let Some(rule) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build()?);
    let mut guard = cache().lock().expect("rule cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(rule)))
}

/// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule on `[-1, 1]`, exact for polynomials of degree `2n − 1`.
pub fn gauss_legendre(n: usize) -> Result<Arc<QuadratureRule>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss–Legendre rule needs n ≥ 1".into()));
    }
    cached(RuleKey::Legendre(n), || {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let half = n.div_ceil(2);
        for i in 0..half {
            // Tricomi initial guess, descending from the largest root.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(QuadratureRule {
            nodes,
            weights,
            support: Support::Interval { a: -1.0, b: 1.0 },
            exactness: format!("polynomials up to degree {}", 2 * n - 1),
        })
    })
}

/// Jacobi polynomial P_n^{(a,b)}(x) together with P_{n−1}^{(a,b)}(x).
fn jacobi_pair(n: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let c1 = 2.0 * k * (k + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let next = (c2 * p - c3 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

/// Derivative of P_n^{(a,b)} from the pair (P_n, P_{n−1}).
fn jacobi_derivative(n: usize, a: f64, b: f64, x: f64, p: f64, p_prev: f64) -> f64 {
    let nf = n as f64;
    let s = 2.0 * nf + a + b;
    (nf * ((a - b) - s * x) * p + 2.0 * (nf + a) * (nf + b) * p_prev) / (s * (1.0 - x * x))
}

/// Gauss–Jacobi rule for the weight `(1 − x)^a (1 + x)^b` on `[-1, 1]`.
///
/// Golub–Welsch eigenvalues seed a Newton polish on the Jacobi recurrence;
/// weights come from the derivative formula, not from eigenvectors, so small
/// weights keep full relative accuracy.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<Arc<QuadratureRule>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Gauss–Jacobi rule needs n ≥ 1".into()));
    }
    if !(a > -1.0 && b > -1.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("Gauss–Jacobi exponents must exceed −1, got a = {a}, b = {b}")));
    }
    if a == 0.0 && b == 0.0 {
        return gauss_legendre(n);
    }
    cached(RuleKey::Jacobi(n, a.to_bits(), b.to_bits()), || {
        let mut jm = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            let s = 2.0 * kf + a + b;
            jm[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
            if k + 1 < n {
                let j = kf + 1.0;
                let s = 2.0 * j + a + b;
                // (j + a + b)/(s − 1) has a removable 0/0 at j = 1, a + b = −1.
                let ratio = if (s - 1.0).abs() < 1e-14 { 1.0 } else { (j + a + b) / (s - 1.0) };
                let off = 2.0 / s * (j * (j + a) * (j + b) * ratio / (s + 1.0)).sqrt();
                jm[(k, k + 1)] = off;
                jm[(k + 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(jm);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalue"));

        let nf = n as f64;
        let ln_const = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(nf + a + 1.0) + ln_gamma(nf + b + 1.0)
            - ln_gamma(nf + a + b + 1.0)
            - ln_gamma(nf + 1.0);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..50 {
                let (p, pp) = jacobi_pair(n, a, b, *x);
                let d = jacobi_derivative(n, a, b, *x, p, pp);
                let dx = p / d;
                let nx = *x - dx;
                if nx > -1.0 && nx < 1.0 {
                    *x = nx;
                }
                if dx.abs() < 1e-16 * (1.0 + x.abs()) {
                    break;
                }
            }
            let (p, pp) = jacobi_pair(n, a, b, *x);
            let d = jacobi_derivative(n, a, b, *x, p, pp);
            weights.push((ln_const - (1.0 - *x * *x).ln() - 2.0 * d.abs().ln()).exp());
        }
        Ok(QuadratureRule {
            nodes,
            weights,
            support: Support::Interval { a: -1.0, b: 1.0 },
            exactness: format!("(1−x)^{a}(1+x)^{b} times polynomials up to degree {}", 2 * n - 1),
        })
    })
}

/// `n` equispaced nodes on the circle with equal weights `2π/n`.
pub fn periodic_trapezoid(n: usize) -> Result<Arc<QuadratureRule>> {
    if n == 0 {
        return Err(Error::InvalidArgument("trapezoid rule needs n ≥ 1".into()));
    }
    cached(RuleKey::Trapezoid(n), || {
        let h = 2.0 * PI / n as f64;
        Ok(QuadratureRule {
            nodes: (0..n).map(|j| j as f64 * h).collect(),
            weights: vec![h; n],
            support: Support::Circle,
            exactness: format!("trigonometric polynomials e^{{ikθ}} with |k| < {n}"),
        })
    })
}

fn push_panel(nodes: &mut Vec<f64>, weights: &mut Vec<f64>, base: &QuadratureRule, lo: f64, hi: f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    for (&x, &w) in base.nodes.iter().zip(&base.weights) {
        nodes.push(mid + half * x);
        weights.push(half * w);
    }
}

/// Panel edges from `focus` out to `end`, doubling in width from `h0`.
fn geometric_edges(focus: f64, end: f64, h0: f64) -> Vec<f64> {
    let len = (end - focus).abs();
    let dir = (end - focus).signum();
    let mut edges = vec![focus];
    let mut h = h0.min(len);
    let mut pos = 0.0;
    while pos < len {
        let mut next = pos + h;
        // Swallow a sliver rather than emitting a tiny last panel.
        if next > len || len - next < 0.5 * h {
            next = len;
        }
        edges.push(focus + dir * next);
        pos = next;
        h *= 2.0;
    }
    edges
}

/// Composite Gauss–Legendre rule on `[a, b]` whose panels double in width
/// away from `focus`, the smallest panel having width `h0`.
///
/// Integrands with a near-singularity at distance ~`h0` from `focus` converge
/// geometrically in `per_panel`.
pub fn graded_panels(a: f64, b: f64, focus: f64, h0: f64, per_panel: usize) -> Result<QuadratureRule> {
    if !(a < b) || !(h0 > 0.0) || !(a..=b).contains(&focus) {
        return Err(Error::InvalidArgument(format!(
            "graded rule needs a < b, h0 > 0 and focus in [a, b] (a={a}, b={b}, focus={focus}, h0={h0})"
        )));
    }
    let base = gauss_legendre(per_panel)?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let left = geometric_edges(focus, a, h0);
    for pair in left.windows(2).rev() {
        push_panel(&mut nodes, &mut weights, &base, pair[1], pair[0]);
    }
    let right = geometric_edges(focus, b, h0);
    for pair in right.windows(2) {
        push_panel(&mut nodes, &mut weights, &base, pair[0], pair[1]);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        support: Support::Interval { a, b },
        exactness: format!("piecewise polynomials up to degree {} on graded panels", 2 * per_panel - 1),
    })
}

/// Rule for `∫_a^b (b − x)^exponent g(x) dx` with panels graded toward `b`.
///
/// The panel touching `b` is Gauss–Jacobi with the endpoint exponent folded
/// into the weights; the other panels carry `(b − x)^exponent` explicitly.
/// Returned weights therefore integrate `g` alone.
pub fn graded_jacobi(a: f64, b: f64, exponent: f64, h0: f64, per_panel: usize) -> Result<QuadratureRule> {
    if !(a < b) || !(h0 > 0.0) {
        return Err(Error::InvalidArgument(format!("graded Jacobi rule needs a < b and h0 > 0 (a={a}, b={b})")));
    }
    let gl = gauss_legendre(per_panel)?;
    let gj = gauss_jacobi(per_panel, exponent, 0.0)?;
    let edges = geometric_edges(b, a, h0);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (i, pair) in edges.windows(2).enumerate().rev() {
        let (hi, lo) = (pair[0], pair[1]);
        if i == 0 {
            let half = 0.5 * (hi - lo);
            let scale = half.powf(exponent + 1.0);
            for (&x, &w) in gj.nodes.iter().zip(&gj.weights) {
                nodes.push(hi - half * (1.0 - x));
                weights.push(w * scale);
            }
        } else {
            let start = nodes.len();
            push_panel(&mut nodes, &mut weights, &gl, lo, hi);
            for k in start..nodes.len() {
                weights[k] *= (b - nodes[k]).powf(exponent);
            }
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        support: Support::Interval { a, b },
        exactness: format!(
            "(b−x)^{exponent} times piecewise polynomials up to degree {} on graded panels",
            2 * per_panel - 1
        ),
    })
}

/// Cartesian product of one-dimensional rules.
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub factors: Vec<Arc<QuadratureRule>>,
}

impl TensorRule {
    pub fn new(factors: Vec<Arc<QuadratureRule>>) -> Self {
        TensorRule { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.iter().map(|r| r.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn node(&self, mut flat: usize, x: &mut [f64]) -> f64 {
        let mut w = 1.0;
        for (d, rule) in self.factors.iter().enumerate().rev() {
            let i = flat % rule.len();
            flat /= rule.len();
            x[d] = rule.nodes[i];
            w *= rule.weights[i];
        }
        w
    }

    /// Tensor quadrature; the integrand may run on several threads but the
    /// reduction order is fixed.
    pub fn integrate<T: Scalar>(&self, f: impl Fn(&[f64]) -> T + Sync) -> Result<T> {
        let dim = self.factors.len();
        let terms: Vec<std::result::Result<T, Vec<f64>>> = (0..self.len())
            .into_par_iter()
            .map(|flat| {
                let mut x = vec![0.0; dim];
                let w = self.node(flat, &mut x);
                let v = f(&x);
                if v.is_finite_value() {
                    Ok(v * w)
                } else {
                    Err(x)
                }
            })
            .collect();
        let mut values = Vec::with_capacity(terms.len());
        for t in terms {
            match t {
                Ok(v) => values.push(v),
                Err(node) => return Err(Error::NonFinite { node }),
            }
        }
        Ok(pairwise_sum(&values))
    }
}

/// Integrate with a single rule or a tensor of rules.
pub fn integrate<T: Scalar>(rule: &QuadratureRule, f: impl Fn(f64) -> T) -> Result<T> {
    rule.integrate(f)
}
