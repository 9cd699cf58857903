//! Functions on the disc in Fourier-radial form
//! `f(ρe^{iθ}) = Σ_k g_k(ρ) e^{ikθ}`, each profile a finite sum of
//! `coef · ρ^a (−log ρ)^b (1 − ρ)^c`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coef: C64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Term {
    pub fn new(coef: C64, a: f64, b: f64, c: f64) -> Self {
        Term { coef, a, b, c }
    }

    pub fn eval(&self, rho: f64) -> C64 {
        let mut v = rho.powf(self.a);
        if self.b != 0.0 {
            v *= (-rho.ln()).powf(self.b);
        }
        if self.c != 0.0 {
            v *= (1.0 - rho).powf(self.c);
        }
        self.coef * v
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub terms: Vec<Term>,
}

impl RadialProfile {
    pub fn eval(&self, rho: f64) -> C64 {
        self.terms.iter().map(|t| t.eval(rho)).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiscFunction {
    pub modes: BTreeMap<i32, RadialProfile>,
}

impl DiscFunction {
    pub fn zero() -> Self {
        DiscFunction::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::zero().with_term(0, Term::new(c, 0.0, 0.0, 0.0))
    }

    /// `coef · z^k`.
    pub fn monomial(k: u32, coef: C64) -> Self {
        Self::zero().with_term(k as i32, Term::new(coef, k as f64, 0.0, 0.0))
    }

    /// Holomorphic polynomial `Σ coeffs[k] z^k`.
    pub fn polynomial(coeffs: &[C64]) -> Self {
        let mut f = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            if c != C64::new(0.0, 0.0) {
                f.push(k as i32, Term::new(c, k as f64, 0.0, 0.0));
            }
        }
        f
    }

    pub fn with_term(mut self, k: i32, term: Term) -> Self {
        self.push(k, term);
        self
    }

    pub fn push(&mut self, k: i32, term: Term) {
        self.modes.entry(k).or_default().terms.push(term);
    }

    pub fn max_mode(&self) -> i32 {
        self.modes.keys().map(|k| k.abs()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let rho = z.norm();
        let theta = z.arg();
        self.modes.iter().map(|(&k, prof)| prof.eval(rho) * C64::from_polar(1.0, k as f64 * theta)).sum()
    }

    /// Multiplies every profile by `(−log ρ)^b (1 − ρ)^c`.
    pub fn times_radial(&self, b: f64, c: f64) -> Self {
        let mut out = self.clone();
        for prof in out.modes.values_mut() {
            for t in &mut prof.terms {
                t.b += b;
                t.c += c;
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for prof in out.modes.values_mut() {
            for t in &mut prof.terms {
                t.coef *= s;
            }
        }
        out
    }

    pub fn sub(&self, other: &DiscFunction) -> Self {
        let mut out = self.clone();
        for (&k, prof) in &other.modes {
            for t in &prof.terms {
                out.push(k, Term { coef: -t.coef, ..*t });
            }
        }
        out
    }

    /// Holomorphic coefficients `c_k` when every mode is `c_k z^k`;
    /// `None` otherwise.
    pub fn holomorphic_coefficients(&self) -> Option<Vec<C64>> {
        let n = self.modes.keys().copied().max().unwrap_or(0).max(0) as usize;
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        for (&k, prof) in &self.modes {
            for t in &prof.terms {
                if k < 0 || t.a != k as f64 || t.b != 0.0 || t.c != 0.0 {
                    return None;
                }
                out[k as usize] += t.coef;
            }
        }
        Some(out)
    }

    /// Random Fourier-radial function: modes `|k| ≤ max_mode`, one to three
    /// terms each with `a ≥ |k|`, `b, c ∈ [0, 1.5)`.
    pub fn random<R: Rng>(max_mode: i32, rng: &mut R) -> Self {
        let mut f = Self::zero();
        for k in -max_mode..=max_mode {
            if rng.random_bool(0.3) && k != 0 {
                continue;
            }
            for _ in 0..rng.random_range(1..=3) {
                let coef = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                let a = k.abs() as f64 + rng.random_range(0.0..2.0);
                let b = rng.random_range(0.0..1.5);
                let c = rng.random_range(0.0..1.5);
                f.push(k, Term::new(coef, a, b, c));
            }
        }
        f
    }

    /// Random holomorphic polynomial of degree ≤ `degree`.
    pub fn random_polynomial<R: Rng>(degree: u32, rng: &mut R) -> Self {
        let coeffs: Vec<C64> =
            (0..=degree).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
        Self::polynomial(&coeffs)
    }
}
