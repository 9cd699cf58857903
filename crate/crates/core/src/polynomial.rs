//! Holomorphic polynomials in several complex variables.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub dim: usize,
    /// `(exponent, coefficient)` pairs; exponents have length `dim`.
    pub terms: Vec<(Vec<u32>, C64)>,
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<(Vec<u32>, C64)>) -> Result<Self> {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: e.len() });
        }
        Ok(Polynomial { dim, terms })
    }

    pub fn constant(dim: usize, c: C64) -> Self {
        Polynomial { dim, terms: vec![(vec![0; dim], c)] }
    }

    pub fn monomial(exponent: Vec<u32>) -> Self {
        Polynomial { dim: exponent.len(), terms: vec![(exponent, C64::new(1.0, 0.0))] }
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        self.terms.iter().map(|(e, c)| e.iter().zip(z).fold(*c, |acc, (&k, &zj)| acc * zj.powu(k))).sum()
    }

    /// Polynomial of total degree ≤ `degree` with a handful of random
    /// monomials and coefficients in the unit square.
    pub fn random<R: Rng>(dim: usize, degree: u32, rng: &mut R) -> Self {
        let count = rng.random_range(1..=4);
        let mut terms: Vec<(Vec<u32>, C64)> = Vec::with_capacity(count);
        for _ in 0..count {
            let mut left = rng.random_range(0..=degree);
            let mut e = vec![0u32; dim];
            for slot in e.iter_mut().take(dim - 1) {
                let k = rng.random_range(0..=left);
                *slot = k;
                left -= k;
            }
            e[dim - 1] = left;
            let c = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            match terms.iter_mut().find(|(f, _)| *f == e) {
                Some(t) => t.1 += c,
                None => terms.push((e, c)),
            }
        }
        Polynomial { dim, terms }
    }
}
