//! Numerics for Bergman and Szegő kernels on model domains.
//!
//! The crate evaluates reproducing kernels on the unit disc, polydiscs,
//! balls and the complex ellipsoids `{|z₁|² + |z₂|^{2m} < 1}`, integrates
//! them over boundaries and volumes, and checks a family of quantitative
//! inequalities relating boundary norms, pluricomplex Green sublevel sets
//! and weighted Bergman projections. Every check produces a
//! [`VerificationReport`] carrying both sides of the inequality, the margin
//! and the tolerance that decided pass/fail.
//!
//! Module map:
//!
//! * [`geometry`]: domain models, boundary distance, boundary atlases, moments.
//! * [`quadrature`]: Gauss rules, graded panel rules, pairwise integration.
//! * [`kernel`]: Bergman and Szegő kernels, closed form and moment series.
//! * [`green`]: pluricomplex Green functions and sublevel-set checks.
//! * [`polynomial`]: holomorphic polynomials used as test functions.
//! * [`projection`]: weighted Bergman projections on the disc.
//! * [`boundary`]: boundary L² norms of the kernel and the ratio sweeps.
//! * [`toeplitz`]: weighted kernel integrals and exponent fits.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod error;
pub mod geometry;
pub mod green;
pub mod kernel;
pub mod polynomial;
pub mod projection;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod toeplitz;
pub mod tolerances;

pub use error::{Error, Result};
pub use geometry::DomainModel;
pub use report::VerificationReport;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
