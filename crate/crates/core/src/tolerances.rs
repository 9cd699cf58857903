//! Pass/fail tolerances for every check, in one place.
//!
//! Each constant is the slack a margin may fall below zero before the check
//! fails. Relative tolerances are scaled by `1 + |rhs|` at the call site.

/// Theorem-type upper bound `ratio ≤ 4en + 1`; absolute.
pub const RATIO_UPPER: f64 = 1e-9;

/// Quadrature ratio against a closed-form reduction; relative.
pub const RATIO_CLOSED_FORM: f64 = 1e-8;

/// Resolution vs. doubled resolution on boundary norms; relative.
pub const SELF_CONVERGENCE: f64 = 1e-6;

/// Empirical lower-bound floor drift under resolution doubling; relative.
pub const FLOOR_STABILITY: f64 = 0.05;

/// Szegő/Bergman diagonal comparison; absolute.
pub const SZEGO: f64 = 1e-12;

/// Weighted projection ratio `≤ 1/(1 − r)`; absolute.
pub const WEIGHTED_RATIO: f64 = 1e-9;

/// Sharp example against `πr/sin(πr)`; relative.
pub const SHARP_CONSTANT: f64 = 1e-6;

/// Orthogonality residual of the Kohn decomposition; absolute, normalized.
pub const KOHN_RESIDUAL: f64 = 1e-8;

/// Pythagoras split of the Kohn decomposition; relative.
pub const PYTHAGORAS: f64 = 1e-8;

/// `(1 − r)`-weighted projection bound `LHS/RHS ≤ 1`; absolute.
pub const HARDY_WEIGHT_RATIO: f64 = 1e-8;

/// Extrapolated Hardy identity against the boundary norm; relative.
pub const HARDY_IDENTITY: f64 = 1e-4;

/// Herbort lower bound; relative, scaled by `1 + |rhs|`.
pub const HERBORT: f64 = 1e-9;

/// Sublevel-set kernel comparison; relative, scaled by `1 + |rhs|`.
pub const SUBLEVEL_KERNEL: f64 = 1e-12;

/// Annulus inclusion of Green sublevel sets; absolute, on δ.
pub const SUBLEVEL_INCLUSION: f64 = 1e-9;

/// Optimizer tolerance for ball sublevel extremes.
pub const SUBLEVEL_OPTIMIZER: f64 = 1e-9;

/// Ratio of corpus sups under corpus doubling.
pub const DF_LQ_STABILITY: f64 = 1.5;

/// Exponent fit window, plus the allowance for logarithmic corrections when
/// `α > 0`.
pub const SLOPE: f64 = 0.05;
pub const SLOPE_LOG_ALLOWANCE: f64 = 0.1;

/// Stationary point of the infimum problem against its closed form.
pub const INFIMUM_STATIONARY: f64 = 1e-10;

/// Reproducing-property residual.
pub const REPRODUCE: f64 = 1e-8;

/// Moment series against closed form; absolute.
pub const SERIES_AGREEMENT: f64 = 1e-10;

/// Default absolute tail target for moment series.
pub const TAIL_TOL: f64 = 1e-12;

/// Nearest admissible boundary distance for ellipsoid sweeps.
pub const ELLIPSOID_MIN_DELTA: f64 = 1e-4;
