use std::f64::consts::{E, PI};
use std::time::Instant;

use bergman_core::boundary::{
    boundary_norm_sq, hardy_identity_check, infimum_constant, ratio_r, szego_bergman_ratio, theorem1_sweep,
};
use bergman_core::kernel::KernelEvaluator;
use bergman_core::{DomainModel, C64};
use proptest::prelude::*;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

// Zonal expansion on S³: |1 − xζ₁|^{−6} = Σ ((k+1)(k+2)/2)² x^{2k} |ζ₁|^{2k} + (off-diagonal,
// integrating to zero), ∫_{S³}|ζ₁|^{2k} dσ = 2π²/(k+1).
fn ball2_series(x: f64) -> f64 {
    let mut s = 0.0;
    let mut k = 0.0f64;
    loop {
        let t = ((k + 1.0) * (k + 2.0) / 2.0).powi(2) * x.powf(2.0 * k) * 2.0 * PI * PI / (k + 1.0);
        s += t;
        if t < 1e-18 * s && k > 10.0 {
            break;
        }
        k += 1.0;
    }
    s * (2.0 / (PI * PI)).powi(2)
}

#[test]
fn ball2_boundary_norm_matches_zonal_series() {
    for &x in &[0.0, 0.3, 0.9, 0.99] {
        let w = [C64::from_polar(x * 0.6, 0.4), C64::from_polar(x * 0.8, -1.1)];
        let v = boundary_norm_sq(DomainModel::Ball(2), &w, 16).unwrap();
        let s = ball2_series(x);
        assert!((v.value / s - 1.0).abs() < 1e-10, "x={x}: {} vs {s}", v.value);
    }
}

#[test]
fn ellipsoid_reduction_matches_full_atlas() {
    let d = DomainModel::Ellipsoid(2);
    let series = KernelEvaluator::moment_series(d, 1e-14).unwrap();
    let atlas = d.boundary_atlas(40).unwrap();
    let nodes = atlas.nodes().unwrap();
    for w in [[c(0.0), c(0.5)], [C64::new(0.2, 0.1), C64::new(0.1, -0.3)], [c(0.4), c(0.0)]] {
        let reduced = boundary_norm_sq(d, &w, 16).unwrap().value;
        // The series evaluator rejects boundary points; pull them in by 1e-13.
        let full = nodes
            .integrate(|z| {
                let z: Vec<C64> = z.iter().map(|v| v * (1.0 - 1e-13)).collect();
                series.series_with_bound(&z, &w).map(|v| v.0.norm_sqr()).unwrap_or(f64::NAN)
            })
            .unwrap();
        assert!((reduced / full - 1.0).abs() < 1e-9, "{w:?}: {reduced} vs {full}");
    }
}

#[test]
fn disc_closed_form_ratios() {
    let start = Instant::now();
    for &x in &[0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0 - 1e-6] {
        let r = ratio_r(DomainModel::UnitDisc, &[c(x)], 16).unwrap();
        let expect = 2.0 * (1.0 + x * x) / (1.0 + x);
        assert!((r.ratio / expect - 1.0).abs() < 1e-8, "x={x}: {} vs {expect}", r.ratio);
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn sweeps_respect_upper_bound() {
    let deltas: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
    let disc = theorem1_sweep(DomainModel::UnitDisc, &[c(1.0)], &deltas, 16).unwrap();
    // 2(1+x²)/(1+x) increases to 2 along the radial ray.
    assert!(disc.reports.windows(2).all(|p| p[1].ratio >= p[0].ratio));
    assert!((disc.floor - disc.reports[0].ratio).abs() < 1e-15 && disc.reports.last().unwrap().ratio > 2.0 - 1e-5);
    let ball = theorem1_sweep(DomainModel::Ball(2), &[c(1.0), c(1.0)], &deltas, 16).unwrap();
    let ell = theorem1_sweep(DomainModel::Ellipsoid(2), &[c(0.0), c(1.0)], &deltas[..4], 16).unwrap();
    for s in [&disc, &ball, &ell] {
        for r in &s.reports {
            assert!(r.pass_upper, "{:?}", r);
        }
        assert!(s.floor > 0.0 && s.floor_report().pass);
    }
    assert!(ball.reports.iter().all(|r| r.upper_bound == 8.0 * E + 1.0));
    assert!(theorem1_sweep(DomainModel::Ellipsoid(2), &[c(0.0), c(1.0)], &[1e-5], 16).is_err());
}

#[test]
fn hardy_identity_converges() {
    for &x in &[0.0, 0.5, 0.9] {
        let seq = hardy_identity_check(c(x), &[0.9, 0.99, 0.999, 0.9999], 16).unwrap();
        let expect = 2.0 * (1.0 + x * x) / (PI * (1.0 - x * x).powi(3));
        assert!((seq.extrapolated / expect - 1.0).abs() < 1e-6, "x={x}: {}", seq.extrapolated);
        assert!(seq.to_report().pass && seq.increasing);
    }
}

#[test]
fn infimum_below_bound() {
    for n in 1..=5 {
        let inf = infimum_constant(n).unwrap();
        assert!(inf.value < 4.0 * E * n as f64 + 1.0);
        assert!((inf.t_star - inf.t_closed).abs() < 1e-10);
    }
    let big = infimum_constant(50).unwrap();
    assert!((big.value / (4.0 * E * 50.0) - 1.0).abs() < 0.02);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn szego_corollary_on_ball(r in 0.0f64..0.999999, a in 0.0f64..(PI / 2.0), t1 in 0.0f64..6.3, t2 in 0.0f64..6.3) {
        let w = [C64::from_polar(r * a.cos(), t1), C64::from_polar(r * a.sin(), t2)];
        prop_assert!(szego_bergman_ratio(DomainModel::Ball(2), &w).unwrap().pass);
    }

    #[test]
    fn disc_ratio_is_rotation_invariant(x in 0.0f64..0.999, t in 0.0f64..6.3) {
        let a = ratio_r(DomainModel::UnitDisc, &[c(x)], 16).unwrap().ratio;
        let b = ratio_r(DomainModel::UnitDisc, &[C64::from_polar(x, t)], 16).unwrap().ratio;
        prop_assert!((a - b).abs() < 1e-12 * a);
    }
}
