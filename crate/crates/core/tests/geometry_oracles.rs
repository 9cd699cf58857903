use std::f64::consts::PI;

use bergman_core::{DomainModel, C64};
use proptest::prelude::*;

// Minimum distance to the modulus curve x² + y^{2m} = 1 by dense sampling.
fn brute_distance(m: u32, a: f64, b: f64) -> f64 {
    // Sampled as a graph over y and over x, since each is steep near one end.
    let n = 200_000;
    let e = 1.0 / (2 * m) as f64;
    (0..=n)
        .flat_map(|i| {
            let s = i as f64 / n as f64;
            [((1.0 - s.powi(2 * m as i32)).max(0.0).sqrt(), s), (s, (1.0 - s * s).max(0.0).powf(e))]
        })
        .map(|(x, y)| ((x - a).powi(2) + (y - b).powi(2)).sqrt())
        .fold(f64::INFINITY, f64::min)
}

// Simpson rule on π² ∫₀¹ v^k (1 − v^m)^{j+1}/(j+1) dv (u = |z₁|², v = |z₂|²).
fn moment_by_quadrature(m: u32, j: i32, k: i32) -> f64 {
    let n = 20_000;
    let h = 1.0 / n as f64;
    let f = |v: f64| v.powi(k) * (1.0 - v.powi(m as i32)).powi(j + 1) / (j + 1) as f64;
    let mut s = f(0.0) + f(1.0);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    PI * PI * s * h / 3.0
}

#[test]
fn ellipsoid_distance_examples() {
    let d = DomainModel::Ellipsoid(2);
    let v = d.boundary_distance(&[C64::new(0.0, 0.0), C64::new(0.5, 0.0)]).unwrap();
    assert!((v - 0.5).abs() < 1e-12);
    for &(a, b) in &[(0.3, 0.4), (0.9, 0.1), (0.05, 0.95), (0.6, 0.6)] {
        let z = [C64::new(a, 0.0), C64::new(0.0, b)];
        let v = d.boundary_distance(&z).unwrap();
        let brute = brute_distance(2, a, b);
        assert!(v <= brute + 1e-14 && brute - v < 1e-9, "({a},{b}): {v} vs {brute}");
    }
}

#[test]
fn ellipsoid_moments_match_quadrature() {
    for m in [2u32, 3] {
        let d = DomainModel::Ellipsoid(m);
        for (j, k) in [(0, 0), (1, 0), (0, 1), (3, 2), (5, 7)] {
            let exact = d.monomial_moment(&[j as i64, k as i64]).unwrap();
            let q = moment_by_quadrature(m, j, k);
            assert!((exact / q - 1.0).abs() < 1e-12, "m={m} ({j},{k}): {exact} vs {q}");
        }
    }
}

#[test]
fn ellipsoid_volume_rule_reproduces_moments() {
    let d = DomainModel::Ellipsoid(2);
    let rule = d.volume_rule(24).unwrap();
    for (j, k) in [(0usize, 0usize), (2, 1), (1, 3)] {
        let v = rule.integrate(|z| z[0].norm_sqr().powi(j as i32) * z[1].norm_sqr().powi(k as i32)).unwrap();
        let exact = d.monomial_moment(&[j as i64, k as i64]).unwrap();
        assert!((v / exact - 1.0).abs() < 1e-10, "({j},{k}): {v} vs {exact}");
    }
}

#[test]
fn atlas_area_converges() {
    // Ball(3) charts are 5-dimensional, so its resolutions stay small.
    for (d, lo, hi) in
        [(DomainModel::Ellipsoid(2), 16, 32), (DomainModel::Ellipsoid(3), 16, 32), (DomainModel::Ball(3), 12, 16)]
    {
        let a = d.boundary_atlas(lo).unwrap().integrate(|_| 1.0).unwrap();
        let b = d.boundary_atlas(hi).unwrap().integrate(|_| 1.0).unwrap();
        assert!((a / b - 1.0).abs() < 1e-10, "{d}: {a} vs {b}");
    }
    // |S⁵| = π³.
    let s5 = DomainModel::Ball(3).boundary_atlas(16).unwrap().integrate(|_| 1.0).unwrap();
    assert!((s5 / PI.powi(3) - 1.0).abs() < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // At the foot point z − ζ is parallel to the modulus-plane normal (x, m y^{2m−1}).
    #[test]
    fn ellipsoid_foot_satisfies_lagrange(a in 0.0f64..1.0, b in 0.0f64..1.0, t in 0.0f64..6.3) {
        let d = DomainModel::Ellipsoid(2);
        prop_assume!(a * a + b.powi(4) < 0.999);
        let z = [C64::from_polar(a, t), C64::from_polar(b, -t)];
        let p = d.nearest_boundary_point(&z).unwrap();
        prop_assert!(d.defining_function(&p).unwrap().abs() < 1e-12);
        let (x, y) = (p[0].norm(), p[1].norm());
        let (nx, ny) = (x, 2.0 * y.powi(3));
        let cross = (a - x) * ny - (b - y) * nx;
        prop_assert!(cross.abs() < 1e-9 * (nx.hypot(ny)), "cross {}", cross);
        let dist = d.boundary_distance(&z).unwrap();
        let direct = ((p[0] - z[0]).norm_sqr() + (p[1] - z[1]).norm_sqr()).sqrt();
        prop_assert!((dist - direct).abs() < 1e-12);
    }

    #[test]
    fn distance_is_one_lipschitz(a in 0.0f64..0.8, b in 0.0f64..0.8, da in -0.05f64..0.05, db in -0.05f64..0.05) {
        let d = DomainModel::Ellipsoid(3);
        let z = [C64::new(a, 0.0), C64::new(b, 0.0)];
        let w = [C64::new(a + da, 0.0), C64::new(b + db, 0.0)];
        prop_assume!(d.contains(&w).unwrap() && d.contains(&z).unwrap());
        let gap = (d.boundary_distance(&z).unwrap() - d.boundary_distance(&w).unwrap()).abs();
        prop_assert!(gap <= da.hypot(db) + 1e-12);
    }
}
