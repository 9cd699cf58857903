use bergman_core::kernel::{KernelEvaluator, KernelMode};
use bergman_core::{DomainModel, C64};
use proptest::prelude::*;

fn point_in(d: DomainModel, raw: &[(f64, f64)], scale: f64) -> Vec<C64> {
    // Shrink toward the origin until inside, then scale.
    let mut z: Vec<C64> = raw.iter().map(|&(r, i)| C64::new(r, i)).collect();
    while !d.contains(&z).unwrap() {
        for c in z.iter_mut() {
            *c *= 0.9;
        }
    }
    z.iter().map(|c| c * scale).collect()
}

#[test]
fn series_matches_closed_form_up_to_095() {
    let cases: &[(DomainModel, Vec<C64>, Vec<C64>)] = &[
        (DomainModel::UnitDisc, vec![C64::new(0.95, 0.0)], vec![C64::new(0.0, 0.95)]),
        (DomainModel::UnitDisc, vec![C64::new(0.6, 0.7)], vec![C64::new(0.6, 0.7)]),
        (
            DomainModel::Ball(2),
            vec![C64::new(0.6, 0.1), C64::new(-0.2, 0.7)],
            vec![C64::new(0.5, 0.3), C64::new(0.1, -0.7)],
        ),
        (
            DomainModel::Ball(2),
            vec![C64::new(0.95, 0.0), C64::new(0.0, 0.0)],
            vec![C64::new(0.95, 0.0), C64::new(0.0, 0.0)],
        ),
        (
            DomainModel::Ball(3),
            vec![C64::new(0.3, 0.1), C64::new(0.2, 0.3), C64::new(-0.4, 0.0)],
            vec![C64::new(0.1, 0.5), C64::new(0.2, 0.1), C64::new(0.3, 0.3)],
        ),
        (
            DomainModel::Polydisc(2),
            vec![C64::new(0.7, 0.2), C64::new(-0.3, 0.6)],
            vec![C64::new(0.1, 0.8), C64::new(0.5, 0.5)],
        ),
        (
            DomainModel::Ellipsoid(2),
            vec![C64::new(0.6, 0.2), C64::new(0.5, -0.4)],
            vec![C64::new(0.3, 0.5), C64::new(-0.2, 0.7)],
        ),
        (
            DomainModel::Ellipsoid(3),
            vec![C64::new(0.8, 0.0), C64::new(0.0, 0.6)],
            vec![C64::new(0.7, 0.3), C64::new(0.6, 0.3)],
        ),
    ];
    for (d, z, w) in cases {
        let cf = KernelEvaluator::closed_form(*d).bergman_eval(z, w).unwrap();
        let ms = KernelEvaluator::moment_series(*d, 1e-12).unwrap().bergman_eval(z, w).unwrap();
        assert!((cf - ms).norm() <= 1e-10, "{d}: {cf} vs {ms}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ellipsoid_closed_form_hermitian_and_series(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4),
        s in 0.1f64..0.9,
        m in 2u32..5,
    ) {
        let d = DomainModel::Ellipsoid(m);
        let z = point_in(d, &raw[..2], s);
        let w = point_in(d, &raw[2..], s);
        let e = KernelEvaluator::closed_form(d);
        let kzw = e.bergman_eval(&z, &w).unwrap();
        let kwz = e.bergman_eval(&w, &z).unwrap();
        prop_assert!((kzw - kwz.conj()).norm() <= 1e-14 * kzw.norm().max(1.0));
        let series = KernelEvaluator::new(d, KernelMode::MomentSeries, 1e-11).unwrap();
        let v = series.bergman_eval(&z, &w).unwrap();
        prop_assert!((kzw - v).norm() <= 1e-10 * kzw.norm().max(1.0), "{} vs {}", kzw, v);
    }
}
