mod common;

use common::*;
use proptest::prelude::*;
use randers::metrics::{fundamental_tensor_with_step, half_plane_bound_closed_form};
use randers::*;

fn tv(kind: ModelKind, x: Vec2, v: Vec2) -> TangentVector {
    TangentVector::new(ModelPoint::from_vec(kind, x).unwrap(), v).unwrap()
}

fn at(kind: ModelKind, x1: f64, x2: f64, v1: f64, v2: f64) -> MetricValue {
    evaluate(kind, &tv(kind, Vec2::new(x1, x2), Vec2::new(v1, v2))).unwrap()
}

#[test]
fn in_domain_examples() {
    assert!(in_domain(ModelKind::Funk, Vec2::ZERO).unwrap());
    assert!(!in_domain(ModelKind::HalfPlane, Vec2::new(3.0, -1.0)).unwrap());
    assert!(!in_domain(ModelKind::PoincareDisk, Vec2::new(1.0, 0.0)).unwrap());
    assert!(in_domain(ModelKind::Funk, Vec2::new(f64::NAN, 0.0)).is_err());
}

#[test]
fn sampling_examples() {
    let one = sample_points(ModelKind::Funk, 1, 7, 0.9).unwrap();
    assert_eq!(one.len(), 1);
    assert!(one[0].coords().norm() <= 0.9);
    let a = sample_points(ModelKind::Funk, 100_000, 7, 0.99).unwrap();
    let b = sample_points(ModelKind::Funk, 100_000, 7, 0.99).unwrap();
    assert_eq!(a, b);
    for p in sample_points(ModelKind::HalfPlane, 3, 1, 0.1).unwrap() {
        assert!((0.1..=10.0).contains(&p.coords()[1]));
    }
    assert!(sample_points(ModelKind::Funk, 3, 1, 1.0).is_err());
    assert!(sample_points(ModelKind::HalfPlane, 3, 1, 0.0).is_err());
}

#[test]
fn evaluate_examples() {
    let m = at(ModelKind::Funk, 0.0, 0.0, 3.0, 4.0);
    assert_eq!((m.f, m.alpha, m.beta), (5.0, 5.0, 0.0));

    let m = at(ModelKind::PoincareDisk, 0.5, 0.0, 1.0, 0.0);
    assert!((m.alpha - 8.0 / 3.0).abs() < 1e-15);
    assert!((m.beta - 32.0 / 15.0).abs() < 1e-15);
    assert!((m.f - 24.0 / 5.0).abs() < 1e-14);

    let m = at(ModelKind::HalfPlane, 0.0, 1.0, 0.0, 1.0);
    assert!((m.alpha - 1.0).abs() < 1e-15 && (m.beta + 0.6).abs() < 1e-15);
    assert!((m.f - 0.4).abs() < 1e-15);

    let m = at(ModelKind::HalfPlane, 0.0, 2.0, 1.0, 0.0);
    assert_eq!((m.f, m.beta), (0.5, 0.0));
}

#[test]
fn evaluate_rejects_bad_input() {
    let p = ModelPoint::new(ModelKind::Funk, 0.1, 0.0).unwrap();
    assert!(TangentVector::new(p, Vec2::new(f64::INFINITY, 0.0)).is_err());
    let t = TangentVector::new(p, Vec2::new(1.0, 0.0)).unwrap();
    assert!(matches!(evaluate(ModelKind::HalfPlane, &t), Err(Error::ModelMismatch { .. })));
    assert!(ModelPoint::new(ModelKind::HalfPlane, 0.0, -1.0).unwrap_err().is_domain());
}

#[test]
fn drift_examples() {
    let d = |a, b| drift_field(&ModelPoint::new(ModelKind::HalfPlane, a, b).unwrap()).unwrap();
    assert_eq!(d(0.0, 2.0), Vec2::new(0.0, 0.0));
    assert_eq!(d(0.0, 1.0), Vec2::new(0.0, -3.0));
    assert_eq!(d(1.0, 1.0), Vec2::new(2.0, -4.0));
    assert!(drift_field(&ModelPoint::new(ModelKind::Funk, 0.0, 0.0).unwrap()).is_err());
}

#[test]
fn randers_bound_examples() {
    let b = |k, a, c| randers_bound(k, &ModelPoint::new(k, a, c).unwrap()).unwrap();
    assert!((b(ModelKind::HalfPlane, 0.0, 1.0) - 0.6).abs() < 1e-15);
    assert_eq!(b(ModelKind::Funk, 0.0, 0.0), 0.0);
    assert!((b(ModelKind::Funk, 0.5, 0.0) - 0.5).abs() < 1e-15);
    // Oracle: the bound is max β/α over directions.
    let scan = (0..100_000)
        .map(|k| {
            let (a, be) = alpha_beta(ModelKind::Funk, [0.5, 0.0], Vec2::polar(k as f64 * 1e-5 * std::f64::consts::TAU).0);
            be / a
        })
        .fold(f64::MIN, f64::max);
    assert!((scan - 0.5).abs() < 1e-9);
}

#[test]
fn fundamental_tensor_examples() {
    let t = fundamental_tensor(ModelKind::Funk, &tv(ModelKind::Funk, Vec2::ZERO, Vec2::new(1.0, 0.0))).unwrap();
    // Central differences of ½F² carry rounding noise of order ε·F²/step².
    assert!(t.matrix.max_abs_diff(&Mat2::IDENTITY) < 1e-5);
    let t = fundamental_tensor(
        ModelKind::PoincareDisk,
        &tv(ModelKind::PoincareDisk, Vec2::ZERO, Vec2::new(-0.3, 2.0)),
    )
    .unwrap();
    assert!(t.matrix.max_abs_diff(&Mat2::scaled_identity(4.0)) < 4e-5);

    let p = tv(ModelKind::HalfPlane, Vec2::new(0.3, 0.7), Vec2::new(1.0, 2.0));
    let mats: Vec<Mat2> = [1e-4, 1e-5, 1e-6]
        .iter()
        .map(|&h| fundamental_tensor_with_step(ModelKind::HalfPlane, &p, h).unwrap().matrix)
        .collect();
    for m in &mats {
        assert_eq!(m.0[0][1], m.0[1][0]);
        assert!(m.sym_eigenvalues()[0] > 0.0);
    }
    // Steps 1e-4 and 1e-5 agree to truncation level; 1e-6 is already
    // dominated by rounding but stays close.
    assert!(mats[0].max_abs_diff(&mats[1]) < 1e-5);
    assert!(mats[1].max_abs_diff(&mats[2]) < 1e-2);

    let zero = tv(ModelKind::Funk, Vec2::ZERO, Vec2::ZERO);
    assert!(matches!(fundamental_tensor(ModelKind::Funk, &zero), Err(Error::DegenerateDirection(_))));
}

#[test]
fn reversibility_defect_examples() {
    let d = reversibility_defect(ModelKind::Funk, &tv(ModelKind::Funk, Vec2::ZERO, Vec2::new(1.0, 1.0)));
    assert_eq!(d.unwrap(), 0.0);
    let p = tv(ModelKind::PoincareDisk, Vec2::new(0.5, 0.0), Vec2::new(1.0, 0.0));
    assert!((reversibility_defect(ModelKind::PoincareDisk, &p).unwrap() - 64.0 / 15.0).abs() < 1e-14);
    let rev = ModelId::reversible(ModelKind::PoincareDisk);
    let p = tv(ModelKind::PoincareDisk, Vec2::new(0.5, 0.2), Vec2::new(1.0, -3.0));
    assert_eq!(reversibility_defect(rev, &p.clone()).unwrap(), 0.0);
}

/// Per-model seeded samples, the same for every property below.
fn seeded(kind: ModelKind, n: usize, seed: u64) -> Vec<TangentVector> {
    randers::sample_tangents(kind, n, seed, Truncation::default().for_kind(kind)).unwrap()
}

#[test]
fn triangle_inequality_ten_thousand_per_model() {
    for kind in ModelKind::ALL {
        let a = seeded(kind, 10_000, 11);
        let b = seeded(kind, 10_000, 12);
        for (s, t) in a.iter().zip(&b) {
            let x = s.base.coords();
            let lhs = finsler(kind, false, x.0, (s.v + t.v).0);
            let f = |v: Vec2| evaluate(kind, &TangentVector::new(s.base, v).unwrap()).unwrap().f;
            assert!(f(s.v + t.v) <= f(s.v) + f(t.v) + 1e-12 * (1.0 + lhs), "{kind} at {x}");
        }
    }
}

#[test]
fn tensor_positive_thousand_per_model() {
    for kind in ModelKind::ALL {
        for t in seeded(kind, 1000, 5).iter().filter(|t| !t.v.is_zero()) {
            let ft = fundamental_tensor(kind, t).unwrap();
            assert!(ft.min_eigenvalue > 0.0, "{kind} {:?}", t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn matches_the_formula((kind, x) in model_and_point(), v in nonzero_vector()) {
        let m = evaluate(kind, &tv(kind, x, v)).unwrap();
        let (a, b) = alpha_beta(kind, x.0, v.0);
        prop_assert!(rel(m.alpha, a) < 1e-14);
        prop_assert!((m.beta - b).abs() <= 1e-14 * a);
        prop_assert_eq!(m.f, m.alpha + m.beta);
        prop_assert!(m.alpha >= m.beta.abs());
        prop_assert!(m.f > 0.0);
    }

    #[test]
    fn positively_homogeneous((kind, x) in model_and_point(), v in nonzero_vector()) {
        let f1 = evaluate(kind, &tv(kind, x, v)).unwrap().f;
        for lam in [0.0, 0.5, 1.0, 2.0, 10.0] {
            let fl = evaluate(kind, &tv(kind, x, lam * v)).unwrap().f;
            prop_assert!((fl - lam * f1).abs() <= 1e-12 * lam * f1);
        }
    }

    #[test]
    fn bound_below_one((kind, x) in model_and_point()) {
        let p = ModelPoint::from_vec(kind, x).unwrap();
        let b = randers_bound(kind, &p).unwrap();
        prop_assert!(b < 1.0);
        if kind == ModelKind::HalfPlane {
            prop_assert!((b - half_plane_bound_closed_form(&p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn defect_is_twice_beta((kind, x) in model_and_point(), v in nonzero_vector()) {
        let t = tv(kind, x, v);
        let m = evaluate(kind, &t).unwrap();
        let d = reversibility_defect(kind, &t).unwrap();
        prop_assert!((d - 2.0 * m.beta).abs() <= 1e-12 * m.alpha);
        prop_assert_eq!(reversibility_defect(ModelId::reversible(kind), &t).unwrap(), 0.0);
    }
}
