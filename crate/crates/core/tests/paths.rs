mod common;

use common::*;
use proptest::prelude::*;
use randers::paths::{distance_estimate_with, path_length_mapped, DEFAULT_QUAD};
use randers::*;

fn pt(kind: impl Into<ModelId>, a: f64, b: f64) -> ModelPoint {
    ModelPoint::new(kind, a, b).unwrap()
}

fn segment(kind: impl Into<ModelId> + Copy, a: [f64; 2], b: [f64; 2]) -> Polyline {
    Polyline::new(kind, &[pt(kind, a[0], a[1]), pt(kind, b[0], b[1])]).unwrap()
}

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol)
}

#[test]
fn small_segment_limit() {
    for s in [1e-3, 1e-5, 1e-7] {
        let l = path_length(&segment(ModelKind::Funk, [0.0, 0.0], [s, 0.0]), DEFAULT_QUAD).unwrap();
        assert!((l / s - 1.0).abs() < 2.0 * s, "{s}: {}", l / s);
    }
}

#[test]
fn funk_axis_segment_against_adaptive_quadrature() {
    let forward = path_length(&segment(ModelKind::Funk, [0.0, 0.0], [0.5, 0.0]), DEFAULT_QUAD).unwrap();
    let reverse = path_length(&segment(ModelKind::Funk, [0.5, 0.0], [0.0, 0.0]), DEFAULT_QUAD).unwrap();
    let f_oracle = simpson(&|t| finsler(ModelKind::Funk, false, [t, 0.0], [1.0, 0.0]), 0.0, 0.5, 1e-14);
    let r_oracle = simpson(&|t| finsler(ModelKind::Funk, false, [0.5 - t, 0.0], [-1.0, 0.0]), 0.0, 0.5, 1e-14);
    assert!((forward - f_oracle).abs() < 1e-12, "{forward} vs {f_oracle}");
    assert!((reverse - r_oracle).abs() < 1e-12, "{reverse} vs {r_oracle}");
    assert!((f_oracle - 2f64.ln()).abs() < 1e-12 && (r_oracle - 1.5f64.ln()).abs() < 1e-12);
    assert!(reverse < forward);
}

#[test]
fn degenerate_polyline_rejected() {
    let p = pt(ModelKind::Funk, 0.2, 0.2);
    assert!(matches!(Polyline::new(ModelKind::Funk, &[p, p]), Err(Error::InvalidInput(_))));
    assert!(Polyline::new(ModelKind::Funk, &[p, pt(ModelKind::PoincareDisk, 0.0, 0.0)]).is_err());
    assert!(distance_estimate(ModelKind::Funk, &p, &p, 2, 10).is_err());
}

#[test]
fn funk_chord_is_not_improved_by_control_points() {
    let (x, y) = (pt(ModelKind::Funk, 0.0, 0.0), pt(ModelKind::Funk, 0.5, 0.0));
    let chord = distance_estimate(ModelKind::Funk, &x, &y, 0, 200).unwrap().length;
    for k in [2, 4] {
        let d = distance_estimate(ModelKind::Funk, &x, &y, k, 200).unwrap();
        assert!(chord - d.length < 1e-6, "{k}: {} vs {chord}", d.length);
        assert!(d.history.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn funk_distance_is_asymmetric() {
    let (x, y) = (pt(ModelKind::Funk, 0.0, 0.0), pt(ModelKind::Funk, 0.5, 0.0));
    let f = distance_estimate(ModelKind::Funk, &x, &y, 4, 200).unwrap().length;
    let r = distance_estimate(ModelKind::Funk, &y, &x, 4, 200).unwrap().length;
    assert!(f - r > 0.1, "{f} {r}");
    assert!((f - 2f64.ln()).abs() < 1e-6 && (r - 1.5f64.ln()).abs() < 1e-6);
}

#[test]
fn reversible_distances_are_symmetric() {
    for kind in ModelKind::ALL {
        let rev = ModelId::reversible(kind);
        let pts = sample_points(rev, 6, 31, if kind.is_disk() { 0.8 } else { 0.2 }).unwrap();
        for w in pts.chunks(2) {
            let f = distance_estimate(rev, &w[0], &w[1], 4, 200).unwrap().length;
            let r = distance_estimate(rev, &w[1], &w[0], 4, 200).unwrap().length;
            assert!((f - r).abs() < 1e-8 * f.max(1.0), "{kind}: {f} {r}");
        }
    }
}

#[test]
fn estimates_satisfy_triangle_inequality() {
    for kind in ModelKind::ALL {
        let pts = sample_points(kind, 12, 17, if kind.is_disk() { 0.8 } else { 0.2 }).unwrap();
        for t in pts.chunks(3) {
            let d = |a: &ModelPoint, b: &ModelPoint| distance_estimate(kind, a, b, 4, 200).unwrap().length;
            let (xz, xy, yz) = (d(&t[0], &t[2]), d(&t[0], &t[1]), d(&t[1], &t[2]));
            assert!(xz <= xy + yz + 2e-6, "{kind}: {xz} > {xy} + {yz}");
        }
    }
}

#[test]
fn estimates_are_deterministic() {
    let (x, y) = (pt(ModelKind::HalfPlane, -0.3, 0.5), pt(ModelKind::HalfPlane, 0.8, 2.0));
    let a = distance_estimate_with(ModelKind::HalfPlane, &x, &y, 3, 50, 32).unwrap();
    let b = distance_estimate_with(ModelKind::HalfPlane, &x, &y, 3, 50, 32).unwrap();
    assert_eq!(a, b);
}

fn polyline_in(kind: ModelKind) -> impl Strategy<Value = Polyline> {
    proptest::collection::vec(point_in(kind), 2..5).prop_filter_map("distinct", move |v| {
        Polyline::from_coords(kind, v).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn length_is_isometry_invariant(map in proptest::sample::select(IsometryMap::ALL.to_vec()), seed in 0u64..1000) {
        let kind = map.source();
        let pts = sample_points(kind, 3, seed, if kind.is_disk() { 0.9 } else { 0.1 }).unwrap();
        let p = Polyline::new(kind, &pts).unwrap();
        let l = path_length(&p, DEFAULT_QUAD).unwrap();
        let m = path_length_mapped(&p, map, DEFAULT_QUAD).unwrap();
        prop_assert!((l - m).abs() < 1e-6 * l.max(1.0), "{} vs {}", l, m);
    }

    #[test]
    fn length_is_additive(kind in model_strategy()) {
        let p = segment(kind, if kind.is_disk() { [0.1, 0.2] } else { [0.1, 0.5] }, if kind.is_disk() { [-0.3, 0.4] } else { [1.0, 2.0] });
        let q = segment(kind, p.vertices()[1].0, if kind.is_disk() { [0.5, -0.1] } else { [-2.0, 0.7] });
        let pq = p.concat(&q).unwrap();
        let total = path_length(&pq, DEFAULT_QUAD).unwrap();
        let parts = path_length(&p, DEFAULT_QUAD).unwrap() + path_length(&q, DEFAULT_QUAD).unwrap();
        prop_assert!((total - parts).abs() < 1e-12 * total.max(1.0));
    }

    #[test]
    fn reversed_twice_is_identity(p in model_strategy().prop_flat_map(polyline_in)) {
        prop_assert_eq!(p.reversed().reversed(), p.clone());
        let f = path_length(&p, 16).unwrap();
        let r = path_length(&p.reversed(), 16).unwrap();
        let rev = Polyline::from_coords(ModelId::reversible(p.model().kind), p.vertices().to_vec()).unwrap();
        let fr = path_length(&rev, 16).unwrap();
        // α-length is the mean of both orientations since β flips sign.
        prop_assert!((fr - 0.5 * (f + r)).abs() < 1e-10 * fr.max(1.0));
    }
}
