mod common;

use std::f64::consts::PI;

use common::*;
use randers::duality::{Constant, FnField, Linear};
use randers::measure::*;
use randers::*;

fn pt(kind: impl Into<ModelId>, a: f64, b: f64) -> ModelPoint {
    ModelPoint::new(kind, a, b).unwrap()
}

/// Radial bump supported on the disk of radius `r0`.
fn disk_bump(r0: f64) -> impl ScalarField {
    FnField::new(
        move |x: Vec2| bump1(x.norm() / r0).0,
        move |x: Vec2| {
            let r = x.norm();
            if r == 0.0 {
                return Vec2::ZERO;
            }
            (bump1(r / r0).1 / (r0 * r)) * x
        },
    )
}

/// Product bump on `[−1, 1] × [0.5, 2.5]`.
fn rect_bump() -> impl ScalarField {
    FnField::new(
        |x: Vec2| bump1(x[0]).0 * bump1(x[1] - 1.5).0,
        |x: Vec2| {
            let (a, da) = bump1(x[0]);
            let (b, db) = bump1(x[1] - 1.5);
            Vec2::new(da * b, a * db)
        },
    )
}

#[test]
fn density_examples() {
    let cases = [
        (ModelKind::Funk, [0.0, 0.0], 1.0),
        (ModelKind::PoincareDisk, [0.0, 0.0], 4.0),
        (ModelKind::Funk, [0.5, 0.0], 1.0),
        (ModelKind::HalfPlane, [0.0, 2.0], 0.25),
    ];
    for (kind, x, want) in cases {
        let s = density_sigma(kind, &pt(kind, x[0], x[1]), 256).unwrap();
        assert!((s - want).abs() < 1e-8, "{kind} {x:?}: {s}");
        // Oracle: π over a 2²⁰-node polar area.
        let oracle = PI / unit_ball_area(kind, x, 1 << 20);
        assert!((oracle - want).abs() < 1e-8, "{kind} {x:?}: oracle {oracle}");
    }
}

#[test]
fn funk_density_is_one() {
    let t = Truncation::default().for_kind(ModelKind::Funk);
    let points = sample_points(ModelKind::Funk, 1000, 13, t).unwrap();
    for p in &points {
        let s = density_sigma(ModelKind::Funk, p, 256).unwrap();
        assert!((s - 1.0).abs() < 1e-8, "{}: {s}", p.coords());
    }
    for p in points.iter().step_by(100) {
        let oracle = PI / unit_ball_area(ModelKind::Funk, p.coords().0, 1 << 20);
        assert!((oracle - 1.0).abs() < 1e-8, "{}: {oracle}", p.coords());
    }
}

#[test]
fn density_nodes_converge() {
    for kind in ModelKind::ALL {
        let t = Truncation::default().for_kind(kind);
        for p in sample_points(kind, 20, 2, t).unwrap() {
            let a = density_sigma(kind, &p, 1 << 14).unwrap();
            let b = density_sigma(kind, &p, 1 << 15).unwrap();
            assert!((a - b).abs() < 1e-10 * a.max(1.0), "{kind} {}", p.coords());
            let c = density_sigma_closed(kind, &p).unwrap();
            assert!((a - c).abs() < 1e-10 * c.max(1.0), "{kind} {}: {a} vs {c}", p.coords());
        }
    }
}

#[test]
fn integral_examples() {
    let half = QuadratureSpec::new(Region::Disk { radius: 0.5 }, 8, 16, Rule::Gauss(3));
    let funk = integrate(ModelKind::Funk, &Constant(1.0), &half).unwrap();
    assert!((funk - PI / 4.0).abs() < 1e-6, "{funk}");
    // σ_P = 4(1 − r²)/(1 + r²)³ integrates to 16π/25 over r ≤ ½.
    let p = integrate(ModelKind::PoincareDisk, &Constant(1.0), &half).unwrap();
    assert!((p - 16.0 * PI / 25.0).abs() < 1e-5, "{p}");
    let rect = QuadratureSpec::new(Region::Rectangle { x1: [-1.0, 1.0], x2: [0.5, 2.0] }, 4, 4, Rule::Midpoint);
    assert_eq!(integrate(ModelKind::HalfPlane, &Constant(0.0), &rect).unwrap(), 0.0);
    assert_eq!(integrate(ModelKind::Funk, &Constant(0.0), &half).unwrap(), 0.0);
}

#[test]
fn integral_converges_under_refinement() {
    let q = QuadratureSpec::new(Region::Annulus { inner: 0.2, outer: 0.7 }, 2, 4, Rule::Gauss(2));
    let errs: Vec<f64> = (0..3)
        .map(|k| {
            let v = integrate(ModelKind::PoincareDisk, &Constant(1.0), &q.refined(1 << k)).unwrap();
            // ∫ 2πr·4(1−r²)/(1+r²)³ dr = 4π[1/(1+u) − 1/(1+u)²] in u = r².
            let prim = |r: f64| {
                let w = 1.0 / (1.0 + r * r);
                4.0 * PI * (w - w * w)
            };
            (v - (prim(0.7) - prim(0.2))).abs()
        })
        .collect();
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
}

#[test]
fn volume_pulls_back_under_f() {
    let q = QuadratureSpec::new(Region::Disk { radius: 0.5 }, 16, 32, Rule::Gauss(3));
    let src = integrate(ModelKind::PoincareDisk, &Constant(1.0), &q).unwrap();
    let img = integrate_image(IsometryMap::F, &Constant(1.0), &q).unwrap();
    assert!((src - img).abs() < 1e-4, "{src} vs {img}");
    // f maps radius ½ onto radius 0.8, where σ_F ≡ 1 gives area 0.64π.
    assert!((img - 0.64 * PI).abs() < 1e-4);
}

#[test]
fn laplacian_examples() {
    for kind in ModelKind::ALL {
        let p = if kind.is_disk() { pt(kind, 0.1, -0.2) } else { pt(kind, 0.3, 1.1) };
        assert!(finsler_laplacian(kind, &Constant(2.0), &p, 1e-4).unwrap().abs() < 1e-8);
    }
    let x1 = Linear { c: Vec2::new(1.0, 0.0), d: 0.0 };
    let rev = ModelId::reversible(ModelKind::PoincareDisk);
    let l = finsler_laplacian(rev, &x1, &pt(rev, 0.3, 0.1), 1e-4).unwrap();
    assert!(l.abs() < 1e-5, "{l}");
    // Funk: F*(x, a) = |a| − ⟨a, x⟩ and σ ≡ 1, so ∇_F x₁ = (1 − x₁)(e₁ − x)
    // and Δ_F x₁ = −3(1 − x₁).
    for x in [[0.0, 0.0], [0.2, 0.3], [-0.4, 0.1]] {
        let l = finsler_laplacian(ModelKind::Funk, &x1, &pt(ModelKind::Funk, x[0], x[1]), 1e-4).unwrap();
        assert!((l + 3.0 * (1.0 - x[0])).abs() < 1e-5, "{x:?}: {l}");
    }
}

#[test]
fn weak_form_trivial_cases() {
    let q = QuadratureSpec::new(Region::Disk { radius: 0.6 }, 4, 8, Rule::Gauss(2));
    let lap = LaplaceSpec::default();
    let r = weak_form_residual(ModelKind::Funk, &Constant(1.0), &disk_bump(0.6), &q, &lap).unwrap();
    assert!(r < 1e-8);
    let x1 = Linear { c: Vec2::new(1.0, 0.0), d: 0.0 };
    let r = weak_form_residual(ModelKind::PoincareDisk, &x1, &Constant(0.0), &q, &lap).unwrap();
    assert_eq!(r, 0.0);
    let bad = weak_form_residual(ModelKind::Funk, &x1, &Constant(1.0), &q, &lap);
    assert!(matches!(bad, Err(Error::InvalidInput(_))), "{bad:?}");
}

/// Residuals at three joint halvings of cell size and Laplacian step.
fn weak_residuals(kind: ModelKind, u: &dyn ScalarField, lap: impl Fn(f64) -> LaplaceSpec) -> [f64; 3] {
    let (region, v): (Region, Box<dyn ScalarField>) = if kind.is_disk() {
        (Region::Disk { radius: 0.6 }, Box::new(disk_bump(0.6)))
    } else {
        (Region::Rectangle { x1: [-1.0, 1.0], x2: [0.5, 2.5] }, Box::new(rect_bump()))
    };
    let base = QuadratureSpec::new(region, 4, 8, Rule::Gauss(2));
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let f = 1 << k;
        *o = weak_form_residual(kind, u, v.as_ref(), &base.refined(f), &lap(4e-3 / f as f64)).unwrap();
    }
    out
}

#[test]
fn weak_form_converges_closed_form_routes() {
    let x1 = Linear { c: Vec2::new(1.0, 0.0), d: 0.0 };
    let quad = FnField::new(
        |x: Vec2| x[0] + 0.5 * x[1] * x[1] + 0.3 * x[0] * x[1],
        |x: Vec2| Vec2::new(1.0 + 0.3 * x[1], x[1] + 0.3 * x[0]),
    );
    for kind in ModelKind::ALL {
        for u in [&x1 as &dyn ScalarField, &quad] {
            let r = weak_residuals(kind, u, LaplaceSpec::closed_form);
            assert!(r[0] >= 3.0 * r[1] && r[1] >= 3.0 * r[2], "{kind}: {r:?}");
        }
    }
}

#[test]
fn weak_form_funk_numeric_routes() {
    let x1 = Linear { c: Vec2::new(1.0, 0.0), d: 0.0 };
    let r = weak_residuals(ModelKind::Funk, &x1, |step| LaplaceSpec { step, ..LaplaceSpec::default() });
    assert!(r[0] >= 3.0 * r[1] && r[1] >= 3.0 * r[2], "{r:?}");
}
