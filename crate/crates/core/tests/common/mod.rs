//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's metric code.

#![allow(dead_code)]

use proptest::prelude::*;
use randers::{ModelKind, Vec2};

/// `(α, β)` written out directly from the metric formulas.
pub fn alpha_beta(kind: ModelKind, x: [f64; 2], v: [f64; 2]) -> (f64, f64) {
    let r2 = x[0] * x[0] + x[1] * x[1];
    let xv = x[0] * v[0] + x[1] * v[1];
    let vv = v[0] * v[0] + v[1] * v[1];
    match kind {
        ModelKind::Funk => {
            let s = 1.0 - r2;
            ((s * vv + xv * xv).sqrt() / s, xv / s)
        }
        ModelKind::PoincareDisk => (2.0 * vv.sqrt() / (1.0 - r2), 4.0 * xv / (1.0 - r2 * r2)),
        ModelKind::HalfPlane => {
            let w = [2.0 * x[0] * x[1], x[1] * x[1] - x[0] * x[0] - 4.0];
            (vv.sqrt() / x[1], (w[0] * v[0] + w[1] * v[1]) / (x[1] * (4.0 + r2)))
        }
    }
}

pub fn finsler(kind: ModelKind, reversible: bool, x: [f64; 2], v: [f64; 2]) -> f64 {
    let (a, b) = alpha_beta(kind, x, v);
    if reversible {
        a
    } else {
        a + b
    }
}

/// Dual norm by brute force: a dense angular scan followed by ternary
/// search in the best bracket.
pub fn dual_by_scan(kind: ModelKind, reversible: bool, x: [f64; 2], a: [f64; 2]) -> f64 {
    if a == [0.0, 0.0] {
        return 0.0;
    }
    let ratio = |t: f64| {
        let e = [t.cos(), t.sin()];
        (a[0] * e[0] + a[1] * e[1]) / finsler(kind, reversible, x, e)
    };
    let n = 4096;
    let dt = std::f64::consts::TAU / n as f64;
    let best = (0..n).max_by(|&i, &j| ratio(i as f64 * dt).total_cmp(&ratio(j as f64 * dt))).unwrap();
    let (mut lo, mut hi) = ((best as f64 - 1.0) * dt, (best as f64 + 1.0) * dt);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if ratio(m1) < ratio(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    ratio(0.5 * (lo + hi))
}

/// Central-difference Jacobian of a plane map.
pub fn fd_jacobian(f: impl Fn(Vec2) -> Vec2, x: Vec2, h: f64) -> [[f64; 2]; 2] {
    let c0 = (f(x + Vec2::new(h, 0.0)) - f(x - Vec2::new(h, 0.0))).0;
    let c1 = (f(x + Vec2::new(0.0, h)) - f(x - Vec2::new(0.0, h))).0;
    [[c0[0] / (2.0 * h), c1[0] / (2.0 * h)], [c0[1] / (2.0 * h), c1[1] / (2.0 * h)]]
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

pub fn model_strategy() -> impl Strategy<Value = ModelKind> {
    prop_oneof![Just(ModelKind::Funk), Just(ModelKind::PoincareDisk), Just(ModelKind::HalfPlane)]
}

/// Interior point of `kind`: disks up to radius 0.95, the half plane on
/// `[−5, 5] × [0.05, 20]`.
pub fn point_in(kind: ModelKind) -> BoxedStrategy<Vec2> {
    match kind {
        ModelKind::HalfPlane => {
            (-5.0..5.0f64, 0.05..20.0f64).prop_map(|(a, b)| Vec2::new(a, b)).boxed()
        }
        _ => (0.0..0.95f64, 0.0..std::f64::consts::TAU)
            .prop_map(|(r, t)| r * Vec2::polar(t))
            .boxed(),
    }
}

pub fn model_and_point() -> impl Strategy<Value = (ModelKind, Vec2)> {
    model_strategy().prop_flat_map(|k| (Just(k), point_in(k)))
}

pub fn nonzero_vector() -> impl Strategy<Value = Vec2> {
    (0.01..10.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| r * Vec2::polar(t))
}

/// Euclidean area of `{v : F(x, v) < 1}` by the polar formula on `n` nodes.
pub fn unit_ball_area(kind: ModelKind, x: [f64; 2], n: usize) -> f64 {
    let dt = std::f64::consts::TAU / n as f64;
    let sum: f64 = (0..n)
        .map(|k| {
            let t = k as f64 * dt;
            let r = 1.0 / finsler(kind, false, x, [t.cos(), t.sin()]);
            r * r
        })
        .sum();
    0.5 * dt * sum
}

/// `exp(−1/(1 − t²))` on `(−1, 1)`, zero outside, with its derivative.
pub fn bump1(t: f64) -> (f64, f64) {
    if t.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let s = 1.0 - t * t;
    let e = (-1.0 / s).exp();
    (e, -2.0 * t * e / (s * s))
}
