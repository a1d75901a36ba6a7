//! Closed-form metric terms, maps and Jacobians, generic over the scalar type.
//!
//! The f64 API in [`crate::metrics`] and [`crate::isometry`] is a thin
//! wrapper around these functions. The verification sweeps instantiate the
//! same code with [`DoubleDouble`] so that the comparison is not limited by
//! how precisely an f64 can place a point next to the boundary.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::dd::DoubleDouble;
use crate::geometry::ModelKind;

/// Scalar type accepted by the generic formulas.
pub trait Real:
    Copy
    + Send
    + Sync
    + Debug
    + PartialOrd
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn one() -> Self {
        Self::from(1.0)
    }
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn to_f64(self) -> f64;
    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Real for f64 {
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for DoubleDouble {
    fn sqrt(self) -> Self {
        DoubleDouble::sqrt(self)
    }
    fn abs(self) -> Self {
        DoubleDouble::abs(self)
    }
    fn to_f64(self) -> f64 {
        DoubleDouble::to_f64(self)
    }
}

#[inline]
fn k<T: Real>(c: f64) -> T {
    T::from(c)
}

#[inline]
fn dot<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

#[inline]
fn norm<T: Real>(a: [T; 2]) -> T {
    dot(a, a).sqrt()
}

/// `(α, β)` of the Funk metric: Klein norm plus `⟨x,v⟩/(1−|x|²)`.
pub fn funk_terms<T: Real>(x: [T; 2], v: [T; 2]) -> (T, T) {
    let s = T::one() - dot(x, x);
    let p = dot(x, v);
    let alpha = (s * dot(v, v) + p * p).sqrt() / s;
    (alpha, p / s)
}

/// `(α, β)` of the Finsler-Poincaré disk.
pub fn poincare_terms<T: Real>(x: [T; 2], v: [T; 2]) -> (T, T) {
    let r2 = dot(x, x);
    let alpha = k::<T>(2.0) * norm(v) / (T::one() - r2);
    let beta = k::<T>(4.0) * dot(x, v) / (T::one() - r2 * r2);
    (alpha, beta)
}

/// Drift `w(x) = (2x₁x₂, x₂² − x₁² − 4)` of the half-plane model.
pub fn drift<T: Real>(x: [T; 2]) -> [T; 2] {
    [
        k::<T>(2.0) * x[0] * x[1],
        x[1] * x[1] - x[0] * x[0] - k::<T>(4.0),
    ]
}

/// `(α, β)` of the Finsler-Poincaré upper half plane.
pub fn half_plane_terms<T: Real>(x: [T; 2], v: [T; 2]) -> (T, T) {
    let alpha = norm(v) / x[1];
    let beta = dot(drift(x), v) / (x[1] * (k::<T>(4.0) + dot(x, x)));
    (alpha, beta)
}

pub fn terms<T: Real>(kind: ModelKind, x: [T; 2], v: [T; 2]) -> (T, T) {
    match kind {
        ModelKind::Funk => funk_terms(x, v),
        ModelKind::PoincareDisk => poincare_terms(x, v),
        ModelKind::HalfPlane => half_plane_terms(x, v),
    }
}

/// `f(x) = 2x/(1+|x|²)`, Poincaré disk to Funk disk.
pub fn map_f<T: Real>(x: [T; 2]) -> [T; 2] {
    let c = k::<T>(2.0) / (T::one() + dot(x, x));
    [c * x[0], c * x[1]]
}

/// `f⁻¹(y) = y/(1+√(1−|y|²))`.
pub fn map_f_inv<T: Real>(y: [T; 2]) -> [T; 2] {
    let d = T::one() + (T::one() - dot(y, y)).sqrt();
    [y[0] / d, y[1] / d]
}

/// `g(x) = (2x₂, 2√(1−|x|²)) / (1+x₁)`, Funk disk to half plane.
pub fn map_g<T: Real>(x: [T; 2]) -> [T; 2] {
    let d = T::one() + x[0];
    let two = k::<T>(2.0);
    [two * x[1] / d, two * (T::one() - dot(x, x)).sqrt() / d]
}

/// `g⁻¹(y) = (4−|y|², 4y₁) / (4+|y|²)`.
pub fn map_g_inv<T: Real>(y: [T; 2]) -> [T; 2] {
    let four = k::<T>(4.0);
    let r2 = dot(y, y);
    let n = four + r2;
    [(four - r2) / n, four * y[0] / n]
}

/// `h(x) = (4−|x|², 4x₁) / (|x|²+4x₂+4)`, half plane to Poincaré disk.
pub fn map_h<T: Real>(x: [T; 2]) -> [T; 2] {
    let four = k::<T>(4.0);
    let r2 = dot(x, x);
    let d = r2 + four * x[1] + four;
    [(four - r2) / d, four * x[0] / d]
}

/// `h⁻¹(y) = (4y₂, 2−2|y|²) / (|y|²+2y₁+1)`.
pub fn map_h_inv<T: Real>(y: [T; 2]) -> [T; 2] {
    let two = k::<T>(2.0);
    let r2 = dot(y, y);
    let e = r2 + two * y[0] + T::one();
    [k::<T>(4.0) * y[1] / e, (two - two * r2) / e]
}

pub type Jac<T> = [[T; 2]; 2];

fn scale<T: Real>(c: T, m: Jac<T>) -> Jac<T> {
    [[c * m[0][0], c * m[0][1]], [c * m[1][0], c * m[1][1]]]
}

pub fn jac_f<T: Real>(x: [T; 2]) -> Jac<T> {
    let q = T::one() + dot(x, x);
    let two = k::<T>(2.0);
    scale(
        two / (q * q),
        [
            [q - two * x[0] * x[0], -two * x[0] * x[1]],
            [-two * x[0] * x[1], q - two * x[1] * x[1]],
        ],
    )
}

/// Obtained by differentiating `y/(1+s)`, `s = √(1−|y|²)`:
/// `δᵢⱼ/(1+s) + yᵢyⱼ/(s(1+s)²)`.
pub fn jac_f_inv<T: Real>(y: [T; 2]) -> Jac<T> {
    let s = (T::one() - dot(y, y)).sqrt();
    let d = T::one() + s;
    let c = T::one() / (s * d * d);
    [
        [T::one() / d + c * y[0] * y[0], c * y[0] * y[1]],
        [c * y[0] * y[1], T::one() / d + c * y[1] * y[1]],
    ]
}

pub fn jac_g<T: Real>(x: [T; 2]) -> Jac<T> {
    let d = T::one() + x[0];
    let s = (T::one() - dot(x, x)).sqrt();
    scale(
        -k::<T>(2.0) / (d * d),
        [
            [x[1], -d],
            [(x[0] - x[1] * x[1] + T::one()) / s, x[1] * d / s],
        ],
    )
}

pub fn jac_g_inv<T: Real>(y: [T; 2]) -> Jac<T> {
    let n = k::<T>(4.0) + dot(y, y);
    let n2 = n * n;
    let c16 = k::<T>(16.0);
    let c8 = k::<T>(8.0);
    [
        [-c16 * y[0] / n2, -c16 * y[1] / n2],
        [
            k::<T>(4.0) / n - c8 * y[0] * y[0] / n2,
            -c8 * y[0] * y[1] / n2,
        ],
    ]
}

pub fn jac_h<T: Real>(x: [T; 2]) -> Jac<T> {
    let four = k::<T>(4.0);
    let d = dot(x, x) + four * x[1] + four;
    let a = x[1] + k::<T>(2.0);
    let p = k::<T>(2.0) * x[0] * a;
    let q = a * a - x[0] * x[0];
    scale(-four / (d * d), [[p, q], [-q, p]])
}

pub fn jac_h_inv<T: Real>(y: [T; 2]) -> Jac<T> {
    let two = k::<T>(2.0);
    let four = k::<T>(4.0);
    let r2 = dot(y, y);
    let e = r2 + two * y[0] + T::one();
    let e2 = e * e;
    let de1 = two * y[0] + two;
    let de2 = two * y[1];
    let top = two - two * r2;
    [
        [-four * y[1] * de1 / e2, four / e - four * y[1] * de2 / e2],
        [
            (-four * y[0] * e - top * de1) / e2,
            (-four * y[1] * e - top * de2) / e2,
        ],
    ]
}

pub fn mat_vec<T: Real>(m: Jac<T>, v: [T; 2]) -> [T; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}
