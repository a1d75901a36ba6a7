//! Co-Finsler metric `F*`, Legendre transform `J*` and Finsler gradients.
//!
//! Two routes are available for `F*` and `J*`. The numeric route takes the
//! supremum of `a(v)/F(x, v)` over unit directions and differentiates `½F*²`
//! by central differences. The closed-form route uses the dual of a Randers
//! norm,
//!
//! ```text
//! F*(ξ) = (√(λ·|ξ|²_g* + ℓ²) − ℓ) / λ,   λ = 1 − |b|²_g,   ℓ = ⟨ξ, b⟩_g*,
//! ```
//!
//! and its exact gradient. The numeric route is the reference; the closed
//! form is what the spectrum assembly evaluates millions of times.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{sample_points, CotangentVector, ModelId, ModelPoint, TangentVector};
use crate::linalg::{Mat2, Vec2};
use crate::metrics::{f_stable, randers_data_raw};

/// Nodes of the coarse angular scan that brackets the supremum.
pub const SCAN_NODES: usize = 720;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DualRoute {
    /// Supremum over directions and finite differences.
    #[default]
    Numeric,
    /// Closed-form Randers dual.
    ClosedForm,
}

fn check(model: ModelId, p: &ModelPoint) -> Result<()> {
    if p.kind() != model.kind {
        return Err(Error::ModelMismatch { expected: model.kind, found: p.kind() });
    }
    Ok(())
}

pub(crate) fn co_metric_sup(model: ModelId, x: Vec2, a: Vec2) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let ratio = |t: f64| {
        let e = Vec2::polar(t);
        a.dot(e) / f_stable(model, x, e)
    };
    let dt = TAU / SCAN_NODES as f64;
    let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
    for i in 0..SCAN_NODES {
        let r = ratio(i as f64 * dt);
        if r > best {
            best = r;
            best_i = i;
        }
    }
    // Golden-section refinement inside the two cells around the best node.
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut lo = (best_i as f64 - 1.0) * dt;
    let mut hi = (best_i as f64 + 1.0) * dt;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (ratio(c), ratio(d));
    // Run to the resolution of θ itself: where λ = 1 − |b|²_g is tiny the
    // peak is so sharp that a 1e-12 bracket still misses the value by ~1e-6.
    while hi - lo > 4.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = ratio(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = ratio(d);
        }
    }
    best.max(fc).max(fd).max(ratio(0.5 * (lo + hi)))
}

/// Precomputed `g⁻¹`, `g⁻¹b` and `λ` for the closed-form dual at one point.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DualData {
    pub ginv: Mat2,
    pub ginv_b: Vec2,
    pub lambda: f64,
}

impl DualData {
    pub fn at(model: ModelId, x: Vec2) -> DualData {
        let d = randers_data_raw(model, x);
        let ginv = d.g.inverse().expect("Riemannian tensor is positive definite inside the domain");
        let ginv_b = ginv.mul_vec(d.b);
        DualData { ginv, ginv_b, lambda: 1.0 - d.b.dot(ginv_b) }
    }

    pub fn co_metric(&self, a: Vec2) -> f64 {
        let ga = self.ginv.mul_vec(a);
        let ell = a.dot(self.ginv_b);
        let root = (self.lambda * a.dot(ga) + ell * ell).max(0.0).sqrt();
        (root - ell) / self.lambda
    }

    /// `(F*(a), J*(a))` with `J* = F*·∇F*`.
    pub fn co_metric_and_legendre(&self, a: Vec2) -> (f64, Vec2) {
        if a.is_zero() {
            return (0.0, Vec2::ZERO);
        }
        let ga = self.ginv.mul_vec(a);
        let ell = a.dot(self.ginv_b);
        let root = (self.lambda * a.dot(ga) + ell * ell).max(0.0).sqrt();
        let fs = (root - ell) / self.lambda;
        let grad = (1.0 / self.lambda)
            * ((1.0 / root) * (self.lambda * ga + ell * self.ginv_b) - self.ginv_b);
        (fs, fs * grad)
    }
}

pub(crate) fn legendre_fd_raw(model: ModelId, x: Vec2, a: Vec2) -> Vec2 {
    if a.is_zero() {
        return Vec2::ZERO;
    }
    let h = 1e-6 * a.norm().max(1.0);
    let half_sq = |b: Vec2| {
        let f = co_metric_sup(model, x, b);
        0.5 * f * f
    };
    // Fourth-order central stencil. The second-order one leaves an h² error
    // that grows like 1/λ and reaches 1e-7 near the disk boundary.
    let mut g = [0.0; 2];
    for (i, gi) in g.iter_mut().enumerate() {
        let mut e = Vec2::ZERO;
        e.0[i] = h;
        let d1 = half_sq(a + e) - half_sq(a - e);
        let d2 = half_sq(a + 2.0 * e) - half_sq(a - 2.0 * e);
        *gi = (8.0 * d1 - d2) / (12.0 * h);
    }
    Vec2(g)
}

/// `F*(x, a) = sup_{v≠0} a(v)/F(x, v)` by angular scan and golden section.
pub fn co_metric(model: impl Into<ModelId>, ca: &CotangentVector) -> Result<f64> {
    co_metric_with(model, ca, DualRoute::Numeric)
}

pub fn co_metric_with(
    model: impl Into<ModelId>,
    ca: &CotangentVector,
    route: DualRoute,
) -> Result<f64> {
    let model = model.into();
    check(model, &ca.base)?;
    let x = ca.base.coords();
    Ok(match route {
        DualRoute::Numeric => co_metric_sup(model, x, ca.a),
        DualRoute::ClosedForm => DualData::at(model, x).co_metric(ca.a),
    })
}

/// `J*(x, a)`, the gradient of `½F*²` in `a`; zero at `a = 0`.
pub fn legendre(model: impl Into<ModelId>, ca: &CotangentVector) -> Result<TangentVector> {
    legendre_with(model, ca, DualRoute::Numeric)
}

pub fn legendre_with(
    model: impl Into<ModelId>,
    ca: &CotangentVector,
    route: DualRoute,
) -> Result<TangentVector> {
    let model = model.into();
    check(model, &ca.base)?;
    let x = ca.base.coords();
    let v = match route {
        DualRoute::Numeric => legendre_fd_raw(model, x, ca.a),
        DualRoute::ClosedForm => DualData::at(model, x).co_metric_and_legendre(ca.a).1,
    };
    TangentVector::new(ca.base, v)
}

/// A scalar function on a model domain together with its differential.
pub trait ScalarField: Sync {
    fn value(&self, x: Vec2) -> f64;
    fn differential(&self, x: Vec2) -> Vec2;
}

/// `u ≡ c`.
#[derive(Clone, Copy, Debug)]
pub struct Constant(pub f64);

impl ScalarField for Constant {
    fn value(&self, _: Vec2) -> f64 {
        self.0
    }
    fn differential(&self, _: Vec2) -> Vec2 {
        Vec2::ZERO
    }
}

/// `u(x) = ⟨c, x⟩ + d`.
#[derive(Clone, Copy, Debug)]
pub struct Linear {
    pub c: Vec2,
    pub d: f64,
}

impl ScalarField for Linear {
    fn value(&self, x: Vec2) -> f64 {
        self.c.dot(x) + self.d
    }
    fn differential(&self, _: Vec2) -> Vec2 {
        self.c
    }
}

/// A field given by two closures, the value and the differential.
pub struct FnField<U, D> {
    pub u: U,
    pub du: D,
}

impl<U, D> FnField<U, D>
where
    U: Fn(Vec2) -> f64 + Sync,
    D: Fn(Vec2) -> Vec2 + Sync,
{
    pub fn new(u: U, du: D) -> Self {
        FnField { u, du }
    }
}

impl<U, D> ScalarField for FnField<U, D>
where
    U: Fn(Vec2) -> f64 + Sync,
    D: Fn(Vec2) -> Vec2 + Sync,
{
    fn value(&self, x: Vec2) -> f64 {
        (self.u)(x)
    }
    fn differential(&self, x: Vec2) -> Vec2 {
        (self.du)(x)
    }
}

/// Largest discrepancy between `Du(x)·e` and a central difference of `u`
/// along unit directions `e` at angles `0, π/4, …, 7π/4`.
pub fn check_differential(field: &dyn ScalarField, x: Vec2, step: f64) -> f64 {
    let du = field.differential(x);
    (0..8)
        .map(|k| {
            let e = Vec2::polar(k as f64 * PI / 4.0);
            let fd = (field.value(x + step * e) - field.value(x - step * e)) / (2.0 * step);
            (fd - du.dot(e)).abs()
        })
        .fold(0.0, f64::max)
}

pub(crate) fn differential_at(field: &dyn ScalarField, x: Vec2) -> Result<Vec2> {
    let du = field.differential(x);
    if !du.is_finite() {
        return Err(Error::invalid(format!("field differential is not finite at {x}")));
    }
    Ok(du)
}

/// `∇_F u(x) = J*(x, Du(x))`.
pub fn finsler_gradient(
    model: impl Into<ModelId>,
    field: &dyn ScalarField,
    x: &ModelPoint,
) -> Result<TangentVector> {
    finsler_gradient_with(model, field, x, DualRoute::Numeric)
}

pub fn finsler_gradient_with(
    model: impl Into<ModelId>,
    field: &dyn ScalarField,
    x: &ModelPoint,
    route: DualRoute,
) -> Result<TangentVector> {
    let du = differential_at(field, x.coords())?;
    legendre_with(model, &CotangentVector::new(*x, du)?, route)
}

/// A point and two covectors exposing that `J*` is not additive.
#[derive(Clone, Copy, Debug)]
pub struct NonlinearityWitness {
    pub x: ModelPoint,
    pub a: Vec2,
    pub b: Vec2,
    /// `|J*(a+b) − J*(a) − J*(b)|`.
    pub defect: f64,
}

/// Searches seeded samples for `|J*(x,a+b) − J*(x,a) − J*(x,b)| > threshold`
/// with the numeric route, skipping the origin.
pub fn find_nonlinearity_witness(
    model: impl Into<ModelId>,
    samples: usize,
    seed: u64,
    truncation: f64,
    threshold: f64,
) -> Result<Option<NonlinearityWitness>> {
    let model = model.into();
    let points = sample_points(model, samples, seed, truncation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    for x in points {
        let a = Vec2::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let b = Vec2::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        if x.coords().norm() < 1e-3 && model.kind.is_disk() {
            continue;
        }
        let xc = x.coords();
        let j = |c: Vec2| legendre_fd_raw(model, xc, c);
        let defect = (j(a + b) - j(a) - j(b)).norm();
        if defect > threshold {
            return Ok(Some(NonlinearityWitness { x, a, b, defect }));
        }
    }
    Ok(None)
}

/// `F(x, J*(x, a))`, which should reproduce `F*(x, a)`.
pub fn metric_of_legendre(model: impl Into<ModelId>, ca: &CotangentVector) -> Result<f64> {
    let model = model.into();
    check(model, &ca.base)?;
    let x = ca.base.coords();
    Ok(f_stable(model, x, legendre_fd_raw(model, x, ca.a)))
}
