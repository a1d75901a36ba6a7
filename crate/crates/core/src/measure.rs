//! Busemann-Hausdorff density, volume integration and the Finsler-Laplacian.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::duality::{differential_at, legendre_fd_raw, DualData, DualRoute, ScalarField};
use crate::error::{Error, Result};
use crate::geometry::{in_domain, require_domain, ModelId, ModelKind, ModelPoint};
use crate::isometry::IsometryMap;
use crate::linalg::{Mat2, Vec2};
use crate::metrics::{f_raw, randers_data_raw};
use crate::quadrature::{gauss_legendre_on, pairwise_sum};

/// Radii `r(θ_k) = 1/F(x, e(θ_k))` of the unit ball at uniform angles.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatrixProfile {
    pub base: ModelPoint,
    pub radii: Vec<f64>,
}

impl IndicatrixProfile {
    pub fn nodes(&self) -> usize {
        self.radii.len()
    }

    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.radii.len() as f64
    }

    /// Euclidean area of the unit ball by the periodic trapezoid rule on
    /// `½∫r²dθ`.
    pub fn area(&self) -> f64 {
        let dt = TAU / self.radii.len() as f64;
        let sq: Vec<f64> = self.radii.iter().map(|r| r * r).collect();
        0.5 * dt * pairwise_sum(&sq)
    }
}

fn check_model(model: ModelId, p: &ModelPoint) -> Result<()> {
    if p.kind() != model.kind {
        return Err(Error::ModelMismatch { expected: model.kind, found: p.kind() });
    }
    Ok(())
}

fn radii_raw(model: ModelId, x: Vec2, nodes: usize) -> Vec<f64> {
    (0..nodes)
        .map(|k| 1.0 / f_raw(model, x, Vec2::polar(TAU * k as f64 / nodes as f64)))
        .collect()
}

pub fn indicatrix(
    model: impl Into<ModelId>,
    x: &ModelPoint,
    nodes: usize,
) -> Result<IndicatrixProfile> {
    let model = model.into();
    check_model(model, x)?;
    if nodes < 3 {
        return Err(Error::invalid(format!("indicatrix needs at least 3 nodes, got {nodes}")));
    }
    Ok(IndicatrixProfile { base: *x, radii: radii_raw(model, x.coords(), nodes) })
}

fn sigma_quadrature(model: ModelId, x: Vec2, nodes: usize) -> f64 {
    let radii = radii_raw(model, x, nodes);
    let sq: Vec<f64> = radii.iter().map(|r| r * r).collect();
    PI / (0.5 * TAU / nodes as f64 * pairwise_sum(&sq))
}

fn sigma_closed(model: ModelId, x: Vec2) -> f64 {
    let d = randers_data_raw(model, x);
    let ginv = d.g.inverse().expect("Riemannian tensor is positive definite inside the domain");
    let lambda = 1.0 - ginv.bilinear(d.b, d.b);
    lambda.powf(1.5) * d.g.det().sqrt()
}

/// How the density is obtained at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityRoute {
    /// `π / area(B_x(1))` with the given number of trapezoid nodes.
    Indicatrix(usize),
    /// `(1 − |b|²_g)^{3/2} √det g`.
    ClosedForm,
}

impl Default for DensityRoute {
    fn default() -> Self {
        DensityRoute::Indicatrix(256)
    }
}

impl DensityRoute {
    pub(crate) fn eval(self, model: ModelId, x: Vec2) -> f64 {
        match self {
            DensityRoute::Indicatrix(n) => sigma_quadrature(model, x, n),
            DensityRoute::ClosedForm => sigma_closed(model, x),
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            DensityRoute::Indicatrix(n) if n < 16 => {
                Err(Error::invalid(format!("density needs at least 16 nodes, got {n}")))
            }
            _ => Ok(()),
        }
    }
}

/// `σ_F(x) = π / Vol(B_x(1))` with the ball area from `nodes` trapezoid nodes.
pub fn density_sigma(model: impl Into<ModelId>, x: &ModelPoint, nodes: usize) -> Result<f64> {
    let model = model.into();
    check_model(model, x)?;
    let route = DensityRoute::Indicatrix(nodes);
    route.validate()?;
    Ok(route.eval(model, x.coords()))
}

/// Closed-form Busemann-Hausdorff density of a Randers norm.
pub fn density_sigma_closed(model: impl Into<ModelId>, x: &ModelPoint) -> Result<f64> {
    let model = model.into();
    check_model(model, x)?;
    Ok(sigma_closed(model, x.coords()))
}

/// Integration regions. Disks and annuli are centered at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    Rectangle { x1: [f64; 2], x2: [f64; 2] },
}

impl Region {
    fn validate(&self, kind: ModelKind) -> Result<()> {
        let bad = |msg: String| Err(Error::invalid(msg));
        match *self {
            Region::Disk { radius } if !(radius > 0.0) => bad(format!("disk radius {radius}")),
            Region::Annulus { inner, outer } if !(inner >= 0.0 && outer > inner) => {
                bad(format!("annulus [{inner}, {outer}]"))
            }
            Region::Rectangle { x1, x2 } if !(x1[1] > x1[0] && x2[1] > x2[0]) => {
                bad(format!("rectangle {x1:?} x {x2:?}"))
            }
            _ => {
                for p in self.extreme_points() {
                    require_domain(kind, p)?;
                }
                Ok(())
            }
        }
    }

    /// Points whose membership implies the whole region is inside a disk or
    /// the half plane.
    fn extreme_points(&self) -> Vec<Vec2> {
        match *self {
            Region::Disk { radius: r } | Region::Annulus { outer: r, .. } => vec![
                Vec2::new(r, 0.0),
                Vec2::new(0.0, -r),
                Vec2::new(-r, 0.0),
                Vec2::new(0.0, r),
            ],
            Region::Rectangle { x1, x2 } => vec![
                Vec2::new(x1[0], x2[0]),
                Vec2::new(x1[1], x2[0]),
                Vec2::new(x1[0], x2[1]),
                Vec2::new(x1[1], x2[1]),
            ],
        }
    }

    /// `count` points evenly spread over the boundary.
    pub fn boundary_samples(&self, count: usize) -> Vec<Vec2> {
        let count = count.max(4);
        match *self {
            Region::Disk { radius } => {
                (0..count).map(|k| radius * Vec2::polar(TAU * k as f64 / count as f64)).collect()
            }
            Region::Annulus { inner, outer } => (0..count)
                .flat_map(|k| {
                    let e = Vec2::polar(TAU * k as f64 / count as f64);
                    [inner * e, outer * e]
                })
                .collect(),
            Region::Rectangle { x1, x2 } => {
                let side = count / 4;
                let mut out = Vec::with_capacity(4 * side);
                for k in 0..side {
                    let t = k as f64 / side as f64;
                    let a = x1[0] + t * (x1[1] - x1[0]);
                    let b = x2[0] + t * (x2[1] - x2[0]);
                    out.push(Vec2::new(a, x2[0]));
                    out.push(Vec2::new(x1[1], b));
                    out.push(Vec2::new(x1[1] - (a - x1[0]), x2[1]));
                    out.push(Vec2::new(x1[0], x2[1] - (b - x2[0])));
                }
                out
            }
        }
    }
}

/// Per-cell rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Midpoint,
    /// Tensor Gauss–Legendre of the given order, at most 4.
    Gauss(usize),
}

impl Rule {
    fn nodes(self, a: f64, b: f64) -> Vec<(f64, f64)> {
        match self {
            Rule::Midpoint => vec![(0.5 * (a + b), b - a)],
            Rule::Gauss(n) => gauss_legendre_on(n, a, b),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub region: Region,
    /// Cells along the first coordinate (radius, or x₁ for rectangles).
    pub cells_1: usize,
    /// Cells along the second coordinate (angle, or x₂).
    pub cells_2: usize,
    pub rule: Rule,
    pub density: DensityRoute,
}

impl QuadratureSpec {
    pub fn new(region: Region, cells_1: usize, cells_2: usize, rule: Rule) -> Self {
        QuadratureSpec { region, cells_1, cells_2, rule, density: DensityRoute::default() }
    }

    pub fn with_density(mut self, density: DensityRoute) -> Self {
        self.density = density;
        self
    }

    /// Same region with every cell count multiplied by `factor`.
    pub fn refined(mut self, factor: usize) -> Self {
        self.cells_1 *= factor;
        self.cells_2 *= factor;
        self
    }

    fn validate(&self, kind: ModelKind) -> Result<()> {
        if self.cells_1 == 0 || self.cells_2 == 0 {
            return Err(Error::invalid("quadrature needs at least one cell per direction"));
        }
        if let Rule::Gauss(n) = self.rule {
            if !(1..=4).contains(&n) {
                return Err(Error::invalid(format!("Gauss order {n} outside 1..=4")));
            }
        }
        self.density.validate()?;
        self.region.validate(kind)
    }

    /// Quadrature nodes with their Euclidean weights, in a fixed order.
    pub fn nodes(&self) -> Vec<(Vec2, f64)> {
        let split = |a: f64, b: f64, n: usize| -> Vec<(f64, f64)> {
            let h = (b - a) / n as f64;
            (0..n)
                .flat_map(|i| self.rule.nodes(a + i as f64 * h, a + (i + 1) as f64 * h))
                .collect()
        };
        match self.region {
            Region::Disk { radius } => self.polar_nodes(split(0.0, radius, self.cells_1), &split),
            Region::Annulus { inner, outer } => {
                self.polar_nodes(split(inner, outer, self.cells_1), &split)
            }
            Region::Rectangle { x1, x2 } => {
                let a = split(x1[0], x1[1], self.cells_1);
                let b = split(x2[0], x2[1], self.cells_2);
                a.iter()
                    .flat_map(|&(s, ws)| b.iter().map(move |&(t, wt)| (Vec2::new(s, t), ws * wt)))
                    .collect()
            }
        }
    }

    fn polar_nodes(
        &self,
        radial: Vec<(f64, f64)>,
        split: &dyn Fn(f64, f64, usize) -> Vec<(f64, f64)>,
    ) -> Vec<(Vec2, f64)> {
        let angular = split(0.0, TAU, self.cells_2);
        radial
            .iter()
            .flat_map(|&(r, wr)| {
                angular.iter().map(move |&(t, wt)| (r * Vec2::polar(t), wr * wt * r))
            })
            .collect()
    }
}

fn weighted_sum<F>(nodes: &[(Vec2, f64)], f: F) -> f64
where
    F: Fn(Vec2) -> f64 + Sync,
{
    let terms: Vec<f64> = nodes.par_iter().map(|&(x, w)| w * f(x)).collect();
    pairwise_sum(&terms)
}

/// `∫_R u dv_F`.
pub fn integrate(
    model: impl Into<ModelId>,
    field: &dyn ScalarField,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let model = model.into();
    quad.validate(model.kind)?;
    Ok(weighted_sum(&quad.nodes(), |x| field.value(x) * quad.density.eval(model, x)))
}

/// `∫_{map(R)} u dv_{F_tgt}`, computed on the source region `R` through
/// `σ_tgt(map(x))·|det J(x)|`.
pub fn integrate_image(
    map: IsometryMap,
    field: &dyn ScalarField,
    quad: &QuadratureSpec,
) -> Result<f64> {
    quad.validate(map.source())?;
    let target = ModelId::finsler(map.target());
    Ok(weighted_sum(&quad.nodes(), |x| {
        let y = Vec2(map.apply(x.0));
        let det = Mat2(map.jac(x.0)).det().abs();
        field.value(y) * quad.density.eval(target, y) * det
    }))
}

/// Discretization choices for [`finsler_laplacian_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaplaceSpec {
    /// Outer divergence step.
    pub step: f64,
    pub dual: DualRoute,
    pub density: DensityRoute,
}

impl Default for LaplaceSpec {
    fn default() -> Self {
        LaplaceSpec { step: 1e-4, dual: DualRoute::Numeric, density: DensityRoute::default() }
    }
}

impl LaplaceSpec {
    /// Closed-form dual and density with the given step.
    pub fn closed_form(step: f64) -> Self {
        LaplaceSpec { step, dual: DualRoute::ClosedForm, density: DensityRoute::ClosedForm }
    }

    fn gradient(&self, model: ModelId, field: &dyn ScalarField, x: Vec2) -> Result<Vec2> {
        let du = differential_at(field, x)?;
        Ok(match self.dual {
            DualRoute::Numeric => legendre_fd_raw(model, x, du),
            DualRoute::ClosedForm => DualData::at(model, x).co_metric_and_legendre(du).1,
        })
    }
}

fn laplacian_raw(
    model: ModelId,
    field: &dyn ScalarField,
    x: Vec2,
    spec: &LaplaceSpec,
) -> Result<f64> {
    let h = spec.step;
    let mut div = 0.0;
    for i in 0..2 {
        let mut e = Vec2::ZERO;
        e.0[i] = h;
        let flux = |p: Vec2| -> Result<f64> {
            Ok(spec.density.eval(model, p) * spec.gradient(model, field, p)?[i])
        };
        div += (flux(x + e)? - flux(x - e)?) / (2.0 * h);
    }
    Ok(div / spec.density.eval(model, x))
}

/// `Δ_F u(x) = div_F(∇_F u)(x)` by central differences of `σ·∇_F u` with
/// the default numeric routes.
pub fn finsler_laplacian(
    model: impl Into<ModelId>,
    field: &dyn ScalarField,
    x: &ModelPoint,
    step: f64,
) -> Result<f64> {
    finsler_laplacian_with(model, field, x, &LaplaceSpec { step, ..LaplaceSpec::default() })
}

pub fn finsler_laplacian_with(
    model: impl Into<ModelId>,
    field: &dyn ScalarField,
    x: &ModelPoint,
    spec: &LaplaceSpec,
) -> Result<f64> {
    let model = model.into();
    check_model(model, x)?;
    spec.density.validate()?;
    let h = spec.step;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step {h} must be positive")));
    }
    let c = x.coords();
    for e in [Vec2::new(h, 0.0), Vec2::new(0.0, h)] {
        require_domain(model.kind, c + e)?;
        require_domain(model.kind, c - e)?;
    }
    laplacian_raw(model, field, c, spec)
}

/// Both sides of the weak identity `∫ v Δ_F u dv_F = −∫ Dv(∇_F u) dv_F`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakForm {
    pub lhs: f64,
    pub rhs: f64,
}

impl WeakForm {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Support tolerance for the test function on the region boundary.
pub const SUPPORT_TOL: f64 = 1e-14;

/// `|∫ v Δ_F u dv_F + ∫ Dv(∇_F u) dv_F|` on the region of `quad`.
pub fn weak_form_residual(
    model: impl Into<ModelId>,
    u: &dyn ScalarField,
    v: &dyn ScalarField,
    quad: &QuadratureSpec,
    laplace: &LaplaceSpec,
) -> Result<f64> {
    weak_form(model, u, v, quad, laplace).map(|w| w.residual())
}

pub fn weak_form(
    model: impl Into<ModelId>,
    u: &dyn ScalarField,
    v: &dyn ScalarField,
    quad: &QuadratureSpec,
    laplace: &LaplaceSpec,
) -> Result<WeakForm> {
    let model = model.into();
    quad.validate(model.kind)?;
    laplace.density.validate()?;
    for p in quad.region.boundary_samples(256) {
        let val = v.value(p);
        if !(val.abs() < SUPPORT_TOL) {
            return Err(Error::invalid(format!(
                "test function is {val:e} at boundary point {p}, not compactly supported"
            )));
        }
    }
    let nodes = quad.nodes();
    let h = laplace.step;
    for &(x, _) in &nodes {
        for e in [Vec2::new(h, 0.0), Vec2::new(0.0, h)] {
            if !in_domain(model.kind, x + e)? || !in_domain(model.kind, x - e)? {
                return Err(Error::Domain { model: model.kind, x1: x[0], x2: x[1] });
            }
        }
    }
    let pairs: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&(x, w)| -> Result<(f64, f64)> {
            let sigma = quad.density.eval(model, x);
            let vx = v.value(x);
            let lhs = if vx == 0.0 { 0.0 } else { vx * laplacian_raw(model, u, x, laplace)? };
            let grad = laplace.gradient(model, u, x)?;
            let rhs = -v.differential(x).dot(grad);
            Ok((w * sigma * lhs, w * sigma * rhs))
        })
        .collect::<Result<_>>()?;
    let lhs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let rhs: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok(WeakForm { lhs: pairwise_sum(&lhs), rhs: pairwise_sum(&rhs) })
}
