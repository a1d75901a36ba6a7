//! Discrete Rayleigh quotient of the Finsler-Laplacian and its minimization.
//!
//! Fields are piecewise linear on a [`Mesh`] and vanish on its boundary.
//! Both integrals use one centroid node per triangle:
//!
//! ```text
//! N(u) = Σ_T F*²(c_T, Du|_T) σ(c_T) |T|,    D(u) = Σ_T u(c_T)² σ(c_T) |T|,
//! ```
//!
//! and the quotient is `N/D`. Since `F*` is only positively homogeneous the
//! quotient of `−u` generally differs from that of `u`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::duality::{DualData, ScalarField};
use crate::error::{Error, Result};
use crate::geometry::{ModelId, ModelKind};
use crate::linalg::Vec2;
use crate::measure::DensityRoute;
use crate::mesh::{Locator, Mesh};
use crate::quadrature::pairwise_sum;

/// Piecewise-linear field with zero boundary values.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteField {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl DiscreteField {
    /// Fails unless there is one value per vertex and every boundary value
    /// is exactly zero.
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.vertices().len() {
            return Err(Error::invalid(format!(
                "{} values for {} vertices",
                values.len(),
                mesh.vertices().len()
            )));
        }
        if let Some(v) = (0..values.len()).find(|&v| mesh.is_boundary(v) && values[v] != 0.0) {
            return Err(Error::invalid(format!("boundary vertex {v} has a nonzero value")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite field value"));
        }
        Ok(DiscreteField { mesh, values })
    }

    /// Samples `f` at interior vertices and sets boundary values to zero.
    pub fn from_fn(mesh: Arc<Mesh>, f: impl Fn(Vec2) -> f64) -> Result<Self> {
        let values = mesh
            .vertices()
            .iter()
            .enumerate()
            .map(|(v, &p)| if mesh.is_boundary(v) { 0.0 } else { f(p) })
            .collect();
        Self::new(mesh, values)
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.vertices().len();
        DiscreteField { mesh, values: vec![0.0; n] }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, c: f64) -> DiscreteField {
        DiscreteField { mesh: self.mesh.clone(), values: self.values.iter().map(|v| c * v).collect() }
    }

    /// Interpolates this field onto `mesh`. Points outside the current mesh
    /// get zero, which is the extension by zero of a field with zero
    /// boundary values.
    pub fn transfer(&self, mesh: Arc<Mesh>) -> DiscreteField {
        let loc = self.mesh.locator();
        let values = mesh
            .vertices()
            .iter()
            .enumerate()
            .map(|(v, &p)| if mesh.is_boundary(v) { 0.0 } else { loc.interpolate(&self.values, p) })
            .collect();
        DiscreteField { mesh, values }
    }

    /// View of this field as a [`ScalarField`] on the plane.
    pub fn sampled(&self) -> SampledField<'_> {
        SampledField { field: self, locator: self.mesh.locator(), step: 1e-3 * self.mesh.h() }
    }
}

/// Interpolated values of a [`DiscreteField`], zero off the mesh. The
/// differential is a central difference of the interpolant with step
/// `h/1000`, which is exact inside a triangle away from its edges.
pub struct SampledField<'a> {
    field: &'a DiscreteField,
    locator: Locator<'a>,
    step: f64,
}

impl ScalarField for SampledField<'_> {
    fn value(&self, x: Vec2) -> f64 {
        self.locator.interpolate(&self.field.values, x)
    }

    fn differential(&self, x: Vec2) -> Vec2 {
        let s = self.step;
        let d = |e: Vec2| (self.value(x + s * e) - self.value(x - s * e)) / (2.0 * s);
        Vec2::new(d(Vec2::new(1.0, 0.0)), d(Vec2::new(0.0, 1.0)))
    }
}

#[derive(Clone, Copy, Debug)]
struct TriangleData {
    idx: [u32; 3],
    grads: [Vec2; 3],
    /// `σ(c_T)·|T|`
    weight: f64,
    dual: DualData,
}

/// Per-triangle geometry and metric data at centroids for one model and
/// mesh. Building it once lets repeated quotient evaluations skip all
/// metric work.
#[derive(Clone, Debug)]
pub struct Assembly {
    model: ModelId,
    mesh: Arc<Mesh>,
    tris: Vec<TriangleData>,
}

/// Value of the assembly at one field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuotientParts {
    /// `∫ F*²(x, Du) dv_F`
    pub numerator: f64,
    /// `∫ u² dv_F`
    pub denominator: f64,
}

impl QuotientParts {
    pub fn quotient(&self) -> f64 {
        self.numerator / self.denominator
    }
}

impl Assembly {
    pub fn new(model: impl Into<ModelId>, mesh: Arc<Mesh>) -> Result<Self> {
        let model = model.into();
        let verts = mesh.vertices();
        for v in verts {
            crate::geometry::require_domain(model.kind, *v)?;
        }
        let tris = (0..mesh.triangles().len())
            .into_par_iter()
            .map(|t| {
                let idx = mesh.triangles()[t];
                let [a, b, c] = mesh.corners(t);
                let area = mesh.triangle_area(t);
                // ∇φ_k is the opposite edge rotated by −90°, over 2|T|.
                let grad = |p: Vec2, q: Vec2| {
                    let e = q - p;
                    (1.0 / (2.0 * area)) * Vec2::new(-e[1], e[0])
                };
                let x = mesh.centroid(t);
                TriangleData {
                    idx,
                    grads: [grad(b, c), grad(c, a), grad(a, b)],
                    weight: DensityRoute::ClosedForm.eval(model, x) * area,
                    dual: DualData::at(model, x),
                }
            })
            .collect();
        Ok(Assembly { model, mesh, tris })
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    fn check_field(&self, u: &DiscreteField) -> Result<()> {
        if !Arc::ptr_eq(&self.mesh, &u.mesh) && *self.mesh != *u.mesh {
            return Err(Error::invalid("field lives on a different mesh"));
        }
        Ok(())
    }

    fn triangle_terms(&self, u: &[f64]) -> Vec<(f64, f64)> {
        self.tris
            .par_iter()
            .map(|t| {
                let uk = [u[t.idx[0] as usize], u[t.idx[1] as usize], u[t.idx[2] as usize]];
                let xi = uk[0] * t.grads[0] + uk[1] * t.grads[1] + uk[2] * t.grads[2];
                let fs = t.dual.co_metric(xi);
                let uc = (uk[0] + uk[1] + uk[2]) / 3.0;
                (t.weight * fs * fs, t.weight * uc * uc)
            })
            .collect()
    }

    pub fn parts(&self, u: &DiscreteField) -> Result<QuotientParts> {
        self.check_field(u)?;
        Ok(self.parts_raw(&u.values))
    }

    fn parts_raw(&self, u: &[f64]) -> QuotientParts {
        let terms = self.triangle_terms(u);
        let n: Vec<f64> = terms.iter().map(|p| p.0).collect();
        let d: Vec<f64> = terms.iter().map(|p| p.1).collect();
        QuotientParts { numerator: pairwise_sum(&n), denominator: pairwise_sum(&d) }
    }

    /// Parts together with the gradients of numerator and denominator with
    /// respect to the vertex values.
    fn parts_and_gradients(&self, u: &[f64]) -> (QuotientParts, Vec<f64>, Vec<f64>) {
        // Per triangle: n, d and the three local derivatives of each.
        let local: Vec<([f64; 2], [f64; 3], f64)> = self
            .tris
            .par_iter()
            .map(|t| {
                let uk = [u[t.idx[0] as usize], u[t.idx[1] as usize], u[t.idx[2] as usize]];
                let xi = uk[0] * t.grads[0] + uk[1] * t.grads[1] + uk[2] * t.grads[2];
                let (fs, j) = t.dual.co_metric_and_legendre(xi);
                let uc = (uk[0] + uk[1] + uk[2]) / 3.0;
                // d(F*²)/dξ = 2 J*(ξ)
                let gn = [
                    2.0 * t.weight * j.dot(t.grads[0]),
                    2.0 * t.weight * j.dot(t.grads[1]),
                    2.0 * t.weight * j.dot(t.grads[2]),
                ];
                ([t.weight * fs * fs, t.weight * uc * uc], gn, 2.0 * t.weight * uc / 3.0)
            })
            .collect();
        let n: Vec<f64> = local.iter().map(|l| l.0[0]).collect();
        let d: Vec<f64> = local.iter().map(|l| l.0[1]).collect();
        let parts = QuotientParts { numerator: pairwise_sum(&n), denominator: pairwise_sum(&d) };
        let (gn, gd): (Vec<f64>, Vec<f64>) = (0..u.len())
            .into_par_iter()
            .map(|v| {
                let mut a = 0.0;
                let mut b = 0.0;
                for &(t, k) in self.mesh.incident(v) {
                    let l = &local[t as usize];
                    a += l.1[k as usize];
                    b += l.2;
                }
                (a, b)
            })
            .unzip();
        (parts, gn, gd)
    }

    /// `N(u)/D(u)`.
    pub fn quotient(&self, u: &DiscreteField) -> Result<f64> {
        let p = self.parts(u)?;
        if u.values.iter().all(|v| *v == 0.0) || p.denominator == 0.0 {
            return Err(Error::DegenerateField("the quotient of the zero field is undefined".into()));
        }
        Ok(p.quotient())
    }

    /// `(N(u) + D(u))^{1/2}`.
    pub fn h1_norm(&self, u: &DiscreteField) -> Result<f64> {
        let p = self.parts(u)?;
        Ok((p.numerator + p.denominator).sqrt())
    }

    /// Gradient of the quotient with respect to every vertex value, boundary
    /// entries included.
    pub fn quotient_gradient(&self, u: &DiscreteField) -> Result<(f64, Vec<f64>)> {
        self.check_field(u)?;
        let (p, gn, gd) = self.parts_and_gradients(&u.values);
        if p.denominator == 0.0 {
            return Err(Error::DegenerateField("the quotient of the zero field is undefined".into()));
        }
        let q = p.quotient();
        let g = gn.iter().zip(&gd).map(|(a, b)| (a - q * b) / p.denominator).collect();
        Ok((q, g))
    }
}

/// Rayleigh quotient of `u` for `model`.
pub fn rayleigh_quotient(model: impl Into<ModelId>, u: &DiscreteField) -> Result<f64> {
    Assembly::new(model, u.mesh.clone())?.quotient(u)
}

/// `(∫ F*²(x, Du) dv_F + ∫ u² dv_F)^{1/2}`.
pub fn h1_norm(model: impl Into<ModelId>, u: &DiscreteField) -> Result<f64> {
    Assembly::new(model, u.mesh.clone())?.h1_norm(u)
}

/// Quotients along a descent run.
#[derive(Clone, Debug, PartialEq)]
pub struct RayleighTrace {
    pub iterations: Vec<usize>,
    pub quotients: Vec<f64>,
    pub field: DiscreteField,
}

impl RayleighTrace {
    pub fn final_quotient(&self) -> f64 {
        *self.quotients.last().expect("a trace holds at least the initial quotient")
    }

    pub fn iterations_used(&self) -> usize {
        self.quotients.len() - 1
    }
}

/// Knobs of the quasi-Newton descent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentOptions {
    pub max_iters: usize,
    /// Stored curvature pairs.
    pub memory: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Relative quotient change below which the run stops early.
    pub rel_tol: f64,
}

impl DescentOptions {
    pub fn new(max_iters: usize) -> Self {
        DescentOptions { max_iters, memory: 10, armijo: 1e-4, rel_tol: 0.0 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let p: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    pairwise_sum(&p)
}

struct Objective<'a> {
    asm: &'a Assembly,
    interior: Vec<usize>,
    full: Vec<f64>,
}

impl Objective<'_> {
    /// Quotient, interior gradient and denominator at interior values `z`.
    fn eval(&mut self, z: &[f64]) -> (f64, Vec<f64>, f64) {
        for (k, &v) in self.interior.iter().enumerate() {
            self.full[v] = z[k];
        }
        let (p, gn, gd) = self.asm.parts_and_gradients(&self.full);
        let q = p.quotient();
        let g = self.interior.iter().map(|&v| (gn[v] - q * gd[v]) / p.denominator).collect();
        (q, g, p.denominator)
    }
}

/// Limited-memory quasi-Newton descent of the quotient from `start`.
///
/// Each step is accepted only under the Armijo condition, so the recorded
/// quotients never increase. After every step the field is rescaled to unit
/// denominator; the quotient is invariant under positive scaling, and the
/// stored curvature pairs are taken in the rescaled coordinates.
pub fn minimize_from(
    asm: &Assembly,
    start: &DiscreteField,
    opts: &DescentOptions,
) -> Result<RayleighTrace> {
    asm.check_field(start)?;
    let mesh = asm.mesh.clone();
    let interior: Vec<usize> = (0..mesh.vertices().len()).filter(|&v| !mesh.is_boundary(v)).collect();
    if interior.is_empty() {
        return Err(Error::invalid("mesh has no interior vertex"));
    }
    let mut obj = Objective { asm, interior, full: vec![0.0; mesh.vertices().len()] };
    let mut z: Vec<f64> = obj.interior.iter().map(|&v| start.values[v]).collect();
    if z.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateField("cannot descend from the zero field".into()));
    }
    let (mut q, mut g, d0) = obj.eval(&z);
    normalize(&mut z, &mut g, d0);

    let mut quotients = vec![q];
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let mut first = true;

    for _ in 0..opts.max_iters {
        let mut dir = two_loop(&g, &s_hist, &y_hist);
        let mut slope = dot(&g, &dir);
        if !(slope < 0.0) {
            s_hist.clear();
            y_hist.clear();
            dir = g.iter().map(|x| -x).collect();
            slope = dot(&g, &dir);
            first = true;
        }
        if slope == 0.0 {
            break;
        }
        let mut alpha = if first {
            1e-3 * dot(&z, &z).sqrt() / dot(&dir, &dir).sqrt()
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..60 {
            let zn: Vec<f64> = z.iter().zip(&dir).map(|(a, b)| a + alpha * b).collect();
            let (qn, gn, dn) = obj.eval(&zn);
            if qn.is_finite() && dn > 0.0 && qn <= q + opts.armijo * alpha * slope {
                accepted = Some((zn, qn, gn, dn));
                break;
            }
            alpha *= 0.5;
        }
        let Some((mut zn, qn, mut gn, dn)) = accepted else {
            if s_hist.is_empty() {
                break;
            }
            // Retry from steepest descent with a fresh memory.
            s_hist.clear();
            y_hist.clear();
            first = true;
            continue;
        };
        first = false;
        normalize(&mut zn, &mut gn, dn);
        let s: Vec<f64> = zn.iter().zip(&z).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        if dot(&s, &y) > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if s_hist.len() == opts.memory {
                s_hist.remove(0);
                y_hist.remove(0);
            }
            s_hist.push(s);
            y_hist.push(y);
        }
        let rel = (q - qn) / q.abs().max(f64::MIN_POSITIVE);
        z = zn;
        g = gn;
        q = qn;
        quotients.push(q);
        if rel < opts.rel_tol {
            break;
        }
    }
    let mut values = vec![0.0; mesh.vertices().len()];
    for (k, &v) in obj.interior.iter().enumerate() {
        values[v] = z[k];
    }
    let iterations = (0..quotients.len()).collect();
    Ok(RayleighTrace { iterations, quotients, field: DiscreteField { mesh, values } })
}

/// Scales `z` to unit denominator and `g` accordingly.
fn normalize(z: &mut [f64], g: &mut [f64], denominator: f64) {
    let c = 1.0 / denominator.sqrt();
    z.iter_mut().for_each(|v| *v *= c);
    g.iter_mut().for_each(|v| *v /= c);
}

fn two_loop(g: &[f64], s: &[Vec<f64>], y: &[Vec<f64>]) -> Vec<f64> {
    let mut q: Vec<f64> = g.to_vec();
    let m = s.len();
    let mut alpha = vec![0.0; m];
    let rho: Vec<f64> = (0..m).map(|i| 1.0 / dot(&s[i], &y[i])).collect();
    for i in (0..m).rev() {
        alpha[i] = rho[i] * dot(&s[i], &q);
        q.iter_mut().zip(&y[i]).for_each(|(a, b)| *a -= alpha[i] * b);
    }
    let gamma = if m > 0 { dot(&s[m - 1], &y[m - 1]) / dot(&y[m - 1], &y[m - 1]) } else { 1.0 };
    q.iter_mut().for_each(|a| *a *= gamma);
    for i in 0..m {
        let beta = rho[i] * dot(&y[i], &q);
        q.iter_mut().zip(&s[i]).for_each(|(a, b)| *a += (alpha[i] - beta) * b);
    }
    q.iter_mut().for_each(|a| *a = -*a);
    q
}

/// Seeded start with interior values drawn uniformly from `(0, 1]`.
pub fn random_positive_field(mesh: Arc<Mesh>, seed: u64) -> DiscreteField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..mesh.vertices().len())
        .map(|v| {
            // Draw for every vertex so the stream does not depend on the mask.
            let r = 1.0 - rng.gen::<f64>();
            if mesh.is_boundary(v) {
                0.0
            } else {
                r
            }
        })
        .collect();
    DiscreteField { mesh, values }
}

/// Descends from a seeded positive start and, for nonreversible models,
/// also from its negation; returns the run with the lower final quotient.
///
/// Both signs are needed because the quotient is not even: for these
/// models cheap fields are typically negative, growing toward the boundary
/// where `F*` of an outward covector is small.
pub fn minimize_quotient(
    model: impl Into<ModelId>,
    mesh: Arc<Mesh>,
    seed: u64,
    max_iters: usize,
) -> Result<RayleighTrace> {
    let asm = Assembly::new(model, mesh.clone())?;
    minimize_signed(&asm, &random_positive_field(mesh, seed), &DescentOptions::new(max_iters))
}

fn minimize_signed(
    asm: &Assembly,
    start: &DiscreteField,
    opts: &DescentOptions,
) -> Result<RayleighTrace> {
    let plus = minimize_from(asm, start, opts)?;
    if asm.model.reversible {
        return Ok(plus);
    }
    let minus = minimize_from(asm, &start.scaled(-1.0), opts)?;
    Ok(if minus.final_quotient() < plus.final_quotient() { minus } else { plus })
}

/// Thresholds of the gap experiment.
pub const FINSLER_CEILING: f64 = 0.2;
pub const REVERSIBLE_FLOOR: f64 = 0.23;

#[derive(Clone, Debug, PartialEq)]
pub struct GapRow {
    pub model: ModelKind,
    pub reversible: bool,
    pub truncation: f64,
    pub h: f64,
    pub final_quotient: f64,
    /// Descent iterations summed over all levels and starts of this cell.
    pub iters_used: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub rows: Vec<GapRow>,
    /// Finsler quotients non-increasing along the truncations, per model;
    /// `None` with a single truncation.
    pub monotone: Option<bool>,
    /// Every Finsler quotient at the last truncation is below
    /// [`FINSLER_CEILING`].
    pub finsler_below: bool,
    /// Every reversible quotient is at least [`REVERSIBLE_FLOOR`].
    pub reversible_floor: bool,
}

impl GapReport {
    pub fn passes(&self) -> bool {
        self.monotone.unwrap_or(true) && self.finsler_below && self.reversible_floor
    }

    pub fn row(&self, model: ModelKind, reversible: bool, truncation: f64) -> Option<&GapRow> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.reversible == reversible && r.truncation == truncation)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapOptions {
    /// Iteration budget of every descent.
    pub iters: usize,
    /// Coarse levels solved first, at `h·2^k` for `k = levels−1, …, 1`.
    pub levels: usize,
}

impl Default for GapOptions {
    fn default() -> Self {
        GapOptions { iters: 500, levels: 3 }
    }
}

/// Minimized quotients for every model and truncation, Finsler and
/// reversible counterpart on identical meshes.
///
/// Each cell is solved coarse to fine. At every truncation after the first
/// the minimizer of the previous truncation, extended by zero onto the
/// larger mesh, competes with the multilevel start; the one with the lower
/// initial quotient is descended on the finest level. With a single level
/// it is descended alongside the random starts and the lowest result wins.
pub fn gap_experiment(
    models: &[ModelKind],
    truncations: &[f64],
    h: f64,
    seed: u64,
    opts: &GapOptions,
) -> Result<GapReport> {
    if truncations.is_empty() || models.is_empty() {
        return Err(Error::invalid("need at least one model and one truncation"));
    }
    if truncations.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("truncations must be strictly increasing"));
    }
    if opts.levels == 0 {
        return Err(Error::invalid("need at least one mesh level"));
    }
    let mut rows = Vec::new();
    for &kind in models {
        for reversible in [false, true] {
            let model = ModelId { kind, reversible };
            let mut previous: Option<DiscreteField> = None;
            for &t in truncations {
                let (trace, iters) = solve_cell(model, t, h, seed, opts, previous.as_ref())?;
                rows.push(GapRow {
                    model: kind,
                    reversible,
                    truncation: t,
                    h,
                    final_quotient: trace.final_quotient(),
                    iters_used: iters,
                });
                previous = Some(trace.field);
            }
        }
    }
    let finsler = |r: &&GapRow| !r.reversible;
    let monotone = (truncations.len() > 1).then(|| {
        models.iter().all(|&k| {
            let qs: Vec<f64> = rows
                .iter()
                .filter(finsler)
                .filter(|r| r.model == k)
                .map(|r| r.final_quotient)
                .collect();
            qs.windows(2).all(|w| w[1] <= w[0])
        })
    });
    let last = *truncations.last().unwrap();
    let finsler_below = rows
        .iter()
        .filter(finsler)
        .filter(|r| r.truncation == last)
        .all(|r| r.final_quotient < FINSLER_CEILING);
    let reversible_floor =
        rows.iter().filter(|r| r.reversible).all(|r| r.final_quotient >= REVERSIBLE_FLOOR);
    Ok(GapReport { rows, monotone, finsler_below, reversible_floor })
}

fn solve_cell(
    model: ModelId,
    t: f64,
    h: f64,
    seed: u64,
    opts: &GapOptions,
    previous: Option<&DiscreteField>,
) -> Result<(RayleighTrace, usize)> {
    let descent = DescentOptions::new(opts.iters);
    let mut iters = 0;
    let mut current: Option<DiscreteField> = None;
    for level in (0..opts.levels).rev() {
        let mesh = Arc::new(Mesh::build(model.kind, t, h * (1 << level) as f64)?);
        let asm = Assembly::new(model, mesh.clone())?;
        let trace = match current.take() {
            None => {
                let start = random_positive_field(mesh.clone(), seed);
                let mut starts = vec![start.clone()];
                if !model.reversible {
                    starts.push(start.scaled(-1.0));
                }
                // With a single level the previous truncation's field has
                // no coarse start to compete with, so it runs as well.
                if let (0, Some(prev)) = (level, previous) {
                    starts.push(prev.transfer(mesh));
                }
                let mut best: Option<RayleighTrace> = None;
                for s in &starts {
                    if s.values.iter().all(|v| *v == 0.0) {
                        continue;
                    }
                    let run = minimize_from(&asm, s, &descent)?;
                    iters += run.iterations_used();
                    if best.as_ref().map_or(true, |b| run.final_quotient() < b.final_quotient()) {
                        best = Some(run);
                    }
                }
                best.expect("the random start is nonzero")
            }
            Some(coarse) => {
                let mut start = coarse.transfer(mesh.clone());
                if level == 0 {
                    if let Some(prev) = previous {
                        let warm = prev.transfer(mesh.clone());
                        if let (Ok(a), Ok(b)) = (asm.quotient(&warm), asm.quotient(&start)) {
                            if a < b {
                                start = warm;
                            }
                        }
                    }
                }
                let run = minimize_from(&asm, &start, &descent)?;
                iters += run.iterations_used();
                run
            }
        };
        current = Some(trace.field.clone());
        if level == 0 {
            return Ok((trace, iters));
        }
    }
    unreachable!("the finest level returns")
}
