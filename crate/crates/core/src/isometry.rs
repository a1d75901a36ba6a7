//! The six coordinate maps between the models and their differentials.
//!
//! ```text
//!        f            g            h
//!   P ───────▶ Funk ───────▶ H ───────▶ P
//! ```
//!
//! Each arrow carries the source metric onto the target metric, and going
//! once around the triangle is the identity, so `h⁻¹ = g ∘ f`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::formulas::{self, Jac, Real};
use crate::geometry::{
    sample_points, sample_tangents, ModelId, ModelKind, ModelPoint, TangentVector, Truncation,
};
use crate::linalg::{Mat2, Vec2};
use crate::quadrature::pairwise_sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsometryMap {
    F,
    FInv,
    G,
    GInv,
    H,
    HInv,
}

impl IsometryMap {
    pub const ALL: [IsometryMap; 6] = [
        IsometryMap::F,
        IsometryMap::FInv,
        IsometryMap::G,
        IsometryMap::GInv,
        IsometryMap::H,
        IsometryMap::HInv,
    ];

    pub fn source(self) -> ModelKind {
        use IsometryMap::*;
        match self {
            F | HInv => ModelKind::PoincareDisk,
            G | FInv => ModelKind::Funk,
            H | GInv => ModelKind::HalfPlane,
        }
    }

    pub fn target(self) -> ModelKind {
        self.inverse().source()
    }

    pub fn inverse(self) -> IsometryMap {
        use IsometryMap::*;
        match self {
            F => FInv,
            FInv => F,
            G => GInv,
            GInv => G,
            H => HInv,
            HInv => H,
        }
    }

    pub fn name(self) -> &'static str {
        use IsometryMap::*;
        match self {
            F => "f",
            FInv => "f_inv",
            G => "g",
            GInv => "g_inv",
            H => "h",
            HInv => "h_inv",
        }
    }

    pub(crate) fn apply<T: Real>(self, x: [T; 2]) -> [T; 2] {
        use IsometryMap::*;
        match self {
            F => formulas::map_f(x),
            FInv => formulas::map_f_inv(x),
            G => formulas::map_g(x),
            GInv => formulas::map_g_inv(x),
            H => formulas::map_h(x),
            HInv => formulas::map_h_inv(x),
        }
    }

    pub(crate) fn jac<T: Real>(self, x: [T; 2]) -> Jac<T> {
        use IsometryMap::*;
        match self {
            F => formulas::jac_f(x),
            FInv => formulas::jac_f_inv(x),
            G => formulas::jac_g(x),
            GInv => formulas::jac_g_inv(x),
            H => formulas::jac_h(x),
            HInv => formulas::jac_h_inv(x),
        }
    }

    fn check_source(self, p: &ModelPoint) -> Result<()> {
        if p.kind() != self.source() {
            return Err(Error::ModelMismatch { expected: self.source(), found: p.kind() });
        }
        Ok(())
    }
}

impl fmt::Display for IsometryMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IsometryMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IsometryMap::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::invalid(format!("unknown map '{s}'")))
    }
}

/// Image of `x`. The reversible flag of the point's model is carried over.
pub fn map_point(map: IsometryMap, x: &ModelPoint) -> Result<ModelPoint> {
    map.check_source(x)?;
    let y = Vec2(map.apply(x.coords().0));
    let model = ModelId { kind: map.target(), reversible: x.model().reversible };
    ModelPoint::from_vec(model, y)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobianMatrix {
    pub base: ModelPoint,
    pub entries: Mat2,
}

/// Analytic Jacobian at `x`.
pub fn jacobian(map: IsometryMap, x: &ModelPoint) -> Result<JacobianMatrix> {
    map.check_source(x)?;
    Ok(JacobianMatrix { base: *x, entries: Mat2(map.jac(x.coords().0)) })
}

/// The same Jacobian obtained as the matrix inverse of the opposite map's
/// Jacobian at the image point.
pub fn jacobian_via_inverse(map: IsometryMap, x: &ModelPoint) -> Result<JacobianMatrix> {
    let y = map_point(map, x)?;
    let back = jacobian(map.inverse(), &y)?;
    let entries = back
        .entries
        .inverse()
        .ok_or_else(|| Error::invalid("singular Jacobian"))?;
    Ok(JacobianMatrix { base: *x, entries })
}

/// `(map(x), J·v)`.
pub fn pushforward(map: IsometryMap, tv: &TangentVector) -> Result<TangentVector> {
    let base = map_point(map, &tv.base)?;
    let j = jacobian(map, &tv.base)?;
    TangentVector::new(base, j.entries.mul_vec(tv.v))
}

/// Arithmetic used by the verification sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Precision {
    /// Plain `f64`.
    Double,
    /// About 106 significant bits via [`DoubleDouble`].
    #[default]
    DoubleDouble,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryReport {
    pub map: IsometryMap,
    /// Number of samples that entered the statistics (`v = 0` is skipped).
    pub samples: usize,
    pub max_rel_err: f64,
    pub mean_rel_err: f64,
    /// Largest `|α_src − α_tgt| / α_src`.
    pub max_alpha_err: f64,
    /// Largest `|β_src − β_tgt| / α_src`.
    pub max_beta_err: f64,
    pub worst: Option<TangentVector>,
}

impl IsometryReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err < tol && self.max_alpha_err < tol && self.max_beta_err < tol
    }
}

#[derive(Clone, Copy, Default)]
struct SampleErr {
    rel: f64,
    alpha: f64,
    beta: f64,
}

fn lift<T: Real>(v: Vec2) -> [T; 2] {
    [T::from(v[0]), T::from(v[1])]
}

fn sample_error<T: Real>(map: IsometryMap, x: Vec2, v: Vec2) -> SampleErr {
    let xs: [T; 2] = lift(x);
    let vs: [T; 2] = lift(v);
    let (a0, b0) = formulas::terms(map.source(), xs, vs);
    let y = map.apply(xs);
    let w = formulas::mat_vec(map.jac(xs), vs);
    let (a1, b1) = formulas::terms(map.target(), y, w);
    let f0 = a0 + b0;
    let floor = T::from(1e-300);
    SampleErr {
        rel: ((f0 - (a1 + b1)).abs() / f0.max(floor)).to_f64(),
        alpha: ((a0 - a1).abs() / a0.max(floor)).to_f64(),
        beta: ((b0 - b1).abs() / a0.max(floor)).to_f64(),
    }
}

/// Relative error of `F_src(x, v)` against `F_tgt(map(x), J·v)` over seeded
/// samples from the truncated source domain, evaluated in double-double.
pub fn check_isometry(
    map: IsometryMap,
    samples: usize,
    seed: u64,
    truncation: f64,
) -> Result<IsometryReport> {
    check_isometry_with(map, samples, seed, truncation, Precision::DoubleDouble)
}

pub fn check_isometry_with(
    map: IsometryMap,
    samples: usize,
    seed: u64,
    truncation: f64,
    precision: Precision,
) -> Result<IsometryReport> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let tangents: Vec<TangentVector> = sample_tangents(map.source(), samples, seed, truncation)?
        .into_iter()
        .filter(|t| !t.v.is_zero())
        .collect();
    let errs: Vec<SampleErr> = tangents
        .par_iter()
        .map(|t| {
            let (x, v) = (t.base.coords(), t.v);
            match precision {
                Precision::Double => sample_error::<f64>(map, x, v),
                Precision::DoubleDouble => sample_error::<DoubleDouble>(map, x, v),
            }
        })
        .collect();

    let mut report = IsometryReport {
        map,
        samples: errs.len(),
        max_rel_err: 0.0,
        mean_rel_err: 0.0,
        max_alpha_err: 0.0,
        max_beta_err: 0.0,
        worst: None,
    };
    let mut worst_idx = None;
    for (i, e) in errs.iter().enumerate() {
        // A NaN sample must surface as the worst one.
        let worse = e.rel > report.max_rel_err || (e.rel.is_nan() && !report.max_rel_err.is_nan());
        if worst_idx.is_none() || worse {
            report.max_rel_err = e.rel;
            worst_idx = Some(i);
        }
        report.max_alpha_err = nan_max(report.max_alpha_err, e.alpha);
        report.max_beta_err = nan_max(report.max_beta_err, e.beta);
    }
    let rels: Vec<f64> = errs.iter().map(|e| e.rel).collect();
    if !rels.is_empty() {
        report.mean_rel_err = pairwise_sum(&rels) / rels.len() as f64;
    }
    report.worst = worst_idx.map(|i| tangents[i]);
    Ok(report)
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// One of the six identities implied by going around the triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Composition {
    /// Single map on the left-hand side.
    pub lhs: IsometryMap,
    /// Right-hand side, applied left to right.
    pub rhs: [IsometryMap; 2],
}

impl Composition {
    pub const ALL: [Composition; 6] = {
        use IsometryMap::*;
        [
            Composition { lhs: HInv, rhs: [F, G] },
            Composition { lhs: F, rhs: [HInv, GInv] },
            Composition { lhs: H, rhs: [GInv, FInv] },
            Composition { lhs: GInv, rhs: [H, F] },
            Composition { lhs: FInv, rhs: [G, H] },
            Composition { lhs: G, rhs: [FInv, HInv] },
        ]
    };

    pub fn domain(&self) -> ModelKind {
        self.lhs.source()
    }

    /// Reads as `lhs = second ∘ first`.
    pub fn label(&self) -> String {
        format!("{} = {} o {}", self.lhs, self.rhs[1], self.rhs[0])
    }

    fn discrepancy<T: Real>(&self, x: [T; 2]) -> f64 {
        let a = self.lhs.apply(x);
        let b = self.rhs[1].apply(self.rhs[0].apply(x));
        (a[0] - b[0]).abs().to_f64().max((a[1] - b[1]).abs().to_f64())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutativityReport {
    pub samples: usize,
    /// Maximum absolute discrepancy of each identity, in [`Composition::ALL`] order.
    pub per_identity: Vec<(Composition, f64)>,
    pub max_err: f64,
    /// Mean discrepancy over all identities and samples.
    pub mean_err: f64,
    pub worst: Option<ModelPoint>,
}

/// Largest coordinate discrepancy of the six composition identities, each
/// sampled on its own domain.
pub fn check_commutativity(
    samples: usize,
    seed: u64,
    truncation: Truncation,
) -> Result<CommutativityReport> {
    check_commutativity_with(samples, seed, truncation, Precision::DoubleDouble)
}

pub fn check_commutativity_with(
    samples: usize,
    seed: u64,
    truncation: Truncation,
    precision: Precision,
) -> Result<CommutativityReport> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let mut per_identity = Vec::with_capacity(6);
    let mut max_err = 0.0;
    let mut worst = None;
    let mut all = Vec::with_capacity(6 * samples);
    for c in Composition::ALL {
        let kind = c.domain();
        let pts = sample_points(kind, samples, seed, truncation.for_kind(kind))?;
        let errs: Vec<f64> = pts
            .par_iter()
            .map(|p| match precision {
                Precision::Double => c.discrepancy::<f64>(p.coords().0),
                Precision::DoubleDouble => c.discrepancy::<DoubleDouble>(lift(p.coords())),
            })
            .collect();
        let mut m = 0.0;
        for (i, &e) in errs.iter().enumerate() {
            if e > m || e.is_nan() {
                m = e;
                if e > max_err || e.is_nan() {
                    max_err = e;
                    worst = Some(pts[i]);
                }
            }
        }
        per_identity.push((c, m));
        all.extend(errs);
    }
    let mean_err = pairwise_sum(&all) / all.len() as f64;
    Ok(CommutativityReport { samples, per_identity, max_err, mean_err, worst })
}
