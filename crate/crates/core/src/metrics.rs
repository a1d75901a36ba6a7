//! Evaluation of the three Randers metrics `F = α + β`.

use crate::error::{Error, Result};
use crate::formulas;
use crate::geometry::{ModelId, ModelKind, ModelPoint, TangentVector};
use crate::linalg::{Mat2, Vec2};

/// `F(x, v)` split into its Riemannian and 1-form parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricValue {
    pub f: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl MetricValue {
    fn new(alpha: f64, beta: f64) -> Self {
        MetricValue { f: alpha + beta, alpha, beta }
    }
}

/// The Riemannian tensor `g` and the 1-form coefficients `b` with
/// `α² = vᵀgv` and `β = ⟨b, v⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandersData {
    pub g: Mat2,
    pub b: Vec2,
}

/// Raw evaluation without domain checks. Callers guarantee `x` is inside.
pub(crate) fn terms(model: ModelId, x: Vec2, v: Vec2) -> MetricValue {
    let (alpha, beta) = formulas::terms(model.kind, x.0, v.0);
    if model.reversible {
        MetricValue::new(alpha, 0.0)
    } else {
        MetricValue::new(alpha, beta)
    }
}

pub(crate) fn f_raw(model: ModelId, x: Vec2, v: Vec2) -> f64 {
    terms(model, x, v).f
}

/// `F(x, v)` without the cancellation of `α + β` when `β ≈ −α`.
///
/// For `β < 0` this returns `(α² − β²)/(α − β)` with `α² − β²` written in
/// a form free of subtraction. Near strongly anisotropic points the plain
/// sum loses about `log₁₀(α/F)` digits, which the numeric dual then
/// passes on to its finite differences.
pub(crate) fn f_stable(model: ModelId, x: Vec2, v: Vec2) -> f64 {
    let m = terms(model, x, v);
    if m.beta >= 0.0 {
        return m.f;
    }
    let r2 = x.norm_sq();
    let q = match model.kind {
        // g − bbᵀ = I/(1 − |x|²)
        ModelKind::Funk => v.norm_sq() / (1.0 - r2),
        ModelKind::PoincareDisk => {
            // |v|² − 4⟨x,v⟩²/(1+r²)² split along x and x⊥, using
            // (1+r²)² − 4r² = (1−r²)².
            let s = 1.0 - r2;
            let xv = x.dot(v);
            let xp = x[0] * v[1] - x[1] * v[0];
            let k = s / (1.0 + r2);
            4.0 / (s * s) * (xp * xp + xv * xv * k * k) / r2
        }
        ModelKind::HalfPlane => {
            // Same split along w, using (4+|x|²)² − |w|² = 16x₂².
            let w = Vec2(formulas::drift(x.0));
            let d = 4.0 + r2;
            let wv = w.dot(v);
            let wp = w[0] * v[1] - w[1] * v[0];
            let k = 4.0 * x[1] / d;
            (wp * wp + wv * wv * k * k) / w.norm_sq() / (x[1] * x[1])
        }
    };
    q / (m.alpha - m.beta)
}

fn check_model(model: ModelId, p: &ModelPoint) -> Result<()> {
    if p.kind() != model.kind {
        return Err(Error::ModelMismatch { expected: model.kind, found: p.kind() });
    }
    Ok(())
}

/// `F(x, v)` with its decomposition. The model's reversible flag drops `β`.
pub fn evaluate(model: impl Into<ModelId>, tv: &TangentVector) -> Result<MetricValue> {
    let model = model.into();
    check_model(model, &tv.base)?;
    if !tv.v.is_finite() {
        return Err(Error::invalid("non-finite tangent vector"));
    }
    Ok(terms(model, tv.base.coords(), tv.v))
}

/// `w(x) = (2x₁x₂, x₂² − x₁² − 4)`.
pub fn drift_field(x: &ModelPoint) -> Result<Vec2> {
    if x.kind() != ModelKind::HalfPlane {
        return Err(Error::ModelMismatch { expected: ModelKind::HalfPlane, found: x.kind() });
    }
    Ok(Vec2(formulas::drift(x.coords().0)))
}

pub(crate) fn randers_data_raw(model: ModelId, x: Vec2) -> RandersData {
    let r2 = x.norm_sq();
    let (g, b) = match model.kind {
        ModelKind::Funk => {
            let s = 1.0 - r2;
            let c = 1.0 / (s * s);
            let g = Mat2([
                [1.0 / s + c * x[0] * x[0], c * x[0] * x[1]],
                [c * x[0] * x[1], 1.0 / s + c * x[1] * x[1]],
            ]);
            (g, (1.0 / s) * x)
        }
        ModelKind::PoincareDisk => {
            let s = 1.0 - r2;
            (Mat2::scaled_identity(4.0 / (s * s)), (4.0 / (1.0 - r2 * r2)) * x)
        }
        ModelKind::HalfPlane => {
            let w = Vec2(formulas::drift(x.0));
            (
                Mat2::scaled_identity(1.0 / (x[1] * x[1])),
                (1.0 / (x[1] * (4.0 + r2))) * w,
            )
        }
    };
    if model.reversible {
        RandersData { g, b: Vec2::ZERO }
    } else {
        RandersData { g, b }
    }
}

/// `g` and `b` at `x`.
pub fn randers_data(model: impl Into<ModelId>, x: &ModelPoint) -> Result<RandersData> {
    let model = model.into();
    check_model(model, x)?;
    Ok(randers_data_raw(model, x.coords()))
}

/// `|β_x|_g = √(bᵀ g⁻¹ b)`, through an explicit inverse of `g`.
pub fn randers_bound(model: impl Into<ModelId>, x: &ModelPoint) -> Result<f64> {
    let d = randers_data(model, x)?;
    let ginv = d.g.inverse().ok_or_else(|| Error::invalid("singular Riemannian tensor"))?;
    Ok(ginv.bilinear(d.b, d.b).max(0.0).sqrt())
}

/// `|w(x)| / (4 + |x|²)`, the closed form of the half-plane bound.
pub fn half_plane_bound_closed_form(x: &ModelPoint) -> Result<f64> {
    let w = drift_field(x)?;
    Ok(w.norm() / (4.0 + x.coords().norm_sq()))
}

/// Hessian of `v ↦ ½F²(x, v)` at a nonzero `v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalTensor {
    pub base: TangentVector,
    pub matrix: Mat2,
    pub min_eigenvalue: f64,
}

/// Central finite-difference Hessian with step `1e-5·max(1, |v|)`.
pub fn fundamental_tensor(
    model: impl Into<ModelId>,
    tv: &TangentVector,
) -> Result<FundamentalTensor> {
    fundamental_tensor_with_step(model, tv, 1e-5 * tv.v.norm().max(1.0))
}

pub fn fundamental_tensor_with_step(
    model: impl Into<ModelId>,
    tv: &TangentVector,
    h: f64,
) -> Result<FundamentalTensor> {
    let model = model.into();
    evaluate(model, tv)?;
    if tv.v.is_zero() {
        return Err(Error::DegenerateDirection(
            "fundamental tensor is undefined at v = 0".into(),
        ));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid(format!("step {h} must be positive")));
    }
    let x = tv.base.coords();
    let half_sq = |v: Vec2| {
        let f = f_raw(model, x, v);
        0.5 * f * f
    };
    let v = tv.v;
    let e = [Vec2::new(h, 0.0), Vec2::new(0.0, h)];
    let mut m = [[0.0; 2]; 2];
    let center = half_sq(v);
    for i in 0..2 {
        m[i][i] = (half_sq(v + e[i]) - 2.0 * center + half_sq(v - e[i])) / (h * h);
    }
    let mixed = (half_sq(v + e[0] + e[1]) - half_sq(v + e[0] - e[1]) - half_sq(v - e[0] + e[1])
        + half_sq(v - e[0] - e[1]))
        / (4.0 * h * h);
    m[0][1] = mixed;
    m[1][0] = mixed;
    let matrix = Mat2(m).symmetrized();
    Ok(FundamentalTensor {
        base: *tv,
        matrix,
        min_eigenvalue: matrix.sym_eigenvalues()[0],
    })
}

/// `F(x, v) − F(x, −v)`, which equals `2β(x, v)`.
pub fn reversibility_defect(model: impl Into<ModelId>, tv: &TangentVector) -> Result<f64> {
    let model = model.into();
    let fwd = evaluate(model, tv)?;
    let back = evaluate(model, &TangentVector { base: tv.base, v: -tv.v })?;
    Ok(fwd.f - back.f)
}
