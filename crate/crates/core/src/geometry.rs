//! Model tags, domain membership, point and vector types, seeded sampling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Vec2;

/// Distance kept from the open boundary of every domain.
pub const DOMAIN_GUARD: f64 = 1.0 / (1u64 << 40) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    Funk,
    PoincareDisk,
    HalfPlane,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Funk, ModelKind::PoincareDisk, ModelKind::HalfPlane];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Funk => "funk",
            ModelKind::PoincareDisk => "pdisk",
            ModelKind::HalfPlane => "hplane",
        }
    }

    pub fn is_disk(self) -> bool {
        !matches!(self, ModelKind::HalfPlane)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "funk" => Ok(ModelKind::Funk),
            "pdisk" => Ok(ModelKind::PoincareDisk),
            "hplane" => Ok(ModelKind::HalfPlane),
            other => Err(Error::invalid(format!("unknown model '{other}'"))),
        }
    }
}

/// A model together with the reversible-counterpart flag. When `reversible`
/// is set the 1-form term is dropped at evaluation time and only the
/// Riemannian part remains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelId {
    pub kind: ModelKind,
    pub reversible: bool,
}

impl ModelId {
    pub const FUNK: ModelId = ModelId::finsler(ModelKind::Funk);
    pub const POINCARE_DISK: ModelId = ModelId::finsler(ModelKind::PoincareDisk);
    pub const HALF_PLANE: ModelId = ModelId::finsler(ModelKind::HalfPlane);

    pub const fn finsler(kind: ModelKind) -> Self {
        ModelId { kind, reversible: false }
    }

    pub const fn reversible(kind: ModelKind) -> Self {
        ModelId { kind, reversible: true }
    }

    /// Same model with the 1-form suppressed.
    pub const fn counterpart(self) -> Self {
        ModelId { kind: self.kind, reversible: true }
    }
}

impl From<ModelKind> for ModelId {
    fn from(kind: ModelKind) -> Self {
        ModelId::finsler(kind)
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reversible {
            write!(f, "{} (reversible)", self.kind)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

/// Membership in the guarded open domain of `kind`.
pub fn in_domain(kind: ModelKind, x: Vec2) -> Result<bool> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("non-finite coordinates {x}")));
    }
    Ok(match kind {
        ModelKind::Funk | ModelKind::PoincareDisk => x.norm() <= 1.0 - DOMAIN_GUARD,
        ModelKind::HalfPlane => x[1] >= DOMAIN_GUARD,
    })
}

pub(crate) fn require_domain(kind: ModelKind, x: Vec2) -> Result<()> {
    if in_domain(kind, x)? {
        Ok(())
    } else {
        Err(Error::Domain { model: kind, x1: x[0], x2: x[1] })
    }
}

/// A point known to lie inside its model's domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelPoint {
    model: ModelId,
    coords: Vec2,
}

impl ModelPoint {
    pub fn new(model: impl Into<ModelId>, x1: f64, x2: f64) -> Result<Self> {
        Self::from_vec(model, Vec2::new(x1, x2))
    }

    pub fn from_vec(model: impl Into<ModelId>, coords: Vec2) -> Result<Self> {
        let model = model.into();
        require_domain(model.kind, coords)?;
        Ok(ModelPoint { model, coords })
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind
    }

    pub fn coords(&self) -> Vec2 {
        self.coords
    }

    /// Same coordinates, re-tagged with another model of the same domain
    /// type (for example the reversible counterpart).
    pub fn with_model(self, model: impl Into<ModelId>) -> Result<Self> {
        Self::from_vec(model, self.coords)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentVector {
    pub base: ModelPoint,
    pub v: Vec2,
}

impl TangentVector {
    pub fn new(base: ModelPoint, v: Vec2) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::invalid(format!("non-finite vector {v}")));
        }
        Ok(TangentVector { base, v })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CotangentVector {
    pub base: ModelPoint,
    pub a: Vec2,
}

impl CotangentVector {
    pub fn new(base: ModelPoint, a: Vec2) -> Result<Self> {
        if !a.is_finite() {
            return Err(Error::invalid(format!("non-finite covector {a}")));
        }
        Ok(CotangentVector { base, a })
    }
}

fn check_truncation(kind: ModelKind, t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::invalid(format!(
            "truncation {t} for {kind} must lie in (0, 1)"
        )));
    }
    Ok(())
}

fn draw_coords(kind: ModelKind, t: f64, rng: &mut ChaCha8Rng) -> Vec2 {
    match kind {
        ModelKind::Funk | ModelKind::PoincareDisk => loop {
            let x = Vec2::new(rng.gen_range(-t..=t), rng.gen_range(-t..=t));
            if x.norm() <= t {
                break x;
            }
        },
        ModelKind::HalfPlane => {
            Vec2::new(rng.gen_range(-1.0 / t..=1.0 / t), rng.gen_range(t..=1.0 / t))
        }
    }
}

/// Draws `count` points uniformly in coordinates from the truncated domain.
///
/// For disks `truncation` is the maximal radius. For the half plane it
/// selects the box `|x₁| ≤ 1/t`, `t ≤ x₂ ≤ 1/t`. The generator is ChaCha8
/// seeded with `seed`, so a fixed `(model, count, seed, truncation)` yields
/// the same list on every platform.
pub fn sample_points(
    model: impl Into<ModelId>,
    count: usize,
    seed: u64,
    truncation: f64,
) -> Result<Vec<ModelPoint>> {
    let model = model.into();
    check_truncation(model.kind, truncation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ModelPoint::from_vec(model, draw_coords(model.kind, truncation, &mut rng)))
        .collect()
}

/// Points as in [`sample_points`] paired with vectors drawn uniformly from
/// `[−1, 1]²` on an independent stream of the same seed.
pub fn sample_tangents(
    model: impl Into<ModelId>,
    count: usize,
    seed: u64,
    truncation: f64,
) -> Result<Vec<TangentVector>> {
    let points = sample_points(model, count, seed, truncation)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    points
        .into_iter()
        .map(|p| {
            let v = Vec2::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            TangentVector::new(p, v)
        })
        .collect()
}

/// Default truncation of the sampled region per domain type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Truncation {
    pub disk: f64,
    pub half_plane: f64,
}

impl Truncation {
    pub fn for_kind(&self, kind: ModelKind) -> f64 {
        if kind.is_disk() {
            self.disk
        } else {
            self.half_plane
        }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { disk: 0.99, half_plane: 0.01 }
    }
}
