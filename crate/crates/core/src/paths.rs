//! Oriented lengths of polylines and upper-bound distance estimates.

use crate::error::{Error, Result};
use crate::geometry::{in_domain, ModelId, ModelPoint};
use crate::isometry::IsometryMap;
use crate::linalg::{Mat2, Vec2};
use crate::metrics::f_raw;
use crate::quadrature::gauss_legendre_on;

/// Gauss nodes per segment used when no count is given.
pub const DEFAULT_QUAD: usize = 64;

/// A piecewise-straight curve; its orientation is the vertex order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    model: ModelId,
    vertices: Vec<Vec2>,
}

impl Polyline {
    pub fn new(model: impl Into<ModelId>, vertices: &[ModelPoint]) -> Result<Self> {
        let model = model.into();
        if let Some(p) = vertices.iter().find(|p| p.kind() != model.kind) {
            return Err(Error::ModelMismatch { expected: model.kind, found: p.kind() });
        }
        Self::from_coords(model, vertices.iter().map(|p| p.coords()).collect())
    }

    /// Both domains are convex, so checking the vertices keeps every chord
    /// inside as well.
    pub fn from_coords(model: impl Into<ModelId>, vertices: Vec<Vec2>) -> Result<Self> {
        let model = model.into();
        if vertices.len() < 2 {
            return Err(Error::invalid("a polyline needs at least two vertices"));
        }
        for v in &vertices {
            if !in_domain(model.kind, *v)? {
                return Err(Error::Domain { model: model.kind, x1: v[0], x2: v[1] });
            }
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("repeated consecutive vertex {}", w[0])));
        }
        Ok(Polyline { model, vertices })
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline { model: self.model, vertices }
    }

    /// `self` followed by `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Polyline) -> Result<Polyline> {
        if other.model != self.model {
            return Err(Error::ModelMismatch { expected: self.model.kind, found: other.model.kind });
        }
        if self.vertices.last() != other.vertices.first() {
            return Err(Error::invalid("polylines do not share an endpoint"));
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        Ok(Polyline { model: self.model, vertices })
    }
}

fn check_quad(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 nodes per segment, got {n}")));
    }
    Ok(())
}

fn length_raw(model: ModelId, vertices: &[Vec2], rule: &[(f64, f64)]) -> f64 {
    vertices
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            rule.iter().map(|&(t, wt)| wt * f_raw(model, w[0] + t * d, d)).sum::<f64>()
        })
        .sum()
}

/// `∫ F(γ, γ')` with `quad_per_segment` Gauss–Legendre nodes per segment.
pub fn path_length(p: &Polyline, quad_per_segment: usize) -> Result<f64> {
    check_quad(quad_per_segment)?;
    Ok(length_raw(p.model, &p.vertices, &gauss_legendre_on(quad_per_segment, 0.0, 1.0)))
}

/// Length of the image curve `map ∘ γ` in the target model, using the same
/// parameter nodes and the pushed-forward velocities `J·γ'`.
pub fn path_length_mapped(p: &Polyline, map: IsometryMap, quad_per_segment: usize) -> Result<f64> {
    check_quad(quad_per_segment)?;
    if p.model.kind != map.source() {
        return Err(Error::ModelMismatch { expected: map.source(), found: p.model.kind });
    }
    let target = ModelId { kind: map.target(), reversible: p.model.reversible };
    let rule = gauss_legendre_on(quad_per_segment, 0.0, 1.0);
    Ok(p.vertices
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            rule.iter()
                .map(|&(t, wt)| {
                    let x = w[0] + t * d;
                    let y = Vec2(map.apply(x.0));
                    wt * f_raw(target, y, Mat2(map.jac(x.0)).mul_vec(d))
                })
                .sum::<f64>()
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceEstimate {
    /// Best length found; an upper bound on the distance.
    pub length: f64,
    /// Length of the straight chord.
    pub chord: f64,
    pub path: Polyline,
    /// Best length after each completed iteration, starting with the chord.
    pub history: Vec<f64>,
    pub iterations: usize,
    pub halvings: usize,
}

/// Maximum number of step halvings in [`distance_estimate`].
pub const MAX_HALVINGS: usize = 20;

/// Minimizes the length of polylines from `x` to `y` over `control_points`
/// free vertices by coordinate descent with step halving.
///
/// Free vertex `i` moves on the line through the chord point `i/(k+1)`
/// perpendicular to the chord, with offsets measured in chord lengths.
/// Each iteration tries `±step` on every offset and keeps strict
/// improvements, then repeats the net move of the sweep for as long as it
/// keeps improving. An iteration without improvement halves the step; the
/// search stops after `iterations` iterations or [`MAX_HALVINGS`] halvings.
pub fn distance_estimate(
    model: impl Into<ModelId>,
    x: &ModelPoint,
    y: &ModelPoint,
    control_points: usize,
    iterations: usize,
) -> Result<DistanceEstimate> {
    distance_estimate_with(model, x, y, control_points, iterations, DEFAULT_QUAD)
}

pub fn distance_estimate_with(
    model: impl Into<ModelId>,
    x: &ModelPoint,
    y: &ModelPoint,
    control_points: usize,
    iterations: usize,
    quad_per_segment: usize,
) -> Result<DistanceEstimate> {
    let model = model.into();
    check_quad(quad_per_segment)?;
    let (a, b) = (x.coords(), y.coords());
    if a == b {
        return Err(Error::invalid("distance endpoints coincide"));
    }
    let n = control_points + 1;
    let path = Polyline::new(model, &[*x, *y])?;
    let rule = gauss_legendre_on(quad_per_segment, 0.0, 1.0);
    let chord = length_raw(model, path.vertices(), &rule);

    // Free vertex i sits at offset s[i] along the chord normal through the
    // chord point i/n. Sliding along the curve barely changes the length,
    // so leaving that direction free makes the search crawl.
    let normal = Vec2::new(a[1] - b[1], b[0] - a[0]);
    let place = |s: &[f64]| -> Vec<Vec2> {
        (0..=n)
            .map(|i| {
                let base = a + (i as f64 / n as f64) * (b - a);
                if i == 0 || i == n {
                    base
                } else {
                    base + s[i - 1] * normal
                }
            })
            .collect()
    };
    let length_of = |s: &[f64]| -> Option<f64> {
        let v = place(s);
        let ok = v[1..n].iter().all(|p| in_domain(model.kind, *p).unwrap_or(false));
        ok.then(|| length_raw(model, &v, &rule))
    };

    let mut offsets = vec![0.0; control_points];
    let mut best = chord;
    let mut history = vec![chord];
    let mut step = 0.1;
    let mut halvings = 0;
    let mut done = 0;
    while done < iterations && control_points > 0 && halvings <= MAX_HALVINGS {
        let before = offsets.clone();
        let mut improved = false;
        for i in 0..control_points {
            for sign in [1.0, -1.0] {
                let old = offsets[i];
                offsets[i] += sign * step;
                match length_of(&offsets) {
                    Some(len) if len < best => {
                        best = len;
                        improved = true;
                    }
                    _ => offsets[i] = old,
                }
            }
        }
        if improved {
            // Pattern move: repeat the sweep's net displacement while it
            // still shortens the path.
            let delta: Vec<f64> = offsets.iter().zip(&before).map(|(a, b)| a - b).collect();
            loop {
                let trial: Vec<f64> = offsets.iter().zip(&delta).map(|(o, d)| o + d).collect();
                match length_of(&trial) {
                    Some(len) if len < best => {
                        best = len;
                        offsets = trial;
                    }
                    _ => break,
                }
            }
        }
        done += 1;
        history.push(best);
        if !improved {
            step *= 0.5;
            halvings += 1;
        }
    }
    let verts = place(&offsets);
    let path = Polyline { model, vertices: verts };
    Ok(DistanceEstimate { length: best, chord, path, history, iterations: done, halvings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ModelKind;

    fn pt(a: f64, b: f64) -> ModelPoint {
        ModelPoint::new(ModelKind::Funk, a, b).unwrap()
    }

    #[test]
    fn funk_axis_lengths_are_logarithms() {
        let p = Polyline::new(ModelKind::Funk, &[pt(0.0, 0.0), pt(0.5, 0.0)]).unwrap();
        assert!((path_length(&p, 64).unwrap() - 2f64.ln()).abs() < 1e-14);
        assert!((path_length(&p.reversed(), 64).unwrap() - 1.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_polylines_rejected() {
        assert!(Polyline::new(ModelKind::Funk, &[pt(0.1, 0.0), pt(0.1, 0.0)]).is_err());
        assert!(Polyline::new(ModelKind::Funk, &[pt(0.1, 0.0)]).is_err());
        let p = Polyline::new(ModelKind::Funk, &[pt(0.0, 0.0), pt(0.5, 0.0)]).unwrap();
        assert!(path_length(&p, 1).is_err());
    }

    #[test]
    fn zero_control_points_is_the_chord() {
        let d = distance_estimate(ModelKind::Funk, &pt(0.0, 0.0), &pt(0.3, 0.4), 0, 50).unwrap();
        assert_eq!(d.length, d.chord);
        assert_eq!(d.iterations, 0);
    }

    #[test]
    fn history_never_increases() {
        let kind = ModelKind::PoincareDisk;
        let x = ModelPoint::new(kind, -0.4, 0.2).unwrap();
        let y = ModelPoint::new(kind, 0.5, 0.3).unwrap();
        let d = distance_estimate(kind, &x, &y, 3, 100).unwrap();
        assert!(d.history.windows(2).all(|w| w[1] <= w[0]));
        assert!(d.length < d.chord);
    }
}
