//! Triangulations of truncated domains.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{in_domain, ModelId, ModelKind};
use crate::linalg::Vec2;

/// Smallest admissible triangle area.
pub const MIN_AREA: f64 = 1e-14;

/// The region a mesh covers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeshRegion {
    /// Disk of the given radius centered at the origin.
    Disk { radius: f64 },
    /// `[x1[0], x1[1]] × [x2[0], x2[1]]`.
    Rectangle { x1: [f64; 2], x2: [f64; 2] },
}

impl MeshRegion {
    /// Region used for a truncation level of a model.
    ///
    /// Disks use the truncation as radius. For the half plane the level `t`
    /// selects `[−4, 4] × [2(1−t)/(1+t), 8]`; the lower edge is the lowest
    /// point of the image of the Poincaré disk of radius `t` under `h⁻¹`, so
    /// the three models are truncated comparably.
    pub fn for_truncation(kind: ModelKind, t: f64) -> Result<MeshRegion> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::invalid(format!("truncation {t} must lie in (0, 1)")));
        }
        Ok(match kind {
            ModelKind::Funk | ModelKind::PoincareDisk => MeshRegion::Disk { radius: t },
            ModelKind::HalfPlane => MeshRegion::Rectangle {
                x1: [-4.0, 4.0],
                x2: [2.0 * (1.0 - t) / (1.0 + t), 8.0],
            },
        })
    }

    pub fn contains(&self, x: Vec2, tol: f64) -> bool {
        match *self {
            MeshRegion::Disk { radius } => x.norm() <= radius + tol,
            MeshRegion::Rectangle { x1, x2 } => {
                x[0] >= x1[0] - tol && x[0] <= x1[1] + tol && x[1] >= x2[0] - tol && x[1] <= x2[1] + tol
            }
        }
    }

    fn check_fits(&self, kind: ModelKind) -> Result<()> {
        let corners = match *self {
            MeshRegion::Disk { radius } => vec![Vec2::new(radius, 0.0), Vec2::new(0.0, radius)],
            MeshRegion::Rectangle { x1, x2 } => vec![
                Vec2::new(x1[0], x2[0]),
                Vec2::new(x1[1], x2[0]),
                Vec2::new(x1[0], x2[1]),
                Vec2::new(x1[1], x2[1]),
            ],
        };
        for c in corners {
            if !in_domain(kind, c)? {
                return Err(Error::Domain { model: kind, x1: c[0], x2: c[1] });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec2>,
    triangles: Vec<[u32; 3]>,
    boundary: Vec<bool>,
    region: MeshRegion,
    h: f64,
    /// For every vertex, the incident `(triangle, local index)` pairs in CSR
    /// layout.
    incidence_start: Vec<u32>,
    incidence: Vec<(u32, u8)>,
}

fn signed_area(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl Mesh {
    /// Builds a mesh from raw parts, checking orientation, areas and the
    /// boundary mask.
    pub fn from_parts(
        vertices: Vec<Vec2>,
        triangles: Vec<[u32; 3]>,
        boundary: Vec<bool>,
        region: MeshRegion,
        h: f64,
    ) -> Result<Mesh> {
        if boundary.len() != vertices.len() {
            return Err(Error::invalid("boundary mask length differs from vertex count"));
        }
        for (i, t) in triangles.iter().enumerate() {
            if t.iter().any(|&k| k as usize >= vertices.len()) {
                return Err(Error::invalid(format!("triangle {i} references a missing vertex")));
            }
            let a = signed_area(vertices[t[0] as usize], vertices[t[1] as usize], vertices[t[2] as usize]);
            if !(a > MIN_AREA) {
                return Err(Error::invalid(format!("triangle {i} has signed area {a:e}")));
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            if !region.contains(*v, 1e-12) {
                return Err(Error::invalid(format!("vertex {i} at {v} lies outside the region")));
            }
        }
        let mut counts = vec![0u32; vertices.len() + 1];
        for t in &triangles {
            for &k in t {
                counts[k as usize + 1] += 1;
            }
        }
        for i in 0..vertices.len() {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut incidence = vec![(0u32, 0u8); 3 * triangles.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for (local, &k) in t.iter().enumerate() {
                let slot = &mut fill[k as usize];
                incidence[*slot as usize] = (ti as u32, local as u8);
                *slot += 1;
            }
        }
        Ok(Mesh { vertices, triangles, boundary, region, h, incidence_start: counts, incidence })
    }

    /// Mesh of the truncated domain of `kind` with target edge length `h`.
    pub fn build(kind: ModelKind, truncation: f64, h: f64) -> Result<Mesh> {
        let region = MeshRegion::for_truncation(kind, truncation)?;
        Self::build_region(kind, region, h)
    }

    pub fn build_region(kind: ModelKind, region: MeshRegion, h: f64) -> Result<Mesh> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid(format!("mesh size {h} must be positive")));
        }
        region.check_fits(kind)?;
        match region {
            MeshRegion::Disk { radius } => disk_mesh(radius, h),
            MeshRegion::Rectangle { x1, x2 } => rectangle_mesh(x1, x2, h),
        }
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn region(&self) -> MeshRegion {
        self.region
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn interior_count(&self) -> usize {
        self.boundary.iter().filter(|b| !**b).count()
    }

    pub(crate) fn incident(&self, v: usize) -> &[(u32, u8)] {
        let a = self.incidence_start[v] as usize;
        let b = self.incidence_start[v + 1] as usize;
        &self.incidence[a..b]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        signed_area(a, b, c)
    }

    pub fn corners(&self, t: usize) -> [Vec2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a as usize], self.vertices[b as usize], self.vertices[c as usize]]
    }

    pub fn centroid(&self, t: usize) -> Vec2 {
        let [a, b, c] = self.corners(t);
        (1.0 / 3.0) * (a + b + c)
    }

    /// Same mesh with every vertex moved by `f`; the boundary mask is kept.
    /// Fails if a triangle loses its orientation.
    pub fn mapped(&self, region: MeshRegion, f: impl Fn(Vec2) -> Vec2) -> Result<Mesh> {
        let vertices = self.vertices.iter().map(|&v| f(v)).collect();
        Mesh::from_parts(vertices, self.triangles.clone(), self.boundary.clone(), region, self.h)
    }

    pub fn locator(&self) -> Locator<'_> {
        Locator::new(self)
    }
}

/// Concentric rings joined by zipper strips.
fn disk_mesh(radius: f64, h: f64) -> Result<Mesh> {
    let rings = (radius / h).ceil() as usize;
    if rings < 2 {
        return Err(Error::invalid(format!(
            "mesh size {h} too coarse for a disk of radius {radius}"
        )));
    }
    let mut vertices = vec![Vec2::ZERO];
    let mut boundary = vec![false];
    // (first index, count, angular offset in cells) per ring
    let mut ring_info = vec![(0usize, 1usize, 0.0f64)];
    for k in 1..=rings {
        let r = if k == rings { radius } else { radius * k as f64 / rings as f64 };
        let m = ((TAU * r / h).ceil() as usize).max(6);
        let off = 0.5 * (k % 2) as f64;
        ring_info.push((vertices.len(), m, off));
        for j in 0..m {
            vertices.push(r * Vec2::polar(TAU * (j as f64 + off) / m as f64));
            boundary.push(k == rings);
        }
    }
    let mut triangles = Vec::new();
    let (s1, m1, _) = ring_info[1];
    for j in 0..m1 {
        triangles.push([0, (s1 + j) as u32, (s1 + (j + 1) % m1) as u32]);
    }
    for k in 1..rings {
        let (sa, ma, oa) = ring_info[k];
        let (sb, mb, ob) = ring_info[k + 1];
        let ta = |i: usize| (i as f64 + oa) / ma as f64;
        let tb = |j: usize| (j as f64 + ob) / mb as f64;
        let (mut i, mut j) = (0, 0);
        while i < ma || j < mb {
            let a = (sa + i % ma) as u32;
            let b = (sb + j % mb) as u32;
            let advance_inner = j == mb || (i < ma && ta(i + 1) < tb(j + 1));
            if advance_inner {
                triangles.push([a, b, (sa + (i + 1) % ma) as u32]);
                i += 1;
            } else {
                triangles.push([a, b, (sb + (j + 1) % mb) as u32]);
                j += 1;
            }
        }
    }
    Mesh::from_parts(vertices, triangles, boundary, MeshRegion::Disk { radius }, h)
}

/// Structured grid with alternating diagonals.
fn rectangle_mesh(x1: [f64; 2], x2: [f64; 2], h: f64) -> Result<Mesh> {
    let nx = ((x1[1] - x1[0]) / h).ceil() as usize;
    let ny = ((x2[1] - x2[0]) / h).ceil() as usize;
    if nx < 2 || ny < 2 {
        return Err(Error::invalid(format!("mesh size {h} too coarse for the rectangle")));
    }
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    let mut boundary = Vec::with_capacity((nx + 1) * (ny + 1));
    let coord = |lo: f64, hi: f64, n: usize, i: usize| {
        if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        }
    };
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(Vec2::new(coord(x1[0], x1[1], nx, i), coord(x2[0], x2[1], ny, j)));
            boundary.push(i == 0 || j == 0 || i == nx || j == ny);
        }
    }
    let id = |i: usize, j: usize| (j * (nx + 1) + i) as u32;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            if (i + j) % 2 == 0 {
                triangles.push([a, b, c]);
                triangles.push([a, c, d]);
            } else {
                triangles.push([a, b, d]);
                triangles.push([b, c, d]);
            }
        }
    }
    Mesh::from_parts(vertices, triangles, boundary, MeshRegion::Rectangle { x1, x2 }, h)
}

/// [`Mesh::build`] for a model id; the reversible flag does not change the
/// domain.
pub fn build_mesh(model: impl Into<ModelId>, truncation: f64, h: f64) -> Result<Mesh> {
    Mesh::build(model.into().kind, truncation, h)
}

/// Bucket grid for point location.
pub struct Locator<'a> {
    mesh: &'a Mesh,
    origin: Vec2,
    cell: f64,
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl<'a> Locator<'a> {
    fn new(mesh: &'a Mesh) -> Self {
        let (mut lo, mut hi) = (Vec2::new(f64::MAX, f64::MAX), Vec2::new(f64::MIN, f64::MIN));
        for v in &mesh.vertices {
            lo = Vec2::new(lo[0].min(v[0]), lo[1].min(v[1]));
            hi = Vec2::new(hi[0].max(v[0]), hi[1].max(v[1]));
        }
        let cell = 2.0 * mesh.h;
        let nx = (((hi[0] - lo[0]) / cell).ceil() as usize).max(1);
        let ny = (((hi[1] - lo[1]) / cell).ceil() as usize).max(1);
        let bucket = |p: Vec2| {
            let i = (((p[0] - lo[0]) / cell) as usize).min(nx - 1);
            let j = (((p[1] - lo[1]) / cell) as usize).min(ny - 1);
            (i, j)
        };
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); nx * ny];
        for t in 0..mesh.triangles.len() {
            let c = mesh.corners(t);
            let (i0, j0) = bucket(Vec2::new(
                c.iter().map(|p| p[0]).fold(f64::MAX, f64::min),
                c.iter().map(|p| p[1]).fold(f64::MAX, f64::min),
            ));
            let (i1, j1) = bucket(Vec2::new(
                c.iter().map(|p| p[0]).fold(f64::MIN, f64::max),
                c.iter().map(|p| p[1]).fold(f64::MIN, f64::max),
            ));
            for j in j0..=j1 {
                for i in i0..=i1 {
                    lists[j * nx + i].push(t as u32);
                }
            }
        }
        let mut start = Vec::with_capacity(lists.len() + 1);
        let mut items = Vec::new();
        start.push(0);
        for l in lists {
            items.extend(l);
            start.push(items.len() as u32);
        }
        Locator { mesh, origin: lo, cell, nx, ny, start, items }
    }

    /// Containing triangle and barycentric coordinates, if any.
    pub fn locate(&self, p: Vec2) -> Option<(usize, [f64; 3])> {
        let fi = (p[0] - self.origin[0]) / self.cell;
        let fj = (p[1] - self.origin[1]) / self.cell;
        if !(fi >= 0.0 && fj >= 0.0) {
            return None;
        }
        let (i, j) = (fi as usize, fj as usize);
        if i >= self.nx || j >= self.ny {
            return None;
        }
        let b = j * self.nx + i;
        for &t in &self.items[self.start[b] as usize..self.start[b + 1] as usize] {
            let [a, bb, c] = self.mesh.corners(t as usize);
            let area = signed_area(a, bb, c);
            let l0 = signed_area(p, bb, c) / area;
            let l1 = signed_area(a, p, c) / area;
            let l2 = 1.0 - l0 - l1;
            let eps = -1e-12;
            if l0 >= eps && l1 >= eps && l2 >= eps {
                return Some((t as usize, [l0, l1, l2]));
            }
        }
        None
    }

    /// Piecewise-linear interpolation of vertex values; zero outside.
    pub fn interpolate(&self, values: &[f64], p: Vec2) -> f64 {
        match self.locate(p) {
            Some((t, l)) => {
                let tri = self.mesh.triangles[t];
                (0..3).map(|k| l[k] * values[tri[k] as usize]).sum()
            }
            None => 0.0,
        }
    }
}
