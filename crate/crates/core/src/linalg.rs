//! Two-dimensional vectors and matrices.
//!
//! Everything in this crate is strictly planar, so a pair of small `Copy`
//! types covers all the linear algebra we need.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2(pub [f64; 2]);

impl Vec2 {
    pub const ZERO: Vec2 = Vec2([0.0, 0.0]);

    pub const fn new(a: f64, b: f64) -> Self {
        Vec2([a, b])
    }

    /// Unit vector at angle `theta`.
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2([c, s])
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.0[0].hypot(self.0[1])
    }

    pub fn is_finite(self) -> bool {
        self.0[0].is_finite() && self.0[1].is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0[0] == 0.0 && self.0[1] == 0.0
    }

    pub fn max_abs_diff(self, other: Vec2) -> f64 {
        (self.0[0] - other.0[0])
            .abs()
            .max((self.0[1] - other.0[1]).abs())
    }
}

impl Index<usize> for Vec2 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.0[0] += o.0[0];
        self.0[1] += o.0[1];
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2([-self.0[0], -self.0[1]])
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2([self * v.0[0], self * v.0[1]])
    }
}

impl From<[f64; 2]> for Vec2 {
    fn from(a: [f64; 2]) -> Self {
        Vec2(a)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

/// Row-major 2×2 matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);

    pub fn scaled_identity(s: f64) -> Self {
        Mat2([[s, 0.0], [0.0, s]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    /// Explicit inverse; `None` for a singular matrix.
    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let m = &self.0;
        Some(Mat2([
            [m[1][1] / d, -m[0][1] / d],
            [-m[1][0] / d, m[0][0] / d],
        ]))
    }

    pub fn transpose(&self) -> Mat2 {
        let m = &self.0;
        Mat2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn symmetrized(&self) -> Mat2 {
        let m = &self.0;
        let off = 0.5 * (m[0][1] + m[1][0]);
        Mat2([[m[0][0], off], [off, m[1][1]]])
    }

    pub fn mul_vec(&self, v: Vec2) -> Vec2 {
        let m = &self.0;
        Vec2([
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ])
    }

    /// `vᵀ M w`
    pub fn bilinear(&self, v: Vec2, w: Vec2) -> f64 {
        v.dot(self.mul_vec(w))
    }

    pub fn mul_mat(&self, o: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &o.0;
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }

    /// Eigenvalues of the symmetric part, ascending.
    pub fn sym_eigenvalues(&self) -> [f64; 2] {
        let s = self.symmetrized().0;
        let mean = 0.5 * (s[0][0] + s[1][1]);
        let half_diff = 0.5 * (s[0][0] - s[1][1]);
        let r = half_diff.hypot(s[0][1]);
        [mean - r, mean + r]
    }

    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Mat2([[2.0, 1.0], [0.5, 3.0]]);
        let p = m.mul_mat(&m.inverse().unwrap());
        assert!(p.max_abs_diff(&Mat2::IDENTITY) < 1e-15);
        assert!(Mat2([[1.0, 2.0], [2.0, 4.0]]).inverse().is_none());
    }

    #[test]
    fn symmetric_eigenvalues() {
        let [lo, hi] = Mat2([[2.0, 1.0], [1.0, 2.0]]).sym_eigenvalues();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-15);
    }
}
