//! Small fixed-size linear algebra over a generic scalar.

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use super::scalar::{Dual, Real};

/// 3-vector over any [`Real`] scalar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vec3<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

/// Plain `f64` 3-vector, the workhorse type.
pub type Vec3f = Vec3<f64>;
/// Derivative-carrying 3-vector.
pub type Vec3d = Vec3<Dual>;

impl<S: Real> Vec3<S> {
    #[inline]
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Vec3::new(S::zero(), S::zero(), S::zero())
    }

    #[inline]
    pub fn splat(v: f64) -> Self {
        Vec3::new(S::from_f64(v), S::from_f64(v), S::from_f64(v))
    }

    #[inline]
    pub fn dot(self, rhs: Self) -> S {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    #[inline]
    pub fn cross(self, rhs: Self) -> Self {
        Vec3::new(
            self.y * rhs.z - self.z * rhs.y,
            self.z * rhs.x - self.x * rhs.z,
            self.x * rhs.y - self.y * rhs.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> S {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        self * S::from_f64(s)
    }

    /// Lift an `f64` vector into this scalar type as a constant.
    #[inline]
    pub fn lift(v: Vec3f) -> Self {
        Vec3::new(S::from_f64(v.x), S::from_f64(v.y), S::from_f64(v.z))
    }

    /// Primal part.
    #[inline]
    pub fn value(self) -> Vec3f {
        Vec3f::new(self.x.value(), self.y.value(), self.z.value())
    }
}

impl Vec3f {
    pub const ZERO: Vec3f = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3f = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3f = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3f = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    #[inline]
    pub fn distance(self, rhs: Vec3f) -> f64 {
        (self - rhs).norm()
    }

    #[inline]
    pub fn distance_squared(self, rhs: Vec3f) -> f64 {
        (self - rhs).norm_squared()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Vec3f {
        Vec3f::new(a[0], a[1], a[2])
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn min_component_wise(self, rhs: Vec3f) -> Vec3f {
        Vec3f::new(self.x.min(rhs.x), self.y.min(rhs.y), self.z.min(rhs.z))
    }

    #[inline]
    pub fn max_component_wise(self, rhs: Vec3f) -> Vec3f {
        Vec3f::new(self.x.max(rhs.x), self.y.max(rhs.y), self.z.max(rhs.z))
    }

    /// Any unit vector orthogonal to `self` (which must be nonzero).
    /// Picks the global axis least aligned with `self` for stability.
    pub fn any_orthonormal(self) -> Vec3f {
        let a = self.x.abs();
        let b = self.y.abs();
        let c = self.z.abs();
        let axis = if a <= b && a <= c {
            Vec3f::X
        } else if b <= c {
            Vec3f::Y
        } else {
            Vec3f::Z
        };
        axis.cross(self).normalized()
    }
}

impl<S: Real> Add for Vec3<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<S: Real> AddAssign for Vec3<S> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<S: Real> Sub for Vec3<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<S: Real> Mul<S> for Vec3<S> {
    type Output = Self;
    #[inline]
    fn mul(self, s: S) -> Self {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl<S: Real> Div<S> for Vec3<S> {
    type Output = Self;
    #[inline]
    fn div(self, s: S) -> Self {
        let inv = S::one() / s;
        self * inv
    }
}

impl<S: Real> Neg for Vec3<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl<S> Index<usize> for Vec3<S> {
    type Output = S;
    #[inline]
    fn index(&self, i: usize) -> &S {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index out of range: {i}"),
        }
    }
}

/// Column-major 3x3 matrix over any [`Real`] scalar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat3<S> {
    /// Columns of the matrix.
    pub cols: [Vec3<S>; 3],
}

pub type Mat3f = Mat3<f64>;
pub type Mat3d = Mat3<Dual>;

impl<S: Real> Mat3<S> {
    #[inline]
    pub fn from_cols(c0: Vec3<S>, c1: Vec3<S>, c2: Vec3<S>) -> Self {
        Mat3 { cols: [c0, c1, c2] }
    }

    #[inline]
    pub fn identity() -> Self {
        Mat3::from_cols(
            Vec3::new(S::one(), S::zero(), S::zero()),
            Vec3::new(S::zero(), S::one(), S::zero()),
            Vec3::new(S::zero(), S::zero(), S::one()),
        )
    }

    #[inline]
    pub fn col(&self, i: usize) -> Vec3<S> {
        self.cols[i]
    }

    #[inline]
    pub fn row(&self, i: usize) -> Vec3<S> {
        Vec3::new(self.cols[0][i], self.cols[1][i], self.cols[2][i])
    }

    /// Matrix-vector product.
    #[inline]
    pub fn mul_vec(&self, v: Vec3<S>) -> Vec3<S> {
        self.cols[0] * v.x + self.cols[1] * v.y + self.cols[2] * v.z
    }

    /// Transpose-times-vector, i.e. `R^T v`.
    #[inline]
    pub fn tr_mul_vec(&self, v: Vec3<S>) -> Vec3<S> {
        Vec3::new(self.cols[0].dot(v), self.cols[1].dot(v), self.cols[2].dot(v))
    }

    #[inline]
    pub fn mul_mat(&self, rhs: &Mat3<S>) -> Mat3<S> {
        Mat3::from_cols(
            self.mul_vec(rhs.cols[0]),
            self.mul_vec(rhs.cols[1]),
            self.mul_vec(rhs.cols[2]),
        )
    }

    #[inline]
    pub fn transpose(&self) -> Mat3<S> {
        Mat3::from_cols(self.row(0), self.row(1), self.row(2))
    }

    pub fn determinant(&self) -> S {
        self.cols[0].dot(self.cols[1].cross(self.cols[2]))
    }

    /// Rotation about a unit axis by `angle` (Rodrigues' formula).
    pub fn from_axis_angle(axis: Vec3<S>, angle: S) -> Self {
        let c = angle.cos();
        let s = angle.sin();
        let t = S::one() - c;
        let (x, y, z) = (axis.x, axis.y, axis.z);
        Mat3::from_cols(
            Vec3::new(t * x * x + c, t * x * y + s * z, t * x * z - s * y),
            Vec3::new(t * x * y - s * z, t * y * y + c, t * y * z + s * x),
            Vec3::new(t * x * z + s * y, t * y * z - s * x, t * z * z + c),
        )
    }

    pub fn lift(m: &Mat3f) -> Self {
        Mat3::from_cols(Vec3::lift(m.cols[0]), Vec3::lift(m.cols[1]), Vec3::lift(m.cols[2]))
    }

    pub fn value(&self) -> Mat3f {
        Mat3f::from_cols(self.cols[0].value(), self.cols[1].value(), self.cols[2].value())
    }
}

impl Mat3f {
    /// Max absolute entry of `R^T R - I`; zero for perfectly orthonormal `R`.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.transpose().mul_mat(self);
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((g.cols[j][i] - target).abs());
            }
        }
        err
    }
}
