//! Rigid transforms with validated rotations, plus quaternion conversions
//! used by the file formats.

use crate::math::{Mat3f, Vec3f};

use super::GeomError;

const ROTATION_TOL: f64 = 1e-9;

/// Rigid transform: orthonormal rotation (det +1 within 1e-9) plus translation
/// in meters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation: Mat3f,
    pub translation: Vec3f,
}

impl RigidTransform {
    /// Validating constructor; rejects non-orthonormal or reflecting matrices.
    pub fn new(rotation: Mat3f, translation: Vec3f) -> Result<Self, GeomError> {
        let ortho_err = rotation.orthonormality_error();
        let det = rotation.determinant();
        if ortho_err > ROTATION_TOL || (det - 1.0).abs() > ROTATION_TOL {
            return Err(GeomError::InvalidRotation { ortho_err, det });
        }
        Ok(RigidTransform { rotation, translation })
    }

    /// For rotations that are orthonormal by construction (axis-angle,
    /// Gram-Schmidt output, compositions of valid transforms).
    #[inline]
    pub(crate) fn new_unchecked(rotation: Mat3f, translation: Vec3f) -> Self {
        RigidTransform { rotation, translation }
    }

    pub fn identity() -> Self {
        RigidTransform::new_unchecked(Mat3f::identity(), Vec3f::ZERO)
    }

    pub fn from_translation(t: Vec3f) -> Self {
        RigidTransform::new_unchecked(Mat3f::identity(), t)
    }

    pub fn from_axis_angle(axis: Vec3f, angle: f64, translation: Vec3f) -> Self {
        RigidTransform::new_unchecked(Mat3f::from_axis_angle(axis.normalized(), angle), translation)
    }

    #[inline]
    pub fn apply(&self, p: Vec3f) -> Vec3f {
        self.rotation.mul_vec(p) + self.translation
    }

    /// Rotate a direction (no translation).
    #[inline]
    pub fn apply_vector(&self, v: Vec3f) -> Vec3f {
        self.rotation.mul_vec(v)
    }

    #[inline]
    pub fn apply_inverse(&self, p: Vec3f) -> Vec3f {
        self.rotation.tr_mul_vec(p - self.translation)
    }

    #[inline]
    pub fn compose(&self, rhs: &RigidTransform) -> RigidTransform {
        RigidTransform::new_unchecked(
            self.rotation.mul_mat(&rhs.rotation),
            self.rotation.mul_vec(rhs.translation) + self.translation,
        )
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform::new_unchecked(rt, -rt.mul_vec(self.translation))
    }
}

/// Unit quaternion `[w, x, y, z]` to rotation matrix.
pub fn quat_to_mat(q: [f64; 4]) -> Result<Mat3f, GeomError> {
    let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    if !(norm.is_finite() && norm > 1e-12) {
        return Err(GeomError::InvalidRotation { ortho_err: f64::INFINITY, det: 0.0 });
    }
    let (w, x, y, z) = (q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
    let m = Mat3f::from_cols(
        Vec3f::new(1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y + w * z), 2.0 * (x * z - w * y)),
        Vec3f::new(2.0 * (x * y - w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z + w * x)),
        Vec3f::new(2.0 * (x * z + w * y), 2.0 * (y * z - w * x), 1.0 - 2.0 * (x * x + y * y)),
    );
    Ok(m)
}

/// Rotation matrix to unit quaternion `[w, x, y, z]` (Shepperd's method,
/// picking the numerically largest pivot). Returns w >= 0.
pub fn mat_to_quat(m: &Mat3f) -> [f64; 4] {
    let (r00, r11, r22) = (m.cols[0].x, m.cols[1].y, m.cols[2].z);
    let trace = r00 + r11 + r22;
    // m.cols[j][i] is entry (i, j)
    let e = |i: usize, j: usize| m.cols[j][i];
    let mut q;
    if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        q = [
            0.25 * s,
            (e(2, 1) - e(1, 2)) / s,
            (e(0, 2) - e(2, 0)) / s,
            (e(1, 0) - e(0, 1)) / s,
        ];
    } else if r00 > r11 && r00 > r22 {
        let s = (1.0 + r00 - r11 - r22).sqrt() * 2.0;
        q = [
            (e(2, 1) - e(1, 2)) / s,
            0.25 * s,
            (e(0, 1) + e(1, 0)) / s,
            (e(0, 2) + e(2, 0)) / s,
        ];
    } else if r11 > r22 {
        let s = (1.0 + r11 - r00 - r22).sqrt() * 2.0;
        q = [
            (e(0, 2) - e(2, 0)) / s,
            (e(0, 1) + e(1, 0)) / s,
            0.25 * s,
            (e(1, 2) + e(2, 1)) / s,
        ];
    } else {
        let s = (1.0 + r22 - r00 - r11).sqrt() * 2.0;
        q = [
            (e(1, 0) - e(0, 1)) / s,
            (e(0, 2) + e(2, 0)) / s,
            (e(1, 2) + e(2, 1)) / s,
            0.25 * s,
        ];
    }
    if q[0] < 0.0 {
        for c in q.iter_mut() {
            *c = -*c;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_reflection() {
        let m = Mat3f::from_cols(Vec3f::X, Vec3f::Y, -Vec3f::Z);
        assert!(RigidTransform::new(m, Vec3f::ZERO).is_err());
    }

    #[test]
    fn quat_round_trip() {
        let axes = [
            (Vec3f::new(1.0, 0.0, 0.0), 0.3),
            (Vec3f::new(0.0, 1.0, 0.0), -2.8),
            (Vec3f::new(0.3, -0.5, 0.81), 3.1),
            (Vec3f::new(-0.2, 0.9, 0.1), 0.001),
        ];
        for (axis, angle) in axes {
            let m = Mat3f::from_axis_angle(axis.normalized(), angle);
            let q = mat_to_quat(&m);
            let back = quat_to_mat(q).unwrap();
            for c in 0..3 {
                assert!((back.cols[c] - m.cols[c]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn quat_identity() {
        let q = mat_to_quat(&Mat3f::identity());
        assert!((q[0] - 1.0).abs() < 1e-15);
        let m = quat_to_mat([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(m.orthonormality_error() < 1e-15);
    }
}
