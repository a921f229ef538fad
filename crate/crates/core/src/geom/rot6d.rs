//! Continuous 6D rotation representation: two free 3-vectors mapped to an
//! orthonormal matrix by Gram-Schmidt. Unlike Euler angles or quaternions the
//! map from parameters to rotations has no discontinuities, which keeps
//! gradient descent on the orientation well behaved.

use serde::{Deserialize, Serialize};

use crate::math::{Mat3, Real, Vec3, Vec3f};

use super::GeomError;

/// Degeneracy threshold: `|a|` and the sine of the angle between `a` and `b`
/// must stay above this. Far below anything an optimizer reaches in doubles.
pub const ROT6D_EPS: f64 = 1e-8;

/// Unconstrained 6D rotation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rot6D {
    pub a: Vec3f,
    pub b: Vec3f,
}

impl Rot6D {
    pub fn new(a: Vec3f, b: Vec3f) -> Self {
        Rot6D { a, b }
    }

    /// Parameters that reproduce `m` exactly: its first two columns.
    pub fn from_matrix(m: &crate::math::Mat3f) -> Self {
        Rot6D { a: m.col(0), b: m.col(1) }
    }

    pub fn identity() -> Self {
        Rot6D { a: Vec3f::X, b: Vec3f::Y }
    }

    /// True when Gram-Schmidt reconstruction would fail.
    pub fn is_degenerate(&self) -> bool {
        let na = self.a.norm();
        if na < ROT6D_EPS {
            return true;
        }
        let nb = self.b.norm();
        self.a.cross(self.b).norm() < ROT6D_EPS * na * nb
    }
}

/// Gram-Schmidt reconstruction over any scalar; degeneracy is decided on the
/// primal values so the plain and derivative paths agree on the branch.
pub fn gram_schmidt<S: Real>(a: Vec3<S>, b: Vec3<S>) -> Result<Mat3<S>, GeomError> {
    let a_val = a.value();
    let b_val = b.value();
    let na = a_val.norm();
    if na < ROT6D_EPS || a_val.cross(b_val).norm() < ROT6D_EPS * na * b_val.norm() {
        return Err(GeomError::DegenerateRotation);
    }
    let c1 = a.normalized();
    let c2 = (b - c1 * c1.dot(b)).normalized();
    let c3 = c1.cross(c2);
    Ok(Mat3::from_cols(c1, c2, c3))
}

/// Reconstruct the rotation matrix from 6D parameters.
pub fn gram_schmidt_rot6d(r: &Rot6D) -> Result<crate::math::Mat3f, GeomError> {
    gram_schmidt(r.a, r.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Mat3f;

    #[test]
    fn canonical_basis_gives_identity() {
        let r = gram_schmidt_rot6d(&Rot6D::new(Vec3f::X, Vec3f::Y)).unwrap();
        assert!((r.cols[0] - Vec3f::X).norm() < 1e-15);
        assert!((r.cols[1] - Vec3f::Y).norm() < 1e-15);
        assert!((r.cols[2] - Vec3f::Z).norm() < 1e-15);
    }

    #[test]
    fn scaling_and_shear_removed() {
        // a scaled, b sheared along a: still identity.
        let r = gram_schmidt_rot6d(&Rot6D::new(Vec3f::new(2.0, 0.0, 0.0), Vec3f::new(2.0, 2.0, 0.0)))
            .unwrap();
        let err = {
            let mut e: f64 = 0.0;
            let id = Mat3f::identity();
            for c in 0..3 {
                e = e.max((r.cols[c] - id.cols[c]).norm());
            }
            e
        };
        assert!(err < 1e-15);
    }

    #[test]
    fn zero_a_rejected() {
        assert!(matches!(
            gram_schmidt_rot6d(&Rot6D::new(Vec3f::ZERO, Vec3f::Y)),
            Err(GeomError::DegenerateRotation)
        ));
    }

    #[test]
    fn parallel_rejected() {
        assert!(gram_schmidt_rot6d(&Rot6D::new(Vec3f::X, Vec3f::new(3.0, 0.0, 0.0))).is_err());
        // nearly parallel, below the relative sine threshold
        assert!(gram_schmidt_rot6d(&Rot6D::new(
            Vec3f::new(1.0, 0.0, 0.0),
            Vec3f::new(1.0, 1e-9, 0.0)
        ))
        .is_err());
    }

    #[test]
    fn round_trip_from_matrix() {
        let m = Mat3f::from_axis_angle(Vec3f::new(0.26, -0.72, 0.64).normalized(), 1.9);
        let r = gram_schmidt_rot6d(&Rot6D::from_matrix(&m)).unwrap();
        for c in 0..3 {
            assert!((r.cols[c] - m.cols[c]).norm() < 1e-12);
        }
    }
}
