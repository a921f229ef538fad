//! Grasp representation anchored at object points, ground-truth grasp labels,
//! and dense label matching.
//!
//! A grasp is parameterized by a fixed anchor point on the object cloud plus
//! a free vector `[offset (3), a (3), b (3), joint angles (dof)]`: the palm
//! translation is `anchor + offset`, the orientation comes from Gram-Schmidt
//! on `(a, b)`, and the joints are clamped by the hand's limits. For an
//! 18-dof hand the free vector is 27-dimensional.

mod io;
mod matching;

pub use io::{read_labels_jsonl, write_labels_jsonl, LabelSetFile};
pub use matching::{match_labels, LabelSet, MATCH_DISTANCE};

use thiserror::Error;

use crate::geom::{gram_schmidt_rot6d, GeomError, RigidTransform, Rot6D};
use crate::hand::{clamp_joints, HandError, HandModel, JointVector};
use crate::math::Vec3f;

#[derive(Debug, Error)]
pub enum GraspError {
    #[error("parameter vector has length {actual}, expected {expected}")]
    BadParamLength { expected: usize, actual: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Hand(#[from] HandError),
    #[error("label file line {line}: {detail}")]
    LabelParse { line: usize, detail: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Grasp state anchored at a cloud point. `anchor` is held fixed; the free
/// parameters are `offset`, `rot`, and `theta`.
#[derive(Clone, Debug)]
pub struct GraspConfig {
    pub anchor: Vec3f,
    pub offset: Vec3f,
    pub rot: Rot6D,
    pub theta: JointVector,
}

impl GraspConfig {
    /// Free-parameter dimension: 9 + dof (27 for an 18-dof hand).
    pub fn param_dim(&self) -> usize {
        9 + self.theta.len()
    }

    /// Flatten to `[offset, a, b, theta]`; the anchor is not part of the
    /// vector (it is the fixed contact point).
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_dim());
        out.extend_from_slice(&self.offset.to_array());
        out.extend_from_slice(&self.rot.a.to_array());
        out.extend_from_slice(&self.rot.b.to_array());
        out.extend_from_slice(self.theta.angles());
        out
    }

    /// Rebuild from a flattened vector (exact round trip with [`flatten`]).
    /// Degenerate rotation parameters are accepted here and surface when the
    /// rotation is reconstructed.
    pub fn unflatten(anchor: Vec3f, params: &[f64]) -> Result<GraspConfig, GraspError> {
        if params.len() < 9 {
            return Err(GraspError::BadParamLength { expected: 9, actual: params.len() });
        }
        let v = |i: usize| Vec3f::new(params[i], params[i + 1], params[i + 2]);
        Ok(GraspConfig {
            anchor,
            offset: v(0),
            rot: Rot6D::new(v(3), v(6)),
            theta: JointVector::new(params[9..].to_vec()).map_err(GraspError::Hand)?,
        })
    }
}

/// Palm translation from the anchor and the predicted offset.
pub fn palm_translation(anchor: Vec3f, offset: Vec3f) -> Vec3f {
    anchor + offset
}

/// Assemble the full hand pose: palm transform from anchor/offset/rotation,
/// joints clamped into their limits.
pub fn grasp_to_pose(
    g: &GraspConfig,
    hand: &HandModel,
) -> Result<(RigidTransform, JointVector), GraspError> {
    let rotation = gram_schmidt_rot6d(&g.rot)?;
    let palm_pose =
        RigidTransform::new(rotation, palm_translation(g.anchor, g.offset)).expect("orthonormal");
    let theta = clamp_joints(hand, &g.theta)?;
    Ok((palm_pose, theta))
}

/// Ground-truth grasp: a full palm pose plus joint angles, with the palm
/// reference point already pushed through the pose.
#[derive(Clone, Debug)]
pub struct GraspLabel {
    pub palm_pose: RigidTransform,
    pub theta: JointVector,
    pub palm_reference_world: Vec3f,
}

impl GraspLabel {
    pub fn new(palm_pose: RigidTransform, theta: JointVector, hand: &HandModel) -> GraspLabel {
        let palm_reference_world = palm_pose.apply(hand.palm_reference_point());
        GraspLabel { palm_pose, theta, palm_reference_world }
    }

    /// The label in the anchored parameter layout `[offset, a, b, theta]`,
    /// relative to the given anchor.
    pub fn to_params(&self, anchor: Vec3f) -> Vec<f64> {
        let mut out = Vec::with_capacity(9 + self.theta.len());
        out.extend_from_slice(&(self.palm_pose.translation - anchor).to_array());
        out.extend_from_slice(&self.palm_pose.rotation.col(0).to_array());
        out.extend_from_slice(&self.palm_pose.rotation.col(1).to_array());
        out.extend_from_slice(self.theta.angles());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hand::simple_two_finger;
    use crate::math::Mat3f;

    #[test]
    fn palm_translation_fixtures() {
        let t = palm_translation(Vec3f::new(0.1, 0.2, 0.3), Vec3f::new(0.0, 0.0, 0.05));
        assert!((t - Vec3f::new(0.1, 0.2, 0.35)).norm() < 1e-15);
        let anchor = Vec3f::new(0.4, -0.1, 0.0);
        assert_eq!(palm_translation(anchor, Vec3f::ZERO), anchor);
        assert_eq!(
            palm_translation(Vec3f::ZERO, Vec3f::new(-0.02, 0.01, 0.04)),
            Vec3f::new(-0.02, 0.01, 0.04)
        );
    }

    #[test]
    fn flatten_round_trip() {
        let hand = simple_two_finger();
        let g = GraspConfig {
            anchor: Vec3f::new(0.05, -0.02, 0.11),
            offset: Vec3f::new(0.001, 0.02, -0.005),
            rot: Rot6D::new(Vec3f::new(0.3, 0.4, 0.5), Vec3f::new(-0.2, 0.9, 0.1)),
            theta: JointVector::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap(),
        };
        assert_eq!(g.param_dim(), 13);
        let params = g.flatten();
        assert_eq!(params.len(), 13);
        let back = GraspConfig::unflatten(g.anchor, &params).unwrap();
        assert_eq!(back.offset, g.offset);
        assert_eq!(back.rot, g.rot);
        assert_eq!(back.theta, g.theta);
        let _ = grasp_to_pose(&back, &hand).unwrap();
    }

    #[test]
    fn param_dim_is_27_for_18_dof() {
        let g = GraspConfig {
            anchor: Vec3f::ZERO,
            offset: Vec3f::ZERO,
            rot: Rot6D::identity(),
            theta: JointVector::zeros(18),
        };
        assert_eq!(g.param_dim(), 27);
        assert_eq!(g.flatten().len(), 27);
    }

    #[test]
    fn unflatten_zero_vector_is_degenerate() {
        let g = GraspConfig::unflatten(Vec3f::ZERO, &vec![0.0; 13]).unwrap();
        assert!(g.rot.is_degenerate());
        assert_eq!(g.offset, Vec3f::ZERO);
        let hand = simple_two_finger();
        assert!(grasp_to_pose(&g, &hand).is_err());
    }

    #[test]
    fn grasp_to_pose_identity_and_clamping() {
        let hand = simple_two_finger();
        let anchor = Vec3f::new(0.2, 0.1, 0.05);
        let g = GraspConfig {
            anchor,
            offset: Vec3f::ZERO,
            rot: Rot6D::identity(),
            theta: JointVector::zeros(4),
        };
        let (pose, theta) = grasp_to_pose(&g, &hand).unwrap();
        assert!((pose.translation - anchor).norm() < 1e-15);
        assert!(pose.rotation.orthonormality_error() < 1e-12);
        assert_eq!(theta, JointVector::zeros(4));

        // an over-limit entry is clamped in the output
        let g2 = GraspConfig {
            theta: JointVector::new(vec![0.0, 5.0, 0.0, 0.0]).unwrap(),
            ..g
        };
        let (_, theta2) = grasp_to_pose(&g2, &hand).unwrap();
        assert_eq!(theta2.angles()[1], hand.joints()[1].limit_max);
    }

    #[test]
    fn label_params_reproduce_pose() {
        let hand = simple_two_finger();
        let rot = Mat3f::from_axis_angle(Vec3f::new(0.1, 0.9, 0.2).normalized(), 0.8);
        let pose = RigidTransform::new(rot, Vec3f::new(0.3, 0.2, 0.1)).unwrap();
        let label = GraspLabel::new(pose, JointVector::zeros(4), &hand);
        assert!((label.palm_reference_world - pose.translation).norm() < 1e-12);

        let anchor = Vec3f::new(0.29, 0.2, 0.1);
        let params = label.to_params(anchor);
        let g = GraspConfig::unflatten(anchor, &params).unwrap();
        let (pose2, _) = grasp_to_pose(&g, &hand).unwrap();
        assert!((pose2.translation - pose.translation).norm() < 1e-12);
        for c in 0..3 {
            assert!((pose2.rotation.cols[c] - pose.rotation.cols[c]).norm() < 1e-9);
        }
    }
}
