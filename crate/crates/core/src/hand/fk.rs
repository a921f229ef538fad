//! Forward kinematics over the joint tree, generic in the scalar so the same
//! kernel serves plain evaluation and derivative propagation.

use crate::geom::RigidTransform;
use crate::math::{Iso3, Mat3, Real, Vec3, Vec3f};

use super::{HandError, HandModel, JointVector};

/// Clamp each angle into its joint's `[limit_min, limit_max]`.
pub fn clamp_joints(hand: &HandModel, theta: &JointVector) -> Result<JointVector, HandError> {
    if theta.len() != hand.dof() {
        return Err(HandError::DimensionMismatch { expected: hand.dof(), actual: theta.len() });
    }
    let clamped = theta
        .angles()
        .iter()
        .zip(hand.joints())
        .map(|(&a, j)| a.clamp(j.limit_min, j.limit_max))
        .collect();
    JointVector::new(clamped)
}

/// World pose of every link. The root link takes `palm_pose`; each child is
/// `parent_pose ∘ joint.origin ∘ Rotation(axis, theta)`.
pub fn fk_generic<S: Real>(hand: &HandModel, palm_pose: &Iso3<S>, angles: &[S]) -> Vec<Iso3<S>> {
    debug_assert_eq!(angles.len(), hand.dof());
    let mut poses: Vec<Iso3<S>> = vec![Iso3::identity(); hand.links().len()];
    poses[hand.palm_link()] = *palm_pose;
    for &ji in hand.joint_topo_order() {
        let joint = &hand.joints()[ji];
        let rot = Mat3::from_axis_angle(Vec3::lift(joint.axis), angles[ji]);
        let local = Iso3::new(rot, Vec3::zero());
        let origin = Iso3::lift(&Iso3::new(joint.origin.rotation, joint.origin.translation));
        poses[joint.child_link] = poses[joint.parent_link].compose(&origin).compose(&local);
    }
    poses
}

/// Plain-`f64` forward kinematics. Angles are expected already clamped.
pub fn forward_kinematics(
    hand: &HandModel,
    palm_pose: &RigidTransform,
    theta: &JointVector,
) -> Result<Vec<RigidTransform>, HandError> {
    if theta.len() != hand.dof() {
        return Err(HandError::DimensionMismatch { expected: hand.dof(), actual: theta.len() });
    }
    let palm = Iso3::new(palm_pose.rotation, palm_pose.translation);
    let poses = fk_generic(hand, &palm, theta.angles());
    Ok(poses
        .into_iter()
        .map(|p| RigidTransform::new_unchecked(p.rotation, p.translation))
        .collect())
}

/// Transform the stored collision and inner points by their links' poses.
pub fn place_hand_points(
    hand: &HandModel,
    link_poses: &[RigidTransform],
) -> (Vec<Vec3f>, Vec<Vec3f>) {
    let collision = hand
        .collision_points()
        .iter()
        .map(|p| link_poses[p.link].apply(p.pos))
        .collect();
    let inner = hand
        .inner_points()
        .iter()
        .map(|p| link_poses[p.link].apply(p.pos))
        .collect();
    (collision, inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::box_mesh;
    use crate::hand::file::MeshSpec;
    use crate::hand::model::{HandModelParts, JointSpec, LinkPoint};

    fn chain_hand(origins: Vec<RigidTransform>, axes: Vec<Vec3f>) -> HandModel {
        let n = origins.len();
        let mut links = vec![("palm".to_string(), box_mesh(Vec3f::splat(0.01), Vec3f::ZERO))];
        let mut sources = vec![MeshSpec::Box { half_extents: [0.01; 3], center: [0.0; 3] }];
        let mut joints = Vec::new();
        for (i, (origin, axis)) in origins.into_iter().zip(axes).enumerate() {
            links.push((format!("l{i}"), box_mesh(Vec3f::splat(0.01), Vec3f::ZERO)));
            sources.push(MeshSpec::Box { half_extents: [0.01; 3], center: [0.0; 3] });
            joints.push(JointSpec {
                name: format!("j{i}"),
                parent_link: i,
                child_link: i + 1,
                origin,
                axis,
                limit_min: -3.2,
                limit_max: 3.2,
            });
        }
        HandModel::new(HandModelParts {
            name: "chain".into(),
            links,
            link_sources: sources,
            palm_link: 0,
            joints,
            collision_points: vec![LinkPoint { link: n, pos: Vec3f::new(1.0, 0.0, 0.0) }],
            inner_points: vec![],
            palm_reference_point: Vec3f::ZERO,
            init_angles: JointVector::zeros(n),
            open_angles: JointVector::zeros(n),
            close_angles: JointVector::zeros(n),
            sampling_seed: 0,
        })
        .unwrap()
    }

    #[test]
    fn zero_angles_compose_origins() {
        let origins = vec![
            RigidTransform::from_translation(Vec3f::new(0.1, 0.0, 0.0)),
            RigidTransform::from_translation(Vec3f::new(0.0, 0.2, 0.0)),
        ];
        let hand = chain_hand(origins.clone(), vec![Vec3f::Z, Vec3f::X]);
        let poses =
            forward_kinematics(&hand, &RigidTransform::identity(), &JointVector::zeros(2)).unwrap();
        let expect1 = origins[0];
        let expect2 = origins[0].compose(&origins[1]);
        assert!((poses[1].translation - expect1.translation).norm() < 1e-15);
        assert!((poses[2].translation - expect2.translation).norm() < 1e-15);
    }

    #[test]
    fn quarter_turn_about_z() {
        let hand = chain_hand(vec![RigidTransform::identity()], vec![Vec3f::Z]);
        let theta = JointVector::new(vec![std::f64::consts::FRAC_PI_2]).unwrap();
        let poses = forward_kinematics(&hand, &RigidTransform::identity(), &theta).unwrap();
        let p = poses[1].apply(Vec3f::new(1.0, 0.0, 0.0));
        assert!((p - Vec3f::new(0.0, 1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn clamping_fixtures() {
        let hand = chain_hand(
            vec![RigidTransform::identity(), RigidTransform::identity()],
            vec![Vec3f::Z, Vec3f::X],
        );
        // inside limits: unchanged
        let inside = JointVector::new(vec![0.5, -1.0]).unwrap();
        assert_eq!(clamp_joints(&hand, &inside).unwrap(), inside);
        // above max and below min
        let outside = JointVector::new(vec![3.5, -3.5]).unwrap();
        let clamped = clamp_joints(&hand, &outside).unwrap();
        assert_eq!(clamped.angles(), &[3.2, -3.2]);
        // idempotent
        assert_eq!(clamp_joints(&hand, &clamped).unwrap(), clamped);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let hand = chain_hand(vec![RigidTransform::identity()], vec![Vec3f::Z]);
        assert!(matches!(
            clamp_joints(&hand, &JointVector::zeros(5)),
            Err(HandError::DimensionMismatch { .. })
        ));
        assert!(forward_kinematics(&hand, &RigidTransform::identity(), &JointVector::zeros(3))
            .is_err());
    }

    #[test]
    fn place_points_pure_translation() {
        let hand = chain_hand(vec![RigidTransform::identity()], vec![Vec3f::Z]);
        let t = Vec3f::new(0.3, -0.2, 0.9);
        let poses =
            forward_kinematics(&hand, &RigidTransform::from_translation(t), &JointVector::zeros(1))
                .unwrap();
        let (collision, _) = place_hand_points(&hand, &poses);
        assert!((collision[0] - (Vec3f::new(1.0, 0.0, 0.0) + t)).norm() < 1e-15);
    }
}
