//! Shared derivative-carrying evaluation state for one grasp configuration.

use crate::geom::gram_schmidt;
use crate::grasp::GraspConfig;
use crate::hand::{fk_generic, HandModel};
use crate::math::{Dual, Iso3, Iso3d, Iso3f, Real, Vec3, Vec3d, Vec3f};

use super::LossError;

/// Link poses and point placements with gradients seeded on the grasp
/// parameter lanes: offset on 0..3, rotation parameters on 3..9, and joint
/// angles on 9.. (clamped into their limits, boundary ties keeping the
/// gradient alive).
pub struct DiffGraspState {
    pub dim: usize,
    pub palm: Iso3d,
    pub link_poses: Vec<Iso3d>,
    pub link_poses_val: Vec<Iso3f>,
    /// Primal world positions of the hand collision points.
    pub collision_val: Vec<Vec3f>,
    /// Primal world positions of the inner-hand points.
    pub inner_val: Vec<Vec3f>,
}

impl DiffGraspState {
    pub fn build(g: &GraspConfig, hand: &HandModel) -> Result<DiffGraspState, LossError> {
        if g.theta.len() != hand.dof() {
            return Err(LossError::DimensionMismatch {
                expected: hand.dof(),
                actual: g.theta.len(),
            });
        }
        let dim = g.param_dim();

        let offset = Vec3::new(
            Dual::variable(g.offset.x, 0),
            Dual::variable(g.offset.y, 1),
            Dual::variable(g.offset.z, 2),
        );
        let a = Vec3::new(
            Dual::variable(g.rot.a.x, 3),
            Dual::variable(g.rot.a.y, 4),
            Dual::variable(g.rot.a.z, 5),
        );
        let b = Vec3::new(
            Dual::variable(g.rot.b.x, 6),
            Dual::variable(g.rot.b.y, 7),
            Dual::variable(g.rot.b.z, 8),
        );
        let rotation = gram_schmidt(a, b).map_err(LossError::Geom)?;
        let translation = Vec3::lift(g.anchor) + offset;
        let palm = Iso3::new(rotation, translation);

        let angles: Vec<Dual> = g
            .theta
            .angles()
            .iter()
            .zip(hand.joints())
            .enumerate()
            .map(|(i, (&t, j))| Dual::variable(t, 9 + i).clamp_to(j.limit_min, j.limit_max))
            .collect();

        let link_poses = fk_generic(hand, &palm, &angles);
        let link_poses_val: Vec<Iso3f> = link_poses.iter().map(|p| p.value()).collect();
        let collision_val = hand
            .collision_points()
            .iter()
            .map(|p| link_poses_val[p.link].apply(p.pos))
            .collect();
        let inner_val = hand
            .inner_points()
            .iter()
            .map(|p| link_poses_val[p.link].apply(p.pos))
            .collect();

        Ok(DiffGraspState { dim, palm, link_poses, link_poses_val, collision_val, inner_val })
    }

    /// Derivative-carrying world position of collision point `i`.
    pub fn collision_point_dual(&self, hand: &HandModel, i: usize) -> Vec3d {
        let p = hand.collision_points()[i];
        self.link_poses[p.link].apply(Vec3::lift(p.pos))
    }

    /// Derivative-carrying world position of inner point `i`.
    pub fn inner_point_dual(&self, hand: &HandModel, i: usize) -> Vec3d {
        let p = hand.inner_points()[i];
        self.link_poses[p.link].apply(Vec3::lift(p.pos))
    }
}
