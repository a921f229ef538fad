//! Guidance loss: pulls the inner-hand points toward the nearest scene
//! surface, treating all scene meshes as one.

use crate::geom::TriMesh;
use crate::grasp::GraspConfig;
use crate::hand::HandModel;
use crate::math::{Dual, Vec3, Vec3f};

use super::state::DiffGraspState;
use super::{DiffValue, LossError};

/// Sum over the inner points of the squared distance to the closest point on
/// any scene mesh. The closest point is found on primal values and held
/// fixed for the derivative (exact for the squared distance).
pub fn guidance_loss(
    g: &GraspConfig,
    hand: &HandModel,
    scene: &[TriMesh],
) -> Result<DiffValue, LossError> {
    let state = DiffGraspState::build(g, hand)?;
    guidance_loss_with_state(&state, hand, scene)
}

pub(crate) fn guidance_loss_with_state(
    state: &DiffGraspState,
    hand: &HandModel,
    scene: &[TriMesh],
) -> Result<DiffValue, LossError> {
    if scene.is_empty() {
        return Ok(DiffValue::constant(0.0, state.dim));
    }
    let mut total = Dual::constant(0.0);
    for (i, p) in state.inner_val.iter().enumerate() {
        let q = closest_over_meshes(scene, *p);
        let p_dual = state.inner_point_dual(hand, i);
        let diff = p_dual - Vec3::lift(q);
        total += diff.norm_squared();
    }
    Ok(DiffValue::from_dual(total, state.dim))
}

/// Closest surface point over all meshes, with a bounding-sphere lower bound
/// to skip meshes that cannot win. Ties go to the lower mesh index.
pub(crate) fn closest_over_meshes(scene: &[TriMesh], p: Vec3f) -> Vec3f {
    let mut best_d2 = f64::INFINITY;
    let mut best_q = Vec3f::ZERO;
    for mesh in scene {
        let lower = mesh.min_possible_distance(p);
        if lower * lower >= best_d2 {
            continue;
        }
        let hit = mesh.closest_hit(p);
        if hit.dist_squared < best_d2 {
            best_d2 = hit.dist_squared;
            best_q = hit.point;
        }
    }
    best_q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{box_mesh, Rot6D};
    use crate::hand::{HandModelParts, JointVector, LinkPoint, MeshSpec};

    fn inner_hand(points: Vec<Vec3f>) -> HandModel {
        HandModel::new(HandModelParts {
            name: "inner".into(),
            links: vec![(
                "palm".to_string(),
                box_mesh(Vec3f::splat(1e-4), Vec3f::new(0.0, 0.0, 10.0)),
            )],
            link_sources: vec![MeshSpec::Box { half_extents: [1e-4; 3], center: [0.0, 0.0, 10.0] }],
            palm_link: 0,
            joints: vec![],
            collision_points: vec![],
            inner_points: points.into_iter().map(|p| LinkPoint { link: 0, pos: p }).collect(),
            palm_reference_point: Vec3f::ZERO,
            init_angles: JointVector::zeros(0),
            open_angles: JointVector::zeros(0),
            close_angles: JointVector::zeros(0),
            sampling_seed: 0,
        })
        .unwrap()
    }

    fn identity_grasp() -> GraspConfig {
        GraspConfig {
            anchor: Vec3f::ZERO,
            offset: Vec3f::ZERO,
            rot: Rot6D::identity(),
            theta: JointVector::zeros(0),
        }
    }

    #[test]
    fn points_on_surface_give_zero() {
        // 45 points exactly on cube faces
        let pts: Vec<Vec3f> = (0..45)
            .map(|i| {
                let t = (i as f64 / 44.0 - 0.5) * 0.8;
                match i % 3 {
                    0 => Vec3f::new(0.5, t, -t),
                    1 => Vec3f::new(t, 0.5, t / 2.0),
                    _ => Vec3f::new(-t, t, 0.5),
                }
            })
            .collect();
        let hand = inner_hand(pts);
        let cube = box_mesh(Vec3f::new(0.5, 0.5, 0.5), Vec3f::ZERO);
        let v = guidance_loss(&identity_grasp(), &hand, &[cube]).unwrap();
        // closest-point arithmetic may leave squared-distance dust
        assert!(v.value < 1e-25, "value {}", v.value);
    }

    #[test]
    fn single_term_arithmetic() {
        // 44 on the surface, one at distance 0.1: loss = 0.01
        let mut pts: Vec<Vec3f> =
            (0..44).map(|i| Vec3f::new(0.5, (i as f64 / 43.0 - 0.5) * 0.8, 0.0)).collect();
        pts.push(Vec3f::new(0.6, 0.0, 0.0));
        let hand = inner_hand(pts);
        let cube = box_mesh(Vec3f::new(0.5, 0.5, 0.5), Vec3f::ZERO);
        let v = guidance_loss(&identity_grasp(), &hand, &[cube]).unwrap();
        assert!((v.value - 0.01).abs() < 1e-15, "value {}", v.value);
        // gradient along +x: 2 * 0.1 = 0.2
        assert!((v.gradient[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn nearest_mesh_wins() {
        let near = box_mesh(Vec3f::splat(0.1), Vec3f::new(0.3, 0.0, 0.0));
        let far = box_mesh(Vec3f::splat(0.1), Vec3f::new(5.0, 0.0, 0.0));
        let hand = inner_hand(vec![Vec3f::ZERO]);
        let v = guidance_loss(&identity_grasp(), &hand, &[far.clone(), near.clone()]).unwrap();
        // closest point on `near` is at x = 0.2: squared distance 0.04
        assert!((v.value - 0.04).abs() < 1e-15);
    }
}
