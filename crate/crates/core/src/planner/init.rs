//! Candidate initialization: anchors by farthest-point sampling over the
//! cloud, palm stood off along the outward normal and facing the surface
//! with a seeded roll, joints at the hand's init angles.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{farthest_point_sampling, rotation_facing_z, PointCloud, Rot6D};
use crate::grasp::GraspConfig;
use crate::hand::HandModel;
use crate::math::derive_seed;

use super::{Candidate, PlannerError, PlannerParams};

pub fn init_candidates(
    cloud: &PointCloud,
    hand: &HandModel,
    params: &PlannerParams,
    seed: u64,
) -> Result<Vec<Candidate>, PlannerError> {
    params.validate()?;
    if cloud.len() < params.m {
        return Err(PlannerError::TooFewPoints { m: params.m, len: cloud.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xa2c4));
    let start = rng.gen_range(0..cloud.len());
    let anchors = farthest_point_sampling(cloud, params.m, start)?;

    let candidates = anchors
        .into_iter()
        .map(|idx| {
            let anchor = cloud.point(idx);
            let normal = cloud.normal(idx);
            let roll = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            // palm +z axis faces the surface (anti-parallel to the normal)
            let rotation = rotation_facing_z(-normal, roll);
            Candidate {
                grasp: GraspConfig {
                    anchor,
                    offset: normal * params.standoff,
                    rot: Rot6D::from_matrix(&rotation),
                    theta: hand.init_angles().clone(),
                },
                anchor_index: idx,
                score: 1.0,
                trace: Vec::new(),
                rotation_repairs: 0,
            }
        })
        .collect();
    Ok(candidates)
}
