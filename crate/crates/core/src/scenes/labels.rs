//! Synthetic grasp-label generation: palm poses stood off the object surface
//! along outward normals, fingers set by a deterministic close-until-contact
//! sweep, discarding any label whose hand penetrates the scene.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{sample_surface, RigidTransform, TriMesh};
use crate::grasp::GraspLabel;
use crate::hand::{clamp_joints, forward_kinematics, place_hand_points, HandModel, JointVector};
use crate::math::{derive_seed, Mat3f, Vec3f};

use super::place::Scene;

/// Contact tolerance of the sweep (meters).
pub const CONTACT_TOL: f64 = 1e-4;

/// Rotation whose +z column points along `z_dir`, with roll about it.
fn facing_rotation(z_dir: Vec3f, roll: f64) -> Mat3f {
    let z = z_dir.normalized();
    let x0 = z.any_orthonormal();
    let x = x0 * roll.cos() + z.cross(x0) * roll.sin();
    let y = z.cross(x);
    Mat3f::from_cols(x, y, z)
}

/// Close the sweepable joints (close angle differs from open angle) one at a
/// time, from proximal to distal, each by binary search for the largest
/// closing fraction whose moving links do not penetrate `object`. The final
/// configuration leaves every swept joint strictly non-penetrating and within
/// [`CONTACT_TOL`] of touch when contact stopped the sweep.
pub fn close_until_contact(
    hand: &HandModel,
    palm_pose: &RigidTransform,
    start: &JointVector,
    object: &TriMesh,
) -> JointVector {
    let mut theta = clamp_joints(hand, start).expect("dimension checked by caller");
    let sweep_order: Vec<usize> = {
        // proximal before distal: topological order of the joints
        hand.joint_topo_order().to_vec()
    };
    for ji in sweep_order {
        let close = hand.close_angles().angles()[ji];
        let open = hand.open_angles().angles()[ji];
        if (close - open).abs() < 1e-12 {
            continue;
        }
        let from = theta.angles()[ji];
        let moving = hand.subtree_links(ji);
        let penetrates = |angle: f64| -> bool {
            let mut trial = theta.to_vec();
            trial[ji] = angle;
            let trial = JointVector::new(trial).unwrap();
            let poses = forward_kinematics(hand, palm_pose, &trial).unwrap();
            hand.collision_points().iter().any(|p| {
                if !moving.contains(&p.link) {
                    return false;
                }
                let w = poses[p.link].apply(p.pos);
                !object.outside_bounding_sphere(w) && object.signed_distance(w) > 0.0
            })
        };
        let new_angle = if penetrates(from) {
            from // already touching at the start: leave the joint alone
        } else if !penetrates(close) {
            close // full close without contact
        } else {
            // bisect the closing fraction: lo never penetrates, hi does
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            while (hi - lo) * (close - from).abs() > 1e-5 {
                let mid = 0.5 * (lo + hi);
                if penetrates(from + mid * (close - from)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            from + lo * (close - from)
        };
        let mut next = theta.to_vec();
        next[ji] = new_angle;
        theta = JointVector::new(next).unwrap();
    }
    theta
}

/// Generate labels for every object in the scene: `per_object` anchor points
/// are sampled area-weighted on each object surface; the palm faces the
/// surface from `standoff` along the outward normal with a seeded roll, the
/// fingers close until contact, and labels whose hand penetrates any scene
/// mesh are discarded.
pub fn synth_labels(
    scene: &Scene,
    hand: &HandModel,
    per_object: usize,
    standoff: f64,
    seed: u64,
) -> Vec<GraspLabel> {
    let mut labels = Vec::new();
    let meshes = scene.all_meshes();
    for (oi, object) in scene.object_meshes.iter().enumerate() {
        let anchors = sample_surface(object, per_object, derive_seed(seed, 31 + oi as u64));
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 97 + oi as u64));
        for k in 0..anchors.len() {
            let p = anchors.point(k);
            let n = anchors.normal(k);
            let roll = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
            let rotation = facing_rotation(-n, roll);
            let palm_pose = RigidTransform::new(rotation, p + n * standoff)
                .expect("facing rotation is orthonormal");
            let theta = close_until_contact(hand, &palm_pose, hand.open_angles(), object);

            // discard on any penetration of the scene
            let poses = forward_kinematics(hand, &palm_pose, &theta).unwrap();
            let (world, _) = place_hand_points(hand, &poses);
            let collides = world.iter().any(|w| {
                meshes.iter().any(|m| {
                    !m.outside_bounding_sphere(*w) && m.signed_distance(*w) > 0.0
                })
            });
            if collides {
                continue;
            }
            labels.push(GraspLabel::new(palm_pose, theta, hand));
        }
    }
    labels
}
