//! Bundled hand models built from box primitives.
//!
//! Conventions shared by both hands: the palm frame origin sits at the center
//! of the grasping face, which lies in the z = 0 plane with the palm body
//! below it; the hand "faces" +z, and finger flexion curls the links toward
//! +z. The palm reference point is the palm frame origin.
//!
//! `simple-2f` is a small two-finger hand (2 joints per finger, dof 4) for
//! fast tests; `shadow-like` is an 18-dof five-finger hand with link
//! dimensions loosely following a dexterous anthropomorphic hand.

use crate::geom::{box_mesh, RigidTransform};
use crate::math::Vec3f;

use super::file::{generate_collision_points, generate_inner_points, MeshSpec};
use super::model::{HandModelParts, JointSpec, JointVector};
use super::{HandError, HandModel, COLLISION_POINT_COUNT, INNER_POINT_COUNT};

/// Names accepted by [`bundled_hand`].
pub const BUNDLED_HANDS: [&str; 2] = ["simple-2f", "shadow-like"];

/// Look up a bundled hand by name.
pub fn bundled_hand(name: &str) -> Result<HandModel, HandError> {
    match name {
        "simple-2f" => Ok(simple_two_finger()),
        "shadow-like" => Ok(shadow_like()),
        other => Err(HandError::UnknownBundled(other.to_string())),
    }
}

struct Builder {
    links: Vec<(String, crate::geom::TriMesh)>,
    sources: Vec<MeshSpec>,
    joints: Vec<JointSpec>,
    init: Vec<f64>,
    close: Vec<f64>,
}

impl Builder {
    fn new() -> Builder {
        Builder {
            links: Vec::new(),
            sources: Vec::new(),
            joints: Vec::new(),
            init: Vec::new(),
            close: Vec::new(),
        }
    }

    fn add_box_link(&mut self, name: &str, half: Vec3f, center: Vec3f) -> usize {
        self.links.push((name.to_string(), box_mesh(half, center)));
        self.sources.push(MeshSpec::Box { half_extents: half.to_array(), center: center.to_array() });
        self.links.len() - 1
    }

    #[allow(clippy::too_many_arguments)]
    fn add_joint(
        &mut self,
        name: &str,
        parent: usize,
        child: usize,
        translation: Vec3f,
        axis: Vec3f,
        limits: (f64, f64),
        init: f64,
        close: f64,
    ) {
        self.joints.push(JointSpec {
            name: name.to_string(),
            parent_link: parent,
            child_link: child,
            origin: RigidTransform::from_translation(translation),
            axis,
            limit_min: limits.0,
            limit_max: limits.1,
        });
        self.init.push(init);
        self.close.push(close);
    }

    fn finish(self, name: &str, seed: u64) -> HandModel {
        let collision = generate_collision_points(&self.links, COLLISION_POINT_COUNT, seed);
        let inner = generate_inner_points(&self.links, INNER_POINT_COUNT, seed);
        let dof = self.joints.len();
        HandModel::new(HandModelParts {
            name: name.to_string(),
            links: self.links,
            link_sources: self.sources,
            palm_link: 0,
            joints: self.joints,
            collision_points: collision,
            inner_points: inner,
            palm_reference_point: Vec3f::ZERO,
            init_angles: JointVector::new(self.init).unwrap(),
            open_angles: JointVector::zeros(dof),
            close_angles: JointVector::new(self.close).unwrap(),
            sampling_seed: seed,
        })
        .expect("bundled hand is a valid tree")
    }
}

/// Two opposed fingers, two flexion joints each (dof = 4).
pub fn simple_two_finger() -> HandModel {
    let mut b = Builder::new();
    let palm = b.add_box_link(
        "palm",
        Vec3f::new(0.025, 0.02, 0.006),
        Vec3f::new(0.0, 0.0, -0.006),
    );

    // finger a extends +y from the palm edge, curling toward +z
    let a_prox = b.add_box_link(
        "a_prox",
        Vec3f::new(0.008, 0.0175, 0.006),
        Vec3f::new(0.0, 0.0175, 0.0),
    );
    b.add_joint(
        "a_prox_j",
        palm,
        a_prox,
        Vec3f::new(0.0, 0.02, -0.006),
        Vec3f::X,
        (-0.3, 1.8),
        0.35,
        1.8,
    );
    let a_dist = b.add_box_link(
        "a_dist",
        Vec3f::new(0.007, 0.0125, 0.005),
        Vec3f::new(0.0, 0.0125, 0.0),
    );
    b.add_joint("a_dist_j", a_prox, a_dist, Vec3f::new(0.0, 0.035, 0.0), Vec3f::X, (0.0, 1.8), 0.3, 1.8);

    // finger b extends -y; axis -x so positive angles also curl toward +z
    let b_prox = b.add_box_link(
        "b_prox",
        Vec3f::new(0.008, 0.0175, 0.006),
        Vec3f::new(0.0, -0.0175, 0.0),
    );
    b.add_joint(
        "b_prox_j",
        palm,
        b_prox,
        Vec3f::new(0.0, -0.02, -0.006),
        -Vec3f::X,
        (-0.3, 1.8),
        0.35,
        1.8,
    );
    let b_dist = b.add_box_link(
        "b_dist",
        Vec3f::new(0.007, 0.0125, 0.005),
        Vec3f::new(0.0, -0.0125, 0.0),
    );
    b.add_joint(
        "b_dist_j",
        b_prox,
        b_dist,
        Vec3f::new(0.0, -0.035, 0.0),
        -Vec3f::X,
        (0.0, 1.8),
        0.3,
        1.8,
    );

    b.finish("simple-2f", 22744)
}

/// Finger segment dimensions for the 18-dof hand.
struct FingerDims {
    knuckle: f64,
    proximal: f64,
    distal: f64,
}

/// Five fingers, 18 independent joints: three 3-dof fingers, a 4-dof little
/// finger with an extra metacarpal fold, and a 5-dof thumb.
pub fn shadow_like() -> HandModel {
    let mut b = Builder::new();
    let palm = b.add_box_link(
        "palm",
        Vec3f::new(0.042, 0.048, 0.011),
        Vec3f::new(0.0, 0.0, -0.011),
    );

    let dims = FingerDims { knuckle: 0.012, proximal: 0.045, distal: 0.028 };
    let finger_x = [("ff", 0.033), ("mf", 0.011), ("rf", -0.011)];
    for (name, x) in finger_x {
        add_three_dof_finger(&mut b, palm, name, Vec3f::new(x, 0.048, -0.011), &dims);
    }

    // little finger: metacarpal fold first, then the standard three joints
    let lf_meta = b.add_box_link(
        "lf_meta",
        Vec3f::new(0.009, 0.0075, 0.0075),
        Vec3f::new(0.0, 0.0075, 0.0),
    );
    b.add_joint(
        "lf_meta_j",
        palm,
        lf_meta,
        Vec3f::new(-0.033, 0.048, -0.011),
        Vec3f::X,
        (0.0, 0.7),
        0.1,
        0.6,
    );
    add_three_dof_finger(&mut b, lf_meta, "lf", Vec3f::new(0.0, 0.015, 0.0), &dims);

    // thumb: base rotation about the palm normal, an abduction tilt, and
    // three flexion joints; segments extend along +x and curl toward +z.
    let th_base = b.add_box_link(
        "th_base",
        Vec3f::new(0.0075, 0.009, 0.0075),
        Vec3f::new(0.0075, 0.0, 0.0),
    );
    b.add_joint(
        "th_rot_j",
        palm,
        th_base,
        Vec3f::new(0.042, -0.02, -0.011),
        Vec3f::Z,
        (-1.0, 1.0),
        0.3,
        0.0,
    );
    let th_hub = b.add_box_link(
        "th_hub",
        Vec3f::new(0.005, 0.007, 0.007),
        Vec3f::new(0.005, 0.0, 0.0),
    );
    b.add_joint(
        "th_abd_j",
        th_base,
        th_hub,
        Vec3f::new(0.015, 0.0, 0.0),
        Vec3f::X,
        (-0.7, 0.7),
        0.1,
        0.0,
    );
    let th_prox = b.add_box_link(
        "th_prox",
        Vec3f::new(0.0165, 0.008, 0.008),
        Vec3f::new(0.0165, 0.0, 0.0),
    );
    b.add_joint(
        "th_flex1_j",
        th_hub,
        th_prox,
        Vec3f::new(0.01, 0.0, 0.0),
        -Vec3f::Y,
        (-0.26, 1.0),
        0.25,
        1.0,
    );
    let th_med = b.add_box_link(
        "th_med",
        Vec3f::new(0.0125, 0.0075, 0.0075),
        Vec3f::new(0.0125, 0.0, 0.0),
    );
    b.add_joint(
        "th_flex2_j",
        th_prox,
        th_med,
        Vec3f::new(0.033, 0.0, 0.0),
        -Vec3f::Y,
        (0.0, 1.0),
        0.2,
        1.0,
    );
    let th_dist = b.add_box_link(
        "th_dist",
        Vec3f::new(0.011, 0.007, 0.007),
        Vec3f::new(0.011, 0.0, 0.0),
    );
    b.add_joint(
        "th_flex3_j",
        th_med,
        th_dist,
        Vec3f::new(0.025, 0.0, 0.0),
        -Vec3f::Y,
        (0.0, 1.0),
        0.2,
        1.0,
    );

    b.finish("shadow-like", 0x51ad0e)
}

/// Abduction about z at the mount point, then two flexion joints about x.
fn add_three_dof_finger(
    b: &mut Builder,
    parent: usize,
    name: &str,
    mount: Vec3f,
    dims: &FingerDims,
) {
    let knuckle = b.add_box_link(
        &format!("{name}_knuckle"),
        Vec3f::new(0.008, dims.knuckle / 2.0, 0.007),
        Vec3f::new(0.0, dims.knuckle / 2.0, 0.0),
    );
    b.add_joint(
        &format!("{name}_abd_j"),
        parent,
        knuckle,
        mount,
        Vec3f::Z,
        (-0.35, 0.35),
        0.0,
        0.0,
    );
    let prox = b.add_box_link(
        &format!("{name}_prox"),
        Vec3f::new(0.0085, dims.proximal / 2.0, 0.007),
        Vec3f::new(0.0, dims.proximal / 2.0, 0.0),
    );
    b.add_joint(
        &format!("{name}_prox_j"),
        knuckle,
        prox,
        Vec3f::new(0.0, dims.knuckle, 0.0),
        Vec3f::X,
        (-0.26, 1.57),
        0.4,
        1.57,
    );
    let dist = b.add_box_link(
        &format!("{name}_dist"),
        Vec3f::new(0.008, dims.distal / 2.0, 0.0065),
        Vec3f::new(0.0, dims.distal / 2.0, 0.0),
    );
    b.add_joint(
        &format!("{name}_dist_j"),
        prox,
        dist,
        Vec3f::new(0.0, dims.proximal, 0.0),
        Vec3f::X,
        (0.0, 1.57),
        0.3,
        1.57,
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hand::{clamp_joints, forward_kinematics, place_hand_points};

    #[test]
    fn simple_two_finger_shape() {
        let hand = simple_two_finger();
        assert_eq!(hand.dof(), 4);
        assert_eq!(hand.collision_points().len(), COLLISION_POINT_COUNT);
        assert_eq!(hand.inner_points().len(), INNER_POINT_COUNT);
        assert_eq!(hand.palm_reference_point(), Vec3f::ZERO);
    }

    #[test]
    fn shadow_like_shape() {
        let hand = shadow_like();
        assert_eq!(hand.dof(), 18);
        assert_eq!(hand.links().len(), 19);
        assert_eq!(hand.collision_points().len(), COLLISION_POINT_COUNT);
        assert_eq!(hand.inner_points().len(), INNER_POINT_COUNT);
        // init angles respect limits
        let clamped = clamp_joints(&hand, hand.init_angles()).unwrap();
        assert_eq!(&clamped, hand.init_angles());
    }

    #[test]
    fn open_pose_has_no_nonadjacent_self_penetration() {
        for hand in [simple_two_finger(), shadow_like()] {
            let poses = forward_kinematics(
                &hand,
                &RigidTransform::identity(),
                hand.open_angles(),
            )
            .unwrap();
            let (collision_world, _) = place_hand_points(&hand, &poses);
            for (p, world) in hand.collision_points().iter().zip(&collision_world) {
                for (li, (lname, mesh)) in hand.links().iter().enumerate() {
                    if hand.links_adjacent(p.link, li) {
                        continue;
                    }
                    let local = poses[li].apply_inverse(*world);
                    if mesh.outside_bounding_sphere(local) {
                        continue;
                    }
                    let d = mesh.signed_distance(local);
                    assert!(
                        d <= 1e-9,
                        "hand {}: point on link {} penetrates link {lname} by {d}",
                        hand.name(),
                        p.link
                    );
                }
            }
        }
    }

    #[test]
    fn inner_points_face_the_grasp_side() {
        // inner points live on +z-facing surfaces in their link frames
        for hand in [simple_two_finger(), shadow_like()] {
            for p in hand.inner_points() {
                let mesh = hand.link_mesh(p.link);
                let n = mesh.surface_normal_near(p.pos);
                assert!(n.z > 0.5, "inner point not on the +z side: {:?}", p);
            }
        }
    }

    #[test]
    fn fingertips_reach_past_the_palm_face_when_curled() {
        // fully closed fingers must cross the z = 0 grasp plane
        let hand = simple_two_finger();
        let closed = clamp_joints(
            &hand,
            &JointVector::new(vec![1.8, 1.8, 1.8, 1.8]).unwrap(),
        )
        .unwrap();
        let poses = forward_kinematics(&hand, &RigidTransform::identity(), &closed).unwrap();
        let tip_a = poses[2].apply(Vec3f::new(0.0, 0.025, 0.0));
        let tip_b = poses[4].apply(Vec3f::new(0.0, -0.025, 0.0));
        assert!(tip_a.z > 0.01 && tip_b.z > 0.01);
    }
}
