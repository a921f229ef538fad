//! Configurable multi-fingered hand: kinematic tree, forward kinematics with
//! joint clamping, and placement of the collision / inner point sets.

mod bundled;
mod file;
mod fk;
mod model;

pub use bundled::{bundled_hand, shadow_like, simple_two_finger, BUNDLED_HANDS};
pub use file::{load_hand, save_hand, MeshSpec};
pub use fk::{clamp_joints, fk_generic, forward_kinematics, place_hand_points};
pub use model::{HandModel, HandModelParts, JointSpec, JointVector, LinkPoint};

use thiserror::Error;

/// Number of collision points a loadable hand must carry.
pub const COLLISION_POINT_COUNT: usize = 2000;
/// Number of inner-hand points a loadable hand must carry.
pub const INNER_POINT_COUNT: usize = 45;

#[derive(Debug, Error)]
pub enum HandError {
    #[error("expected {expected} joint angles, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("joint angle {index} is not finite")]
    NonFiniteAngle { index: usize },
    #[error("joint graph is not a tree: {detail}")]
    NotATree { detail: String },
    #[error("joint {joint} has limit_min {min} > limit_max {max}")]
    BadJointLimits { joint: usize, min: f64, max: f64 },
    #[error("joint {joint} has a zero-length axis")]
    BadAxis { joint: usize },
    #[error("joint {joint} references link {link} out of range")]
    BadLinkIndex { joint: usize, link: usize },
    #[error("{kind} point count is {actual}, expected {expected}")]
    WrongPointCount { kind: &'static str, expected: usize, actual: usize },
    #[error("point {index} references link {link} out of range")]
    BadPointLink { index: usize, link: usize },
    #[error("hand has {dof} joints; at most {max} are supported")]
    TooManyJoints { dof: usize, max: usize },
    #[error("hand file parse error: {detail}")]
    Parse { detail: String },
    #[error("unknown bundled hand '{0}'")]
    UnknownBundled(String),
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
