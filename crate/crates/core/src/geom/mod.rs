//! Geometric primitives: triangle meshes, point clouds, rigid transforms,
//! the continuous 6D rotation construction, signed distances, surface
//! sampling, and farthest-point sampling.
//!
//! Everything here is immutable after construction and all queries are pure,
//! so values can be shared freely across threads.

mod bvh;
mod mesh;
mod obj;
mod primitives;
mod rot6d;
mod sample;
mod transform;

pub use bvh::{ClosestHit, Feature, RayHit};
pub use mesh::TriMesh;
pub use obj::{load_obj, parse_obj, write_obj};
pub use primitives::{box_mesh, capped_cone_mesh, cylinder_mesh, icosphere_mesh, l_block_mesh};
pub use rot6d::{gram_schmidt, gram_schmidt_rot6d, Rot6D, ROT6D_EPS};
pub use sample::{farthest_point_sampling, fps_points, sample_on_faces, sample_surface, PointCloud};
pub use transform::{quat_to_mat, mat_to_quat, RigidTransform};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("degenerate 6D rotation input (near-zero or near-parallel vectors)")]
    DegenerateRotation,
    #[error("rotation matrix is not orthonormal (error {ortho_err:.3e}) or has det {det:.6} != +1")]
    InvalidRotation { ortho_err: f64, det: f64 },
    #[error("mesh has no faces")]
    EmptyMesh,
    #[error("face {face} references vertex {index} but mesh has {vertex_count} vertices")]
    FaceIndexOutOfRange { face: usize, index: usize, vertex_count: usize },
    #[error("face {face} is degenerate (zero area)")]
    DegenerateFace { face: usize },
    #[error("mesh is not watertight: {detail}")]
    NotWatertight { detail: String },
    #[error("point cloud has {points} points but {normals} normals")]
    CloudLengthMismatch { points: usize, normals: usize },
    #[error("normal {index} is not unit length (|n| = {norm})")]
    NonUnitNormal { index: usize, norm: f64 },
    #[error("k = {k} out of range for cloud of {len} points")]
    InvalidK { k: usize, len: usize },
    #[error("start index {start} out of range for cloud of {len} points")]
    InvalidStart { start: usize, len: usize },
    #[error("OBJ parse error at line {line}: {message}")]
    ObjParse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
