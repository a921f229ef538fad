//! Procedural table-top scenes: quasi-stable object placement, virtual
//! four-camera depth rendering, point-cloud fusion to a fixed size, synthetic
//! grasp-label generation, and dataset serialization.

mod camera;
mod catalog;
mod cloud;
mod dataset;
mod labels;
mod place;
mod stable;

pub use camera::{default_camera_rig, render_depth, CameraSpec, DepthImage, TABLE_HIT};
pub use catalog::{catalog_mesh, object_catalog, CATALOG_IDS};
pub use cloud::{fuse_point_cloud, CLOUD_SIZE};
pub use dataset::{
    generate_dataset, generate_record, load_cloud_bin, load_scene, read_scene_config,
    relabel_scene, scene_dirs, sha256_hex, write_cloud_bin, DatasetRecord, SceneGenConfig,
    SceneView, CLOUD_FILE, LABELSET_FILE, LABELS_FILE, SCENE_FILE,
};
pub use labels::{close_until_contact, synth_labels, CONTACT_TOL};
pub use place::{place_objects, ObjectInstance, Scene};
pub use stable::{stable_pose, standard_stable_pose};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("unknown catalog mesh id '{0}'")]
    UnknownMeshId(String),
    #[error("no object pixels visible in any camera")]
    EmptyView,
    #[error("mesh has no supporting face")]
    NoSupportingFace,
    #[error("bad scene config: {0}")]
    BadConfig(String),
    #[error("dataset file {path}: {detail}")]
    BadDataset { path: String, detail: String },
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
    #[error(transparent)]
    Hand(#[from] crate::hand::HandError),
    #[error(transparent)]
    Grasp(#[from] crate::grasp::GraspError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
