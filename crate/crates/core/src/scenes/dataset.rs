//! Dataset generation and serialization.
//!
//! Layout: one directory per scene containing `scene.json` (object ids,
//! poses, seed), `cloud.bin` (little-endian f64 xyz + normal records),
//! `labels.jsonl`, and `labelset.json`. The label set is computed from the
//! *written* cloud and label files, so re-running the matching stage over a
//! dataset reproduces it byte for byte.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::geom::{mat_to_quat, quat_to_mat, PointCloud, RigidTransform, TriMesh};
use crate::grasp::{match_labels, read_labels_jsonl, write_labels_jsonl, GraspLabel, LabelSet, LabelSetFile};
use crate::hand::HandModel;
use crate::math::{derive_seed, Vec3f};

use super::camera::{default_camera_rig, CameraSpec};
use super::catalog::catalog_mesh;
use super::cloud::fuse_point_cloud;
use super::labels::synth_labels;
use super::place::{place_objects, table_mesh, ObjectInstance, Scene};
use super::SceneError;

pub const SCENE_FILE: &str = "scene.json";
pub const CLOUD_FILE: &str = "cloud.bin";
pub const LABELS_FILE: &str = "labels.jsonl";
pub const LABELSET_FILE: &str = "labelset.json";

/// Scene-generation configuration (the `gen-scenes` config file).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SceneGenConfig {
    pub scene_count: usize,
    pub objects_min: usize,
    pub objects_max: usize,
    /// Catalog ids to draw from; the whole catalog when absent.
    #[serde(default)]
    pub object_ids: Option<Vec<String>>,
    pub table_half_extent: f64,
    /// Canonical stable face with zero yaw instead of random quasi-stable poses.
    #[serde(default)]
    pub standard_pose: bool,
    pub labels_per_object: usize,
    /// Palm standoff of the synthetic labels; keep below the 5 mm matching
    /// radius or nothing will match.
    pub label_standoff: f64,
    /// Bundled hand name or a hand-file path.
    pub hand: String,
    pub seed: u64,
    /// Camera overrides; the default four-camera rig when absent.
    #[serde(default)]
    pub cameras: Option<Vec<CameraSpec>>,
}

impl SceneGenConfig {
    pub fn validate(&self) -> Result<(), SceneError> {
        if self.scene_count == 0 {
            return Err(SceneError::BadConfig("scene_count must be >= 1".into()));
        }
        if self.objects_min == 0 || self.objects_min > self.objects_max {
            return Err(SceneError::BadConfig(format!(
                "bad object count range {}..{}",
                self.objects_min, self.objects_max
            )));
        }
        if !(self.table_half_extent > 0.0) {
            return Err(SceneError::BadConfig("table_half_extent must be positive".into()));
        }
        if !(self.label_standoff > 0.0) {
            return Err(SceneError::BadConfig("label_standoff must be positive".into()));
        }
        Ok(())
    }
}

pub fn read_scene_config(path: &Path) -> Result<SceneGenConfig, SceneError> {
    let text = std::fs::read_to_string(path)?;
    let config: SceneGenConfig = serde_json::from_str(&text)
        .map_err(|e| SceneError::BadConfig(format!("{path:?}: {e}")))?;
    config.validate()?;
    Ok(config)
}

#[derive(Serialize, Deserialize)]
struct ObjectFile {
    mesh_id: String,
    translation: [f64; 3],
    quaternion: [f64; 4],
    com: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct SceneFile {
    seed: u64,
    table_half_extent: f64,
    table_thickness: f64,
    objects: Vec<ObjectFile>,
    skipped: Vec<String>,
}

/// In-memory record of one generated scene.
pub struct DatasetRecord {
    pub scene: Scene,
    pub cloud: PointCloud,
    pub labels: Vec<GraspLabel>,
    pub label_set: LabelSet,
}

/// A dataset scene loaded back from disk.
pub struct SceneView {
    pub dir: PathBuf,
    pub scene: Scene,
    pub cloud: PointCloud,
    pub labels: Vec<GraspLabel>,
    pub label_set: LabelSet,
}

pub fn write_cloud_bin(path: &Path, cloud: &PointCloud) -> Result<(), SceneError> {
    let mut bytes = Vec::with_capacity(cloud.len() * 48);
    for (p, n) in cloud.points().iter().zip(cloud.normals()) {
        for v in [p.x, p.y, p.z, n.x, n.y, n.z] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn load_cloud_bin(path: &Path) -> Result<PointCloud, SceneError> {
    let bytes = std::fs::read(path)?;
    if bytes.len() % 48 != 0 {
        return Err(SceneError::BadDataset {
            path: path.display().to_string(),
            detail: format!("length {} is not a multiple of 48", bytes.len()),
        });
    }
    let mut points = Vec::with_capacity(bytes.len() / 48);
    let mut normals = Vec::with_capacity(bytes.len() / 48);
    for rec in bytes.chunks_exact(48) {
        let f = |i: usize| f64::from_le_bytes(rec[8 * i..8 * (i + 1)].try_into().unwrap());
        points.push(Vec3f::new(f(0), f(1), f(2)));
        normals.push(Vec3f::new(f(3), f(4), f(5)));
    }
    Ok(PointCloud::new(points, normals)?)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

fn write_scene_json(path: &Path, scene: &Scene) -> Result<(), SceneError> {
    let file = SceneFile {
        seed: scene.seed,
        table_half_extent: scene.table_half_extent,
        table_thickness: scene.table_thickness,
        objects: scene
            .objects
            .iter()
            .map(|o| ObjectFile {
                mesh_id: o.mesh_id.clone(),
                translation: o.pose.translation.to_array(),
                quaternion: mat_to_quat(&o.pose.rotation),
                com: o.com.to_array(),
            })
            .collect(),
        skipped: scene.skipped.clone(),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| SceneError::BadConfig(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

fn read_scene_json(path: &Path) -> Result<Scene, SceneError> {
    let text = std::fs::read_to_string(path)?;
    let file: SceneFile = serde_json::from_str(&text).map_err(|e| SceneError::BadDataset {
        path: path.display().to_string(),
        detail: e.to_string(),
    })?;
    let table = table_mesh(file.table_half_extent, file.table_thickness);
    let mut objects = Vec::new();
    let mut object_meshes = Vec::new();
    for o in file.objects {
        let rotation = quat_to_mat(o.quaternion)?;
        let pose = RigidTransform::new(rotation, Vec3f::from_array(o.translation))?;
        let mesh = catalog_mesh(&o.mesh_id)?;
        object_meshes.push(mesh.transformed(&pose));
        objects.push(ObjectInstance {
            mesh_id: o.mesh_id,
            pose,
            com: Vec3f::from_array(o.com),
        });
    }
    Ok(Scene {
        seed: file.seed,
        table_half_extent: file.table_half_extent,
        table_thickness: file.table_thickness,
        table,
        objects,
        object_meshes,
        skipped: file.skipped,
    })
}

/// Generate one scene end to end (placement, labels, fused cloud, matching)
/// without touching the filesystem.
pub fn generate_record(
    config: &SceneGenConfig,
    hand: &HandModel,
    scene_seed: u64,
) -> Result<DatasetRecord, SceneError> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(scene_seed);

    let pool: Vec<String> = match &config.object_ids {
        Some(ids) => ids.clone(),
        None => super::catalog::CATALOG_IDS.iter().map(|s| s.to_string()).collect(),
    };
    let count = rng.gen_range(config.objects_min..=config.objects_max.min(pool.len()));
    let mut ids = pool;
    ids.shuffle(&mut rng);
    ids.truncate(count);
    let meshes: Vec<(String, TriMesh)> = ids
        .iter()
        .map(|id| catalog_mesh(id).map(|m| (id.clone(), m)))
        .collect::<Result<_, _>>()?;

    let scene = place_objects(
        &meshes,
        config.table_half_extent,
        derive_seed(scene_seed, 1),
        config.standard_pose,
    )?;
    let cams = config
        .cameras
        .clone()
        .unwrap_or_else(|| default_camera_rig(config.table_half_extent));
    let cloud = fuse_point_cloud(&scene, &cams, derive_seed(scene_seed, 2))?;
    let labels = synth_labels(
        &scene,
        hand,
        config.labels_per_object,
        config.label_standoff,
        derive_seed(scene_seed, 3),
    );
    let label_set = match_labels(&cloud, &labels);
    Ok(DatasetRecord { scene, cloud, labels, label_set })
}

/// Generate `scene_count` scenes and write one directory per scene under
/// `out_dir`. Per-scene failures are recorded and skipped. Returns the
/// written scene directories. The label set is recomputed from the written
/// files so later matching runs reproduce it exactly.
pub fn generate_dataset(
    config: &SceneGenConfig,
    hand: &HandModel,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, SceneError> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let mut dirs = Vec::new();
    for idx in 0..config.scene_count {
        let scene_seed = derive_seed(config.seed, idx as u64);
        let record = match generate_record(config, hand, scene_seed) {
            Ok(r) => r,
            Err(SceneError::EmptyView) => continue, // degenerate scene: skip
            Err(e) => return Err(e),
        };
        let dir = out_dir.join(format!("scene_{idx:04}"));
        std::fs::create_dir_all(&dir)?;
        write_scene_json(&dir.join(SCENE_FILE), &record.scene)?;
        write_cloud_bin(&dir.join(CLOUD_FILE), &record.cloud)?;
        write_labels_jsonl(&dir.join(LABELS_FILE), &record.labels)?;
        // recompute the matching from the written files
        relabel_scene(&dir, hand, None)?;
        dirs.push(dir);
    }
    Ok(dirs)
}

/// Run the matching stage for one scene directory: read the cloud and the
/// label file (an external `labels_path` overrides the scene's own), write
/// `labelset.json`. Returns the number of positive points.
pub fn relabel_scene(
    dir: &Path,
    hand: &HandModel,
    labels_path: Option<&Path>,
) -> Result<usize, SceneError> {
    let cloud_path = dir.join(CLOUD_FILE);
    let cloud = load_cloud_bin(&cloud_path)?;
    let labels_file = match labels_path {
        Some(p) => p.to_path_buf(),
        None => dir.join(LABELS_FILE),
    };
    let labels = read_labels_jsonl(&labels_file, hand)?;
    let set = match_labels(&cloud, &labels);
    let checksum = sha256_hex(&std::fs::read(&cloud_path)?);
    let name = labels_file
        .file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| LABELS_FILE.to_string());
    LabelSetFile::new(checksum, name, &set).save(&dir.join(LABELSET_FILE))?;
    Ok(set.positive_count())
}

/// Load one scene directory back.
pub fn load_scene(dir: &Path, hand: &HandModel) -> Result<SceneView, SceneError> {
    let scene = read_scene_json(&dir.join(SCENE_FILE))?;
    let cloud = load_cloud_bin(&dir.join(CLOUD_FILE))?;
    let set_file = LabelSetFile::load(&dir.join(LABELSET_FILE))?;
    let labels = read_labels_jsonl(&dir.join(&set_file.labels_file), hand)?;
    let checksum = sha256_hex(&std::fs::read(dir.join(CLOUD_FILE))?);
    if checksum != set_file.cloud_sha256 {
        return Err(SceneError::BadDataset {
            path: dir.display().to_string(),
            detail: "labelset checksum does not match cloud.bin".into(),
        });
    }
    Ok(SceneView {
        dir: dir.to_path_buf(),
        scene,
        cloud,
        labels,
        label_set: set_file.to_label_set(),
    })
}

/// Scene directories under a dataset root, sorted by name.
pub fn scene_dirs(root: &Path) -> Result<Vec<PathBuf>, SceneError> {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir() && p.join(SCENE_FILE).exists())
        .collect();
    dirs.sort();
    Ok(dirs)
}
