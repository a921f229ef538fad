//! JSON hand description files.
//!
//! Links carry either an inline primitive spec or a relative OBJ path. When
//! the `collision_points` / `inner_points` arrays are absent they are
//! regenerated deterministically from the link meshes using `sampling_seed`:
//! collision points area-weighted over all link surfaces, inner points on
//! faces whose link-frame normal points along +z (the grasping side
//! convention used by the bundled hands).
//!
//! Loading a file, saving it, and loading again yields a bit-identical model:
//! the saved file always carries the explicit point arrays.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geom::{load_obj, quat_to_mat, mat_to_quat, sample_on_faces, sample_surface, RigidTransform, TriMesh};
use crate::math::{derive_seed, Vec3f};

use super::model::{HandModelParts, JointSpec, JointVector, LinkPoint};
use super::{HandError, HandModel, COLLISION_POINT_COUNT, INNER_POINT_COUNT};

/// Inline mesh description for a hand link.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MeshSpec {
    Box { half_extents: [f64; 3], center: [f64; 3] },
    Cylinder { radius: f64, half_height: f64, segments: usize },
    Icosphere { radius: f64, subdivisions: usize },
    Obj { path: String },
}

impl MeshSpec {
    /// Instantiate the mesh; `base_dir` resolves relative OBJ paths.
    pub fn build(&self, base_dir: &Path) -> Result<TriMesh, HandError> {
        match self {
            MeshSpec::Box { half_extents, center } => Ok(crate::geom::box_mesh(
                Vec3f::from_array(*half_extents),
                Vec3f::from_array(*center),
            )),
            MeshSpec::Cylinder { radius, half_height, segments } => {
                Ok(crate::geom::cylinder_mesh(*radius, *half_height, *segments))
            }
            MeshSpec::Icosphere { radius, subdivisions } => {
                Ok(crate::geom::icosphere_mesh(*radius, *subdivisions))
            }
            MeshSpec::Obj { path } => Ok(load_obj(&base_dir.join(path))?),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LinkFile {
    name: String,
    mesh: MeshSpec,
}

#[derive(Serialize, Deserialize)]
struct JointFile {
    name: String,
    parent: usize,
    child: usize,
    translation: [f64; 3],
    /// Unit quaternion `[w, x, y, z]` for the origin rotation.
    quaternion: [f64; 4],
    axis: [f64; 3],
    limit_min: f64,
    limit_max: f64,
}

#[derive(Serialize, Deserialize)]
struct PointFile {
    link: usize,
    pos: [f64; 3],
}

#[derive(Serialize, Deserialize)]
struct HandFile {
    name: String,
    palm_link: usize,
    links: Vec<LinkFile>,
    joints: Vec<JointFile>,
    palm_reference_point: [f64; 3],
    sampling_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    init_angles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    open_angles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    close_angles: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    collision_points: Option<Vec<PointFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inner_points: Option<Vec<PointFile>>,
}

/// Distribute `total` point samples over links proportionally to surface
/// area (largest-remainder rounding, so the counts sum exactly to `total`).
pub(crate) fn allocate_by_area(areas: &[f64], total: usize) -> Vec<usize> {
    let sum: f64 = areas.iter().sum();
    let ideal: Vec<f64> = areas.iter().map(|a| a / sum * total as f64).collect();
    let mut counts: Vec<usize> = ideal.iter().map(|x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut remainders: Vec<(usize, f64)> = ideal
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x - x.floor()))
        .collect();
    remainders.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for k in 0..total - assigned {
        counts[remainders[k % remainders.len()].0] += 1;
    }
    counts
}

/// Area-weighted collision points over every link, `total` in all.
pub(crate) fn generate_collision_points(
    links: &[(String, TriMesh)],
    total: usize,
    seed: u64,
) -> Vec<LinkPoint> {
    let areas: Vec<f64> = links.iter().map(|(_, m)| m.total_area()).collect();
    let counts = allocate_by_area(&areas, total);
    let mut out = Vec::with_capacity(total);
    for (li, ((_, mesh), count)) in links.iter().zip(counts).enumerate() {
        if count == 0 {
            continue;
        }
        let cloud = sample_surface(mesh, count, derive_seed(seed, li as u64));
        for p in cloud.points() {
            out.push(LinkPoint { link: li, pos: *p });
        }
    }
    out
}

/// Inner points on +z-facing link surfaces (the grasping side).
pub(crate) fn generate_inner_points(
    links: &[(String, TriMesh)],
    total: usize,
    seed: u64,
) -> Vec<LinkPoint> {
    let inner_faces: Vec<Vec<usize>> = links
        .iter()
        .map(|(_, m)| {
            let faces: Vec<usize> = m
                .face_normals()
                .iter()
                .enumerate()
                .filter(|(_, n)| n.z > 0.9)
                .map(|(i, _)| i)
                .collect();
            faces
        })
        .collect();
    let areas: Vec<f64> = links
        .iter()
        .zip(&inner_faces)
        .map(|((_, m), faces)| faces.iter().map(|&f| m.face_areas()[f]).sum())
        .collect();
    let counts = allocate_by_area(&areas, total);
    let mut out = Vec::with_capacity(total);
    for (li, (((_, mesh), faces), count)) in
        links.iter().zip(&inner_faces).zip(counts).enumerate()
    {
        if count == 0 || faces.is_empty() {
            continue;
        }
        let cloud = sample_on_faces(mesh, faces, count, derive_seed(seed, 1000 + li as u64));
        for p in cloud.points() {
            out.push(LinkPoint { link: li, pos: *p });
        }
    }
    out
}

fn points_from_file(points: Vec<PointFile>) -> Vec<LinkPoint> {
    points
        .into_iter()
        .map(|p| LinkPoint { link: p.link, pos: Vec3f::from_array(p.pos) })
        .collect()
}

fn points_to_file(points: &[LinkPoint]) -> Vec<PointFile> {
    points
        .iter()
        .map(|p| PointFile { link: p.link, pos: p.pos.to_array() })
        .collect()
}

/// Load and validate a hand description.
pub fn load_hand(path: &Path) -> Result<HandModel, HandError> {
    let text = std::fs::read_to_string(path)?;
    let file: HandFile = serde_json::from_str(&text)
        .map_err(|e| HandError::Parse { detail: format!("{path:?}: {e}") })?;
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    hand_from_file(file, base_dir)
}

fn hand_from_file(file: HandFile, base_dir: &Path) -> Result<HandModel, HandError> {
    let mut links = Vec::with_capacity(file.links.len());
    let mut sources = Vec::with_capacity(file.links.len());
    for l in &file.links {
        links.push((l.name.clone(), l.mesh.build(base_dir)?));
        sources.push(l.mesh.clone());
    }
    let mut joints = Vec::with_capacity(file.joints.len());
    for j in &file.joints {
        let rotation = quat_to_mat(j.quaternion)?;
        let origin = RigidTransform::new(rotation, Vec3f::from_array(j.translation))?;
        joints.push(JointSpec {
            name: j.name.clone(),
            parent_link: j.parent,
            child_link: j.child,
            origin,
            axis: Vec3f::from_array(j.axis),
            limit_min: j.limit_min,
            limit_max: j.limit_max,
        });
    }
    let dof = joints.len();
    let mid_range: Vec<f64> =
        joints.iter().map(|j| 0.5 * (j.limit_min + j.limit_max)).collect();
    let zero_clamped: Vec<f64> =
        joints.iter().map(|j| 0.0_f64.clamp(j.limit_min, j.limit_max)).collect();
    let max_limits: Vec<f64> = joints.iter().map(|j| j.limit_max).collect();
    let init_angles = JointVector::new(file.init_angles.unwrap_or(mid_range))?;
    let open_angles = JointVector::new(file.open_angles.unwrap_or(zero_clamped))?;
    let close_angles = JointVector::new(file.close_angles.unwrap_or(max_limits))?;
    if init_angles.len() != dof || open_angles.len() != dof || close_angles.len() != dof {
        return Err(HandError::DimensionMismatch {
            expected: dof,
            actual: init_angles.len().max(open_angles.len()).max(close_angles.len()),
        });
    }

    let collision_points = match file.collision_points {
        Some(p) => points_from_file(p),
        None => generate_collision_points(&links, COLLISION_POINT_COUNT, file.sampling_seed),
    };
    let inner_points = match file.inner_points {
        Some(p) => points_from_file(p),
        None => generate_inner_points(&links, INNER_POINT_COUNT, file.sampling_seed),
    };
    if collision_points.len() != COLLISION_POINT_COUNT {
        return Err(HandError::WrongPointCount {
            kind: "collision",
            expected: COLLISION_POINT_COUNT,
            actual: collision_points.len(),
        });
    }
    if inner_points.len() != INNER_POINT_COUNT {
        return Err(HandError::WrongPointCount {
            kind: "inner",
            expected: INNER_POINT_COUNT,
            actual: inner_points.len(),
        });
    }

    HandModel::new(HandModelParts {
        name: file.name,
        links,
        link_sources: sources,
        palm_link: file.palm_link,
        joints,
        collision_points,
        inner_points,
        palm_reference_point: Vec3f::from_array(file.palm_reference_point),
        init_angles,
        open_angles,
        close_angles,
        sampling_seed: file.sampling_seed,
    })
}

/// Save a hand with explicit point arrays (bit-exact round trip).
pub fn save_hand(hand: &HandModel, path: &Path) -> Result<(), HandError> {
    let file = HandFile {
        name: hand.name().to_string(),
        palm_link: hand.palm_link(),
        links: hand
            .links()
            .iter()
            .zip(hand.link_sources())
            .map(|((name, _), src)| LinkFile { name: name.clone(), mesh: src.clone() })
            .collect(),
        joints: hand
            .joints()
            .iter()
            .map(|j| JointFile {
                name: j.name.clone(),
                parent: j.parent_link,
                child: j.child_link,
                translation: j.origin.translation.to_array(),
                quaternion: mat_to_quat(&j.origin.rotation),
                axis: j.axis.to_array(),
                limit_min: j.limit_min,
                limit_max: j.limit_max,
            })
            .collect(),
        palm_reference_point: hand.palm_reference_point().to_array(),
        sampling_seed: hand.sampling_seed(),
        init_angles: Some(hand.init_angles().to_vec()),
        open_angles: Some(hand.open_angles().to_vec()),
        close_angles: Some(hand.close_angles().to_vec()),
        collision_points: Some(points_to_file(hand.collision_points())),
        inner_points: Some(points_to_file(hand.inner_points())),
    };
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| HandError::Parse { detail: e.to_string() })?;
    std::fs::write(path, text)?;
    Ok(())
}
