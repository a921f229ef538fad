//! Collision-free object placement on a table.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{box_mesh, sample_surface, RigidTransform, TriMesh};
use crate::math::{derive_seed, Vec3f};

use super::stable::{stable_pose, standard_stable_pose};
use super::SceneError;

/// Table thickness used by the default scenes (top face at z = 0).
pub const TABLE_THICKNESS: f64 = 0.04;

const PLACEMENT_ATTEMPTS: usize = 100;
const INTERPENETRATION_TOL: f64 = 1e-4;
const CHECK_SAMPLES: usize = 256;

#[derive(Clone, Debug)]
pub struct ObjectInstance {
    pub mesh_id: String,
    pub pose: RigidTransform,
    /// Center of mass in world coordinates.
    pub com: Vec3f,
}

/// A generated table-top scene. Object meshes are stored already posed in
/// world coordinates, parallel to `objects`.
#[derive(Clone, Debug)]
pub struct Scene {
    pub seed: u64,
    pub table_half_extent: f64,
    pub table_thickness: f64,
    pub table: TriMesh,
    pub objects: Vec<ObjectInstance>,
    pub object_meshes: Vec<TriMesh>,
    /// Mesh ids that could not be placed collision-free.
    pub skipped: Vec<String>,
}

impl Scene {
    /// Objects followed by the table: the mesh list the losses consume.
    pub fn all_meshes(&self) -> Vec<TriMesh> {
        let mut out = self.object_meshes.clone();
        out.push(self.table.clone());
        out
    }

    /// Max interpenetration over sampled surface points between every pair
    /// of scene meshes (and objects against the table). Used by tests.
    pub fn max_interpenetration(&self, samples_per_object: usize) -> f64 {
        let mut worst: f64 = f64::NEG_INFINITY;
        let meshes = self.all_meshes();
        for (i, mesh) in self.object_meshes.iter().enumerate() {
            let cloud = sample_surface(mesh, samples_per_object, 1234 + i as u64);
            for (j, other) in meshes.iter().enumerate() {
                if i == j {
                    continue;
                }
                for p in cloud.points() {
                    if other.outside_bounding_sphere(*p) {
                        continue;
                    }
                    worst = worst.max(other.signed_distance(*p));
                }
            }
        }
        worst
    }
}

pub fn table_mesh(half_extent: f64, thickness: f64) -> TriMesh {
    box_mesh(
        Vec3f::new(half_extent, half_extent, thickness / 2.0),
        Vec3f::new(0.0, 0.0, -thickness / 2.0),
    )
}

fn penetrates(points: &[Vec3f], pose: &RigidTransform, other: &TriMesh, tol: f64) -> bool {
    points.iter().any(|p| {
        let w = pose.apply(*p);
        !other.outside_bounding_sphere(w) && other.signed_distance(w) > tol
    })
}

/// Place each mesh at a seeded quasi-stable pose and a uniform position on
/// the table, rejecting poses that interpenetrate already-placed objects or
/// the table; after 100 failed attempts the object is skipped and recorded.
pub fn place_objects(
    meshes: &[(String, TriMesh)],
    table_half_extent: f64,
    seed: u64,
    standard_pose: bool,
) -> Result<Scene, SceneError> {
    let table = table_mesh(table_half_extent, TABLE_THICKNESS);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0x1ace));
    let mut objects: Vec<ObjectInstance> = Vec::new();
    let mut world_meshes: Vec<TriMesh> = Vec::new();
    let mut check_points: Vec<Vec<Vec3f>> = Vec::new();
    let mut skipped = Vec::new();

    for (oi, (id, mesh)) in meshes.iter().enumerate() {
        let local_samples = sample_surface(mesh, CHECK_SAMPLES, derive_seed(seed, 77 + oi as u64));
        let (_, radius) = mesh.bounding_sphere();
        let span = (table_half_extent - radius).max(0.0);
        let mut placed = false;

        for attempt in 0..PLACEMENT_ATTEMPTS {
            let rest = if standard_pose {
                standard_stable_pose(mesh)?
            } else {
                stable_pose(mesh, derive_seed(seed, (oi * PLACEMENT_ATTEMPTS + attempt) as u64))?
            };
            let x = (rng.gen::<f64>() * 2.0 - 1.0) * span;
            let y = (rng.gen::<f64>() * 2.0 - 1.0) * span;
            let pose = RigidTransform::from_translation(Vec3f::new(x, y, 0.0)).compose(&rest);

            // new object's samples against existing objects and the table
            let mut collides = penetrates(local_samples.points(), &pose, &table, INTERPENETRATION_TOL);
            if !collides {
                for w in &world_meshes {
                    if penetrates(local_samples.points(), &pose, w, INTERPENETRATION_TOL) {
                        collides = true;
                        break;
                    }
                }
            }
            // existing objects' samples against the new mesh
            if !collides {
                let world = mesh.transformed(&pose);
                for (other_pts, other_inst) in check_points.iter().zip(&objects) {
                    let other_pose = other_inst.pose;
                    if penetrates(other_pts, &other_pose, &world, INTERPENETRATION_TOL) {
                        collides = true;
                        break;
                    }
                }
                if !collides {
                    objects.push(ObjectInstance {
                        mesh_id: id.clone(),
                        pose,
                        com: pose.apply(mesh.centroid()),
                    });
                    world_meshes.push(world);
                    check_points.push(local_samples.points().to_vec());
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            skipped.push(id.clone());
        }
    }

    Ok(Scene {
        seed,
        table_half_extent,
        table_thickness: TABLE_THICKNESS,
        table,
        objects,
        object_meshes: world_meshes,
        skipped,
    })
}
