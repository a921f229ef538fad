//! Bundled object set: procedurally generated watertight primitives sized
//! for table-top grasping.

use crate::geom::{box_mesh, capped_cone_mesh, cylinder_mesh, icosphere_mesh, l_block_mesh, TriMesh};
use crate::math::Vec3f;

use super::SceneError;

pub const CATALOG_IDS: [&str; 10] = [
    "sphere_s", "sphere_m", "box_s", "box_tall", "box_flat", "cyl_s", "cyl_thin", "cone",
    "frustum", "lblock",
];

/// Build a catalog mesh by id.
pub fn catalog_mesh(id: &str) -> Result<TriMesh, SceneError> {
    let mesh = match id {
        "sphere_s" => icosphere_mesh(0.028, 2),
        "sphere_m" => icosphere_mesh(0.04, 2),
        "box_s" => box_mesh(Vec3f::new(0.022, 0.018, 0.03), Vec3f::ZERO),
        "box_tall" => box_mesh(Vec3f::new(0.018, 0.018, 0.055), Vec3f::ZERO),
        "box_flat" => box_mesh(Vec3f::new(0.04, 0.03, 0.012), Vec3f::ZERO),
        "cyl_s" => cylinder_mesh(0.022, 0.04, 24),
        "cyl_thin" => cylinder_mesh(0.014, 0.055, 20),
        "cone" => capped_cone_mesh(0.032, 0.0, 0.035, 24),
        "frustum" => capped_cone_mesh(0.03, 0.018, 0.03, 24),
        "lblock" => l_block_mesh(0.06, 0.05, 0.03, 0.024, 0.028),
        other => return Err(SceneError::UnknownMeshId(other.to_string())),
    };
    Ok(mesh)
}

/// The whole catalog, in id order.
pub fn object_catalog() -> Vec<(String, TriMesh)> {
    CATALOG_IDS
        .iter()
        .map(|id| (id.to_string(), catalog_mesh(id).expect("bundled id")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_builds_and_is_graspable_scale() {
        for (id, mesh) in object_catalog() {
            let (_, r) = mesh.bounding_sphere();
            assert!(r > 0.01 && r < 0.08, "{id}: bounding radius {r}");
            assert!(mesh.volume() > 0.0, "{id}: outward orientation");
        }
        assert!(catalog_mesh("teapot").is_err());
    }
}
