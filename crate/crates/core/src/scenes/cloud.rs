//! Multi-view point-cloud fusion: back-project object pixels from every
//! camera, drop table hits, and downsample to a fixed cloud size.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{fps_points, PointCloud};
use crate::math::{derive_seed, Vec3f};

use super::camera::{render_depth, CameraSpec};
use super::place::Scene;
use super::SceneError;

/// Fused cloud size.
pub const CLOUD_SIZE: usize = 2048;

/// Render every camera, back-project object hits with their surface normals,
/// and reduce to exactly [`CLOUD_SIZE`] points: farthest-point sampling from
/// a seeded start when there are enough hits, resampling with replacement
/// when there are not.
pub fn fuse_point_cloud(
    scene: &Scene,
    cams: &[CameraSpec],
    seed: u64,
) -> Result<PointCloud, SceneError> {
    let mut points: Vec<Vec3f> = Vec::new();
    let mut normals: Vec<Vec3f> = Vec::new();
    for cam in cams {
        cam.validate()?;
        let img = render_depth(scene, cam);
        for py in 0..cam.height {
            for px in 0..cam.width {
                let (depth, id, normal) = img.at(px, py);
                if id < 0 {
                    continue; // miss or table
                }
                let dir = cam.ray_direction(px, py);
                points.push(cam.position + dir * depth);
                normals.push(normal);
            }
        }
    }
    if points.is_empty() {
        return Err(SceneError::EmptyView);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0xc10d));
    if points.len() < CLOUD_SIZE {
        // pad by resampling with replacement
        let missing = CLOUD_SIZE - points.len();
        for _ in 0..missing {
            let i = rng.gen_range(0..points.len());
            points.push(points[i]);
            normals.push(normals[i]);
        }
        return Ok(PointCloud::new(points, normals)?);
    }

    let start = rng.gen_range(0..points.len());
    let chosen = fps_points(&points, CLOUD_SIZE, start)?;
    let sel_points = chosen.iter().map(|&i| points[i]).collect();
    let sel_normals = chosen.iter().map(|&i| normals[i]).collect();
    Ok(PointCloud::new(sel_points, sel_normals)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::camera::default_camera_rig;
    use super::super::catalog::catalog_mesh;
    use super::super::place::place_objects;

    #[test]
    fn one_box_cloud_lies_on_surfaces() {
        let meshes = vec![("box_s".to_string(), catalog_mesh("box_s").unwrap())];
        let scene = place_objects(&meshes, 0.3, 3, false).unwrap();
        let rig = default_camera_rig(0.3);
        let cloud = fuse_point_cloud(&scene, &rig, 17).unwrap();
        assert_eq!(cloud.len(), CLOUD_SIZE);
        let mesh = &scene.object_meshes[0];
        for p in cloud.points() {
            assert!(mesh.signed_distance(*p).abs() < 1e-6);
        }
    }

    #[test]
    fn fusion_is_deterministic() {
        let meshes = vec![
            ("sphere_s".to_string(), catalog_mesh("sphere_s").unwrap()),
            ("box_s".to_string(), catalog_mesh("box_s").unwrap()),
        ];
        let scene = place_objects(&meshes, 0.3, 4, false).unwrap();
        let rig = default_camera_rig(0.3);
        let a = fuse_point_cloud(&scene, &rig, 5).unwrap();
        let b = fuse_point_cloud(&scene, &rig, 5).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.normals(), b.normals());
    }

    #[test]
    fn empty_view_is_an_error() {
        let scene = place_objects(&[], 0.3, 3, false).unwrap();
        let rig = default_camera_rig(0.3);
        assert!(matches!(fuse_point_cloud(&scene, &rig, 1), Err(SceneError::EmptyView)));
    }

    #[test]
    fn tiny_view_pads_to_full_size() {
        // a single low-resolution camera sees few object pixels
        let meshes = vec![("sphere_s".to_string(), catalog_mesh("sphere_s").unwrap())];
        let scene = place_objects(&meshes, 0.3, 3, false).unwrap();
        let mut cam = default_camera_rig(0.3)[0].clone();
        cam.width = 40;
        cam.height = 30;
        let cloud = fuse_point_cloud(&scene, &[cam], 9).unwrap();
        assert_eq!(cloud.len(), CLOUD_SIZE);
    }
}
