//! Virtual depth cameras and ray-traced depth rendering.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::math::Vec3f;

use super::place::Scene;

/// Hit-id value marking table pixels in a depth image.
pub const TABLE_HIT: i32 = -2;
const MISS: i32 = -1;

/// Pinhole camera. Rays go through pixel centers; depth is the distance
/// along the (unit) ray direction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CameraSpec {
    pub position: Vec3f,
    pub look_at: Vec3f,
    pub up: Vec3f,
    pub width: usize,
    pub height: usize,
    /// Vertical field of view in radians, in (0, pi).
    pub vertical_fov: f64,
}

impl CameraSpec {
    pub fn validate(&self) -> Result<(), super::SceneError> {
        if (self.look_at - self.position).norm() < 1e-9 {
            return Err(super::SceneError::BadConfig("camera look direction is zero".into()));
        }
        if !(self.vertical_fov > 0.0 && self.vertical_fov < std::f64::consts::PI) {
            return Err(super::SceneError::BadConfig(format!(
                "vertical_fov {} out of (0, pi)",
                self.vertical_fov
            )));
        }
        Ok(())
    }

    /// Camera basis: forward, right, and the in-image up vector.
    fn basis(&self) -> (Vec3f, Vec3f, Vec3f) {
        let forward = (self.look_at - self.position).normalized();
        let right = forward.cross(self.up).normalized();
        let up = right.cross(forward);
        (forward, right, up)
    }

    /// Unit ray direction through the center of pixel (px, py).
    pub fn ray_direction(&self, px: usize, py: usize) -> Vec3f {
        let (forward, right, up) = self.basis();
        let tan_v = (self.vertical_fov / 2.0).tan();
        let aspect = self.width as f64 / self.height as f64;
        let x = ((px as f64 + 0.5) / self.width as f64 * 2.0 - 1.0) * tan_v * aspect;
        let y = (1.0 - (py as f64 + 0.5) / self.height as f64 * 2.0) * tan_v;
        (forward + right * x + up * y).normalized()
    }
}

/// Four cameras at the table-side midpoints, elevated 45 degrees, all aimed
/// at the table center.
pub fn default_camera_rig(table_half_extent: f64) -> Vec<CameraSpec> {
    let d = table_half_extent + 0.25;
    [(d, 0.0), (-d, 0.0), (0.0, d), (0.0, -d)]
        .into_iter()
        .map(|(x, y)| CameraSpec {
            position: Vec3f::new(x, y, d),
            look_at: Vec3f::ZERO,
            up: Vec3f::Z,
            width: 160,
            height: 120,
            vertical_fov: 60.0_f64.to_radians(),
        })
        .collect()
}

/// Depth image with per-pixel hit ids (object index, [`TABLE_HIT`], or miss)
/// and hit normals. Misses carry infinite depth.
#[derive(Clone, Debug)]
pub struct DepthImage {
    pub width: usize,
    pub height: usize,
    pub depth: Vec<f64>,
    pub hit_id: Vec<i32>,
    pub normal: Vec<Vec3f>,
}

impl DepthImage {
    pub fn at(&self, px: usize, py: usize) -> (f64, i32, Vec3f) {
        let i = py * self.width + px;
        (self.depth[i], self.hit_id[i], self.normal[i])
    }
}

/// Ray-per-pixel closest hit against all scene meshes (objects and table).
/// Ties across meshes go to the lower object index, then the table.
pub fn render_depth(scene: &Scene, cam: &CameraSpec) -> DepthImage {
    let n = cam.width * cam.height;
    let results: Vec<(f64, i32, Vec3f)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (px, py) = (i % cam.width, i / cam.width);
            let dir = cam.ray_direction(px, py);
            let mut best_t = f64::INFINITY;
            let mut best_id = MISS;
            let mut best_n = Vec3f::Z;
            for (oi, mesh) in scene.object_meshes.iter().enumerate() {
                if let Some(hit) = mesh.raycast(cam.position, dir) {
                    if hit.t < best_t {
                        best_t = hit.t;
                        best_id = oi as i32;
                        best_n = mesh.face_normals()[hit.face];
                    }
                }
            }
            if let Some(hit) = scene.table.raycast(cam.position, dir) {
                if hit.t < best_t {
                    best_t = hit.t;
                    best_id = TABLE_HIT;
                    best_n = scene.table.face_normals()[hit.face];
                }
            }
            (best_t, best_id, best_n)
        })
        .collect();

    let mut depth = Vec::with_capacity(n);
    let mut hit_id = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    for (t, id, nrm) in results {
        depth.push(t);
        hit_id.push(id);
        normal.push(nrm);
    }
    DepthImage { width: cam.width, height: cam.height, depth, hit_id, normal }
}
