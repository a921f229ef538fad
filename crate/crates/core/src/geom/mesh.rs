//! Watertight triangle meshes with signed-distance queries.
//!
//! The inside/outside decision uses angle-weighted pseudonormals at the
//! closest feature, which stays well defined on edges and vertices where a
//! single face normal is ambiguous. Sign convention: positive signed distance
//! means the query point is inside the mesh (penetration depth).

use std::collections::HashMap;

use crate::math::Vec3f;

use super::bvh::{Bvh, ClosestHit, Feature, RayHit};
use super::GeomError;

#[derive(Clone, Debug)]
pub struct TriMesh {
    vertices: Vec<Vec3f>,
    faces: Vec<[u32; 3]>,
    face_normals: Vec<Vec3f>,
    face_areas: Vec<f64>,
    total_area: f64,
    vertex_pseudonormals: Vec<Vec3f>,
    edge_pseudonormals: HashMap<(u32, u32), Vec3f>,
    bvh: Bvh,
    volume: f64,
    centroid: Vec3f,
    bounding_center: Vec3f,
    bounding_radius: f64,
}

impl TriMesh {
    /// Build and validate a mesh. Rejects out-of-range indices, degenerate
    /// faces, and anything not watertight (every directed edge must appear
    /// exactly once, paired with its reverse).
    pub fn new(vertices: Vec<Vec3f>, faces: Vec<[u32; 3]>) -> Result<TriMesh, GeomError> {
        if faces.is_empty() {
            return Err(GeomError::EmptyMesh);
        }
        for (fi, f) in faces.iter().enumerate() {
            for &i in f {
                if i as usize >= vertices.len() {
                    return Err(GeomError::FaceIndexOutOfRange {
                        face: fi,
                        index: i as usize,
                        vertex_count: vertices.len(),
                    });
                }
            }
        }

        let mut face_normals = Vec::with_capacity(faces.len());
        let mut face_areas = Vec::with_capacity(faces.len());
        for (fi, f) in faces.iter().enumerate() {
            let (a, b, c) = (
                vertices[f[0] as usize],
                vertices[f[1] as usize],
                vertices[f[2] as usize],
            );
            let n = (b - a).cross(c - a);
            let len = n.norm();
            if len < 1e-14 {
                return Err(GeomError::DegenerateFace { face: fi });
            }
            face_normals.push(n / len);
            face_areas.push(0.5 * len);
        }
        let total_area: f64 = face_areas.iter().sum();

        // Watertightness: each directed edge exactly once, reverse present.
        let mut directed: HashMap<(u32, u32), usize> = HashMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let e = (f[k], f[(k + 1) % 3]);
                if directed.insert(e, fi).is_some() {
                    return Err(GeomError::NotWatertight {
                        detail: format!("directed edge ({}, {}) appears more than once", e.0, e.1),
                    });
                }
            }
        }
        let mut edge_pseudonormals: HashMap<(u32, u32), Vec3f> = HashMap::new();
        for (&(i, j), &fi) in &directed {
            match directed.get(&(j, i)) {
                None => {
                    return Err(GeomError::NotWatertight {
                        detail: format!("edge ({i}, {j}) has no opposite face"),
                    })
                }
                Some(&fj) => {
                    if i < j {
                        let n = (face_normals[fi] + face_normals[fj]).normalized();
                        edge_pseudonormals.insert((i, j), n);
                    }
                }
            }
        }

        // Angle-weighted vertex pseudonormals.
        let mut vertex_pseudonormals = vec![Vec3f::ZERO; vertices.len()];
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                let v = f[k] as usize;
                let p = vertices[v];
                let e1 = (vertices[f[(k + 1) % 3] as usize] - p).normalized();
                let e2 = (vertices[f[(k + 2) % 3] as usize] - p).normalized();
                let angle = e1.dot(e2).clamp(-1.0, 1.0).acos();
                vertex_pseudonormals[v] += face_normals[fi] * angle;
            }
        }
        for n in vertex_pseudonormals.iter_mut() {
            let len = n.norm();
            if len > 1e-14 {
                *n = *n / len;
            }
        }

        // Signed volume and centroid via the divergence theorem.
        let mut volume = 0.0;
        let mut centroid = Vec3f::ZERO;
        for f in &faces {
            let (a, b, c) = (
                vertices[f[0] as usize],
                vertices[f[1] as usize],
                vertices[f[2] as usize],
            );
            let v = a.dot(b.cross(c)) / 6.0;
            volume += v;
            centroid += (a + b + c).scale(v / 4.0);
        }
        if volume.abs() > 1e-15 {
            centroid = centroid / volume;
        }

        let bvh = Bvh::build(&vertices, &faces);

        let mut lo = Vec3f::splat(f64::INFINITY);
        let mut hi = Vec3f::splat(f64::NEG_INFINITY);
        for v in &vertices {
            lo = lo.min_component_wise(*v);
            hi = hi.max_component_wise(*v);
        }
        let bounding_center = (lo + hi).scale(0.5);
        let bounding_radius = vertices
            .iter()
            .map(|v| (*v - bounding_center).norm())
            .fold(0.0_f64, f64::max);

        Ok(TriMesh {
            vertices,
            faces,
            face_normals,
            face_areas,
            total_area,
            vertex_pseudonormals,
            edge_pseudonormals,
            bvh,
            volume,
            centroid,
            bounding_center,
            bounding_radius,
        })
    }

    pub fn vertices(&self) -> &[Vec3f] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[u32; 3]] {
        &self.faces
    }

    pub fn face_normals(&self) -> &[Vec3f] {
        &self.face_normals
    }

    pub fn face_areas(&self) -> &[f64] {
        &self.face_areas
    }

    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn vertex_pseudonormals(&self) -> &[Vec3f] {
        &self.vertex_pseudonormals
    }

    /// Enclosed volume (positive for outward-oriented meshes).
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// Volume centroid (center of mass for uniform density).
    pub fn centroid(&self) -> Vec3f {
        self.centroid
    }

    pub fn bounding_sphere(&self) -> (Vec3f, f64) {
        (self.bounding_center, self.bounding_radius)
    }

    /// Pseudonormal for the feature of a closest-point hit.
    pub fn feature_pseudonormal(&self, hit: &ClosestHit) -> Vec3f {
        match hit.feature {
            Feature::Face => self.face_normals[hit.face],
            Feature::Edge(i, j) => self.edge_pseudonormals[&(i, j)],
            Feature::Vertex(i) => self.vertex_pseudonormals[i as usize],
        }
    }

    /// Closest point on the surface with its face and feature.
    pub fn closest_hit(&self, p: Vec3f) -> ClosestHit {
        self.bvh.closest(&self.vertices, &self.faces, p)
    }

    /// Point on the surface minimizing the distance to `p`.
    pub fn closest_surface_point(&self, p: Vec3f) -> Vec3f {
        self.closest_hit(p).point
    }

    /// Signed distance: positive inside (penetration depth), negative outside,
    /// magnitude equal to the distance to the closest surface point.
    pub fn signed_distance(&self, p: Vec3f) -> f64 {
        self.signed_distance_with_hit(p).0
    }

    /// Signed distance plus the closest hit (for callers that also need the
    /// surface point or its normal).
    pub fn signed_distance_with_hit(&self, p: Vec3f) -> (f64, ClosestHit) {
        let hit = self.closest_hit(p);
        let dist = hit.dist_squared.sqrt();
        if dist == 0.0 {
            return (0.0, hit);
        }
        let n = self.feature_pseudonormal(&hit);
        let d = if (p - hit.point).dot(n) < 0.0 { dist } else { -dist };
        (d, hit)
    }

    /// Outward unit surface normal at the closest point to `p`.
    pub fn surface_normal_near(&self, p: Vec3f) -> Vec3f {
        let hit = self.closest_hit(p);
        self.feature_pseudonormal(&hit)
    }

    /// First ray intersection with `t > 0` for a unit direction.
    pub fn raycast(&self, origin: Vec3f, dir: Vec3f) -> Option<RayHit> {
        self.bvh.raycast(&self.vertices, &self.faces, origin, dir)
    }

    /// Fast conservative outside test: true when `p` is provably outside.
    #[inline]
    pub fn outside_bounding_sphere(&self, p: Vec3f) -> bool {
        (p - self.bounding_center).norm_squared() > self.bounding_radius * self.bounding_radius
    }

    /// Lower bound on the distance from `p` to the surface.
    #[inline]
    pub fn min_possible_distance(&self, p: Vec3f) -> f64 {
        ((p - self.bounding_center).norm() - self.bounding_radius).max(0.0)
    }

    /// The mesh rigidly transformed (vertices moved, connectivity kept).
    pub fn transformed(&self, t: &super::RigidTransform) -> TriMesh {
        let vertices = self.vertices.iter().map(|v| t.apply(*v)).collect();
        TriMesh::new(vertices, self.faces.clone()).expect("rigid transform preserves validity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::primitives::box_mesh;

    fn unit_cube() -> TriMesh {
        box_mesh(Vec3f::new(0.5, 0.5, 0.5), Vec3f::ZERO)
    }

    #[test]
    fn cube_is_watertight_with_unit_normals() {
        let m = unit_cube();
        assert_eq!(m.faces().len(), 12);
        for n in m.face_normals() {
            assert!((n.norm() - 1.0).abs() < 1e-9);
        }
        for n in m.vertex_pseudonormals() {
            assert!((n.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn signed_distance_cube_fixtures() {
        let m = unit_cube();
        // outside, closest face at x = 0.5
        assert!((m.signed_distance(Vec3f::new(1.0, 0.0, 0.0)) - (-0.5)).abs() < 1e-12);
        // symmetric interior point
        assert!((m.signed_distance(Vec3f::ZERO) - 0.5).abs() < 1e-12);
        // near a corner, inside
        assert!((m.signed_distance(Vec3f::new(0.4, 0.4, 0.4)) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn signed_distance_magnitude_matches_closest_point() {
        let m = unit_cube();
        for p in [
            Vec3f::new(2.0, 0.3, -0.1),
            Vec3f::new(0.1, 0.2, 0.3),
            Vec3f::new(-0.7, -0.9, 0.2),
            Vec3f::new(0.5, 0.5, 0.5),
        ] {
            let d = m.signed_distance(p);
            let q = m.closest_surface_point(p);
            assert!((d.abs() - (p - q).norm()).abs() < 1e-12, "p = {p:?}");
        }
    }

    #[test]
    fn closest_point_on_cube_face() {
        let m = unit_cube();
        let q = m.closest_surface_point(Vec3f::new(1.0, 0.0, 0.0));
        assert!((q - Vec3f::new(0.5, 0.0, 0.0)).norm() < 1e-12);
        // a surface point maps to itself
        let s = Vec3f::new(0.5, 0.2, -0.3);
        assert!((m.closest_surface_point(s) - s).norm() < 1e-12);
    }

    #[test]
    fn sign_robust_near_edges_and_corners() {
        let m = unit_cube();
        // along the diagonal beyond a corner: outside
        assert!(m.signed_distance(Vec3f::new(0.6, 0.6, 0.6)) < 0.0);
        // near an edge, outside
        assert!(m.signed_distance(Vec3f::new(0.6, 0.6, 0.0)) < 0.0);
        // just inside a corner
        assert!(m.signed_distance(Vec3f::new(0.49, 0.49, 0.49)) > 0.0);
    }

    #[test]
    fn volume_and_centroid_of_cube() {
        let m = box_mesh(Vec3f::new(0.5, 0.5, 0.5), Vec3f::new(1.0, 2.0, 3.0));
        assert!((m.volume() - 1.0).abs() < 1e-12);
        assert!((m.centroid() - Vec3f::new(1.0, 2.0, 3.0)).norm() < 1e-12);
    }

    #[test]
    fn open_mesh_rejected() {
        // single triangle: every edge unpaired
        let verts = vec![Vec3f::ZERO, Vec3f::X, Vec3f::Y];
        assert!(matches!(
            TriMesh::new(verts, vec![[0, 1, 2]]),
            Err(GeomError::NotWatertight { .. })
        ));
    }

    #[test]
    fn bad_index_rejected() {
        let verts = vec![Vec3f::ZERO, Vec3f::X, Vec3f::Y];
        assert!(matches!(
            TriMesh::new(verts, vec![[0, 1, 7]]),
            Err(GeomError::FaceIndexOutOfRange { .. })
        ));
    }
}
