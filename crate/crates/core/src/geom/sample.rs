//! Point clouds, area-weighted surface sampling, and farthest-point sampling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math::Vec3f;

use super::{GeomError, TriMesh};

/// Surface point cloud with outward unit normals.
#[derive(Clone, Debug)]
pub struct PointCloud {
    points: Vec<Vec3f>,
    normals: Vec<Vec3f>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec3f>, normals: Vec<Vec3f>) -> Result<PointCloud, GeomError> {
        if points.len() != normals.len() {
            return Err(GeomError::CloudLengthMismatch {
                points: points.len(),
                normals: normals.len(),
            });
        }
        for (i, n) in normals.iter().enumerate() {
            if (n.norm() - 1.0).abs() > 1e-9 {
                return Err(GeomError::NonUnitNormal { index: i, norm: n.norm() });
            }
        }
        Ok(PointCloud { points, normals })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3f] {
        &self.points
    }

    pub fn normals(&self) -> &[Vec3f] {
        &self.normals
    }

    pub fn point(&self, i: usize) -> Vec3f {
        self.points[i]
    }

    pub fn normal(&self, i: usize) -> Vec3f {
        self.normals[i]
    }
}

/// Draw a point uniformly inside a triangle.
fn sample_in_triangle(rng: &mut ChaCha8Rng, a: Vec3f, b: Vec3f, c: Vec3f) -> Vec3f {
    let r1: f64 = rng.gen();
    let r2: f64 = rng.gen();
    let s = r1.sqrt();
    a * (1.0 - s) + b * (s * (1.0 - r2)) + c * (s * r2)
}

/// Pick a face index by cumulative area.
fn pick_face(cumulative: &[f64], total: f64, rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen::<f64>() * total;
    match cumulative.binary_search_by(|x| x.partial_cmp(&u).unwrap()) {
        Ok(i) => (i + 1).min(cumulative.len() - 1),
        Err(i) => i.min(cumulative.len() - 1),
    }
}

/// `n` points drawn area-weighted over all faces, face normals attached.
/// Deterministic for a fixed seed.
pub fn sample_surface(mesh: &TriMesh, n: usize, seed: u64) -> PointCloud {
    let all: Vec<usize> = (0..mesh.faces().len()).collect();
    sample_on_faces(mesh, &all, n, seed)
}

/// Area-weighted sampling restricted to a face subset.
pub fn sample_on_faces(mesh: &TriMesh, face_subset: &[usize], n: usize, seed: u64) -> PointCloud {
    assert!(!face_subset.is_empty(), "face subset must be non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cumulative = Vec::with_capacity(face_subset.len());
    let mut total = 0.0;
    for &f in face_subset {
        total += mesh.face_areas()[f];
        cumulative.push(total);
    }
    let mut points = Vec::with_capacity(n);
    let mut normals = Vec::with_capacity(n);
    for _ in 0..n {
        let fi = face_subset[pick_face(&cumulative, total, &mut rng)];
        let f = mesh.faces()[fi];
        let p = sample_in_triangle(
            &mut rng,
            mesh.vertices()[f[0] as usize],
            mesh.vertices()[f[1] as usize],
            mesh.vertices()[f[2] as usize],
        );
        points.push(p);
        normals.push(mesh.face_normals()[fi]);
    }
    PointCloud::new(points, normals).expect("face normals are unit length")
}

/// Greedy farthest-point sampling over raw points. The first selected index is
/// `start`; each subsequent pick maximizes the minimum distance to the chosen
/// set, ties broken by lowest index.
pub fn fps_points(points: &[Vec3f], k: usize, start: usize) -> Result<Vec<usize>, GeomError> {
    if k < 1 || k > points.len() {
        return Err(GeomError::InvalidK { k, len: points.len() });
    }
    if start >= points.len() {
        return Err(GeomError::InvalidStart { start, len: points.len() });
    }
    let mut chosen = Vec::with_capacity(k);
    let mut min_d2 = vec![f64::INFINITY; points.len()];
    let mut current = start;
    chosen.push(current);
    for _ in 1..k {
        let base = points[current];
        let mut best = 0usize;
        let mut best_d2 = f64::NEG_INFINITY;
        for (i, (p, m)) in points.iter().zip(min_d2.iter_mut()).enumerate() {
            let d2 = (*p - base).norm_squared();
            if d2 < *m {
                *m = d2;
            }
            if *m > best_d2 {
                best_d2 = *m;
                best = i;
            }
        }
        current = best;
        chosen.push(current);
    }
    Ok(chosen)
}

/// Farthest-point sampling over a cloud (see [`fps_points`]).
pub fn farthest_point_sampling(
    cloud: &PointCloud,
    k: usize,
    start: usize,
) -> Result<Vec<usize>, GeomError> {
    fps_points(cloud.points(), k, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::primitives::{box_mesh, icosphere_mesh};

    #[test]
    fn cloud_validation() {
        let pts = vec![Vec3f::ZERO];
        assert!(PointCloud::new(pts.clone(), vec![]).is_err());
        assert!(PointCloud::new(pts.clone(), vec![Vec3f::new(0.0, 0.0, 2.0)]).is_err());
        assert!(PointCloud::new(pts, vec![Vec3f::Z]).is_ok());
    }

    #[test]
    fn single_triangle_samples_stay_inside() {
        // a thin tetrahedron so the mesh is watertight; sample only face 0
        let m = icosphere_mesh(1.0, 0);
        let cloud = sample_on_faces(&m, &[0], 3, 99);
        assert_eq!(cloud.len(), 3);
        let f = m.faces()[0];
        let n = m.face_normals()[0];
        let a = m.vertices()[f[0] as usize];
        for (p, pn) in cloud.points().iter().zip(cloud.normals()) {
            assert!((*pn - n).norm() < 1e-12, "normals equal the face normal");
            assert!((*p - a).dot(n).abs() < 1e-9, "points lie in the face plane");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let m = box_mesh(Vec3f::new(0.5, 0.5, 0.5), Vec3f::ZERO);
        let a = sample_surface(&m, 100, 7);
        let b = sample_surface(&m, 100, 7);
        assert_eq!(a.points(), b.points());
        let c = sample_surface(&m, 100, 8);
        assert_ne!(a.points(), c.points());
    }

    #[test]
    fn area_weighted_counts_on_cube() {
        // all 12 triangles have equal area; expect ~n/12 samples per face
        let m = box_mesh(Vec3f::new(0.5, 0.5, 0.5), Vec3f::ZERO);
        let n = 6000;
        let cloud = sample_surface(&m, n, 123);
        let mut per_face = vec![0usize; 12];
        for p in cloud.points() {
            // recover the face by which coordinate is on the surface
            let hit = m.closest_hit(*p);
            per_face[hit.face] += 1;
        }
        let expect = n as f64 / 12.0;
        for (i, c) in per_face.iter().enumerate() {
            let rel = (*c as f64 - expect).abs() / expect;
            assert!(rel < 0.15, "face {i}: count {c} vs {expect} (rel {rel:.3})");
        }
        // aggregated per cube side (pairs of triangles): tighter 5% check
        for side in 0..6 {
            let c = per_face[2 * side] + per_face[2 * side + 1];
            let rel = (c as f64 - 2.0 * expect).abs() / (2.0 * expect);
            assert!(rel < 0.05, "side {side}: count {c} (rel {rel:.3})");
        }
    }

    #[test]
    fn fps_collinear_extremes() {
        let points: Vec<Vec3f> = (0..=10).map(|i| Vec3f::new(0.1 * i as f64, 0.0, 0.0)).collect();
        let cloud = PointCloud::new(points.clone(), vec![Vec3f::Z; points.len()]).unwrap();
        let idx = farthest_point_sampling(&cloud, 2, 0).unwrap();
        assert_eq!(idx, vec![0, 10]);
    }

    #[test]
    fn fps_full_k_is_permutation() {
        let points: Vec<Vec3f> = (0..7).map(|i| Vec3f::new(i as f64, (i * i) as f64, 0.0)).collect();
        let idx = fps_points(&points, 7, 2).unwrap();
        let mut sorted = idx.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn fps_invalid_k() {
        let points = vec![Vec3f::ZERO, Vec3f::X];
        assert!(fps_points(&points, 0, 0).is_err());
        assert!(fps_points(&points, 3, 0).is_err());
    }

    #[test]
    fn fps_ignores_duplicates_of_selected() {
        let mut points: Vec<Vec3f> =
            (0..6).map(|i| Vec3f::new(i as f64, ((i * 7) % 3) as f64, 0.0)).collect();
        let base = fps_points(&points, 4, 0).unwrap();
        // duplicate an already-selected point at the end: distances to it are 0
        points.push(points[base[1]]);
        let dup = fps_points(&points, 4, 0).unwrap();
        assert_eq!(base, dup);
    }
}
