//! Bounding-volume hierarchy over triangles for closest-point and ray
//! queries. Median-split build, depth-first query with distance pruning.
//!
//! Queries visit triangles in a pruned order but apply the exact same
//! per-triangle kernels as a full scan, with ties broken by lowest face
//! index, so results are identical to scanning every face.

use crate::math::Vec3f;

/// Which feature of the winning triangle the closest point lies on.
/// Indices are global vertex ids, normalized so `Edge(i, j)` has `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feature {
    Face,
    Edge(u32, u32),
    Vertex(u32),
}

/// Result of a closest-point query.
#[derive(Clone, Copy, Debug)]
pub struct ClosestHit {
    pub point: Vec3f,
    pub dist_squared: f64,
    pub face: usize,
    pub feature: Feature,
}

/// Result of a ray query: parameter along the (unit) direction and the face.
#[derive(Clone, Copy, Debug)]
pub struct RayHit {
    pub t: f64,
    pub face: usize,
}

const LEAF_SIZE: usize = 4;
const RAY_EPS: f64 = 1e-12;

#[derive(Clone, Debug)]
struct Node {
    aabb_min: Vec3f,
    aabb_max: Vec3f,
    // Interior: children indices. Leaf: range into `order`.
    left: u32,
    right: u32,
    start: u32,
    count: u32,
}

impl Node {
    fn is_leaf(&self) -> bool {
        self.count > 0
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Bvh {
    nodes: Vec<Node>,
    order: Vec<u32>,
}

struct TriRef {
    centroid: Vec3f,
    min: Vec3f,
    max: Vec3f,
    index: u32,
}

impl Bvh {
    pub fn build(vertices: &[Vec3f], faces: &[[u32; 3]]) -> Bvh {
        let mut refs: Vec<TriRef> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let (a, b, c) = (
                    vertices[f[0] as usize],
                    vertices[f[1] as usize],
                    vertices[f[2] as usize],
                );
                TriRef {
                    centroid: (a + b + c).scale(1.0 / 3.0),
                    min: a.min_component_wise(b).min_component_wise(c),
                    max: a.max_component_wise(b).max_component_wise(c),
                    index: i as u32,
                }
            })
            .collect();
        let mut nodes = Vec::with_capacity(2 * faces.len());
        let n = refs.len();
        Self::build_node(&mut refs, 0, n, &mut nodes);
        let order = refs.iter().map(|r| r.index).collect();
        Bvh { nodes, order }
    }

    fn build_node(refs: &mut [TriRef], start: usize, end: usize, nodes: &mut Vec<Node>) -> u32 {
        let mut min = Vec3f::splat(f64::INFINITY);
        let mut max = Vec3f::splat(f64::NEG_INFINITY);
        for r in &refs[start..end] {
            min = min.min_component_wise(r.min);
            max = max.max_component_wise(r.max);
        }
        let id = nodes.len() as u32;
        nodes.push(Node { aabb_min: min, aabb_max: max, left: 0, right: 0, start: 0, count: 0 });
        let count = end - start;
        if count <= LEAF_SIZE {
            nodes[id as usize].start = start as u32;
            nodes[id as usize].count = count as u32;
            return id;
        }
        // split on the longest centroid axis at the median
        let mut cmin = Vec3f::splat(f64::INFINITY);
        let mut cmax = Vec3f::splat(f64::NEG_INFINITY);
        for r in &refs[start..end] {
            cmin = cmin.min_component_wise(r.centroid);
            cmax = cmax.max_component_wise(r.centroid);
        }
        let extent = cmax - cmin;
        let axis = if extent.x >= extent.y && extent.x >= extent.z {
            0
        } else if extent.y >= extent.z {
            1
        } else {
            2
        };
        let mid = start + count / 2;
        refs[start..end].select_nth_unstable_by(mid - start, |a, b| {
            a.centroid[axis]
                .partial_cmp(&b.centroid[axis])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.index.cmp(&b.index))
        });
        let left = Self::build_node(refs, start, mid, nodes);
        let right = Self::build_node(refs, mid, end, nodes);
        nodes[id as usize].left = left;
        nodes[id as usize].right = right;
        id
    }

    fn aabb_dist_squared(node: &Node, p: Vec3f) -> f64 {
        let c = p
            .max_component_wise(node.aabb_min)
            .min_component_wise(node.aabb_max);
        (p - c).norm_squared()
    }

    /// Closest point over all triangles; ties by lowest face index.
    pub fn closest(&self, vertices: &[Vec3f], faces: &[[u32; 3]], p: Vec3f) -> ClosestHit {
        let mut best = ClosestHit {
            point: Vec3f::ZERO,
            dist_squared: f64::INFINITY,
            face: usize::MAX,
            feature: Feature::Face,
        };
        let mut stack: Vec<u32> = vec![0];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            if Self::aabb_dist_squared(node, p) > best.dist_squared {
                continue;
            }
            if node.is_leaf() {
                for k in node.start..node.start + node.count {
                    let face = self.order[k as usize] as usize;
                    let f = faces[face];
                    let (q, feature) = closest_point_on_triangle(
                        p,
                        vertices[f[0] as usize],
                        vertices[f[1] as usize],
                        vertices[f[2] as usize],
                        f,
                    );
                    let d2 = (p - q).norm_squared();
                    if d2 < best.dist_squared || (d2 == best.dist_squared && face < best.face) {
                        best = ClosestHit { point: q, dist_squared: d2, face, feature };
                    }
                }
            } else {
                // push farther child first so the nearer one is processed next
                let (l, r) = (node.left, node.right);
                let dl = Self::aabb_dist_squared(&self.nodes[l as usize], p);
                let dr = Self::aabb_dist_squared(&self.nodes[r as usize], p);
                if dl <= dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        best
    }

    fn aabb_hits_ray(node: &Node, origin: Vec3f, inv_dir: Vec3f, t_max: f64) -> bool {
        let mut t0: f64 = 0.0;
        let mut t1 = t_max;
        for axis in 0..3 {
            let inv = inv_dir[axis];
            let mut near = (node.aabb_min[axis] - origin[axis]) * inv;
            let mut far = (node.aabb_max[axis] - origin[axis]) * inv;
            if near > far {
                std::mem::swap(&mut near, &mut far);
            }
            t0 = t0.max(near);
            t1 = t1.min(far);
            if t0 > t1 {
                return false;
            }
        }
        true
    }

    /// First intersection along the ray (`t > 0`); ties by lowest face index.
    pub fn raycast(
        &self,
        vertices: &[Vec3f],
        faces: &[[u32; 3]],
        origin: Vec3f,
        dir: Vec3f,
    ) -> Option<RayHit> {
        let inv_dir = Vec3f::new(1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z);
        let mut best: Option<RayHit> = None;
        let mut stack: Vec<u32> = vec![0];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id as usize];
            let t_max = best.map_or(f64::INFINITY, |h| h.t);
            if !Self::aabb_hits_ray(node, origin, inv_dir, t_max) {
                continue;
            }
            if node.is_leaf() {
                for k in node.start..node.start + node.count {
                    let face = self.order[k as usize] as usize;
                    let f = faces[face];
                    if let Some(t) = ray_triangle(
                        origin,
                        dir,
                        vertices[f[0] as usize],
                        vertices[f[1] as usize],
                        vertices[f[2] as usize],
                    ) {
                        let better = match best {
                            None => true,
                            Some(h) => t < h.t || (t == h.t && face < h.face),
                        };
                        if better {
                            best = Some(RayHit { t, face });
                        }
                    }
                }
            } else {
                stack.push(node.right);
                stack.push(node.left);
            }
        }
        best
    }
}

/// Closest point on triangle `(a, b, c)` to `p`, with the feature it lies on
/// (Voronoi-region walk). `f` carries the global vertex ids for the feature.
pub(crate) fn closest_point_on_triangle(
    p: Vec3f,
    a: Vec3f,
    b: Vec3f,
    c: Vec3f,
    f: [u32; 3],
) -> (Vec3f, Feature) {
    let edge = |i: u32, j: u32| if i < j { Feature::Edge(i, j) } else { Feature::Edge(j, i) };

    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return (a, Feature::Vertex(f[0]));
    }

    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return (b, Feature::Vertex(f[1]));
    }

    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return (a + ab * v, edge(f[0], f[1]));
    }

    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return (c, Feature::Vertex(f[2]));
    }

    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return (a + ac * w, edge(f[0], f[2]));
    }

    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (b + (c - b) * w, edge(f[1], f[2]));
    }

    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    (a + ab * v + ac * w, Feature::Face)
}

/// Moller-Trumbore ray/triangle intersection; returns `t` for hits with
/// `t > RAY_EPS`, inclusive of edges.
pub(crate) fn ray_triangle(origin: Vec3f, dir: Vec3f, a: Vec3f, b: Vec3f, c: Vec3f) -> Option<f64> {
    let e1 = b - a;
    let e2 = c - a;
    let h = dir.cross(e2);
    let det = e1.dot(h);
    if det.abs() < 1e-14 {
        return None;
    }
    let inv_det = 1.0 / det;
    let s = origin - a;
    let u = s.dot(h) * inv_det;
    if !(-1e-12..=1.0 + 1e-12).contains(&u) {
        return None;
    }
    let q = s.cross(e1);
    let v = dir.dot(q) * inv_det;
    if v < -1e-12 || u + v > 1.0 + 1e-12 {
        return None;
    }
    let t = e2.dot(q) * inv_det;
    if t > RAY_EPS {
        Some(t)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_regions() {
        let a = Vec3f::ZERO;
        let b = Vec3f::new(1.0, 0.0, 0.0);
        let c = Vec3f::new(0.0, 1.0, 0.0);
        let f = [0, 1, 2];

        let (q, feat) = closest_point_on_triangle(Vec3f::new(0.25, 0.25, 1.0), a, b, c, f);
        assert_eq!(feat, Feature::Face);
        assert!((q - Vec3f::new(0.25, 0.25, 0.0)).norm() < 1e-15);

        let (q, feat) = closest_point_on_triangle(Vec3f::new(-1.0, -1.0, 0.0), a, b, c, f);
        assert_eq!(feat, Feature::Vertex(0));
        assert_eq!(q, a);

        let (q, feat) = closest_point_on_triangle(Vec3f::new(0.5, -1.0, 0.0), a, b, c, f);
        assert_eq!(feat, Feature::Edge(0, 1));
        assert!((q - Vec3f::new(0.5, 0.0, 0.0)).norm() < 1e-15);

        let (_, feat) = closest_point_on_triangle(Vec3f::new(1.0, 1.0, 0.0), a, b, c, f);
        assert_eq!(feat, Feature::Edge(1, 2));
    }

    #[test]
    fn ray_hits_triangle_center() {
        let a = Vec3f::new(-1.0, -1.0, 2.0);
        let b = Vec3f::new(1.0, -1.0, 2.0);
        let c = Vec3f::new(0.0, 1.5, 2.0);
        let t = ray_triangle(Vec3f::ZERO, Vec3f::Z, a, b, c).unwrap();
        assert!((t - 2.0).abs() < 1e-14);
        assert!(ray_triangle(Vec3f::ZERO, -Vec3f::Z, a, b, c).is_none());
    }
}
