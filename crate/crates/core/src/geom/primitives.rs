//! Procedural watertight primitives: boxes, cylinders, icospheres, capped
//! cones, and L-shaped blocks. All faces wind counter-clockwise seen from
//! outside, so face normals point outward.

use crate::math::Vec3f;

use super::TriMesh;

/// Axis-aligned box given half extents and center.
pub fn box_mesh(half_extents: Vec3f, center: Vec3f) -> TriMesh {
    let h = half_extents;
    let corner = |sx: f64, sy: f64, sz: f64| center + Vec3f::new(sx * h.x, sy * h.y, sz * h.z);
    let vertices = vec![
        corner(-1.0, -1.0, -1.0), // 0
        corner(1.0, -1.0, -1.0),  // 1
        corner(1.0, 1.0, -1.0),   // 2
        corner(-1.0, 1.0, -1.0),  // 3
        corner(-1.0, -1.0, 1.0),  // 4
        corner(1.0, -1.0, 1.0),   // 5
        corner(1.0, 1.0, 1.0),    // 6
        corner(-1.0, 1.0, 1.0),   // 7
    ];
    // quads listed CCW from outside, fanned into two triangles each
    let quads: [[u32; 4]; 6] = [
        [0, 3, 2, 1], // -z
        [4, 5, 6, 7], // +z
        [0, 1, 5, 4], // -y
        [2, 3, 7, 6], // +y
        [0, 4, 7, 3], // -x
        [1, 2, 6, 5], // +x
    ];
    let mut faces = Vec::with_capacity(12);
    for q in quads {
        faces.push([q[0], q[1], q[2]]);
        faces.push([q[0], q[2], q[3]]);
    }
    TriMesh::new(vertices, faces).expect("box primitive is watertight")
}

/// Cylinder along z, centered at the origin.
pub fn cylinder_mesh(radius: f64, half_height: f64, segments: usize) -> TriMesh {
    assert!(segments >= 3);
    let n = segments as u32;
    let mut vertices = Vec::with_capacity(2 * segments + 2);
    for k in 0..segments {
        let ang = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
        vertices.push(Vec3f::new(radius * ang.cos(), radius * ang.sin(), -half_height));
    }
    for k in 0..segments {
        let ang = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
        vertices.push(Vec3f::new(radius * ang.cos(), radius * ang.sin(), half_height));
    }
    let bottom_center = vertices.len() as u32;
    vertices.push(Vec3f::new(0.0, 0.0, -half_height));
    let top_center = vertices.len() as u32;
    vertices.push(Vec3f::new(0.0, 0.0, half_height));

    let mut faces = Vec::with_capacity(4 * segments);
    for k in 0..n {
        let k1 = (k + 1) % n;
        let (b0, b1, t0, t1) = (k, k1, n + k, n + k1);
        faces.push([b0, b1, t1]);
        faces.push([b0, t1, t0]);
        faces.push([bottom_center, b1, b0]);
        faces.push([top_center, t0, t1]);
    }
    TriMesh::new(vertices, faces).expect("cylinder primitive is watertight")
}

/// Sphere by icosahedron subdivision.
pub fn icosphere_mesh(radius: f64, subdivisions: usize) -> TriMesh {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3f> = vec![
        Vec3f::new(-1.0, phi, 0.0),
        Vec3f::new(1.0, phi, 0.0),
        Vec3f::new(-1.0, -phi, 0.0),
        Vec3f::new(1.0, -phi, 0.0),
        Vec3f::new(0.0, -1.0, phi),
        Vec3f::new(0.0, 1.0, phi),
        Vec3f::new(0.0, -1.0, -phi),
        Vec3f::new(0.0, 1.0, -phi),
        Vec3f::new(phi, 0.0, -1.0),
        Vec3f::new(phi, 0.0, 1.0),
        Vec3f::new(-phi, 0.0, -1.0),
        Vec3f::new(-phi, 0.0, 1.0),
    ];
    let mut faces: Vec<[u32; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut midpoint: std::collections::HashMap<(u32, u32), u32> =
            std::collections::HashMap::new();
        let mut new_faces = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0u32; 3];
            for k in 0..3 {
                let (i, j) = (f[k], f[(k + 1) % 3]);
                let key = if i < j { (i, j) } else { (j, i) };
                mid[k] = *midpoint.entry(key).or_insert_with(|| {
                    let m = (vertices[i as usize] + vertices[j as usize]).scale(0.5);
                    vertices.push(m);
                    (vertices.len() - 1) as u32
                });
            }
            new_faces.push([f[0], mid[0], mid[2]]);
            new_faces.push([f[1], mid[1], mid[0]]);
            new_faces.push([f[2], mid[2], mid[1]]);
            new_faces.push([mid[0], mid[1], mid[2]]);
        }
        faces = new_faces;
    }
    for v in vertices.iter_mut() {
        *v = v.normalized().scale(radius);
    }
    TriMesh::new(vertices, faces).expect("icosphere primitive is watertight")
}

/// Capped cone along z: radius `r_bottom` at `-half_height`, `r_top` at
/// `+half_height`. With `r_top == 0` the top degenerates to an apex.
pub fn capped_cone_mesh(r_bottom: f64, r_top: f64, half_height: f64, segments: usize) -> TriMesh {
    assert!(segments >= 3);
    assert!(r_bottom > 0.0);
    if r_top > 0.0 {
        // frustum: cylinder topology with two radii
        let n = segments as u32;
        let mut vertices = Vec::new();
        for (radius, z) in [(r_bottom, -half_height), (r_top, half_height)] {
            for k in 0..segments {
                let ang = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
                vertices.push(Vec3f::new(radius * ang.cos(), radius * ang.sin(), z));
            }
        }
        let bottom_center = vertices.len() as u32;
        vertices.push(Vec3f::new(0.0, 0.0, -half_height));
        let top_center = vertices.len() as u32;
        vertices.push(Vec3f::new(0.0, 0.0, half_height));
        let mut faces = Vec::new();
        for k in 0..n {
            let k1 = (k + 1) % n;
            faces.push([k, k1, n + k1]);
            faces.push([k, n + k1, n + k]);
            faces.push([bottom_center, k1, k]);
            faces.push([top_center, n + k, n + k1]);
        }
        TriMesh::new(vertices, faces).expect("frustum primitive is watertight")
    } else {
        let n = segments as u32;
        let mut vertices = Vec::new();
        for k in 0..segments {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
            vertices.push(Vec3f::new(r_bottom * ang.cos(), r_bottom * ang.sin(), -half_height));
        }
        let apex = vertices.len() as u32;
        vertices.push(Vec3f::new(0.0, 0.0, half_height));
        let bottom_center = vertices.len() as u32;
        vertices.push(Vec3f::new(0.0, 0.0, -half_height));
        let mut faces = Vec::new();
        for k in 0..n {
            let k1 = (k + 1) % n;
            faces.push([k, k1, apex]);
            faces.push([bottom_center, k1, k]);
        }
        TriMesh::new(vertices, faces).expect("cone primitive is watertight")
    }
}

/// L-shaped block: footprint `a x b` with the corner `(x > ax, y > by)`
/// removed, extruded to height `h`; centered at the origin in x, y, and z.
pub fn l_block_mesh(a: f64, b: f64, ax: f64, by: f64, h: f64) -> TriMesh {
    assert!(ax < a && by < b && ax > 0.0 && by > 0.0);
    let off = Vec3f::new(-a / 2.0, -b / 2.0, -h / 2.0);
    // footprint boundary, counter-clockwise
    let loop2d = [
        (0.0, 0.0),
        (a, 0.0),
        (a, by),
        (ax, by),
        (ax, b),
        (0.0, b),
    ];
    let mut vertices = Vec::with_capacity(12);
    for &(x, y) in &loop2d {
        vertices.push(Vec3f::new(x, y, 0.0) + off); // bottom ring 0..6
    }
    for &(x, y) in &loop2d {
        vertices.push(Vec3f::new(x, y, h) + off); // top ring 6..12
    }
    // top face triangulation (CCW from +z); bottom mirrors it reversed.
    // Splitting at the inner corner avoids T-junctions.
    let top_tris: [[u32; 3]; 4] = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5]];
    let mut faces = Vec::new();
    for t in top_tris {
        faces.push([6 + t[0], 6 + t[1], 6 + t[2]]);
        faces.push([t[0], t[2], t[1]]);
    }
    for k in 0..6u32 {
        let k1 = (k + 1) % 6;
        faces.push([k, k1, 6 + k1]);
        faces.push([k, 6 + k1, 6 + k]);
    }
    TriMesh::new(vertices, faces).expect("L-block primitive is watertight")
}
