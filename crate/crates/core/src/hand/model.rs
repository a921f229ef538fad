//! Hand description: links with meshes, revolute joints forming a tree, and
//! the point sets used by the losses.

use crate::geom::{RigidTransform, TriMesh};
use crate::math::{Vec3f, MAX_PARAMS};

use super::file::MeshSpec;
use super::HandError;

/// Revolute joint between two links.
#[derive(Clone, Debug)]
pub struct JointSpec {
    pub name: String,
    pub parent_link: usize,
    pub child_link: usize,
    /// Fixed transform from the parent link frame to the joint frame.
    pub origin: RigidTransform,
    /// Unit rotation axis in the joint frame.
    pub axis: Vec3f,
    pub limit_min: f64,
    pub limit_max: f64,
}

/// Joint angle vector (radians), one entry per joint.
#[derive(Clone, Debug, PartialEq)]
pub struct JointVector {
    angles: Vec<f64>,
}

impl JointVector {
    pub fn new(angles: Vec<f64>) -> Result<JointVector, HandError> {
        for (index, a) in angles.iter().enumerate() {
            if !a.is_finite() {
                return Err(HandError::NonFiniteAngle { index });
            }
        }
        Ok(JointVector { angles })
    }

    pub fn zeros(dof: usize) -> JointVector {
        JointVector { angles: vec![0.0; dof] }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.angles.clone()
    }
}

/// A point stored in a link frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkPoint {
    pub link: usize,
    pub pos: Vec3f,
}

/// Immutable hand model. Construction validates the kinematic tree; the
/// strict point-count requirements (2000 collision / 45 inner) are enforced
/// by the file loader, not here, so tests can build reduced fixtures.
#[derive(Clone, Debug)]
pub struct HandModel {
    name: String,
    links: Vec<(String, TriMesh)>,
    link_sources: Vec<MeshSpec>,
    palm_link: usize,
    joints: Vec<JointSpec>,
    collision_points: Vec<LinkPoint>,
    inner_points: Vec<LinkPoint>,
    palm_reference_point: Vec3f,
    init_angles: JointVector,
    open_angles: JointVector,
    close_angles: JointVector,
    sampling_seed: u64,
    // derived
    joint_topo_order: Vec<usize>,
    link_parent_joint: Vec<Option<usize>>,
    /// Per link: itself, its parent link, and its child links. Collision
    /// terms between these pairs are skipped (always near contact).
    adjacent_links: Vec<Vec<usize>>,
}

pub struct HandModelParts {
    pub name: String,
    pub links: Vec<(String, TriMesh)>,
    pub link_sources: Vec<MeshSpec>,
    pub palm_link: usize,
    pub joints: Vec<JointSpec>,
    pub collision_points: Vec<LinkPoint>,
    pub inner_points: Vec<LinkPoint>,
    pub palm_reference_point: Vec3f,
    pub init_angles: JointVector,
    pub open_angles: JointVector,
    pub close_angles: JointVector,
    pub sampling_seed: u64,
}

impl HandModel {
    pub fn new(parts: HandModelParts) -> Result<HandModel, HandError> {
        let HandModelParts {
            name,
            links,
            link_sources,
            palm_link,
            mut joints,
            collision_points,
            inner_points,
            palm_reference_point,
            init_angles,
            open_angles,
            close_angles,
            sampling_seed,
        } = parts;

        let n_links = links.len();
        if palm_link >= n_links {
            return Err(HandError::BadLinkIndex { joint: usize::MAX, link: palm_link });
        }
        let dof = joints.len();
        if dof + 9 > MAX_PARAMS {
            return Err(HandError::TooManyJoints { dof, max: MAX_PARAMS - 9 });
        }
        for v in [&init_angles, &open_angles, &close_angles] {
            if v.len() != dof {
                return Err(HandError::DimensionMismatch { expected: dof, actual: v.len() });
            }
        }

        let mut link_parent_joint: Vec<Option<usize>> = vec![None; n_links];
        for (ji, j) in joints.iter_mut().enumerate() {
            if j.parent_link >= n_links {
                return Err(HandError::BadLinkIndex { joint: ji, link: j.parent_link });
            }
            if j.child_link >= n_links {
                return Err(HandError::BadLinkIndex { joint: ji, link: j.child_link });
            }
            if j.limit_min > j.limit_max {
                return Err(HandError::BadJointLimits {
                    joint: ji,
                    min: j.limit_min,
                    max: j.limit_max,
                });
            }
            let norm = j.axis.norm();
            if norm < 1e-9 {
                return Err(HandError::BadAxis { joint: ji });
            }
            j.axis = j.axis / norm;
            if j.child_link == palm_link {
                return Err(HandError::NotATree {
                    detail: format!("joint {ji} makes the palm link a child"),
                });
            }
            if link_parent_joint[j.child_link].is_some() {
                return Err(HandError::NotATree {
                    detail: format!("link {} has more than one parent joint", j.child_link),
                });
            }
            link_parent_joint[j.child_link] = Some(ji);
        }
        for (li, parent) in link_parent_joint.iter().enumerate() {
            if li != palm_link && parent.is_none() {
                return Err(HandError::NotATree {
                    detail: format!("link {li} is not connected to the palm"),
                });
            }
        }

        // Topological order by walking up to the root; cycles cannot occur
        // once every non-root link has exactly one parent and the root none,
        // but a chain that never reaches the root would loop: cap the walk.
        let mut depth = vec![usize::MAX; n_links];
        depth[palm_link] = 0;
        for li in 0..n_links {
            let mut cur = li;
            let mut steps = 0;
            while depth[cur] == usize::MAX {
                let ji = link_parent_joint[cur].unwrap();
                cur = joints[ji].parent_link;
                steps += 1;
                if steps > n_links {
                    return Err(HandError::NotATree {
                        detail: format!("cycle detected reachable from link {li}"),
                    });
                }
            }
            // second pass fills depths along the walked chain
            let mut cur2 = li;
            let mut chain = Vec::new();
            while depth[cur2] == usize::MAX {
                chain.push(cur2);
                cur2 = joints[link_parent_joint[cur2].unwrap()].parent_link;
            }
            let mut d = depth[cur2];
            for &c in chain.iter().rev() {
                d += 1;
                depth[c] = d;
            }
        }
        let mut joint_topo_order: Vec<usize> = (0..dof).collect();
        joint_topo_order.sort_by_key(|&ji| (depth[joints[ji].child_link], ji));

        for (index, p) in collision_points.iter().chain(inner_points.iter()).enumerate() {
            if p.link >= n_links {
                return Err(HandError::BadPointLink { index, link: p.link });
            }
        }

        let mut adjacent_links: Vec<Vec<usize>> = (0..n_links).map(|i| vec![i]).collect();
        for j in &joints {
            adjacent_links[j.parent_link].push(j.child_link);
            adjacent_links[j.child_link].push(j.parent_link);
        }

        Ok(HandModel {
            name,
            links,
            link_sources,
            palm_link,
            joints,
            collision_points,
            inner_points,
            palm_reference_point,
            init_angles,
            open_angles,
            close_angles,
            sampling_seed,
            joint_topo_order,
            link_parent_joint,
            adjacent_links,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn links(&self) -> &[(String, TriMesh)] {
        &self.links
    }

    pub fn link_mesh(&self, i: usize) -> &TriMesh {
        &self.links[i].1
    }

    pub fn link_sources(&self) -> &[MeshSpec] {
        &self.link_sources
    }

    pub fn palm_link(&self) -> usize {
        self.palm_link
    }

    pub fn joints(&self) -> &[JointSpec] {
        &self.joints
    }

    pub fn collision_points(&self) -> &[LinkPoint] {
        &self.collision_points
    }

    pub fn inner_points(&self) -> &[LinkPoint] {
        &self.inner_points
    }

    pub fn palm_reference_point(&self) -> Vec3f {
        self.palm_reference_point
    }

    pub fn init_angles(&self) -> &JointVector {
        &self.init_angles
    }

    pub fn open_angles(&self) -> &JointVector {
        &self.open_angles
    }

    /// Per-joint angle the close-until-contact sweep drives toward. Joints
    /// whose close angle equals their open angle are not swept.
    pub fn close_angles(&self) -> &JointVector {
        &self.close_angles
    }

    pub fn sampling_seed(&self) -> u64 {
        self.sampling_seed
    }

    pub(crate) fn joint_topo_order(&self) -> &[usize] {
        &self.joint_topo_order
    }

    pub fn link_parent_joint(&self, link: usize) -> Option<usize> {
        self.link_parent_joint[link]
    }

    /// True when collision terms between these links are skipped.
    pub fn links_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacent_links[a].contains(&b)
    }

    /// Links on the subtree rooted at the given joint's child (inclusive).
    pub fn subtree_links(&self, joint: usize) -> Vec<usize> {
        let root = self.joints[joint].child_link;
        let mut subtree = vec![root];
        let mut changed = true;
        while changed {
            changed = false;
            for j in &self.joints {
                if subtree.contains(&j.parent_link) && !subtree.contains(&j.child_link) {
                    subtree.push(j.child_link);
                    changed = true;
                }
            }
        }
        subtree
    }
}
