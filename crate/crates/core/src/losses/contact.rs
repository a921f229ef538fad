//! Contact extraction and the sampled upper bound of the grasp-quality
//! metric: the radius of the largest origin-centered ball inside the convex
//! hull of contact wrenches, approximated from above by evaluating the hull's
//! support function along sampled wrench-space directions.

use crate::geom::TriMesh;
use crate::grasp::GraspConfig;
use crate::hand::HandModel;
use crate::math::{Dual, Real, Vec3, Vec3d, Vec3f};

use super::state::DiffGraspState;
use super::{ContactParams, DiffValue, LossError};

/// A contact: a point on the hand (carrying derivatives) and the object's
/// outward surface normal there (held fixed).
#[derive(Clone, Debug)]
pub struct Contact {
    pub point: Vec3d,
    pub normal: Vec3f,
}

impl Contact {
    /// A contact with no parameter dependence (fixtures, oracles).
    pub fn fixed(point: Vec3f, normal: Vec3f) -> Contact {
        Contact { point: Vec3::lift(point), normal }
    }
}

/// Radical-inverse (van der Corput) sequence in the given base.
fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut inv = inv_base;
    let mut result = 0.0;
    while index > 0 {
        result += (index % base) as f64 * inv;
        index /= base;
        inv *= inv_base;
    }
    result
}

/// Deterministic low-discrepancy unit directions in wrench space (6-D):
/// Halton points mapped through Box-Muller pairs and normalized. For a fixed
/// seed the sequence is nested: the first `d` directions of a longer run are
/// exactly the directions of a shorter run.
pub fn sample_directions(d: usize, seed: u64) -> Vec<[f64; 6]> {
    const BASES: [(u64, u64); 3] = [(2, 3), (5, 7), (11, 13)];
    let mut out = Vec::with_capacity(d);
    let mut j = 0u64;
    while out.len() < d {
        let index = seed.wrapping_add(1).wrapping_add(j);
        let mut s = [0.0f64; 6];
        for (pair, (b1, b2)) in BASES.iter().enumerate() {
            let u = radical_inverse(index, *b1).max(1e-17);
            let v = radical_inverse(index, *b2);
            let r = (-2.0 * u.ln()).sqrt();
            s[2 * pair] = r * (2.0 * std::f64::consts::PI * v).cos();
            s[2 * pair + 1] = r * (2.0 * std::f64::consts::PI * v).sin();
        }
        let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in s.iter_mut() {
                *x /= norm;
            }
            out.push(s);
        }
        j += 1;
    }
    out
}

/// Hand collision points within `contact_threshold` of the object surface,
/// paired with the object's outward normal at the closest surface point and
/// deduplicated so no two kept contacts are closer than the threshold.
/// Points are visited in collision-point index order (keep-first).
pub fn find_contacts(
    g: &GraspConfig,
    hand: &HandModel,
    object: &TriMesh,
    params: &ContactParams,
) -> Result<Vec<(Vec3f, Vec3f)>, LossError> {
    params.validate()?;
    let state = DiffGraspState::build(g, hand)?;
    let contacts = find_contacts_with_state(&state, hand, object, params);
    Ok(contacts.into_iter().map(|c| (c.point.value(), c.normal)).collect())
}

pub(crate) fn find_contacts_with_state(
    state: &DiffGraspState,
    hand: &HandModel,
    object: &TriMesh,
    params: &ContactParams,
) -> Vec<Contact> {
    let mut kept: Vec<Contact> = Vec::new();
    let threshold_sq = params.contact_threshold * params.contact_threshold;
    for (i, p) in state.collision_val.iter().enumerate() {
        if object.min_possible_distance(*p) > params.contact_threshold {
            continue;
        }
        let (d, hit) = object.signed_distance_with_hit(*p);
        if d.abs() > params.contact_threshold {
            continue;
        }
        if kept
            .iter()
            .any(|c| (c.point.value() - *p).norm_squared() < threshold_sq)
        {
            continue;
        }
        let normal = object.feature_pseudonormal(&hit);
        kept.push(Contact { point: state.collision_point_dual(hand, i), normal });
    }
    kept
}

/// Friction-cone edge directions for a contact normal: unit inward-normal
/// component plus tangential magnitude `mu`, `e` edges equally spaced.
fn cone_edges(normal: Vec3f, mu: f64, e: usize) -> Vec<Vec3f> {
    let n = normal.normalized();
    let u = n.any_orthonormal();
    let v = n.cross(u);
    (0..e)
        .map(|k| {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / e as f64;
            -n + (u * phi.cos() + v * phi.sin()) * mu
        })
        .collect()
}

/// Sampled upper bound of the grasp quality:
/// `max(0, min over directions of max over wrenches of s . w)` where each
/// wrench stacks a friction-cone edge force with its torque about `com`,
/// scaled by `torque_scale`. The derivative flows through the selected
/// (direction, wrench) pair. No contacts gives 0.
pub fn q1_upper(contacts: &[Contact], params: &ContactParams) -> Result<DiffValue, LossError> {
    params.validate()?;
    let dim = crate::math::MAX_PARAMS;
    q1_upper_dim(contacts, params, dim)
}

/// As [`q1_upper`] with an explicit gradient dimension (losses know the
/// active parameter count; standalone callers can use the full capacity).
pub fn q1_upper_dim(
    contacts: &[Contact],
    params: &ContactParams,
    dim: usize,
) -> Result<DiffValue, LossError> {
    params.validate()?;
    if contacts.is_empty() {
        return Ok(DiffValue::constant(0.0, dim));
    }

    // primal wrenches and the (direction, wrench) selection
    struct EdgeForce {
        force: Vec3f,
        contact: usize,
    }
    let mut edges: Vec<EdgeForce> = Vec::with_capacity(contacts.len() * params.cone_edges);
    for (ci, c) in contacts.iter().enumerate() {
        for f in cone_edges(c.normal, params.friction_mu, params.cone_edges) {
            edges.push(EdgeForce { force: f, contact: ci });
        }
    }
    let lam = params.torque_scale;
    let wrenches: Vec<[f64; 6]> = edges
        .iter()
        .map(|e| {
            let p = contacts[e.contact].point.value();
            let torque = (p - params.com).cross(e.force) * lam;
            [e.force.x, e.force.y, e.force.z, torque.x, torque.y, torque.z]
        })
        .collect();

    let directions = sample_directions(params.directions, params.direction_seed);
    let mut best_dir = 0usize;
    let mut best_min = f64::INFINITY;
    let mut best_edge = 0usize;
    for (j, s) in directions.iter().enumerate() {
        let mut max_v = f64::NEG_INFINITY;
        let mut max_k = 0usize;
        for (k, w) in wrenches.iter().enumerate() {
            let v: f64 = s.iter().zip(w).map(|(a, b)| a * b).sum();
            if v > max_v {
                max_v = v;
                max_k = k;
            }
        }
        if max_v < best_min {
            best_min = max_v;
            best_dir = j;
            best_edge = max_k;
        }
    }

    if best_min <= 0.0 {
        // clamped at zero from below; derivative of the clamp branch is zero
        return Ok(DiffValue::constant(0.0, dim));
    }

    // derivative through the selected pair only
    let s = directions[best_dir];
    let edge = &edges[best_edge];
    let c = &contacts[edge.contact];
    let f = Vec3::<Dual>::lift(edge.force);
    let torque = (c.point - Vec3::lift(params.com)).cross(f) * Dual::constant(lam);
    let value = f.x * Dual::constant(s[0])
        + f.y * Dual::constant(s[1])
        + f.z * Dual::constant(s[2])
        + torque.x * Dual::constant(s[3])
        + torque.y * Dual::constant(s[4])
        + torque.z * Dual::constant(s[5]);
    debug_assert!((value.value() - best_min).abs() < 1e-9);
    Ok(DiffValue::from_dual(value, dim))
}

/// Quality loss `exp(-q)`: bounded in (0, 1], 1 meaning "no grasp quality".
pub fn q1_loss(q: &DiffValue) -> DiffValue {
    let value = (-q.value).exp();
    let gradient = q.gradient.iter().map(|g| -value * g).collect();
    DiffValue { value, gradient }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_nested() {
        let a = sample_directions(32, 5);
        let b = sample_directions(64, 5);
        assert_eq!(a.len(), 32);
        for (i, s) in a.iter().enumerate() {
            let norm: f64 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
            assert_eq!(*s, b[i], "prefix property at {i}");
        }
        let c = sample_directions(32, 6);
        assert_ne!(a[0], c[0], "seed changes the sequence");
    }

    #[test]
    fn cone_edges_have_unit_normal_component() {
        let n = Vec3f::new(0.3, -0.5, 0.81).normalized();
        let edges = cone_edges(n, 0.5, 8);
        assert_eq!(edges.len(), 8);
        for f in &edges {
            // inward normal component -1, tangential magnitude mu
            assert!((f.dot(n) + 1.0).abs() < 1e-12);
            let tangential = *f + n * 1.0 * f.dot(n).abs();
            assert!((tangential.norm() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_contacts_give_zero_and_loss_one() {
        let q = q1_upper(&[], &ContactParams::default()).unwrap();
        assert_eq!(q.value, 0.0);
        let l = q1_loss(&q);
        assert_eq!(l.value, 1.0);
        assert!(l.gradient.iter().all(|g| *g == 0.0));
    }

    #[test]
    fn single_contact_clamps_to_zero() {
        // one friction cone spans at most a half-space of force directions;
        // some sampled direction has non-positive support, so the clamped
        // value is 0 (verified densely in the integration oracle suite).
        let params = ContactParams { directions: 4096, ..Default::default() };
        let c = Contact::fixed(Vec3f::new(1.0, 0.0, 0.0), Vec3f::X);
        let q = q1_upper(&[c], &params).unwrap();
        assert_eq!(q.value, 0.0);
    }

    #[test]
    fn q1_loss_fixtures() {
        let q = DiffValue { value: 0.0, gradient: vec![0.0; 3] };
        assert_eq!(q1_loss(&q).value, 1.0);
        let q = DiffValue { value: 2.0f64.ln(), gradient: vec![1.0, 0.0, -2.0] };
        let l = q1_loss(&q);
        assert!((l.value - 0.5).abs() < 1e-15);
        assert!((l.gradient[0] + 0.5).abs() < 1e-15);
        assert!((l.gradient[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn more_directions_never_increase_the_bound() {
        // nested direction sets: min over a superset is <=
        let mk = |n: Vec3f, p: Vec3f| Contact::fixed(p, n);
        let contacts = vec![
            mk(Vec3f::X, Vec3f::new(0.03, 0.0, 0.0)),
            mk(-Vec3f::X, Vec3f::new(-0.03, 0.0, 0.0)),
            mk(Vec3f::Z, Vec3f::new(0.0, 0.01, 0.03)),
        ];
        let mut prev = f64::INFINITY;
        for d in [8, 16, 32, 64, 128, 256] {
            let params = ContactParams { directions: d, torque_scale: 10.0, ..Default::default() };
            let q = q1_upper(&contacts, &params).unwrap();
            assert!(q.value <= prev + 1e-12, "d = {d}");
            prev = q.value;
        }
    }
}
