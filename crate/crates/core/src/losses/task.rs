//! The combined task loss and the confidence-weighted batch loss.

use crate::geom::TriMesh;
use crate::grasp::{GraspConfig, GraspLabel};
use crate::hand::HandModel;

use super::chamfer::chamfer_loss;
use super::collision::collision_loss_with_state;
use super::contact::{find_contacts_with_state, q1_loss, q1_upper_dim};
use super::guidance::guidance_loss_with_state;
use super::state::DiffGraspState;
use super::{ContactParams, DiffValue, LossError, LossWeights};

/// Scene context shared by the loss terms.
pub struct LossContext<'a> {
    /// World-frame scene meshes (objects plus table).
    pub scene: &'a [TriMesh],
    /// Include hand-link self-collision terms in the collision loss.
    pub self_collision: bool,
    /// Index into `scene` of the object the quality term targets. When
    /// absent and the quality weight is nonzero, the mesh closest to the
    /// grasp anchor is used.
    pub target_object: Option<usize>,
}

impl<'a> LossContext<'a> {
    pub fn new(scene: &'a [TriMesh]) -> LossContext<'a> {
        LossContext { scene, self_collision: true, target_object: None }
    }

    fn resolve_target(&self, g: &GraspConfig) -> Option<&'a TriMesh> {
        if let Some(i) = self.target_object {
            return self.scene.get(i);
        }
        self.scene.iter().min_by(|a, b| {
            let da = a.signed_distance(g.anchor).abs();
            let db = b.signed_distance(g.anchor).abs();
            da.partial_cmp(&db).unwrap()
        })
    }
}

/// Weighted sum `w1 L_chamfer + w2 L_collision + w3 L_guidance + w4 L_quality`.
/// The Chamfer term is present only when the anchor has matched labels; the
/// quality term is evaluated only for nonzero `w4`.
pub fn task_loss(
    g: &GraspConfig,
    matched: &[GraspLabel],
    hand: &HandModel,
    ctx: &LossContext,
    weights: &LossWeights,
    contact: &ContactParams,
) -> Result<DiffValue, LossError> {
    weights.validate()?;
    let state = DiffGraspState::build(g, hand)?;
    task_loss_with_state(&state, g, matched, hand, ctx, weights, contact)
}

pub(crate) fn task_loss_with_state(
    state: &DiffGraspState,
    g: &GraspConfig,
    matched: &[GraspLabel],
    hand: &HandModel,
    ctx: &LossContext,
    weights: &LossWeights,
    contact: &ContactParams,
) -> Result<DiffValue, LossError> {
    let mut total = DiffValue::constant(0.0, state.dim);
    if !matched.is_empty() && weights.w1 != 0.0 {
        total.add_scaled(&chamfer_loss(g, matched, hand)?, weights.w1);
    }
    if weights.w2 != 0.0 {
        let co = collision_loss_with_state(state, hand, ctx.scene, ctx.self_collision)?;
        total.add_scaled(&co, weights.w2);
    }
    if weights.w3 != 0.0 {
        let gu = guidance_loss_with_state(state, hand, ctx.scene)?;
        total.add_scaled(&gu, weights.w3);
    }
    if weights.w4 != 0.0 {
        if let Some(object) = ctx.resolve_target(g) {
            let params = ContactParams {
                com: object.centroid(),
                torque_scale: contact.torque_scale,
                ..contact.clone()
            };
            let contacts = find_contacts_with_state(state, hand, object, &params);
            let q = q1_upper_dim(&contacts, &params, state.dim)?;
            total.add_scaled(&q1_loss(&q), weights.w4);
        }
    }
    Ok(total)
}

/// Confidence-weighted batch loss:
/// `(1/B)(1/m) * sum_i (c_i L_i - w5 ln c_i)` with confidences in (0, 1].
pub fn confidence_joint_loss(
    per_point_losses: &[f64],
    confidences: &[f64],
    w5: f64,
    batch_size: usize,
) -> Result<f64, LossError> {
    if per_point_losses.len() != confidences.len() {
        return Err(LossError::DimensionMismatch {
            expected: per_point_losses.len(),
            actual: confidences.len(),
        });
    }
    for (index, &c) in confidences.iter().enumerate() {
        if !(c > 0.0) {
            return Err(LossError::NonPositiveConfidence { index, value: c });
        }
        if c > 1.0 {
            return Err(LossError::ConfidenceAboveOne { index, value: c });
        }
    }
    let m = per_point_losses.len();
    if m == 0 {
        return Ok(0.0);
    }
    let sum: f64 = per_point_losses
        .iter()
        .zip(confidences)
        .map(|(&l, &c)| c * l - w5 * c.ln())
        .sum();
    Ok(sum / (batch_size as f64 * m as f64))
}
