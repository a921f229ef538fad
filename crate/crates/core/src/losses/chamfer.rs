//! Chamfer loss: squared parameter-space distance from a grasp to the
//! closest ground-truth label matched at its anchor point.

use crate::grasp::{GraspConfig, GraspLabel};
use crate::hand::HandModel;
use crate::math::Dual;

use super::{DiffValue, LossError};

/// Minimum over the matched labels of the squared Euclidean distance between
/// the grasp's raw parameter vector `[offset, a, b, theta]` and the label in
/// the same anchored layout. The gradient flows only through the argmin
/// label; ties select the lowest index.
pub fn chamfer_loss(
    g: &GraspConfig,
    matched: &[GraspLabel],
    hand: &HandModel,
) -> Result<DiffValue, LossError> {
    if matched.is_empty() {
        return Err(LossError::EmptyLabelSet);
    }
    if g.theta.len() != hand.dof() {
        return Err(LossError::DimensionMismatch { expected: hand.dof(), actual: g.theta.len() });
    }
    let dim = g.param_dim();
    let params = g.flatten();

    // primal argmin first, derivative only for the winner
    let mut best = 0usize;
    let mut best_val = f64::INFINITY;
    let mut label_params: Vec<Vec<f64>> = Vec::with_capacity(matched.len());
    for (k, label) in matched.iter().enumerate() {
        let lp = label.to_params(g.anchor);
        if lp.len() != dim {
            return Err(LossError::DimensionMismatch { expected: dim, actual: lp.len() });
        }
        let d2: f64 = params.iter().zip(&lp).map(|(x, l)| (x - l) * (x - l)).sum();
        if d2 < best_val {
            best_val = d2;
            best = k;
        }
        label_params.push(lp);
    }

    let mut total = Dual::constant(0.0);
    for (i, (&x, &l)) in params.iter().zip(&label_params[best]).enumerate() {
        let diff = Dual::variable(x, i) - Dual::constant(l);
        total += diff * diff;
    }
    Ok(DiffValue::from_dual(total, dim))
}
