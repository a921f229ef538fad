//! Differentiable task-loss stack with gradients w.r.t. the grasp parameter
//! vector `[offset, a, b, theta]`, plus a finite-difference gradient checker.
//!
//! Gradients are propagated with forward-mode dual numbers through the
//! Gram-Schmidt rotation, the kinematic chain, and the loss kernels. Discrete
//! selections (closest surface feature, argmin label, best wrench/direction
//! pair) are made on primal values and held fixed for the derivative, which
//! by the envelope argument is exact almost everywhere.

mod chamfer;
mod collision;
mod contact;
mod gradcheck;
mod guidance;
mod state;
mod task;

pub use chamfer::chamfer_loss;
pub use collision::collision_loss;
pub use contact::{
    find_contacts, q1_loss, q1_upper, sample_directions, Contact,
};
pub use gradcheck::{gradient_check, CoordCheck, GradCheckReport, GRAD_CHECK_TOL};
pub use guidance::guidance_loss;
pub use state::DiffGraspState;
pub use task::{confidence_joint_loss, task_loss, LossContext};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::GeomError;
use crate::grasp::GraspError;
use crate::hand::HandError;
use crate::math::{Dual, Vec3f};

#[derive(Debug, Error)]
pub enum LossError {
    #[error("chamfer loss needs at least one matched label")]
    EmptyLabelSet,
    #[error("expected {expected} entries, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("confidence {value} at index {index} is not positive")]
    NonPositiveConfidence { index: usize, value: f64 },
    #[error("confidence {value} at index {index} exceeds 1")]
    ConfidenceAboveOne { index: usize, value: f64 },
    #[error("invalid loss weights: {0}")]
    InvalidWeights(String),
    #[error("invalid contact parameters: {0}")]
    InvalidContactParams(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Hand(#[from] HandError),
    #[error(transparent)]
    Grasp(#[from] GraspError),
}

/// A scalar loss value paired with its gradient w.r.t. the grasp parameter
/// vector (length 9 + dof).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiffValue {
    pub value: f64,
    pub gradient: Vec<f64>,
}

impl DiffValue {
    pub fn constant(value: f64, dim: usize) -> DiffValue {
        DiffValue { value, gradient: vec![0.0; dim] }
    }

    pub(crate) fn from_dual(d: Dual, dim: usize) -> DiffValue {
        DiffValue { value: d.re, gradient: d.gradient(dim) }
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    /// `self + w * rhs` (gradients combine linearly).
    pub fn add_scaled(&mut self, rhs: &DiffValue, w: f64) {
        self.value += w * rhs.value;
        for (g, r) in self.gradient.iter_mut().zip(&rhs.gradient) {
            *g += w * r;
        }
    }
}

/// Weights of the task-loss terms plus the confidence regularizer weight.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LossWeights {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        LossWeights { w1: 1.0, w2: 1.0, w3: 1.0, w4: 0.0, w5: 1.0 }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<(), LossError> {
        for (name, w) in
            [("w1", self.w1), ("w2", self.w2), ("w3", self.w3), ("w4", self.w4), ("w5", self.w5)]
        {
            if !w.is_finite() || w < 0.0 {
                return Err(LossError::InvalidWeights(format!("{name} = {w}")));
            }
        }
        Ok(())
    }
}

/// Parameters of contact extraction and the grasp-quality upper bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContactParams {
    /// Friction coefficient (> 0).
    pub friction_mu: f64,
    /// Friction-cone discretization edges (>= 3).
    pub cone_edges: usize,
    /// Torque scale weighting the last three wrench components. Pick
    /// 1 / bounding-sphere radius to make forces and torques commensurate.
    pub torque_scale: f64,
    /// Distance below which a hand collision point counts as a contact.
    pub contact_threshold: f64,
    /// Number of sampled wrench-space directions (>= 1).
    pub directions: usize,
    pub direction_seed: u64,
    /// Torque reference point (object center of mass), world frame.
    pub com: Vec3f,
}

impl Default for ContactParams {
    fn default() -> Self {
        ContactParams {
            friction_mu: 0.5,
            cone_edges: 8,
            torque_scale: 1.0,
            contact_threshold: 0.002,
            directions: 64,
            direction_seed: 0,
            com: Vec3f::ZERO,
        }
    }
}

impl ContactParams {
    /// Defaults tied to an object: torque reference at its centroid, torque
    /// scale 1 / bounding radius.
    pub fn for_object(mesh: &crate::geom::TriMesh) -> ContactParams {
        let (center, radius) = mesh.bounding_sphere();
        let com = mesh.centroid();
        let scale = if radius > 1e-9 { 1.0 / radius } else { 1.0 };
        ContactParams { torque_scale: scale, com: if mesh.volume() > 0.0 { com } else { center }, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), LossError> {
        if !(self.friction_mu > 0.0) {
            return Err(LossError::InvalidContactParams(format!(
                "friction_mu = {}",
                self.friction_mu
            )));
        }
        if self.cone_edges < 3 {
            return Err(LossError::InvalidContactParams(format!(
                "cone_edges = {}",
                self.cone_edges
            )));
        }
        if self.directions < 1 {
            return Err(LossError::InvalidContactParams(format!(
                "directions = {}",
                self.directions
            )));
        }
        if !(self.contact_threshold > 0.0) {
            return Err(LossError::InvalidContactParams(format!(
                "contact_threshold = {}",
                self.contact_threshold
            )));
        }
        Ok(())
    }
}
