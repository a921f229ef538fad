//! Gradient-based dense grasp planner: one candidate per sampled cloud
//! point, first-order descent on the task loss, confidence-style scoring,
//! pruning plus farthest-point diversification, and evaluation metrics.

mod eval;
mod init;
mod optimize;
mod select;
mod validity;

pub use eval::{evaluate_scene, plan_scene, EvalReport, GraspOutcome, SceneEval};
pub use init::init_candidates;
pub use optimize::optimize_candidate;
pub use select::score_and_select;
pub use validity::{check_valid, proxy_success};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grasp::GraspConfig;
use crate::losses::{ContactParams, LossWeights};

/// Quality gate used by the success proxy: half the pre-computed
/// dense-sampling value of the antipodal-sphere fixture.
pub const Q1_THRESHOLD_DEFAULT: f64 = 0.042932382245;

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("cloud has {len} points but {m} candidates were requested")]
    TooFewPoints { m: usize, len: usize },
    #[error("bad planner parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
    #[error(transparent)]
    Hand(#[from] crate::hand::HandError),
    #[error(transparent)]
    Loss(#[from] crate::losses::LossError),
    #[error(transparent)]
    Grasp(#[from] crate::grasp::GraspError),
    #[error(transparent)]
    Scene(#[from] crate::scenes::SceneError),
}

/// First-order update rule.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Optimizer {
    GradientDescent,
    Momentum { beta: f64 },
}

/// Planner configuration. Serialized as the planner config file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlannerParams {
    /// Dense prediction count (one candidate per sampled cloud point).
    pub m: usize,
    pub iterations: usize,
    pub step_size: f64,
    pub optimizer: Optimizer,
    pub weights: LossWeights,
    pub contact: ContactParams,
    /// Candidates scoring below this are dropped before selection.
    pub prune_threshold: f64,
    /// Grasps kept per scene after diversification.
    pub k: usize,
    /// Initial palm standoff along the anchor normal; also the pre-grasp
    /// backoff distance.
    pub standoff: f64,
    /// Success-proxy quality gate.
    pub q1_threshold: f64,
    /// Max allowed penetration for a grasp to count as plannable.
    pub penetration_tol: f64,
    pub self_collision: bool,
    pub seed: u64,
}

impl Default for PlannerParams {
    fn default() -> Self {
        PlannerParams {
            m: 512,
            iterations: 200,
            step_size: 1e-3,
            optimizer: Optimizer::Momentum { beta: 0.9 },
            weights: LossWeights::default(),
            contact: ContactParams::default(),
            prune_threshold: 0.15,
            k: 4,
            standoff: 0.02,
            q1_threshold: Q1_THRESHOLD_DEFAULT,
            penetration_tol: 0.002,
            self_collision: true,
            seed: 0,
        }
    }
}

impl PlannerParams {
    pub fn validate(&self) -> Result<(), PlannerError> {
        if self.k < 1 || self.m < self.k {
            return Err(PlannerError::BadParams(format!("need m >= k >= 1, got m={} k={}", self.m, self.k)));
        }
        if !(self.step_size > 0.0) {
            return Err(PlannerError::BadParams(format!("step_size = {}", self.step_size)));
        }
        if !(self.penetration_tol >= 0.0) {
            return Err(PlannerError::BadParams(format!("penetration_tol = {}", self.penetration_tol)));
        }
        self.weights.validate()?;
        self.contact.validate()?;
        Ok(())
    }
}

/// One dense grasp proposal with its confidence-style score and loss trace.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub grasp: GraspConfig,
    /// Index of the anchor in the input cloud.
    pub anchor_index: usize,
    /// `exp(-final task loss)`, in (0, 1].
    pub score: f64,
    /// Task loss per iteration (initial value first).
    pub trace: Vec<f64>,
    /// Times the rotation parameters had to be re-orthogonalized.
    pub rotation_repairs: usize,
}
