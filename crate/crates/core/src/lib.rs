//! Differentiable multi-fingered grasp synthesis toolkit.
//!
//! The pipeline: procedural table-top scenes are rendered from four virtual
//! depth cameras and fused into 2048-point clouds; ground-truth grasps are
//! matched densely to cloud points; a gradient-based planner initializes one
//! grasp candidate per sampled cloud point and descends a differentiable task
//! loss (Chamfer to matched labels, collision, guidance, and a grasp-quality
//! upper bound), then prunes and diversifies the survivors.

pub mod geom;
pub mod grasp;
pub mod hand;
pub mod losses;
pub mod math;

pub mod scenes;
