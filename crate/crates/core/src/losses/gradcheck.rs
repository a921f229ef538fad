//! Central finite-difference validation of analytic gradients.
//!
//! Losses built on min/max selections are piecewise smooth: at a selection
//! boundary the central difference averages two branches while the analytic
//! gradient follows the selected one. Such coordinates are detected (the
//! analytic value agrees with one of the one-sided differences) and reported
//! instead of failed.

use crate::grasp::GraspConfig;

use super::{DiffValue, LossError};

/// Relative tolerance of the central-difference comparison.
pub const GRAD_CHECK_TOL: f64 = 1e-4;

/// One-sided agreement tolerance used to classify selection boundaries.
const BOUNDARY_TOL: f64 = 1e-2;

#[derive(Clone, Copy, Debug)]
pub struct CoordCheck {
    pub analytic: f64,
    pub numeric: f64,
    pub rel_error: f64,
    pub boundary: bool,
}

#[derive(Clone, Debug)]
pub struct GradCheckReport {
    pub per_coord: Vec<CoordCheck>,
    /// Max relative error over non-boundary coordinates.
    pub max_rel_error: f64,
    pub worst_coord: usize,
    pub boundary_coords: Vec<usize>,
}

impl GradCheckReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_rel_error < tol
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

/// Compare the analytic gradient of `f` at `g` against central finite
/// differences with step `h`, coordinate by coordinate in the flattened
/// parameter layout.
pub fn gradient_check<F>(f: F, g: &GraspConfig, h: f64) -> Result<GradCheckReport, LossError>
where
    F: Fn(&GraspConfig) -> Result<DiffValue, LossError>,
{
    let base = f(g)?;
    let params = g.flatten();
    let dim = params.len();
    if base.gradient.len() < dim {
        return Err(LossError::DimensionMismatch {
            expected: dim,
            actual: base.gradient.len(),
        });
    }

    let mut per_coord = Vec::with_capacity(dim);
    let mut boundary_coords = Vec::new();
    let mut max_rel_error: f64 = 0.0;
    let mut worst_coord = 0usize;

    for i in 0..dim {
        let mut plus = params.clone();
        plus[i] += h;
        let mut minus = params.clone();
        minus[i] -= h;
        let f_plus = f(&GraspConfig::unflatten(g.anchor, &plus).map_err(LossError::Grasp)?)?.value;
        let f_minus =
            f(&GraspConfig::unflatten(g.anchor, &minus).map_err(LossError::Grasp)?)?.value;

        let analytic = base.gradient[i];
        let numeric = (f_plus - f_minus) / (2.0 * h);
        let rel = rel_err(analytic, numeric);

        // classify kinks: at a selection boundary the analytic gradient
        // follows one branch, so it matches a one-sided difference
        let d_plus = (f_plus - base.value) / h;
        let d_minus = (base.value - f_minus) / h;
        let boundary = rel >= GRAD_CHECK_TOL
            && (rel_err(analytic, d_plus) < BOUNDARY_TOL || rel_err(analytic, d_minus) < BOUNDARY_TOL);

        if boundary {
            boundary_coords.push(i);
        } else if rel > max_rel_error {
            max_rel_error = rel;
            worst_coord = i;
        }
        per_coord.push(CoordCheck { analytic, numeric, rel_error: rel, boundary });
    }

    Ok(GradCheckReport { per_coord, max_rel_error, worst_coord, boundary_coords })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rot6D;
    use crate::hand::JointVector;
    use crate::math::{Dual, Vec3f};

    fn quadratic(g: &GraspConfig) -> Result<DiffValue, LossError> {
        // |x|^2 over the flattened parameters
        let params = g.flatten();
        let mut total = Dual::constant(0.0);
        for (i, &x) in params.iter().enumerate() {
            let v = Dual::variable(x, i);
            total += v * v;
        }
        Ok(DiffValue::from_dual(total, params.len()))
    }

    fn sample_grasp() -> GraspConfig {
        GraspConfig {
            anchor: Vec3f::new(0.1, 0.2, 0.3),
            offset: Vec3f::new(0.02, -0.01, 0.03),
            rot: Rot6D::new(Vec3f::new(1.0, 0.2, -0.1), Vec3f::new(0.1, 0.9, 0.3)),
            theta: JointVector::new(vec![0.3, -0.2, 0.5, 0.1]).unwrap(),
        }
    }

    #[test]
    fn quadratic_matches_exactly() {
        let report = gradient_check(quadratic, &sample_grasp(), 1e-5).unwrap();
        assert!(report.max_rel_error < 1e-9, "max rel {}", report.max_rel_error);
        assert!(report.boundary_coords.is_empty());
    }

    #[test]
    fn argmin_tie_is_flagged_as_boundary() {
        // f(x) = min((x0 - 1)^2, (x0 + 1)^2) evaluated at x0 = 0: a kink.
        // Gradient follows the selected branch (ties to the first).
        let kinked = |g: &GraspConfig| -> Result<DiffValue, LossError> {
            let x = g.flatten()[0];
            let d1 = (x - 1.0) * (x - 1.0);
            let d2 = (x + 1.0) * (x + 1.0);
            let sel = if d1 <= d2 { x - 1.0 } else { x + 1.0 };
            let mut dv = DiffValue::constant(sel * sel, g.param_dim());
            dv.gradient[0] = 2.0 * sel;
            Ok(dv)
        };
        let mut g = sample_grasp();
        g.offset.x = 0.0;
        let report = gradient_check(kinked, &g, 1e-5).unwrap();
        assert!(report.boundary_coords.contains(&0), "kink at coordinate 0 flagged");
        assert!(report.max_rel_error < 1e-6, "other coordinates unaffected");
    }

    #[test]
    fn corrupted_gradient_fails() {
        let corrupted = |g: &GraspConfig| -> Result<DiffValue, LossError> {
            let mut v = quadratic(g)?;
            v.gradient[2] += 0.5;
            Ok(v)
        };
        let report = gradient_check(corrupted, &sample_grasp(), 1e-5).unwrap();
        assert!(report.max_rel_error > 1e-2);
        assert_eq!(report.worst_coord, 2);
    }
}
