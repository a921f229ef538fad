//! Dense label matching: associate ground-truth grasps to cloud points.
//!
//! A label matches point `i` when its palm reference point lies within
//! `MATCH_DISTANCE` of the point and on the outside of the surface: with
//! `delta = reference - point`, require `|delta| <= 5 mm` and
//! `normal . delta > 0`. Both sides of the distance predicate are compared
//! in squared form so the 5 mm boundary is exact in floating point.

use crate::geom::PointCloud;

use super::GraspLabel;

/// Matching radius in meters.
pub const MATCH_DISTANCE: f64 = 0.005;

/// Per-point matched label indices over a cloud.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSet {
    matches: Vec<Vec<usize>>,
}

impl LabelSet {
    pub fn new(matches: Vec<Vec<usize>>) -> LabelSet {
        LabelSet { matches }
    }

    pub fn len(&self) -> usize {
        self.matches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matches.is_empty()
    }

    /// Indices (into the label list) matched to point `i`.
    pub fn matched_indices(&self, i: usize) -> &[usize] {
        &self.matches[i]
    }

    /// Positive label flag: true iff the point has at least one match.
    pub fn label_flag(&self, i: usize) -> bool {
        !self.matches[i].is_empty()
    }

    pub fn matches(&self) -> &[Vec<usize>] {
        &self.matches
    }

    /// Resolve the matches of point `i` against the label list.
    pub fn labels_for<'a>(&self, i: usize, labels: &'a [GraspLabel]) -> Vec<&'a GraspLabel> {
        self.matches[i].iter().map(|&k| &labels[k]).collect()
    }

    pub fn positive_count(&self) -> usize {
        self.matches.iter().filter(|m| !m.is_empty()).count()
    }
}

/// Match every label against every cloud point. Cloud normals are validated
/// unit-length at cloud construction, so no further checks are needed here.
pub fn match_labels(cloud: &PointCloud, labels: &[GraspLabel]) -> LabelSet {
    let threshold_sq = MATCH_DISTANCE * MATCH_DISTANCE;
    let matches = (0..cloud.len())
        .map(|i| {
            let p = cloud.point(i);
            let n = cloud.normal(i);
            labels
                .iter()
                .enumerate()
                .filter(|(_, label)| {
                    let delta = label.palm_reference_world - p;
                    delta.norm_squared() <= threshold_sq && n.dot(delta) > 0.0
                })
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    LabelSet::new(matches)
}
