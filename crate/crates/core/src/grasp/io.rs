//! Label file formats: line-delimited JSON grasp labels, and the label-set
//! file mapping cloud points to label indices.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::geom::{mat_to_quat, quat_to_mat, RigidTransform};
use crate::hand::{HandModel, JointVector};
use crate::math::Vec3f;

use super::{GraspError, GraspLabel, LabelSet};

#[derive(Serialize, Deserialize)]
struct LabelLine {
    translation: [f64; 3],
    /// Unit quaternion `[w, x, y, z]`.
    quaternion: [f64; 4],
    joints: Vec<f64>,
}

/// Read grasp labels, one JSON object per line. The palm reference point is
/// recomputed from the hand, so files stay format-stable across hands.
pub fn read_labels_jsonl(path: &Path, hand: &HandModel) -> Result<Vec<GraspLabel>, GraspError> {
    let file = std::fs::File::open(path)?;
    let mut labels = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: LabelLine = serde_json::from_str(&line)
            .map_err(|e| GraspError::LabelParse { line: idx + 1, detail: e.to_string() })?;
        let rotation = quat_to_mat(parsed.quaternion)?;
        let pose = RigidTransform::new(rotation, Vec3f::from_array(parsed.translation))?;
        let theta = JointVector::new(parsed.joints).map_err(GraspError::Hand)?;
        labels.push(GraspLabel::new(pose, theta, hand));
    }
    Ok(labels)
}

/// Write labels in the line-delimited format read by [`read_labels_jsonl`].
pub fn write_labels_jsonl(path: &Path, labels: &[GraspLabel]) -> Result<(), GraspError> {
    let mut out = std::fs::File::create(path)?;
    for label in labels {
        let line = LabelLine {
            translation: label.palm_pose.translation.to_array(),
            quaternion: mat_to_quat(&label.palm_pose.rotation),
            joints: label.theta.to_vec(),
        };
        let text = serde_json::to_string(&line)
            .map_err(|e| GraspError::LabelParse { line: 0, detail: e.to_string() })?;
        writeln!(out, "{text}")?;
    }
    Ok(())
}

/// Serialized label set: the checksum ties it to a specific cloud file.
#[derive(Serialize, Deserialize)]
pub struct LabelSetFile {
    pub cloud_sha256: String,
    pub labels_file: String,
    pub matches: Vec<Vec<usize>>,
}

impl LabelSetFile {
    pub fn new(cloud_sha256: String, labels_file: String, set: &LabelSet) -> LabelSetFile {
        LabelSetFile { cloud_sha256, labels_file, matches: set.matches().to_vec() }
    }

    pub fn to_label_set(&self) -> LabelSet {
        LabelSet::new(self.matches.clone())
    }

    pub fn save(&self, path: &Path) -> Result<(), GraspError> {
        let text = serde_json::to_string(self)
            .map_err(|e| GraspError::LabelParse { line: 0, detail: e.to_string() })?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<LabelSetFile, GraspError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| GraspError::LabelParse { line: 0, detail: e.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hand::simple_two_finger;
    use crate::math::Mat3f;

    #[test]
    fn labels_round_trip_through_jsonl() {
        let hand = simple_two_finger();
        let labels: Vec<GraspLabel> = (0..5)
            .map(|i| {
                let rot = Mat3f::from_axis_angle(
                    Vec3f::new(0.3, 0.5 + i as f64, 0.2).normalized(),
                    0.3 * i as f64,
                );
                GraspLabel::new(
                    RigidTransform::new(rot, Vec3f::new(0.01 * i as f64, 0.0, 0.1)).unwrap(),
                    JointVector::new(vec![0.1 * i as f64; 4]).unwrap(),
                    &hand,
                )
            })
            .collect();
        let dir = std::env::temp_dir().join(format!("dg_labels_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("labels.jsonl");
        write_labels_jsonl(&path, &labels).unwrap();
        let back = read_labels_jsonl(&path, &hand).unwrap();
        assert_eq!(back.len(), labels.len());
        for (a, b) in labels.iter().zip(&back) {
            assert!((a.palm_pose.translation - b.palm_pose.translation).norm() < 1e-12);
            assert!((a.palm_reference_world - b.palm_reference_world).norm() < 1e-12);
            assert_eq!(a.theta, b.theta);
            for c in 0..3 {
                assert!((a.palm_pose.rotation.cols[c] - b.palm_pose.rotation.cols[c]).norm() < 1e-12);
            }
        }
        std::fs::remove_dir_all(&dir).ok();
    }
}
