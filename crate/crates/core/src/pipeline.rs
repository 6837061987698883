//! Glue between the segmentation, feature and sequence layers: turning
//! detected Key Frame ranges into labeled feature vectors and observation
//! sequences.

use crate::error::{Error, Result};
use crate::event::SyncEvent;
use crate::frame::{resize_bilinear, GrayFrame};
use crate::hmm::ObservationSequence;
use crate::hog::{hog_descriptor, HogParams};
use crate::skeleton::{bone_angles, AngleFeature, BoneSet, SkeletonFrame};

/// The averaging window: up to 5 consecutive frames centered on the
/// representative frame, clipped to the Key Frame range.
fn window_bounds(range: &crate::event::FrameRange, limit: usize) -> (usize, usize) {
    let rep = range.midpoint() as usize;
    let lo = rep.saturating_sub(2).max(range.start() as usize);
    let hi = (rep + 2).min(range.end() as usize).min(limit - 1);
    (lo.min(hi), hi)
}

/// One bone-angle vector per Key Frame range, averaging a 5-frame window
/// around the representative frame.
pub fn angle_features_for_kframes(
    skeleton: &[SkeletonFrame],
    kframes: &[SyncEvent],
    bones: &BoneSet,
) -> Result<Vec<AngleFeature>> {
    if skeleton.is_empty() {
        return Err(Error::TooFewFrames {
            required: 1,
            got: 0,
        });
    }
    kframes
        .iter()
        .map(|psi| {
            if psi.range.end() as usize >= skeleton.len() {
                return Err(Error::InvalidParameter(format!(
                    "kframe range {} exceeds skeleton stream of {} frames",
                    psi.range,
                    skeleton.len()
                )));
            }
            let (lo, hi) = window_bounds(&psi.range, skeleton.len());
            bone_angles(&skeleton[lo..=hi], bones)
        })
        .collect()
}

/// One HOG descriptor per Key Frame range, computed on the representative
/// frame resized to the descriptor geometry.
pub fn hog_features_for_kframes(
    frames: &[GrayFrame],
    kframes: &[SyncEvent],
    params: &HogParams,
) -> Result<Vec<Vec<f64>>> {
    kframes
        .iter()
        .map(|psi| {
            let rep = psi.range.midpoint() as usize;
            if rep >= frames.len() {
                return Err(Error::InvalidParameter(format!(
                    "kframe range {} exceeds frame stream of {} frames",
                    psi.range,
                    frames.len()
                )));
            }
            let (h, w) = params.image_size;
            let resized = resize_bilinear(&frames[rep], w, h)?;
            hog_descriptor(&resized, params)
        })
        .collect()
}

/// Orders the labeled Key Frame features of one performance into an
/// observation sequence for the sequence recognizer.
pub fn sequence_from_features(
    features: &[AngleFeature],
    source: impl Into<String>,
) -> Result<ObservationSequence> {
    ObservationSequence::new(
        features.iter().map(|f| f.values.clone()).collect(),
        source,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{FrameRange, SyncKind};
    use crate::skeleton::JOINT_COUNT;

    fn psi(s: u32, e: u32) -> SyncEvent {
        SyncEvent {
            kind: SyncKind::FullBeat,
            range: FrameRange::new(s, e).unwrap(),
            posture: None,
        }
    }

    #[test]
    fn angle_features_window_clipping() {
        let mut frame = SkeletonFrame::new([[0.0; 3]; JOINT_COUNT]).unwrap();
        for (i, j) in crate::skeleton::Joint::ALL.iter().enumerate() {
            frame.set_position(*j, [0.1 * i as f64 + 0.1, 0.05 * i as f64, 0.4]);
        }
        let stream = vec![frame; 30];
        let feats =
            angle_features_for_kframes(&stream, &[psi(0, 1), psi(10, 20)], &BoneSet::default())
                .unwrap();
        assert_eq!(feats.len(), 2);
        assert_eq!(feats[0].dim(), 24);
    }

    #[test]
    fn angle_features_out_of_range() {
        let mut frame = SkeletonFrame::new([[0.0; 3]; JOINT_COUNT]).unwrap();
        for (i, j) in crate::skeleton::Joint::ALL.iter().enumerate() {
            frame.set_position(*j, [0.1 * i as f64 + 0.1, 0.05 * i as f64, 0.4]);
        }
        let stream = vec![frame; 5];
        assert!(
            angle_features_for_kframes(&stream, &[psi(3, 10)], &BoneSet::default()).is_err()
        );
    }

    #[test]
    fn hog_features_shape() {
        let frames = vec![GrayFrame::filled(64, 48, 30); 20];
        let params = HogParams {
            image_size: (24, 32),
            ..HogParams::default()
        };
        let feats = hog_features_for_kframes(&frames, &[psi(2, 8)], &params).unwrap();
        assert_eq!(feats.len(), 1);
        assert_eq!(feats[0].len(), crate::hog::hog_length(&params).unwrap());
    }
}
