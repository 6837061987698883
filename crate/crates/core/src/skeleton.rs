//! Skeleton frames and the bone-orientation posture descriptor.
//!
//! A posture is described by the angles each of 8 upper/lower-limb bones
//! makes with the X, Y and Z axes (24 values). Orientation angles are the
//! only skeleton feature invariant to the dancer's scale and position, so
//! everything else (joint velocities, bone lengths) stays out.

use crate::error::{Error, Result};

/// The 20 tracked joints of a first-generation depth-camera skeleton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Joint {
    SpineBase,
    SpineMid,
    SpineShoulder,
    Head,
    ShoulderLeft,
    ElbowLeft,
    WristLeft,
    HandLeft,
    ShoulderRight,
    ElbowRight,
    WristRight,
    HandRight,
    HipLeft,
    KneeLeft,
    AnkleLeft,
    FootLeft,
    HipRight,
    KneeRight,
    AnkleRight,
    FootRight,
}

pub const JOINT_COUNT: usize = 20;

impl Joint {
    pub const ALL: [Joint; JOINT_COUNT] = [
        Joint::SpineBase,
        Joint::SpineMid,
        Joint::SpineShoulder,
        Joint::Head,
        Joint::ShoulderLeft,
        Joint::ElbowLeft,
        Joint::WristLeft,
        Joint::HandLeft,
        Joint::ShoulderRight,
        Joint::ElbowRight,
        Joint::WristRight,
        Joint::HandRight,
        Joint::HipLeft,
        Joint::KneeLeft,
        Joint::AnkleLeft,
        Joint::FootLeft,
        Joint::HipRight,
        Joint::KneeRight,
        Joint::AnkleRight,
        Joint::FootRight,
    ];

    pub fn index(&self) -> usize {
        *self as usize
    }

    pub fn name(&self) -> &'static str {
        match self {
            Joint::SpineBase => "spine_base",
            Joint::SpineMid => "spine_mid",
            Joint::SpineShoulder => "spine_shoulder",
            Joint::Head => "head",
            Joint::ShoulderLeft => "shoulder_left",
            Joint::ElbowLeft => "elbow_left",
            Joint::WristLeft => "wrist_left",
            Joint::HandLeft => "hand_left",
            Joint::ShoulderRight => "shoulder_right",
            Joint::ElbowRight => "elbow_right",
            Joint::WristRight => "wrist_right",
            Joint::HandRight => "hand_right",
            Joint::HipLeft => "hip_left",
            Joint::KneeLeft => "knee_left",
            Joint::AnkleLeft => "ankle_left",
            Joint::FootLeft => "foot_left",
            Joint::HipRight => "hip_right",
            Joint::KneeRight => "knee_right",
            Joint::AnkleRight => "ankle_right",
            Joint::FootRight => "foot_right",
        }
    }

    pub fn from_name(name: &str) -> Option<Joint> {
        Joint::ALL.iter().copied().find(|j| j.name() == name)
    }
}

pub type Point3 = [f64; 3];

/// 3D positions (meters) of all 20 joints at one video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonFrame {
    joints: [Point3; JOINT_COUNT],
}

impl SkeletonFrame {
    pub fn new(joints: [Point3; JOINT_COUNT]) -> Result<Self> {
        for (i, p) in joints.iter().enumerate() {
            if !p.iter().all(|v| v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coordinate for joint {}",
                    Joint::ALL[i].name()
                )));
            }
        }
        Ok(Self { joints })
    }

    /// Builds a frame from named positions; all 20 joints must be present.
    pub fn from_named<I: IntoIterator<Item = (Joint, Point3)>>(positions: I) -> Result<Self> {
        let mut joints = [[f64::NAN; 3]; JOINT_COUNT];
        let mut seen = [false; JOINT_COUNT];
        for (joint, p) in positions {
            joints[joint.index()] = p;
            seen[joint.index()] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!(
                "missing joint {}",
                Joint::ALL[missing].name()
            )));
        }
        Self::new(joints)
    }

    pub fn position(&self, joint: Joint) -> Point3 {
        self.joints[joint.index()]
    }

    pub fn set_position(&mut self, joint: Joint, p: Point3) {
        self.joints[joint.index()] = p;
    }

    pub fn positions(&self) -> &[Point3; JOINT_COUNT] {
        &self.joints
    }

    pub fn translated(&self, delta: Point3) -> Self {
        let mut joints = self.joints;
        for p in &mut joints {
            for k in 0..3 {
                p[k] += delta[k];
            }
        }
        Self { joints }
    }

    /// Uniform scaling about a fixed point.
    pub fn scaled(&self, factor: f64, about: Point3) -> Self {
        let mut joints = self.joints;
        for p in &mut joints {
            for k in 0..3 {
                p[k] = about[k] + (p[k] - about[k]) * factor;
            }
        }
        Self { joints }
    }
}

/// Ordered collection of (parent, child) joint pairs whose orientations make
/// up the descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct BoneSet {
    bones: Vec<(Joint, Joint)>,
}

impl BoneSet {
    pub fn new(bones: Vec<(Joint, Joint)>) -> Result<Self> {
        if bones.is_empty() {
            return Err(Error::InvalidParameter("empty bone set".into()));
        }
        Ok(Self { bones })
    }

    pub fn bones(&self) -> &[(Joint, Joint)] {
        &self.bones
    }

    pub fn len(&self) -> usize {
        self.bones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bones.is_empty()
    }

    /// Feature dimension: three axis angles per bone.
    pub fn angle_dim(&self) -> usize {
        self.bones.len() * 3
    }
}

impl Default for BoneSet {
    /// The 8 shoulder/arm and hip/leg bones, in fixed order: spine-shoulder
    /// to each shoulder, shoulder to elbow on both sides, spine-base to each
    /// hip, hip to knee on both sides.
    fn default() -> Self {
        Self {
            bones: vec![
                (Joint::SpineShoulder, Joint::ShoulderLeft),
                (Joint::SpineShoulder, Joint::ShoulderRight),
                (Joint::ShoulderLeft, Joint::ElbowLeft),
                (Joint::ShoulderRight, Joint::ElbowRight),
                (Joint::SpineBase, Joint::HipLeft),
                (Joint::SpineBase, Joint::HipRight),
                (Joint::HipLeft, Joint::KneeLeft),
                (Joint::HipRight, Joint::KneeRight),
            ],
        }
    }
}

/// Angle feature dimension for the default bone set.
pub const ANGLE_DIM: usize = 24;

/// Bone-axis angles in degrees, bone-major then axis (X, Y, Z).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleFeature {
    pub values: Vec<f64>,
}

impl AngleFeature {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Computes the bone-orientation descriptor over a short window of skeleton
/// frames. Joint coordinates are averaged across the window first (the noise
/// remedy for ill-formed skeletons); the usual window is 5 consecutive
/// frames, fewer are accepted at stream edges.
///
/// Each bone vector (child minus parent) contributes its unsigned angle with
/// the X, Y and Z axes: arccos(v·u / |v|), clamped to [0°, 180°].
pub fn bone_angles(frames: &[SkeletonFrame], bones: &BoneSet) -> Result<AngleFeature> {
    if frames.is_empty() {
        return Err(Error::TooFewFrames {
            required: 1,
            got: 0,
        });
    }
    let n = frames.len() as f64;
    let mut mean = [[0.0f64; 3]; JOINT_COUNT];
    for frame in frames {
        for (acc, p) in mean.iter_mut().zip(frame.positions()) {
            for k in 0..3 {
                acc[k] += p[k];
            }
        }
    }
    for p in &mut mean {
        for coord in p.iter_mut() {
            *coord /= n;
        }
    }

    let mut values = Vec::with_capacity(bones.angle_dim());
    for &(parent, child) in bones.bones() {
        let a = mean[parent.index()];
        let b = mean[child.index()];
        let v = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm == 0.0 {
            return Err(Error::DegenerateBone(format!(
                "{}->{}",
                parent.name(),
                child.name()
            )));
        }
        for component in v {
            let cos = (component / norm).clamp(-1.0, 1.0);
            values.push(cos.acos().to_degrees());
        }
    }
    Ok(AngleFeature { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn frame_with(positions: &[(Joint, Point3)]) -> SkeletonFrame {
        let mut f = SkeletonFrame::new([[0.0, 0.0, 0.0]; JOINT_COUNT]).unwrap();
        // spread all joints out so no default bone is degenerate
        for (i, j) in Joint::ALL.iter().enumerate() {
            f.set_position(*j, [i as f64 * 0.1 + 0.1, i as f64 * 0.05, 0.3]);
        }
        for &(j, p) in positions {
            f.set_position(j, p);
        }
        f
    }

    #[test]
    fn axis_aligned_bone() {
        let f = frame_with(&[
            (Joint::SpineShoulder, [0.0, 0.0, 0.0]),
            (Joint::ShoulderLeft, [1.0, 0.0, 0.0]),
        ]);
        let angles = bone_angles(&[f], &BoneSet::default()).unwrap();
        assert_relative_eq!(angles.values[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(angles.values[1], 90.0, epsilon = 1e-12);
        assert_relative_eq!(angles.values[2], 90.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_bone() {
        let s = 1.0 / 2.0f64.sqrt();
        let f = frame_with(&[
            (Joint::SpineShoulder, [0.0, 0.0, 0.0]),
            (Joint::ShoulderLeft, [s, s, 0.0]),
        ]);
        let angles = bone_angles(&[f], &BoneSet::default()).unwrap();
        assert_relative_eq!(angles.values[0], 45.0, epsilon = 1e-9);
        assert_relative_eq!(angles.values[1], 45.0, epsilon = 1e-9);
        assert_relative_eq!(angles.values[2], 90.0, epsilon = 1e-9);
    }

    #[test]
    fn window_averaging() {
        // 4 frames at the origin and 1 at (5,0,0): mean joint sits at (1,0,0)
        let base = frame_with(&[
            (Joint::SpineShoulder, [0.0, 0.0, 0.0]),
            (Joint::ShoulderLeft, [0.0, 0.0, 0.0]),
        ]);
        let shifted = frame_with(&[
            (Joint::SpineShoulder, [0.0, 0.0, 0.0]),
            (Joint::ShoulderLeft, [5.0, 0.0, 0.0]),
        ]);
        let frames = vec![base.clone(), base.clone(), base.clone(), base, shifted];
        let angles = bone_angles(&frames, &BoneSet::default()).unwrap();
        // mean bone vector is exactly (1, 0, 0)
        assert_relative_eq!(angles.values[0], 0.0, epsilon = 1e-9);
        assert_relative_eq!(angles.values[1], 90.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_bone_named() {
        let f = frame_with(&[
            (Joint::SpineShoulder, [0.5, 0.5, 0.5]),
            (Joint::ShoulderLeft, [0.5, 0.5, 0.5]),
        ]);
        match bone_angles(&[f], &BoneSet::default()) {
            Err(Error::DegenerateBone(name)) => {
                assert_eq!(name, "spine_shoulder->shoulder_left")
            }
            other => panic!("expected degenerate bone error, got {other:?}"),
        }
    }

    #[test]
    fn empty_window_rejected() {
        assert!(matches!(
            bone_angles(&[], &BoneSet::default()),
            Err(Error::TooFewFrames { .. })
        ));
    }

    #[test]
    fn angles_within_bounds() {
        let f = frame_with(&[]);
        let angles = bone_angles(&[f], &BoneSet::default()).unwrap();
        assert_eq!(angles.dim(), ANGLE_DIM);
        assert!(angles.values.iter().all(|&a| (0.0..=180.0).contains(&a)));
    }

    #[test]
    fn direction_cosines_sum_to_one() {
        let f = frame_with(&[]);
        let angles = bone_angles(&[f], &BoneSet::default()).unwrap();
        for bone in angles.values.chunks(3) {
            let sum: f64 = bone.iter().map(|a| a.to_radians().cos().powi(2)).sum();
            assert_relative_eq!(sum, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn joint_names_round_trip() {
        for j in Joint::ALL {
            assert_eq!(Joint::from_name(j.name()), Some(j));
        }
        assert_eq!(Joint::from_name("nose"), None);
    }
}
