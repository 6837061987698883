//! Synthetic ground-truth generator: whole performances (skeleton stream,
//! rendered grayscale frames, beat track, annotations), Gaussian cluster
//! sets, and labeled observation-sequence datasets. Everything is
//! deterministic given a seed, and every artifact carries its exact ground
//! truth, so generated data can act as the oracle for the full pipeline.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::event::{
    AnnotationRecord, AudioEvent, AudioEventKind, FrameRange, DEFAULT_BEAT_WINDOW,
};
use crate::frame::GrayFrame;
use crate::hmm::ObservationSequence;
use crate::numeric::derive_seed;
use crate::skeleton::{bone_angles, BoneSet, Joint, Point3, SkeletonFrame, JOINT_COUNT};

/// Bols of the Natta Sollukattu, cycling over the full beats of a bar.
pub const NATTA_BOLS: [&str; 4] = ["tei yum", "tat tat", "tei yum", "ta"];

/// One Adavu blueprint: which posture is struck at each beat and how the
/// timeline divides into holds and transitions.
#[derive(Debug, Clone, PartialEq)]
pub struct AdavuSpec {
    pub label: String,
    /// Posture class per beat, in performance order.
    pub postures: Vec<String>,
    /// Canonical skeleton pose per posture class.
    pub poses: BTreeMap<String, SkeletonFrame>,
    /// Frames between consecutive full beats.
    pub tempo_period: u32,
    /// Fraction of each beat period spent stationary in the posture.
    pub hold_fraction: f64,
}

impl AdavuSpec {
    pub fn new(
        label: impl Into<String>,
        postures: Vec<String>,
        poses: BTreeMap<String, SkeletonFrame>,
        tempo_period: u32,
        hold_fraction: f64,
    ) -> Result<Self> {
        if postures.is_empty() {
            return Err(Error::InvalidParameter("empty posture sequence".into()));
        }
        if !(0.0..1.0).contains(&hold_fraction) || hold_fraction == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hold fraction {hold_fraction} must be in (0, 1)"
            )));
        }
        if tempo_period < 4 {
            return Err(Error::InvalidParameter(
                "tempo period must be at least 4 frames".into(),
            ));
        }
        for p in &postures {
            if !poses.contains_key(p) {
                return Err(Error::InvalidParameter(format!(
                    "no canonical pose for posture {p}"
                )));
            }
        }
        Ok(Self {
            label: label.into(),
            postures,
            poses,
            tempo_period,
            hold_fraction,
        })
    }

    /// Number of distinct posture classes: the natural hidden-state count of
    /// this Adavu's sequence model.
    pub fn distinct_postures(&self) -> usize {
        let mut set: Vec<&str> = self.postures.iter().map(|s| s.as_str()).collect();
        set.sort_unstable();
        set.dedup();
        set.len()
    }

    /// Number of distinct (posture, successor) pairs. When struck postures
    /// carry anticipation of the next move, each such pair forms its own
    /// cluster in feature space, so this is the right hidden-state count for
    /// separating order-permuted Adavus that share a posture multiset.
    pub fn distinct_contexts(&self) -> usize {
        let mut set: Vec<(&str, Option<&str>)> = self
            .postures
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), self.postures.get(i + 1).map(|s| s.as_str())))
            .collect();
        set.sort_unstable();
        set.dedup();
        set.len()
    }

    pub fn hold_len(&self) -> u32 {
        ((self.tempo_period as f64 * self.hold_fraction).round() as u32)
            .clamp(1, self.tempo_period - 2)
    }
}

/// Perturbations applied on top of the clean ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Per-coordinate jitter sigma (meters) on every reported skeleton joint.
    pub joint_jitter: f64,
    /// Fraction of frame pixels perturbed per frame.
    pub pixel_noise_rate: f64,
    /// Maximum absolute intensity perturbation of a noisy pixel.
    pub pixel_noise_amplitude: u8,
    /// Maximum absolute shift (frames) of a reported beat position.
    pub beat_jitter: u32,
    /// Fraction by which a struck posture leans toward the posture that
    /// follows it. Dancers prepare the next move while holding the current
    /// one, so the same posture class looks systematically different
    /// depending on its successor. Applied by the sequence generator only;
    /// rendered performances keep their holds frozen.
    pub anticipation: f64,
    pub seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            joint_jitter: 0.0,
            pixel_noise_rate: 0.0,
            pixel_noise_amplitude: 0,
            beat_jitter: 0,
            anticipation: 0.0,
            seed: 0,
        }
    }
}

/// Geometry of the rendered grayscale frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderConfig {
    pub width: usize,
    pub height: usize,
    /// Pixels per meter.
    pub scale: f64,
    /// Half-width of rendered limbs in pixels.
    pub limb_radius: i32,
    pub body_intensity: u8,
    pub background: u8,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            width: 640,
            height: 480,
            scale: 240.0,
            limb_radius: 5,
            body_intensity: 220,
            background: 24,
        }
    }
}

/// One generated performance with its exact ground truth.
#[derive(Debug, Clone)]
pub struct Performance {
    pub label: String,
    pub skeleton: Vec<SkeletonFrame>,
    pub frames: Vec<GrayFrame>,
    pub beats: Vec<AudioEvent>,
    pub annotations: Vec<AnnotationRecord>,
}

/// Parametric posture: limb swing angles in degrees, measured from straight
/// down in the frontal plane.
#[derive(Debug, Clone, Copy)]
struct PoseParams {
    arm_left: f64,
    arm_right: f64,
    bend_left: f64,
    bend_right: f64,
    leg_left: f64,
    leg_right: f64,
}

/// Hand-picked parameter table for the 23 posture classes. Only mutual
/// distinctness of the resulting bone angles matters; each row differs from
/// every other by a substantial swing on at least one featured limb.
const POSE_TABLE: [(f64, f64, f64, f64, f64, f64); 23] = [
    (15.0, 15.0, 0.0, 0.0, 12.0, 12.0),    // C01
    (90.0, 15.0, 0.0, 0.0, 12.0, 35.0),    // C02
    (15.0, 90.0, 0.0, 0.0, 35.0, 12.0),    // C03
    (90.0, 90.0, 0.0, 0.0, 12.0, 12.0),    // C04
    (120.0, 120.0, 0.0, 0.0, 12.0, 12.0),  // C05
    (45.0, 45.0, 0.0, 0.0, 30.0, 30.0),    // C06
    (70.0, 70.0, 40.0, 40.0, 12.0, 12.0),  // C07
    (160.0, 15.0, 0.0, 0.0, 12.0, 12.0),   // C08
    (15.0, 160.0, 0.0, 0.0, 12.0, 12.0),   // C09
    (160.0, 160.0, 0.0, 0.0, 30.0, 30.0),  // C10
    (45.0, 120.0, 0.0, 0.0, 12.0, 12.0),   // C11
    (120.0, 45.0, 0.0, 0.0, 12.0, 12.0),   // C12
    (90.0, 45.0, 30.0, 0.0, 35.0, 12.0),   // C13
    (45.0, 90.0, 0.0, 30.0, 12.0, 35.0),   // C14
    (70.0, 110.0, 20.0, 20.0, 20.0, 20.0), // C15
    (110.0, 70.0, 20.0, 20.0, 20.0, 20.0), // C16
    (30.0, 70.0, 60.0, 0.0, 12.0, 12.0),   // C17
    (70.0, 30.0, 0.0, 60.0, 12.0, 12.0),   // C18
    (100.0, 140.0, 0.0, 0.0, 40.0, 12.0),  // C19
    (140.0, 100.0, 0.0, 0.0, 12.0, 40.0),  // C20
    (55.0, 150.0, 10.0, 10.0, 25.0, 45.0), // C21
    (150.0, 55.0, 10.0, 10.0, 45.0, 25.0), // C22
    (130.0, 130.0, 50.0, 50.0, 35.0, 35.0), // C23
];

fn build_pose(p: PoseParams) -> SkeletonFrame {
    let z = 2.8;
    let mut f = SkeletonFrame::new([[0.0; 3]; JOINT_COUNT]).expect("zeros are finite");
    let set = |f: &mut SkeletonFrame, j: Joint, x: f64, y: f64| {
        f.set_position(j, [x, y, z]);
    };
    set(&mut f, Joint::SpineBase, 0.0, 1.00);
    set(&mut f, Joint::SpineMid, 0.0, 1.25);
    set(&mut f, Joint::SpineShoulder, 0.0, 1.45);
    set(&mut f, Joint::Head, 0.0, 1.62);
    set(&mut f, Joint::ShoulderLeft, -0.19, 1.42);
    set(&mut f, Joint::ShoulderRight, 0.19, 1.42);
    set(&mut f, Joint::HipLeft, -0.10, 0.97);
    set(&mut f, Joint::HipRight, 0.10, 0.97);

    let limb = |origin: Point3, angle_deg: f64, len: f64, side: f64| -> Point3 {
        let a = angle_deg.to_radians();
        [
            origin[0] + side * a.sin() * len,
            origin[1] - a.cos() * len,
            origin[2],
        ]
    };

    // arms: upper arm swings by the arm angle, forearm adds the bend
    let el = limb(f.position(Joint::ShoulderLeft), p.arm_left, 0.28, -1.0);
    f.set_position(Joint::ElbowLeft, el);
    let wl = limb(el, p.arm_left + p.bend_left, 0.26, -1.0);
    f.set_position(Joint::WristLeft, wl);
    f.set_position(Joint::HandLeft, limb(wl, p.arm_left + p.bend_left, 0.08, -1.0));

    let er = limb(f.position(Joint::ShoulderRight), p.arm_right, 0.28, 1.0);
    f.set_position(Joint::ElbowRight, er);
    let wr = limb(er, p.arm_right + p.bend_right, 0.26, 1.0);
    f.set_position(Joint::WristRight, wr);
    f.set_position(
        Joint::HandRight,
        limb(wr, p.arm_right + p.bend_right, 0.08, 1.0),
    );

    // legs: thigh swings, shank stays vertical
    let kl = limb(f.position(Joint::HipLeft), p.leg_left, 0.42, -1.0);
    f.set_position(Joint::KneeLeft, kl);
    let al = [kl[0], kl[1] - 0.40, kl[2]];
    f.set_position(Joint::AnkleLeft, al);
    f.set_position(Joint::FootLeft, [al[0] - 0.02, al[1] - 0.04, al[2] + 0.12]);

    let kr = limb(f.position(Joint::HipRight), p.leg_right, 0.42, 1.0);
    f.set_position(Joint::KneeRight, kr);
    let ar = [kr[0], kr[1] - 0.40, kr[2]];
    f.set_position(Joint::AnkleRight, ar);
    f.set_position(Joint::FootRight, [ar[0] + 0.02, ar[1] - 0.04, ar[2] + 0.12]);

    f
}

/// The 23 canonical posture poses, keyed C01..C23.
pub fn canonical_poses() -> BTreeMap<String, SkeletonFrame> {
    POSE_TABLE
        .iter()
        .enumerate()
        .map(|(i, &(al, ar, bl, br, ll, lr))| {
            (
                format!("C{:02}", i + 1),
                build_pose(PoseParams {
                    arm_left: al,
                    arm_right: ar,
                    bend_left: bl,
                    bend_right: br,
                    leg_left: ll,
                    leg_right: lr,
                }),
            )
        })
        .collect()
}

/// Neutral stance held before the first beat; distinct from every posture
/// class so the opening no-motion run never merges with the first hold.
pub fn rest_pose() -> SkeletonFrame {
    build_pose(PoseParams {
        arm_left: 5.0,
        arm_right: 5.0,
        bend_left: 0.0,
        bend_right: 0.0,
        leg_left: 5.0,
        leg_right: 5.0,
    })
}

/// The eight Natta Adavu blueprints with their fixed posture orders. Natta 1
/// and Natta 2 share the same posture multiset and differ only in order;
/// Natta 8's transition beats carry no Key Posture and are left out.
pub fn natta_specs(tempo_period: u32, hold_fraction: f64) -> Result<Vec<AdavuSpec>> {
    let poses = canonical_poses();
    let seqs: [(&str, &[&str]); 8] = [
        (
            "Natta1",
            &[
                "C02", "C01", "C03", "C01", "C02", "C01", "C03", "C01", "C02", "C01", "C03",
                "C01", "C02", "C01", "C03", "C01",
            ],
        ),
        (
            "Natta2",
            &[
                "C02", "C01", "C02", "C01", "C03", "C01", "C03", "C01", "C02", "C01", "C02",
                "C01", "C03", "C01", "C03", "C01",
            ],
        ),
        (
            "Natta3",
            &[
                "C02", "C01", "C03", "C01", "C04", "C04", "C02", "C01", "C03", "C01", "C02",
                "C01", "C05", "C05", "C03", "C01",
            ],
        ),
        (
            "Natta4",
            &[
                "C02", "C01", "C02", "C01", "C03", "C01", "C03", "C01", "C04", "C04", "C04",
                "C04", "C02", "C01", "C02", "C01", "C03", "C01", "C03", "C01", "C02", "C01",
                "C02", "C01", "C05", "C05", "C05", "C05", "C03", "C01", "C03", "C01",
            ],
        ),
        (
            "Natta5",
            &[
                "C07", "C07", "C06", "C06", "C02", "C01", "C02", "C01", "C07", "C07", "C06",
                "C06", "C03", "C01", "C03", "C01",
            ],
        ),
        (
            "Natta6",
            &[
                "C08", "C08", "C10", "C10", "C02", "C01", "C02", "C01", "C09", "C09", "C11",
                "C11", "C03", "C01", "C03", "C01",
            ],
        ),
        (
            "Natta7",
            &[
                "C12", "C12", "C14", "C14", "C07", "C07", "C06", "C06", "C13", "C13", "C15",
                "C15", "C07", "C07", "C06", "C06",
            ],
        ),
        (
            "Natta8",
            &[
                "C16", "C16", "C18", "C19", "C21", "C23", "C17", "C17", "C18", "C20", "C22",
                "C23",
            ],
        ),
    ];
    seqs.iter()
        .map(|(label, seq)| {
            AdavuSpec::new(
                *label,
                seq.iter().map(|s| s.to_string()).collect(),
                poses.clone(),
                tempo_period,
                hold_fraction,
            )
        })
        .collect()
}

const SKELETON_EDGES: [(Joint, Joint); 19] = [
    (Joint::SpineBase, Joint::SpineMid),
    (Joint::SpineMid, Joint::SpineShoulder),
    (Joint::SpineShoulder, Joint::Head),
    (Joint::SpineShoulder, Joint::ShoulderLeft),
    (Joint::ShoulderLeft, Joint::ElbowLeft),
    (Joint::ElbowLeft, Joint::WristLeft),
    (Joint::WristLeft, Joint::HandLeft),
    (Joint::SpineShoulder, Joint::ShoulderRight),
    (Joint::ShoulderRight, Joint::ElbowRight),
    (Joint::ElbowRight, Joint::WristRight),
    (Joint::WristRight, Joint::HandRight),
    (Joint::SpineBase, Joint::HipLeft),
    (Joint::HipLeft, Joint::KneeLeft),
    (Joint::KneeLeft, Joint::AnkleLeft),
    (Joint::AnkleLeft, Joint::FootLeft),
    (Joint::SpineBase, Joint::HipRight),
    (Joint::HipRight, Joint::KneeRight),
    (Joint::KneeRight, Joint::AnkleRight),
    (Joint::AnkleRight, Joint::FootRight),
];

/// Orthographically projects and paints the skeleton as thick limbs.
pub fn render_pose(pose: &SkeletonFrame, cfg: &RenderConfig) -> GrayFrame {
    let mut img = GrayFrame::filled(cfg.width, cfg.height, cfg.background);
    let project = |p: Point3| -> (f64, f64) {
        (
            cfg.width as f64 / 2.0 + p[0] * cfg.scale,
            cfg.height as f64 * 0.95 - p[1] * cfg.scale,
        )
    };
    let mut stamp = |cx: f64, cy: f64| {
        let r = cfg.limb_radius;
        let (cxi, cyi) = (cx.round() as i32, cy.round() as i32);
        for dy in -r..=r {
            for dx in -r..=r {
                if dx * dx + dy * dy > r * r {
                    continue;
                }
                let (x, y) = (cxi + dx, cyi + dy);
                if x >= 0 && y >= 0 && (x as usize) < cfg.width && (y as usize) < cfg.height {
                    img.set(x as usize, y as usize, cfg.body_intensity);
                }
            }
        }
    };
    for (a, b) in SKELETON_EDGES {
        let (ax, ay) = project(pose.position(a));
        let (bx, by) = project(pose.position(b));
        let len = (bx - ax).hypot(by - ay);
        let steps = len.ceil().max(1.0) as usize;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            stamp(ax + t * (bx - ax), ay + t * (by - ay));
        }
    }
    img
}

/// Piecewise timeline of one performance: where each hold sits and which
/// pose is active at any frame.
struct Timeline<'a> {
    spec: &'a AdavuSpec,
    hold_len: u32,
    rest: SkeletonFrame,
}

impl Timeline<'_> {
    fn beat_frame(&self, k: usize) -> u32 {
        self.spec.tempo_period * (k as u32 + 1)
    }

    fn hold_range(&self, k: usize) -> FrameRange {
        let start = self.beat_frame(k);
        FrameRange::new(start, start + self.hold_len - 1).expect("hold bounds ordered")
    }

    fn total_frames(&self) -> u32 {
        self.hold_range(self.spec.postures.len() - 1).end() + 1
    }

    fn pose_of(&self, idx: isize) -> &SkeletonFrame {
        if idx < 0 {
            &self.rest
        } else {
            &self.spec.poses[&self.spec.postures[idx as usize]]
        }
    }

    /// Clean (noise-free) pose at a frame. Transitions interpolate linearly
    /// between the surrounding holds; a repeated posture gets a triangular
    /// re-strike excursion so consecutive identical holds stay separable.
    fn pose_at(&self, frame: u32) -> SkeletonFrame {
        let tempo = self.spec.tempo_period;
        let n = self.spec.postures.len();
        // index of the hold starting at or after `frame`
        let next_idx = if frame < tempo {
            0
        } else {
            (((frame - tempo) / tempo) as usize + 1).min(n - 1)
        };
        let cur_hold_start = self.beat_frame(next_idx.min(n - 1));
        if frame >= cur_hold_start {
            // inside (or past) the last hold
            let idx = ((frame - tempo) / tempo) as usize;
            let idx = idx.min(n - 1);
            let hold = self.hold_range(idx);
            if frame <= hold.end() {
                return self.pose_of(idx as isize).clone();
            }
            // tail transition after the final hold never happens: streams end
            // at the last hold. Fall through defensively.
            return self.pose_of(idx as isize).clone();
        }
        // between hold (next_idx - 1) and hold next_idx
        let prev_idx = next_idx as isize - 1;
        let prev_end = if prev_idx < 0 {
            // rest hold occupies the frames before the first transition
            self.beat_frame(0) - (tempo - self.hold_len) - 1
        } else {
            self.hold_range(prev_idx as usize).end()
        };
        if frame <= prev_end {
            return self.pose_of(prev_idx).clone();
        }
        let next_start = self.beat_frame(next_idx);
        // the interpolation hits the target pose on the LAST transition
        // frame, so the first hold frame shows zero difference against its
        // predecessor and the detected no-motion run starts exactly at the
        // hold boundary
        let step = frame - prev_end;
        let trans_frames = next_start - prev_end - 1;
        let from = self.pose_of(prev_idx);
        let to = self.pose_of(next_idx as isize);
        if from == to {
            restrike(from, step, trans_frames)
        } else {
            blend(from, to, step as f64 / trans_frames as f64)
        }
    }
}

fn blend(a: &SkeletonFrame, b: &SkeletonFrame, t: f64) -> SkeletonFrame {
    let mut joints = [[0.0f64; 3]; JOINT_COUNT];
    for (i, joint) in joints.iter_mut().enumerate() {
        let pa = a.positions()[i];
        let pb = b.positions()[i];
        for k in 0..3 {
            joint[k] = pa[k] + (pb[k] - pa[k]) * t;
        }
    }
    SkeletonFrame::new(joints).expect("blend of finite poses is finite")
}

/// Re-strike excursion between two identical holds: the extremities lift and
/// return along a triangular profile whose apex lands exactly on one frame,
/// so no two consecutive transition frames can coincide. The excursion is
/// back to zero on the last transition frame (`step == total`), mirroring
/// how a blend reaches its target pose there.
fn restrike(pose: &SkeletonFrame, step: u32, total: u32) -> SkeletonFrame {
    let peak = (total / 2).max(1);
    let amp = if step <= peak {
        step as f64 / peak as f64
    } else {
        (total - step) as f64 / (total - peak) as f64
    };
    let delta = [0.03, 0.14, 0.0];
    let mut out = pose.clone();
    for j in [
        Joint::ElbowLeft,
        Joint::WristLeft,
        Joint::HandLeft,
        Joint::ElbowRight,
        Joint::WristRight,
        Joint::HandRight,
        Joint::KneeLeft,
        Joint::AnkleLeft,
        Joint::FootLeft,
        Joint::KneeRight,
        Joint::AnkleRight,
        Joint::FootRight,
    ] {
        let p = out.position(j);
        out.set_position(
            j,
            [
                p[0] + delta[0] * amp,
                p[1] + delta[1] * amp,
                p[2] + delta[2] * amp,
            ],
        );
    }
    out
}

/// Generates one performance. At zero noise the rendered no-motion runs
/// coincide exactly with the planted holds, the beat track lands inside every
/// hold, and the skeleton stream repeats each canonical pose bit-exactly.
pub fn gen_performance(
    spec: &AdavuSpec,
    noise: &NoiseSpec,
    render: &RenderConfig,
) -> Result<Performance> {
    let hold_len = spec.hold_len();
    let trans_len = spec.tempo_period - hold_len;
    if trans_len < 2 {
        return Err(Error::InvalidParameter(
            "hold fraction leaves fewer than 2 transition frames".into(),
        ));
    }
    if noise.beat_jitter + 1 >= trans_len {
        return Err(Error::InvalidParameter(format!(
            "beat jitter {} would escape the {}-frame transitions",
            noise.beat_jitter, trans_len
        )));
    }
    let timeline = Timeline {
        spec,
        hold_len,
        rest: rest_pose(),
    };
    let total = timeline.total_frames();
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);

    let mut skeleton = Vec::with_capacity(total as usize);
    let mut frames = Vec::with_capacity(total as usize);
    let noisy_pixels = ((render.width * render.height) as f64 * noise.pixel_noise_rate)
        .round() as usize;
    for f in 0..total {
        let clean = timeline.pose_at(f);
        // reported skeleton: clean pose plus sensor jitter
        let mut reported = clean.clone();
        if noise.joint_jitter > 0.0 {
            for j in Joint::ALL {
                let p = reported.position(j);
                let mut q = p;
                for coord in &mut q {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *coord += noise.joint_jitter * z;
                }
                reported.set_position(j, q);
            }
        }
        skeleton.push(reported);

        let mut img = render_pose(&clean, render);
        if noisy_pixels > 0 && noise.pixel_noise_amplitude > 0 {
            let amp = noise.pixel_noise_amplitude as i32;
            for _ in 0..noisy_pixels {
                let x = rng.random_range(0..render.width);
                let y = rng.random_range(0..render.height);
                let delta = rng.random_range(-amp..=amp);
                let v = (img.get(x, y) as i32 + delta).clamp(0, 255) as u8;
                img.set(x, y, v);
            }
        }
        frames.push(img);
    }

    let mut beats = Vec::with_capacity(spec.postures.len());
    let mut annotations = Vec::with_capacity(spec.postures.len());
    for (k, posture) in spec.postures.iter().enumerate() {
        let hold = timeline.hold_range(k);
        let bol = NATTA_BOLS[k % NATTA_BOLS.len()].to_string();
        let true_beat = timeline.beat_frame(k);
        let reported = if noise.beat_jitter > 0 {
            let j = noise.beat_jitter as i64;
            let shift = rng.random_range(-j..=j);
            (true_beat as i64 + shift).max(0) as u32
        } else {
            true_beat
        };
        beats.push(AudioEvent {
            id: k as u32,
            kind: AudioEventKind::FullBeat,
            range: FrameRange::new(reported, reported + DEFAULT_BEAT_WINDOW)?,
            bol: Some(bol.clone()),
        });
        annotations.push(AnnotationRecord {
            posture_class: posture.clone(),
            range: hold,
            beat_number: k as i32,
            bol: Some(bol),
        });
    }

    Ok(Performance {
        label: spec.label.clone(),
        skeleton,
        frames,
        beats,
        annotations,
    })
}

/// `count` samples per class from unit-variance Gaussians whose means sit at
/// least `separation` apart. Labels are C01..Ck.
pub fn gen_clusters(
    k: usize,
    dim: usize,
    separation: f64,
    count: usize,
    seed: u64,
) -> Result<(Vec<Vec<f64>>, Vec<String>)> {
    if k < 2 {
        return Err(Error::InvalidParameter("need at least 2 clusters".into()));
    }
    if dim == 0 || count == 0 {
        return Err(Error::InvalidParameter(
            "dimension and per-class count must be positive".into(),
        ));
    }
    if separation < 0.0 || !separation.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "separation {separation}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut features = Vec::with_capacity(k * count);
    let mut labels = Vec::with_capacity(k * count);
    for c in 0..k {
        let mut mean = vec![0.0f64; dim];
        // axis placement: distinct axes are sqrt(2)*separation apart, stacked
        // multiples on the same axis exactly `separation`
        mean[c % dim] = separation * (1.0 + (c / dim) as f64);
        let label = format!("C{:02}", c + 1);
        for _ in 0..count {
            let x: Vec<f64> = mean
                .iter()
                .map(|&m| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    m + z
                })
                .collect();
            features.push(x);
            labels.push(label.clone());
        }
    }
    Ok((features, labels))
}

/// Labeled observation sequences: per spec and repetition, one bone-angle
/// vector per posture slot, derived from the canonical pose under joint
/// jitter (the same 5-frame averaging the real feature path uses).
pub fn gen_sequence_dataset(
    specs: &[AdavuSpec],
    per_label: usize,
    noise: &NoiseSpec,
    seed: u64,
) -> Result<Vec<(String, ObservationSequence)>> {
    if specs.is_empty() || per_label == 0 {
        return Err(Error::InvalidParameter(
            "need at least one spec and one sequence per label".into(),
        ));
    }
    let bones = BoneSet::default();
    let mut out = Vec::with_capacity(specs.len() * per_label);
    for (si, spec) in specs.iter().enumerate() {
        for rep in 0..per_label {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(
                derive_seed(seed, si as u64),
                rep as u64,
            ));
            let mut observations = Vec::with_capacity(spec.postures.len());
            for (slot, posture) in spec.postures.iter().enumerate() {
                let pose = match (noise.anticipation, spec.postures.get(slot + 1)) {
                    (a, Some(next)) if a > 0.0 && next != posture => {
                        blend(&spec.poses[posture], &spec.poses[next], a)
                    }
                    _ => spec.poses[posture].clone(),
                };
                let pose = &pose;
                let window: Vec<SkeletonFrame> = (0..5)
                    .map(|_| {
                        let mut f = pose.clone();
                        if noise.joint_jitter > 0.0 {
                            for j in Joint::ALL {
                                let p = f.position(j);
                                let mut q = p;
                                for coord in &mut q {
                                    let z: f64 = StandardNormal.sample(&mut rng);
                                    *coord += noise.joint_jitter * z;
                                }
                                f.set_position(j, q);
                            }
                        }
                        f
                    })
                    .collect();
                observations.push(bone_angles(&window, &bones)?.values);
            }
            out.push((
                spec.label.clone(),
                ObservationSequence::new(observations, format!("{}-{:03}", spec.label, rep))?,
            ));
        }
    }
    Ok(out)
}
