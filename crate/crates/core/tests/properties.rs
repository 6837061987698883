//! Property tests for the structural invariants: stream validity of
//! detected events, predicate conformance of extracted Key Frames,
//! threshold monotonicity, overlap symmetry, descriptor length and the
//! agreement of the two forward-algorithm routes.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use adavu_core::event::{
    validate_video_stream, AudioEvent, AudioEventKind, FrameRange, VideoEvent, VideoEventKind,
};
use adavu_core::frame::GrayFrame;
use adavu_core::hmm::{GaussianHmm, ObservationSequence};
use adavu_core::hog::{hog_descriptor, hog_length, HogParams};
use adavu_core::segmentation::{detect_video_events, extract_kframes, MotionConfig};

fn arb_range() -> impl Strategy<Value = FrameRange> {
    (0u32..500, 0u32..60).prop_map(|(s, len)| FrameRange::new(s, s + len).unwrap())
}

proptest! {
    #[test]
    fn overlap_symmetric_and_reflexive(a in arb_range(), b in arb_range()) {
        prop_assert_eq!(a.overlaps(&b), b.overlaps(&a));
        prop_assert!(a.overlaps(&a));
    }

    #[test]
    fn midpoint_inside_range(r in arb_range()) {
        let m = r.midpoint();
        prop_assert!(m >= r.start() && m <= r.end());
    }
}

/// Random frame streams: coarse intensity buckets so both motion and
/// stillness actually occur.
fn arb_frames() -> impl Strategy<Value = Vec<GrayFrame>> {
    (2usize..30, 4usize..10, 4usize..10, any::<u64>()).prop_map(|(n, w, h, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut frames = Vec::with_capacity(n);
        let mut current = GrayFrame::filled(w, h, 30);
        for _ in 0..n {
            if rng.random::<f64>() < 0.5 {
                // moving frame: redraw everything
                let mut data = vec![0u8; w * h];
                for v in &mut data {
                    *v = rng.random::<u8>();
                }
                current = GrayFrame::new(w, h, data).unwrap();
            }
            frames.push(current.clone());
        }
        frames
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn detected_events_always_validate(frames in arb_frames()) {
        let cfg = MotionConfig { th_pix: 50, th_frm: 3, merge_gap: None };
        let events = detect_video_events(&frames, &cfg).unwrap();
        prop_assert!(validate_video_stream(&events).is_ok());
        // events tile frames 1..=len-1
        prop_assert_eq!(events.first().unwrap().range.start(), 1);
        prop_assert_eq!(events.last().unwrap().range.end(), frames.len() as u32 - 1);
    }

    #[test]
    fn merged_events_still_validate(frames in arb_frames()) {
        let cfg = MotionConfig { th_pix: 50, th_frm: 3, merge_gap: Some(2) };
        let events = detect_video_events(&frames, &cfg).unwrap();
        prop_assert!(validate_video_stream(&events).is_ok());
    }

    #[test]
    fn raising_th_frm_never_adds_transition_frames(frames in arb_frames(), lo in 0usize..40, delta in 1usize..40) {
        let count = |th_frm: usize| -> u64 {
            let cfg = MotionConfig { th_pix: 50, th_frm, merge_gap: None };
            detect_video_events(&frames, &cfg)
                .unwrap()
                .iter()
                .filter(|e| e.kind == VideoEventKind::Transition)
                .map(|e| u64::from(e.range.len()))
                .sum()
        };
        prop_assert!(count(lo + delta) <= count(lo));
    }
}

/// Random valid audio/video stream pair on a shared timeline.
fn arb_streams() -> impl Strategy<Value = (Vec<AudioEvent>, Vec<VideoEvent>)> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // alternating video events tiling from frame 0
        let mut video = Vec::new();
        let mut cursor = 0u32;
        let mut kind = if rng.random::<bool>() {
            VideoEventKind::NoMotion
        } else {
            VideoEventKind::Transition
        };
        for id in 0..rng.random_range(2..12u32) {
            let len = rng.random_range(1..40u32);
            video.push(VideoEvent {
                id,
                kind,
                range: FrameRange::new(cursor, cursor + len - 1).unwrap(),
            });
            cursor += len;
            kind = match kind {
                VideoEventKind::NoMotion => VideoEventKind::Transition,
                VideoEventKind::Transition => VideoEventKind::NoMotion,
            };
        }
        // strictly ordered disjoint beats over the same span
        let mut audio = Vec::new();
        let mut beat_cursor = rng.random_range(0..20u32);
        let mut id = 0;
        while beat_cursor + 12 < cursor + 40 && id < 20 {
            let width = rng.random_range(5..12u32);
            let kind = match rng.random_range(0..3u32) {
                0 => AudioEventKind::FullBeat,
                1 => AudioEventKind::HalfBeat,
                _ => AudioEventKind::QuarterBeat,
            };
            audio.push(AudioEvent {
                id,
                kind,
                range: FrameRange::new(beat_cursor, beat_cursor + width).unwrap(),
                bol: Some("ta".to_string()),
            });
            id += 1;
            beat_cursor += width + rng.random_range(2..25u32);
        }
        if audio.is_empty() {
            audio.push(AudioEvent {
                id: 0,
                kind: AudioEventKind::FullBeat,
                range: FrameRange::new(0, 5).unwrap(),
                bol: Some("ta".to_string()),
            });
        }
        (audio, video)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn extracted_kframes_satisfy_predicates((audio, video) in arb_streams()) {
        let psi = extract_kframes(&audio, &video).unwrap();
        for p in &psi {
            // the range equals exactly one no-motion event's range
            let matches = video
                .iter()
                .filter(|v| v.kind == VideoEventKind::NoMotion && v.range == p.range)
                .count();
            prop_assert_eq!(matches, 1);
            // and overlaps at least one full- or half-beat
            let beaten = audio
                .iter()
                .any(|a| a.kind.sync_kind().is_some() && a.range.overlaps(&p.range));
            prop_assert!(beaten);
        }
        // completeness: every qualifying no-motion range is reported
        for v in &video {
            if v.kind != VideoEventKind::NoMotion {
                continue;
            }
            let qualifies = audio
                .iter()
                .any(|a| a.kind.sync_kind().is_some() && a.range.overlaps(&v.range));
            prop_assert_eq!(qualifies, psi.iter().any(|p| p.range == v.range));
        }
    }
}

fn arb_hog_params() -> impl Strategy<Value = HogParams> {
    (2usize..10, 1usize..4, 3usize..10, 8usize..48, 8usize..48).prop_filter_map(
        "geometry must fit a block",
        |(cell, block, bins, h, w)| {
            let overlap = block.saturating_sub(1);
            let p = HogParams {
                cell_size: cell,
                block_size: block,
                block_overlap: overlap,
                num_bins: bins,
                image_size: (h, w),
            };
            hog_length(&p).ok().map(|_| p)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn descriptor_length_matches_hog_length(p in arb_hog_params(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (h, w) = p.image_size;
        let data: Vec<u8> = (0..h * w).map(|_| rng.random::<u8>()).collect();
        let img = GrayFrame::new(w, h, data).unwrap();
        let desc = hog_descriptor(&img, &p).unwrap();
        prop_assert_eq!(desc.len(), hog_length(&p).unwrap());
        // every block stays inside the unit ball
        let block_len = p.block_size * p.block_size * p.num_bins;
        for block in desc.chunks(block_len) {
            let norm_sq: f64 = block.iter().map(|v| v * v).sum();
            prop_assert!(norm_sq <= 1.0 + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The log-domain forward pass and the scaled linear-space pass are two
    /// routes to the same number.
    #[test]
    fn scaled_and_log_forward_agree(seed in any::<u64>(), s in 1usize..=6, t in 1usize..=50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = |rng: &mut ChaCha8Rng, n: usize| -> Vec<f64> {
            let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        };
        let d = 2;
        let hmm = GaussianHmm {
            label: "p".into(),
            initial: dist(&mut rng, s),
            transition: (0..s).map(|_| dist(&mut rng, s)).collect(),
            means: (0..s)
                .map(|_| (0..d).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect())
                .collect(),
            variances: (0..s)
                .map(|_| (0..d).map(|_| 0.05 + rng.random::<f64>()).collect())
                .collect(),
        };
        let obs: Vec<Vec<f64>> = (0..t)
            .map(|_| (0..d).map(|_| rng.random::<f64>() * 6.0 - 3.0).collect())
            .collect();
        let seq = ObservationSequence::new(obs, "p").unwrap();
        let log_route = hmm.log_likelihood(&seq).unwrap();
        let scaled_route = hmm.log_likelihood_scaled(&seq).unwrap();
        let rel = (log_route - scaled_route).abs() / log_route.abs().max(1e-300);
        prop_assert!(rel < 1e-9, "log {log_route} vs scaled {scaled_route}");
    }
}
