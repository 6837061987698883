//! Histogram-of-oriented-gradients descriptor over player-masked grayscale
//! frames.
//!
//! Gradients are central differences with replicated borders, orientations
//! are unsigned over [0°, 180°) with magnitude-weighted linear interpolation
//! between the two nearest bin centers, and each block is L2-normalized.

use crate::error::{Error, Result};
use crate::frame::{grayscale, resize_bilinear, GrayFrame, RgbFrame};

const NORM_EPS: f64 = 1e-6;

/// Cell/block geometry of the descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HogParams {
    /// Cell side in pixels.
    pub cell_size: usize,
    /// Block side in cells.
    pub block_size: usize,
    /// Overlapping cells between adjacent blocks.
    pub block_overlap: usize,
    /// Orientation histogram bins over [0°, 180°).
    pub num_bins: usize,
    /// Expected input size as (height, width).
    pub image_size: (usize, usize),
}

impl Default for HogParams {
    fn default() -> Self {
        Self {
            cell_size: 8,
            block_size: 2,
            block_overlap: 1,
            num_bins: 9,
            image_size: (120, 160),
        }
    }
}

impl HogParams {
    fn validate(&self) -> Result<()> {
        if self.cell_size == 0 || self.block_size == 0 || self.num_bins == 0 {
            return Err(Error::InvalidParameter(
                "cell size, block size and bin count must be positive".into(),
            ));
        }
        if self.block_overlap >= self.block_size {
            return Err(Error::InvalidParameter(format!(
                "block overlap {} must be smaller than block size {}",
                self.block_overlap, self.block_size
            )));
        }
        Ok(())
    }

    /// Cell grid as (cells_y, cells_x); partial border cells are dropped.
    fn cells(&self) -> (usize, usize) {
        (
            self.image_size.0 / self.cell_size,
            self.image_size.1 / self.cell_size,
        )
    }

    /// Block grid as (blocks_y, blocks_x).
    fn blocks(&self) -> Result<(usize, usize)> {
        let (cy, cx) = self.cells();
        if cy < self.block_size || cx < self.block_size {
            return Err(Error::InvalidParameter(format!(
                "{cy}x{cx} cells cannot hold a block of {0}x{0}",
                self.block_size
            )));
        }
        let stride = self.block_size - self.block_overlap;
        Ok((
            (cy - self.block_size) / stride + 1,
            (cx - self.block_size) / stride + 1,
        ))
    }
}

/// Descriptor length for the given geometry:
/// blocks_y * blocks_x * block_size^2 * num_bins.
pub fn hog_length(params: &HogParams) -> Result<usize> {
    params.validate()?;
    let (by, bx) = params.blocks()?;
    Ok(by * bx * params.block_size * params.block_size * params.num_bins)
}

/// Computes the descriptor. The image must match `params.image_size`.
pub fn hog_descriptor(image: &GrayFrame, params: &HogParams) -> Result<Vec<f64>> {
    params.validate()?;
    let (h, w) = params.image_size;
    if image.height() != h || image.width() != w {
        return Err(Error::FrameDimensions {
            a_width: w,
            a_height: h,
            b_width: image.width(),
            b_height: image.height(),
        });
    }
    let (cells_y, cells_x) = params.cells();
    let (blocks_y, blocks_x) = params.blocks()?;
    let bins = params.num_bins;
    let bin_width = 180.0 / bins as f64;

    // magnitude-weighted orientation histogram per cell
    let mut hist = vec![0.0f64; cells_y * cells_x * bins];
    for cy in 0..cells_y {
        for cx in 0..cells_x {
            let cell = &mut hist[(cy * cells_x + cx) * bins..(cy * cells_x + cx + 1) * bins];
            for py in cy * params.cell_size..(cy + 1) * params.cell_size {
                for px in cx * params.cell_size..(cx + 1) * params.cell_size {
                    let gx = image.get_clamped(px as isize + 1, py as isize) as f64
                        - image.get_clamped(px as isize - 1, py as isize) as f64;
                    let gy = image.get_clamped(px as isize, py as isize + 1) as f64
                        - image.get_clamped(px as isize, py as isize - 1) as f64;
                    let mag = gx.hypot(gy);
                    if mag == 0.0 {
                        continue;
                    }
                    let mut theta = gy.atan2(gx).to_degrees();
                    if theta < 0.0 {
                        theta += 180.0;
                    }
                    if theta >= 180.0 {
                        theta -= 180.0;
                    }
                    // split the vote between the two nearest bin centers,
                    // wrapping 180° back onto 0°
                    let pos = theta / bin_width - 0.5;
                    let lo = pos.floor();
                    let frac = pos - lo;
                    let lo_idx = (lo as isize).rem_euclid(bins as isize) as usize;
                    let hi_idx = (lo_idx + 1) % bins;
                    cell[lo_idx] += mag * (1.0 - frac);
                    cell[hi_idx] += mag * frac;
                }
            }
        }
    }

    // concatenate L2-normalized blocks, block-major
    let stride = params.block_size - params.block_overlap;
    let block_len = params.block_size * params.block_size * bins;
    let mut out = Vec::with_capacity(blocks_y * blocks_x * block_len);
    for by in 0..blocks_y {
        for bx in 0..blocks_x {
            let start = out.len();
            for dy in 0..params.block_size {
                for dx in 0..params.block_size {
                    let cy = by * stride + dy;
                    let cx = bx * stride + dx;
                    let cell = &hist[(cy * cells_x + cx) * bins..(cy * cells_x + cx + 1) * bins];
                    out.extend_from_slice(cell);
                }
            }
            let norm_sq: f64 = out[start..].iter().map(|v| v * v).sum();
            let denom = (norm_sq + NORM_EPS * NORM_EPS).sqrt();
            for v in &mut out[start..] {
                *v /= denom;
            }
        }
    }
    debug_assert_eq!(out.len(), blocks_y * blocks_x * block_len);
    Ok(out)
}

/// Binary body mask in depth-camera space with the affine transform that
/// carries depth coordinates into RGB coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
    /// Row-major 2x3 matrix: (x_rgb, y_rgb) = A * (x_depth, y_depth, 1).
    pub affine: [[f64; 3]; 2],
}

impl PlayerMask {
    pub fn new(width: usize, height: usize, data: Vec<u8>, affine: [[f64; 3]; 2]) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "mask data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        if data.iter().any(|&v| v > 1) {
            return Err(Error::InvalidParameter(
                "mask values must be 0 or 1".into(),
            ));
        }
        Ok(Self {
            width,
            height,
            data,
            affine,
        })
    }

    pub fn identity_affine() -> [[f64; 3]; 2] {
        [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
    }

    fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }
}

/// Warps the mask into RGB space (nearest neighbor), zeroes the background,
/// converts to grayscale and resizes to `target` (height, width).
pub fn apply_player_mask(
    rgb: &RgbFrame,
    mask: &PlayerMask,
    target: (usize, usize),
) -> Result<GrayFrame> {
    let a = &mask.affine;
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < 1e-12 {
        return Err(Error::InvalidParameter(
            "player mask affine transform is not invertible".into(),
        ));
    }
    // inverse of the 2x2 part, then back out the translation
    let inv = [
        [a[1][1] / det, -a[0][1] / det],
        [-a[1][0] / det, a[0][0] / det],
    ];

    let gray = grayscale(rgb);
    let mut masked = GrayFrame::filled(rgb.width(), rgb.height(), 0);
    for y in 0..rgb.height() {
        for x in 0..rgb.width() {
            let dx = x as f64 - a[0][2];
            let dy = y as f64 - a[1][2];
            let u = (inv[0][0] * dx + inv[0][1] * dy).round();
            let v = (inv[1][0] * dx + inv[1][1] * dy).round();
            let inside = u >= 0.0
                && v >= 0.0
                && (u as usize) < mask.width
                && (v as usize) < mask.height;
            if inside && mask.get(u as usize, v as usize) == 1 {
                masked.set(x, y, gray.get(x, y));
            }
        }
    }
    resize_bilinear(&masked, target.1, target.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn length_matches_default_geometry() {
        // 15x20 cells -> 14x19 blocks of 4 cells x 9 bins
        assert_eq!(hog_length(&HogParams::default()).unwrap(), 9576);
    }

    #[test]
    fn length_small_image() {
        let p = HogParams {
            image_size: (16, 16),
            ..HogParams::default()
        };
        assert_eq!(hog_length(&p).unwrap(), 36);
    }

    #[test]
    fn length_no_overlap() {
        let p = HogParams {
            block_overlap: 0,
            image_size: (32, 32),
            ..HogParams::default()
        };
        assert_eq!(hog_length(&p).unwrap(), 144);
    }

    #[test]
    fn length_rejects_tiny_image() {
        let p = HogParams {
            image_size: (8, 8),
            ..HogParams::default()
        };
        assert!(hog_length(&p).is_err());
    }

    #[test]
    fn length_rejects_full_overlap() {
        let p = HogParams {
            block_overlap: 2,
            ..HogParams::default()
        };
        assert!(hog_length(&p).is_err());
    }

    #[test]
    fn uniform_image_zero_descriptor() {
        let p = HogParams {
            image_size: (16, 16),
            ..HogParams::default()
        };
        let img = GrayFrame::filled(16, 16, 128);
        let desc = hog_descriptor(&img, &p).unwrap();
        assert_eq!(desc.len(), 36);
        assert!(desc.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn descriptor_length_matches() {
        let p = HogParams::default();
        let mut img = GrayFrame::filled(160, 120, 0);
        for y in 0..120 {
            for x in 0..160 {
                img.set(x, y, ((x * 7 + y * 3) % 251) as u8);
            }
        }
        let desc = hog_descriptor(&img, &p).unwrap();
        assert_eq!(desc.len(), hog_length(&p).unwrap());
    }

    #[test]
    fn descriptor_size_mismatch() {
        let p = HogParams::default();
        let img = GrayFrame::filled(16, 16, 0);
        assert!(matches!(
            hog_descriptor(&img, &p),
            Err(Error::FrameDimensions { .. })
        ));
    }

    #[test]
    fn vertical_edge_votes_horizontal_gradient() {
        // one 8x8 cell; a vertical step edge has gradient along +x, so all
        // energy lands in the two bins adjacent to 0 degrees (bin centers sit
        // at 10, 30, ..., 170, so 0 degrees splits evenly between bins 0 and 8)
        let p = HogParams {
            cell_size: 8,
            block_size: 1,
            block_overlap: 0,
            num_bins: 9,
            image_size: (8, 8),
        };
        let mut img = GrayFrame::filled(8, 8, 0);
        for y in 0..8 {
            for x in 4..8 {
                img.set(x, y, 200);
            }
        }
        let desc = hog_descriptor(&img, &p).unwrap();
        let total: f64 = desc.iter().sum();
        assert!(total > 0.0);
        assert_relative_eq!(desc[0], desc[8], epsilon = 1e-12);
        for (i, &v) in desc.iter().enumerate() {
            if i != 0 && i != 8 {
                assert_eq!(v, 0.0, "bin {i} should be empty");
            }
        }
        // hand oracle: central differences give gx = 200 in columns 3 and 4
        // and zero elsewhere; that magnitude splits evenly over the two bins
        let norm_sq: f64 = desc.iter().map(|v| v * v).sum();
        assert!(norm_sq <= 1.0 + 1e-9);
        assert_relative_eq!(desc[0] / desc.iter().sum::<f64>(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn block_norm_bounded() {
        let p = HogParams {
            image_size: (32, 32),
            ..HogParams::default()
        };
        let mut img = GrayFrame::filled(32, 32, 0);
        for y in 0..32 {
            for x in 0..32 {
                img.set(x, y, ((x * 11 + y * 17) % 256) as u8);
            }
        }
        let desc = hog_descriptor(&img, &p).unwrap();
        let block_len = p.block_size * p.block_size * p.num_bins;
        for block in desc.chunks(block_len) {
            let norm: f64 = block.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(norm <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn intensity_shift_invariance() {
        let p = HogParams {
            image_size: (24, 24),
            ..HogParams::default()
        };
        let mut img = GrayFrame::filled(24, 24, 0);
        for y in 0..24 {
            for x in 0..24 {
                img.set(x, y, ((x * 5 + y * 9) % 180) as u8);
            }
        }
        let mut shifted = img.clone();
        for y in 0..24 {
            for x in 0..24 {
                shifted.set(x, y, img.get(x, y) + 40);
            }
        }
        let a = hog_descriptor(&img, &p).unwrap();
        let b = hog_descriptor(&shifted, &p).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mask_identity_all_ones() {
        let mut rgb = RgbFrame::new(8, 8, vec![0; 8 * 8 * 3]).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                rgb.set_pixel(x, y, [(x * 30) as u8, (y * 30) as u8, 60]);
            }
        }
        let mask = PlayerMask::new(8, 8, vec![1; 64], PlayerMask::identity_affine()).unwrap();
        let out = apply_player_mask(&rgb, &mask, (8, 8)).unwrap();
        assert_eq!(out, grayscale(&rgb));
    }

    #[test]
    fn mask_all_zeros() {
        let rgb = RgbFrame::new(8, 8, vec![200; 8 * 8 * 3]).unwrap();
        let mask = PlayerMask::new(8, 8, vec![0; 64], PlayerMask::identity_affine()).unwrap();
        let out = apply_player_mask(&rgb, &mask, (8, 8)).unwrap();
        assert!(out.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn mask_translation_moves_box() {
        // 2x2 box at (1,1) in depth space, translated by (3, 2) into RGB space
        let mut mask_data = vec![0u8; 64];
        for y in 1..3 {
            for x in 1..3 {
                mask_data[y * 8 + x] = 1;
            }
        }
        let affine = [[1.0, 0.0, 3.0], [0.0, 1.0, 2.0]];
        let mask = PlayerMask::new(8, 8, mask_data, affine).unwrap();
        let rgb = RgbFrame::new(8, 8, vec![255; 8 * 8 * 3]).unwrap();
        let out = apply_player_mask(&rgb, &mask, (8, 8)).unwrap();
        for y in 0..8 {
            for x in 0..8 {
                let inside = (4..6).contains(&x) && (3..5).contains(&y);
                assert_eq!(out.get(x, y) == 255, inside, "pixel ({x},{y})");
            }
        }
    }

    #[test]
    fn mask_degenerate_affine_rejected() {
        let mask = PlayerMask::new(4, 4, vec![1; 16], [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]).unwrap();
        let rgb = RgbFrame::new(4, 4, vec![0; 48]).unwrap();
        assert!(apply_player_mask(&rgb, &mask, (4, 4)).is_err());
    }
}
