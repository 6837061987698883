//! Raw 8-bit image frames and the few pixel operations the pipeline needs.

use crate::error::{Error, Result};

/// Row-major 8-bit grayscale frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayFrame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "frame dimensions {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "frame data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    /// Sample with coordinates clamped to the frame borders.
    #[inline]
    pub fn get_clamped(&self, x: isize, y: isize) -> u8 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let y = y.clamp(0, self.height as isize - 1) as usize;
        self.get(x, y)
    }
}

/// Row-major interleaved 8-bit RGB frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbFrame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter(format!(
                "frame dimensions {width}x{height}"
            )));
        }
        if data.len() != width * height * 3 {
            return Err(Error::InvalidParameter(format!(
                "rgb data length {} does not match {width}x{height}x3",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }
}

/// Rec. 601 luma of one RGB pixel, rounded to the nearest integer.
#[inline]
pub fn luma(rgb: [u8; 3]) -> u8 {
    let v = 0.299 * rgb[0] as f64 + 0.587 * rgb[1] as f64 + 0.114 * rgb[2] as f64;
    v.round().clamp(0.0, 255.0) as u8
}

/// Grayscale conversion with Rec. 601 weights.
pub fn grayscale(rgb: &RgbFrame) -> GrayFrame {
    let mut out = GrayFrame::filled(rgb.width, rgb.height, 0);
    for y in 0..rgb.height {
        for x in 0..rgb.width {
            out.set(x, y, luma(rgb.pixel(x, y)));
        }
    }
    out
}

/// Bilinear resize with pixel-center alignment. Resizing to the source size
/// reproduces the source exactly.
pub fn resize_bilinear(src: &GrayFrame, width: usize, height: usize) -> Result<GrayFrame> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(format!(
            "target dimensions {width}x{height}"
        )));
    }
    let sx_scale = src.width as f64 / width as f64;
    let sy_scale = src.height as f64 / height as f64;
    let mut out = GrayFrame::filled(width, height, 0);
    for y in 0..height {
        let sy = ((y as f64 + 0.5) * sy_scale - 0.5).clamp(0.0, src.height as f64 - 1.0);
        let y0 = sy.floor() as usize;
        let y1 = (y0 + 1).min(src.height - 1);
        let fy = sy - y0 as f64;
        for x in 0..width {
            let sx = ((x as f64 + 0.5) * sx_scale - 0.5).clamp(0.0, src.width as f64 - 1.0);
            let x0 = sx.floor() as usize;
            let x1 = (x0 + 1).min(src.width - 1);
            let fx = sx - x0 as f64;
            let top = src.get(x0, y0) as f64 * (1.0 - fx) + src.get(x1, y0) as f64 * fx;
            let bottom = src.get(x0, y1) as f64 * (1.0 - fx) + src.get(x1, y1) as f64 * fx;
            let v = top * (1.0 - fy) + bottom * fy;
            out.set(x, y, v.round().clamp(0.0, 255.0) as u8);
        }
    }
    Ok(out)
}
