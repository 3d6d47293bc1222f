//! Square grayscale rasters with intensities in `[0, 1]`, and built-in
//! deterministic test images.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{MomentError, Result};

/// An `N x N` grayscale image stored row-major, `N >= 2`, every intensity
/// finite and within `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    size: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(size: usize, pixels: Vec<f64>) -> Result<Self> {
        if size < 2 {
            return Err(MomentError::InvalidImage(format!(
                "image size must be at least 2 (got {size})"
            )));
        }
        if pixels.len() != size * size {
            return Err(MomentError::DimensionMismatch {
                expected: size * size,
                got: pixels.len(),
            });
        }
        if let Some((i, v)) = pixels
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
        {
            return Err(MomentError::InvalidImage(format!(
                "pixel {i} has intensity {v} outside [0, 1]"
            )));
        }
        Ok(Image { size, pixels })
    }

    pub fn constant(size: usize, value: f64) -> Result<Self> {
        Image::new(size, vec![value; size * size])
    }

    /// Builds an image from `f(row, col)`.
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(size * size);
        for row in 0..size {
            for col in 0..size {
                pixels.push(f(row, col));
            }
        }
        Image::new(size, pixels)
    }

    /// Builds an image from arbitrary finite values, clipping to `[0, 1]`.
    /// NaN becomes 0.
    pub fn from_clipped(size: usize, values: &[f64]) -> Result<Self> {
        let pixels = values
            .iter()
            .map(|v| if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) })
            .collect();
        Image::new(size, pixels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.size + col]
    }

    /// `a * self + b * other`, clipped to `[0, 1]`.
    pub fn blend(&self, a: f64, other: &Image, b: f64) -> Result<Image> {
        if other.size != self.size {
            return Err(MomentError::DimensionMismatch {
                expected: self.size,
                got: other.size,
            });
        }
        let v: Vec<f64> = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Image::from_clipped(self.size, &v)
    }
}

/// Built-in synthetic images.
pub mod synthetic {
    use super::*;

    /// The constant image `f = 1`.
    pub fn unity(n: usize) -> Result<Image> {
        Image::constant(n, 1.0)
    }

    /// Checkerboard of `cells x cells` squares alternating 0 and 1.
    pub fn checker(n: usize, cells: usize) -> Result<Image> {
        let cells = cells.max(1);
        Image::from_fn(n, |row, col| {
            let a = row * cells / n;
            let b = col * cells / n;
            ((a + b) % 2) as f64
        })
    }

    /// `r^2` under the incircle mapping, clipped to 1 outside the disk.
    pub fn radial_gradient(n: usize) -> Result<Image> {
        Image::from_fn(n, |row, col| {
            let x = (2.0 * col as f64 + 1.0 - n as f64) / n as f64;
            let y = (2.0 * row as f64 + 1.0 - n as f64) / n as f64;
            (x * x + y * y).min(1.0)
        })
    }

    /// A smooth, textured scene: a shaded background, a few soft blobs of
    /// varying size and contrast, oriented gratings under Gaussian envelopes
    /// and a couple of hard-edged discs. Fully determined by `seed`.
    pub fn photo_like(n: usize, seed: u64) -> Result<Image> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut field = vec![0.0; n * n];

        let gx: f64 = rng.random_range(-0.3..0.3);
        let gy: f64 = rng.random_range(-0.3..0.3);
        let base: f64 = rng.random_range(0.3..0.6);

        struct Blob {
            cx: f64,
            cy: f64,
            sx: f64,
            sy: f64,
            rot: f64,
            amp: f64,
        }
        let blobs: Vec<Blob> = (0..rng.random_range(4..8))
            .map(|_| Blob {
                cx: rng.random_range(-0.7..0.7),
                cy: rng.random_range(-0.7..0.7),
                sx: rng.random_range(0.08..0.35),
                sy: rng.random_range(0.08..0.35),
                rot: rng.random_range(0.0..std::f64::consts::PI),
                amp: rng.random_range(-0.5..0.5),
            })
            .collect();

        struct Grating {
            cx: f64,
            cy: f64,
            width: f64,
            freq: f64,
            dir: f64,
            amp: f64,
        }
        let gratings: Vec<Grating> = (0..rng.random_range(1..4))
            .map(|_| Grating {
                cx: rng.random_range(-0.6..0.6),
                cy: rng.random_range(-0.6..0.6),
                width: rng.random_range(0.15..0.4),
                freq: rng.random_range(4.0..14.0),
                dir: rng.random_range(0.0..std::f64::consts::PI),
                amp: rng.random_range(0.05..0.2),
            })
            .collect();

        let discs: Vec<(f64, f64, f64, f64)> = (0..rng.random_range(1..3))
            .map(|_| {
                (
                    rng.random_range(-0.6..0.6),
                    rng.random_range(-0.6..0.6),
                    rng.random_range(0.05..0.2),
                    rng.random_range(-0.3..0.3),
                )
            })
            .collect();

        for row in 0..n {
            let y = (2.0 * row as f64 + 1.0 - n as f64) / n as f64;
            for col in 0..n {
                let x = (2.0 * col as f64 + 1.0 - n as f64) / n as f64;
                let mut v = base + gx * x + gy * y;
                for b in &blobs {
                    let (c, s) = (b.rot.cos(), b.rot.sin());
                    let u = c * (x - b.cx) + s * (y - b.cy);
                    let w = -s * (x - b.cx) + c * (y - b.cy);
                    v += b.amp * (-0.5 * ((u / b.sx).powi(2) + (w / b.sy).powi(2))).exp();
                }
                for g in &gratings {
                    let d2 = (x - g.cx).powi(2) + (y - g.cy).powi(2);
                    let phase = g.freq * (g.dir.cos() * x + g.dir.sin() * y);
                    v += g.amp * (-0.5 * d2 / (g.width * g.width)).exp() * phase.sin();
                }
                for &(cx, cy, rad, amp) in &discs {
                    if (x - cx).powi(2) + (y - cy).powi(2) <= rad * rad {
                        v += amp;
                    }
                }
                field[row * n + col] = v;
            }
        }
        Image::from_clipped(n, &field)
    }

    /// `count` distinct photo-like images labelled `img00`, `img01`, ...
    pub fn gallery(count: usize, n: usize, seed: u64) -> Result<Vec<(String, Image)>> {
        (0..count)
            .map(|i| {
                let img = photo_like(n, seed.wrapping_mul(1_000_003).wrapping_add(i as u64))?;
                Ok((format!("img{i:02}"), img))
            })
            .collect()
    }
}
