use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{MomentError, Result};
use crate::image::Image;

/// Interpolation used when reading the raster at non-grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Nearest,
    Bilinear,
    #[default]
    Bicubic,
}

impl fmt::Display for Interp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interp::Nearest => "nearest",
            Interp::Bilinear => "bilinear",
            Interp::Bicubic => "bicubic",
        })
    }
}

impl FromStr for Interp {
    type Err = MomentError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "nearest" => Ok(Interp::Nearest),
            "bilinear" => Ok(Interp::Bilinear),
            "bicubic" => Ok(Interp::Bicubic),
            _ => Err(MomentError::InvalidParameter(format!(
                "unknown interpolation '{s}', expected nearest, bilinear or bicubic"
            ))),
        }
    }
}

/// One annulus `r_inner < r <= r_outer` split into equal sectors, the
/// `v`-th covering `[2 pi v / S, 2 pi (v + 1) / S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    pub r_inner: f64,
    pub r_outer: f64,
    pub sectors: usize,
    /// Intensity at each sector centre; empty until resampled.
    pub values: Vec<f64>,
}

impl Ring {
    /// Radius of the sample points.
    pub fn radius(&self) -> f64 {
        0.5 * (self.r_inner + self.r_outer)
    }

    /// Lower angular bound of sector `v` (`v = sectors` gives `2 pi`).
    pub fn bound(&self, v: usize) -> f64 {
        2.0 * PI * v as f64 / self.sectors as f64
    }

    /// Angle of the sample point of sector `v`.
    pub fn theta(&self, v: usize) -> f64 {
        2.0 * PI * (v as f64 + 0.5) / self.sectors as f64
    }

    pub fn sector_area(&self) -> f64 {
        PI * (self.r_outer * self.r_outer - self.r_inner * self.r_inner) / self.sectors as f64
    }
}

/// Polar pixel tiling of the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    /// Side of the raster the tiling was designed for.
    pub size: usize,
    pub rings: Vec<Ring>,
}

impl PolarGrid {
    pub fn ring_radii(&self) -> Vec<f64> {
        self.rings.iter().map(|r| r.r_outer).collect()
    }

    pub fn total_area(&self) -> f64 {
        self.rings.iter().map(|r| r.sector_area() * r.sectors as f64).sum()
    }

    pub fn sample_count(&self) -> usize {
        self.rings.iter().map(|r| r.sectors).sum()
    }

    pub fn is_resampled(&self) -> bool {
        self.rings.iter().all(|r| r.values.len() == r.sectors)
    }
}

/// Sector count of ring `u` (1-based): `max(8, round(2 pi u))` rounded up to
/// a multiple of 4.
fn sectors_for(u: usize) -> usize {
    let base = ((2.0 * PI * u as f64).round() as usize).max(8);
    base.div_ceil(4) * 4
}

/// `rings` equal-width annuli `r_u = u / U` over the disk of an `n x n` raster.
pub fn polar_grid(n: usize, rings: usize) -> Result<PolarGrid> {
    if rings == 0 {
        return Err(MomentError::InvalidParameter("ring count must be >= 1".into()));
    }
    let uf = rings as f64;
    let rings = (1..=rings)
        .map(|u| Ring {
            r_inner: (u - 1) as f64 / uf,
            r_outer: if u == rings { 1.0 } else { u as f64 / uf },
            sectors: sectors_for(u),
            values: Vec::new(),
        })
        .collect();
    Ok(PolarGrid { size: n, rings })
}

/// Fills every sector with the intensity at its centre, read through the
/// incircle mapping.
pub fn resample_to_polar(image: &Image, grid: &PolarGrid, interp: Interp) -> Result<PolarGrid> {
    let mut out = grid.clone();
    for ring in &mut out.rings {
        let r = ring.radius();
        ring.values = (0..ring.sectors)
            .map(|v| {
                let t = ring.theta(v);
                sample_disk(image, r * t.cos(), r * t.sin(), interp)
            })
            .collect();
    }
    Ok(out)
}

/// Intensity at disk point `(x, y)` under the incircle mapping. Points
/// beyond the outermost pixel centres are clamped to the border.
pub fn sample_disk(image: &Image, x: f64, y: f64, interp: Interp) -> f64 {
    let n = image.size() as f64;
    let col = 0.5 * (x * n + n - 1.0);
    let row = 0.5 * (y * n + n - 1.0);
    sample_pixel(image, row, col, interp)
}

/// Intensity at fractional pixel coordinates (`(0, 0)` is the centre of the
/// first pixel).
pub fn sample_pixel(image: &Image, row: f64, col: f64, interp: Interp) -> f64 {
    match interp {
        Interp::Nearest => {
            let last = image.size() as f64 - 1.0;
            let r = row.round().clamp(0.0, last) as usize;
            let c = col.round().clamp(0.0, last) as usize;
            image.get(r, c)
        }
        Interp::Bilinear => bilinear(image, row, col),
        Interp::Bicubic => bicubic(image, row, col),
    }
}

fn clamp_index(i: i64, n: usize) -> usize {
    i.clamp(0, n as i64 - 1) as usize
}

fn bilinear(image: &Image, row: f64, col: f64) -> f64 {
    let n = image.size();
    let last = (n - 1) as f64;
    let row = row.clamp(0.0, last);
    let col = col.clamp(0.0, last);
    let r0 = row.floor() as i64;
    let c0 = col.floor() as i64;
    let fy = row - r0 as f64;
    let fx = col - c0 as f64;
    let (r0u, r1u) = (clamp_index(r0, n), clamp_index(r0 + 1, n));
    let (c0u, c1u) = (clamp_index(c0, n), clamp_index(c0 + 1, n));
    let p00 = image.get(r0u, c0u);
    let p01 = image.get(r0u, c1u);
    let p10 = image.get(r1u, c0u);
    let p11 = image.get(r1u, c1u);
    // Difference form keeps constant images exact.
    p00 + fx * (p01 - p00) + fy * (p10 - p00) + fx * fy * (p11 - p10 - p01 + p00)
}

/// Keys cubic convolution weights (a = -1/2) for offsets -1, 0, 1, 2.
fn keys_weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    ]
}

fn cubic(p: [f64; 4], w: [f64; 4]) -> f64 {
    p[1] + w[0] * (p[0] - p[1]) + w[2] * (p[2] - p[1]) + w[3] * (p[3] - p[1])
}

fn bicubic(image: &Image, row: f64, col: f64) -> f64 {
    let n = image.size();
    let last = (n - 1) as f64;
    let row = row.clamp(0.0, last);
    let col = col.clamp(0.0, last);
    let r0 = row.floor() as i64;
    let c0 = col.floor() as i64;
    let wy = keys_weights(row - r0 as f64);
    let wx = keys_weights(col - c0 as f64);
    let mut rows = [0.0; 4];
    for (k, slot) in rows.iter_mut().enumerate() {
        let r = clamp_index(r0 + k as i64 - 1, n);
        let mut p = [0.0; 4];
        for (l, q) in p.iter_mut().enumerate() {
            *q = image.get(r, clamp_index(c0 + l as i64 - 1, n));
        }
        *slot = cubic(p, wx);
    }
    cubic(rows, wy)
}
