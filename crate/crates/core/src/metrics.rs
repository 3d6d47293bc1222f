//! Evaluation measures: calculation error, decomposition time, reconstruction
//! error, structural similarity and classification rate.

use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::engine::{with_threads, MomentSet};
use crate::error::{MomentError, Result};
use crate::geometry::Mapping;
use crate::image::Image;

/// Average calculation error of moments of the unity image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ace {
    /// `sum_{m != 0} |M_nm| / |S(K)|`, `+inf` once any coefficient is
    /// non-finite.
    pub value: f64,
    /// Set when a coefficient overflowed or became NaN.
    pub unstable: bool,
}

pub fn ace_flagged(moments: &MomentSet) -> Ace {
    if moments.is_empty() {
        return Ace {
            value: 0.0,
            unstable: false,
        };
    }
    let mut sum = 0.0;
    let mut unstable = false;
    for (idx, v) in moments.iter() {
        if !(v.re.is_finite() && v.im.is_finite()) {
            unstable = true;
        } else if idx.m != 0 {
            sum += v.norm();
        }
    }
    let value = sum / moments.len() as f64;
    if unstable || !value.is_finite() {
        Ace {
            value: f64::INFINITY,
            unstable: true,
        }
    } else {
        Ace { value, unstable }
    }
}

/// The divisor is the full order-set size, including the `m = 0` entries
/// left out of the sum.
pub fn ace(moments: &MomentSet) -> f64 {
    ace_flagged(moments).value
}

static TIMING: Mutex<()> = Mutex::new(());

/// Median wall-clock time of `repeats` runs of `task` on a single worker.
///
/// Timed regions never overlap within the process.
pub fn decomposition_time<T>(repeats: usize, mut task: impl FnMut() -> T + Send) -> Result<Duration> {
    if repeats == 0 {
        return Err(MomentError::InvalidParameter("repeats must be >= 1".into()));
    }
    let _guard = TIMING.lock().unwrap_or_else(|e| e.into_inner());
    let mut times = with_threads(1, || {
        (0..repeats)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(task());
                start.elapsed()
            })
            .collect::<Vec<_>>()
    })?;
    times.sort();
    Ok(times[repeats / 2])
}

/// Pixels whose centre lies in the closed unit disk under `mapping`
/// (polar schemes read the raster through the incircle).
pub fn disk_mask(n: usize, mapping: Mapping) -> Vec<bool> {
    let mapping = match mapping {
        Mapping::Polar => Mapping::Incircle,
        m => m,
    };
    let mut mask = Vec::with_capacity(n * n);
    for row in 1..=n {
        for col in 1..=n {
            let inside = mapping.cell(col, row, n).map(|c| c.center_radius() <= 1.0).unwrap_or(false);
            mask.push(inside);
        }
    }
    mask
}

fn masked_pairs<'a>(a: &'a Image, b: &'a Image, mapping: Mapping) -> Result<Vec<(f64, f64)>> {
    if a.size() != b.size() {
        return Err(MomentError::DimensionMismatch {
            expected: a.size(),
            got: b.size(),
        });
    }
    Ok(disk_mask(a.size(), mapping)
        .into_iter()
        .zip(a.pixels().iter().zip(b.pixels()))
        .filter(|(inside, _)| *inside)
        .map(|(_, (x, y))| (*x, *y))
        .collect())
}

/// `sum (f - g)^2 / sum f^2` over the incircle disk.
pub fn msre(original: &Image, reconstructed: &Image) -> Result<f64> {
    msre_on(original, reconstructed, Mapping::Incircle)
}

/// [`msre`] over the disk of `mapping`.
pub fn msre_on(original: &Image, reconstructed: &Image, mapping: Mapping) -> Result<f64> {
    let pairs = masked_pairs(original, reconstructed, mapping)?;
    let num: f64 = pairs.iter().map(|(f, g)| (f - g) * (f - g)).sum();
    let den: f64 = pairs.iter().map(|(f, _)| f * f).sum();
    if den == 0.0 {
        return Err(MomentError::InvalidImage("MSRE undefined: original is zero on the disk".into()));
    }
    Ok(num / den)
}

/// Global structural similarity over the incircle disk, on the 0 to 255
/// scale. A single window covers the whole disk.
pub fn ssim(original: &Image, reconstructed: &Image) -> Result<f64> {
    ssim_on(original, reconstructed, Mapping::Incircle)
}

/// [`ssim`] over the disk of `mapping`.
pub fn ssim_on(original: &Image, reconstructed: &Image, mapping: Mapping) -> Result<f64> {
    let pairs = masked_pairs(original, reconstructed, mapping)?;
    if pairs.is_empty() {
        return Err(MomentError::InvalidImage("no pixel inside the disk".into()));
    }
    let n = pairs.len() as f64;
    let (mut mf, mut mg) = (0.0, 0.0);
    for (f, g) in &pairs {
        mf += 255.0 * f;
        mg += 255.0 * g;
    }
    mf /= n;
    mg /= n;
    let (mut vf, mut vg, mut cov) = (0.0, 0.0, 0.0);
    for (f, g) in &pairs {
        let (df, dg) = (255.0 * f - mf, 255.0 * g - mg);
        vf += df * df;
        vg += dg * dg;
        cov += df * dg;
    }
    vf /= n;
    vg /= n;
    cov /= n;
    let c1 = (0.01f64 * 255.0).powi(2);
    let c2 = (0.03f64 * 255.0).powi(2);
    Ok((2.0 * mf * mg + c1) * (2.0 * cov + c2) / ((mf * mf + mg * mg + c1) * (vf + vg + c2)))
}

/// Correct classification percentage.
pub fn ccp<T: PartialEq>(predictions: &[T], truth: &[T]) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(MomentError::DimensionMismatch {
            expected: truth.len(),
            got: predictions.len(),
        });
    }
    if truth.is_empty() {
        return Err(MomentError::InvalidParameter("no predictions to score".into()));
    }
    let correct = predictions.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(100.0 * correct as f64 / truth.len() as f64)
}
