//! Harmonic moments through the FFT.
//!
//! With `s = r^beta` a harmonic kernel is `coef * r^e * H_n(s)` and `H_n` is a
//! short sum of `exp(j pi nu s)`. Sampling `f` on the grid
//! `s_k = (k + 1/2) / M`, `theta_l = 2 pi l / M` turns every moment into a
//! combination of entries of a two-dimensional DFT: length `M` in angle and a
//! zero-padded length `2M` in `s` (the half-integer phase shift contributes
//! `exp(-j pi nu / 2M)`).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::MomentSet;
use crate::basis::{order_set, HarmonicForm, MethodSpec};
use crate::error::{MomentError, Result};
use crate::geometry::{sample_disk, Interp, Mapping, Rule, Scheme, Strategy};
use crate::image::Image;

fn form_for(method: &MethodSpec) -> Result<HarmonicForm> {
    HarmonicForm::of(method).ok_or_else(|| {
        MomentError::Unsupported(format!("the fft strategy needs a harmonic family, not {}", method.label()))
    })
}

fn check_size(k: usize, m: usize) -> Result<()> {
    if m < 2 * k + 2 {
        return Err(MomentError::InvalidParameter(format!(
            "fft size {m} too small for K = {k} (needs at least {})",
            2 * k + 2
        )));
    }
    Ok(())
}

/// `g_kl = f(r_k, theta_l) * coef * r_k^(e + 2 - beta) / beta`, row-major in `k`.
fn sample_grid(image: &Image, form: &HarmonicForm, m: usize, interp: Interp) -> Vec<Complex64> {
    let mf = m as f64;
    (0..m)
        .into_par_iter()
        .flat_map_iter(|k| {
            let s = (k as f64 + 0.5) / mf;
            let r = s.powf(1.0 / form.beta);
            let jac = form.amplitude(r) * r.powf(2.0 - form.beta) / form.beta;
            (0..m).map(move |l| {
                let t = 2.0 * PI * l as f64 / mf;
                Complex64::new(sample_disk(image, r * t.cos(), r * t.sin(), interp) * jac, 0.0)
            })
        })
        .collect()
}

fn scheme_for(m: usize, interp: Interp) -> Scheme {
    Scheme::new(Mapping::Polar, Rule::Zoa, Strategy::Fft)
        .with_fft_size(m)
        .with_interp(interp)
}

pub(crate) fn fft_values(
    image: &Image,
    method: &MethodSpec,
    k: usize,
    m: usize,
    interp: Interp,
) -> Result<Vec<Complex64>> {
    check_size(k, m)?;
    let form = form_for(method)?;
    let mut grid = sample_grid(image, &form, m, interp);

    let mut planner = FftPlanner::<f64>::new();
    let angular = planner.plan_fft_forward(m);
    let radial = planner.plan_fft_forward(2 * m);
    grid.par_chunks_mut(m).for_each(|row| angular.process(row));

    // Radial transforms of the angular frequencies -K..K only.
    let ki = k as i32;
    let columns: Vec<Vec<Complex64>> = (-ki..=ki)
        .into_par_iter()
        .map(|mm| {
            let c = mm.rem_euclid(m as i32) as usize;
            let mut col = vec![Complex64::new(0.0, 0.0); 2 * m];
            for (kk, v) in col.iter_mut().take(m).enumerate() {
                *v = grid[kk * m + c];
            }
            radial.process(&mut col);
            col
        })
        .collect();

    let scale = 2.0 * PI / (m as f64 * m as f64);
    let period = 2 * m as i32;
    Ok(order_set(method, k)
        .indices
        .iter()
        .map(|idx| {
            let col = &columns[(idx.m + ki) as usize];
            form.terms(idx.n)
                .iter()
                .map(|t| {
                    let shift = Complex64::from_polar(1.0, -PI * t.nu as f64 / period as f64);
                    t.coef.conj() * shift * col[t.nu.rem_euclid(period) as usize]
                })
                .sum::<Complex64>()
                * scale
        })
        .collect())
}

/// Harmonic moments on an `M x M` polar grid through the FFT.
pub fn decompose_fft(image: &Image, method: &MethodSpec, k: usize, m: usize) -> Result<MomentSet> {
    let scheme = scheme_for(m, Interp::default());
    scheme.validate(method)?;
    let values = fft_values(image, method, k, m, scheme.interp)?;
    MomentSet::from_values(*method, k, scheme, image.size(), values)
}

/// The sums computed by [`decompose_fft`], evaluated directly from the
/// trigonometric kernel definitions.
pub fn decompose_polar_direct(image: &Image, method: &MethodSpec, k: usize, m: usize) -> Result<MomentSet> {
    check_size(k, m)?;
    let form = form_for(method)?;
    let scheme = scheme_for(m, Interp::default());
    let grid = sample_grid(image, &form, m, scheme.interp);
    let mf = m as f64;
    let scale = 2.0 * PI / (mf * mf);
    let values = order_set(method, k)
        .indices
        .par_iter()
        .map(|idx| {
            let mut acc = Complex64::new(0.0, 0.0);
            for kk in 0..m {
                let h = form.shape(idx.n, (kk as f64 + 0.5) / mf).conj();
                let mut row = Complex64::new(0.0, 0.0);
                for l in 0..m {
                    let t = 2.0 * PI * l as f64 / mf;
                    row += grid[kk * m + l] * Complex64::from_polar(1.0, -(idx.m as f64) * t);
                }
                acc += h * row;
            }
            acc * scale
        })
        .collect();
    MomentSet::from_values(*method, k, scheme, image.size(), values)
}
