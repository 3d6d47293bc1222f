//! Rotation-invariant descriptors, image degradations and a minimum-distance
//! classifier.
//!
//! Rotating an image by `phi` multiplies `M_nm` by `exp(-j m phi)`, so moduli
//! and products whose angular indices cancel are unchanged.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::basis::{MethodSpec, OrderIndex};
use crate::engine::MomentSet;
use crate::error::{MomentError, Result};
use crate::geometry::{sample_pixel, Interp};
use crate::image::Image;

/// Moduli `|M_nm|` in order-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub method: MethodSpec,
    pub k: usize,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &FeatureVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(MomentError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub fn magnitude_features(moments: &MomentSet) -> FeatureVector {
    FeatureVector {
        method: moments.method,
        k: moments.k,
        values: moments.values().iter().map(|v| v.norm()).collect(),
    }
}

/// One factor `M_nm^k` of a Flusser product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlusserTerm {
    pub n: i32,
    pub m: i32,
    pub k: i32,
}

/// A product `prod M_{n_i m_i}^{k_i}` with `sum m_i k_i = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlusserRecipe {
    terms: Vec<FlusserTerm>,
}

impl FlusserRecipe {
    pub fn new(terms: &[(i32, i32, i32)]) -> Result<FlusserRecipe> {
        if terms.is_empty() {
            return Err(MomentError::InvalidParameter("a Flusser recipe needs at least one term".into()));
        }
        let balance: i64 = terms.iter().map(|&(_, m, k)| m as i64 * k as i64).sum();
        if balance != 0 {
            return Err(MomentError::InvalidParameter(format!(
                "Flusser recipe is not rotation invariant: sum of m*k is {balance}"
            )));
        }
        Ok(FlusserRecipe {
            terms: terms.iter().map(|&(n, m, k)| FlusserTerm { n, m, k }).collect(),
        })
    }

    pub fn terms(&self) -> &[FlusserTerm] {
        &self.terms
    }
}

pub fn flusser_invariant(moments: &MomentSet, recipe: &FlusserRecipe) -> Result<Complex64> {
    let mut out = Complex64::new(1.0, 0.0);
    for t in recipe.terms() {
        let v = moments.get(t.n, t.m).ok_or_else(|| {
            MomentError::InvalidParameter(format!(
                "recipe needs M({}, {}), which is not in the moment set",
                t.n, t.m
            ))
        })?;
        if t.k < 0 && v == Complex64::new(0.0, 0.0) {
            return Err(MomentError::InvalidParameter(format!(
                "M({}, {}) is zero and cannot take the negative power {}",
                t.n, t.m, t.k
            )));
        }
        out *= v.powi(t.k);
    }
    Ok(out)
}

/// The phase map `M_nm -> exp(-j m phi) M_nm`: the moments of the image
/// rotated by `phi` radians in the sense of [`rotate_image`].
pub fn rotate_moments(moments: &MomentSet, phi: f64) -> MomentSet {
    moments.map(|OrderIndex { m, .. }, v| v * Complex64::from_polar(1.0, -(m as f64) * phi))
}

/// Rotates counter-clockwise (in `x` right, `y` down-the-rows coordinates)
/// about the image centre. Multiples of 90 degrees are exact pixel
/// permutations; otherwise samples falling outside the raster are 0.
pub fn rotate_image(image: &Image, angle_degrees: f64, interp: Interp) -> Result<Image> {
    if !angle_degrees.is_finite() {
        return Err(MomentError::InvalidParameter(format!(
            "rotation angle must be finite (got {angle_degrees})"
        )));
    }
    let n = image.size();
    let last = n - 1;
    let turns = angle_degrees.rem_euclid(360.0);
    let quarter = |f: &dyn Fn(usize, usize) -> (usize, usize)| {
        Image::from_fn(n, |row, col| {
            let (r, c) = f(row, col);
            image.get(r, c)
        })
    };
    match turns {
        t if t == 0.0 => return Ok(image.clone()),
        t if t == 90.0 => return quarter(&|row, col| (last - col, row)),
        t if t == 180.0 => return quarter(&|row, col| (last - row, last - col)),
        t if t == 270.0 => return quarter(&|row, col| (col, last - row)),
        _ => {}
    }
    let (sin, cos) = turns.to_radians().sin_cos();
    let c = last as f64 / 2.0;
    let edge = last as f64 + 1e-9;
    Image::from_fn(n, |row, col| {
        let (x, y) = (col as f64 - c, row as f64 - c);
        let sc = c + cos * x + sin * y;
        let sr = c - sin * x + cos * y;
        if sc < -1e-9 || sr < -1e-9 || sc > edge || sr > edge {
            0.0
        } else {
            sample_pixel(image, sr, sc, interp).clamp(0.0, 1.0)
        }
    })
}

/// Adds i.i.d. `N(0, variance)` noise and clips to `[0, 1]`.
pub fn add_gaussian_noise(image: &Image, variance: f64, seed: u64) -> Result<Image> {
    if !(variance.is_finite() && variance >= 0.0) {
        return Err(MomentError::InvalidParameter(format!(
            "noise variance must be finite and >= 0 (got {variance})"
        )));
    }
    if variance == 0.0 {
        return Ok(image.clone());
    }
    let normal = Normal::new(0.0, variance.sqrt())
        .map_err(|e| MomentError::InvalidParameter(format!("noise distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy: Vec<f64> = image.pixels().iter().map(|v| v + normal.sample(&mut rng)).collect();
    Image::from_clipped(image.size(), &noisy)
}

/// Label of the nearest gallery entry; ties go to the earliest entry.
pub fn nn_classify<'a>(query: &FeatureVector, gallery: &'a [(String, FeatureVector)]) -> Result<&'a str> {
    let mut best: Option<(f64, &str)> = None;
    for (label, v) in gallery {
        let d = query.distance(v)?;
        if best.is_none_or(|(b, _)| d < b) {
            best = Some((d, label));
        }
    }
    best.map(|(_, l)| l)
        .ok_or_else(|| MomentError::InvalidParameter("gallery is empty".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Family;
    use crate::engine::{decompose, Mapping, Rule, Scheme, Strategy};
    use crate::image::synthetic;

    fn fv(values: &[f64]) -> FeatureVector {
        FeatureVector {
            method: MethodSpec::new(Family::Zm).unwrap(),
            k: 0,
            values: values.to_vec(),
        }
    }

    #[test]
    fn classifier_examples() {
        let gallery = vec![("A".to_string(), fv(&[0.0, 0.0])), ("B".to_string(), fv(&[1.0, 1.0]))];
        assert_eq!(nn_classify(&fv(&[0.1, 0.1]), &gallery).unwrap(), "A");
        assert_eq!(nn_classify(&fv(&[1.0, 1.0]), &gallery).unwrap(), "B");
        assert_eq!(nn_classify(&fv(&[0.5, 0.5]), &gallery).unwrap(), "A");
        assert!(nn_classify(&fv(&[0.5]), &gallery).is_err());
        assert!(nn_classify(&fv(&[0.5, 0.5]), &[]).is_err());
    }

    #[test]
    fn rotation_permutations() {
        let img = synthetic::photo_like(17, 3).unwrap();
        assert_eq!(rotate_image(&img, 0.0, Interp::Bilinear).unwrap(), img);
        assert_eq!(rotate_image(&img, 360.0, Interp::Bilinear).unwrap(), img);
        let twice = rotate_image(&rotate_image(&img, 90.0, Interp::Nearest).unwrap(), 90.0, Interp::Nearest).unwrap();
        assert_eq!(twice, rotate_image(&img, 180.0, Interp::Bilinear).unwrap());
        let back = rotate_image(&rotate_image(&img, 90.0, Interp::Nearest).unwrap(), -90.0, Interp::Nearest).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn general_rotation_matches_quarter_turn_formula() {
        // 90 + tiny angle lands next to the exact permutation.
        let img = synthetic::photo_like(16, 2).unwrap();
        let exact = rotate_image(&img, 90.0, Interp::Bilinear).unwrap();
        let near = rotate_image(&img, 90.0 + 1e-9, Interp::Bilinear).unwrap();
        for (a, b) in exact.pixels().iter().zip(near.pixels()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn quarter_turn_keeps_magnitudes() {
        let img = synthetic::photo_like(32, 7).unwrap();
        let rot = rotate_image(&img, 90.0, Interp::Bilinear).unwrap();
        let method = MethodSpec::new(Family::Zm).unwrap();
        let scheme = Scheme::new(Mapping::Incircle, Rule::Upsample(2), Strategy::Recursive);
        let a = decompose(&img, &method, 8, &scheme).unwrap();
        let b = decompose(&rot, &method, 8, &scheme).unwrap();
        let (fa, fb) = (magnitude_features(&a), magnitude_features(&b));
        for (x, y) in fa.values.iter().zip(&fb.values) {
            assert!((x - y).abs() <= 1e-6 * x.max(1e-3), "{x} {y}");
        }
        // The phase changes by exp(-j m pi / 2).
        let predicted = rotate_moments(&a, std::f64::consts::FRAC_PI_2);
        for (x, y) in predicted.values().iter().zip(b.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn flusser_recipes() {
        assert!(FlusserRecipe::new(&[(2, 1, 1), (2, -1, 2)]).is_err());
        assert!(FlusserRecipe::new(&[]).is_err());
        let img = synthetic::photo_like(24, 1).unwrap();
        let method = MethodSpec::new(Family::Chfm).unwrap();
        let ms = decompose(&img, &method, 6, &Scheme::default_for(&method, 6)).unwrap();
        let single = flusser_invariant(&ms, &FlusserRecipe::new(&[(3, 0, 1)]).unwrap()).unwrap();
        assert_eq!(single, ms.get(3, 0).unwrap());
        let pair = FlusserRecipe::new(&[(2, 1, 1), (2, -1, 1)]).unwrap();
        let v = flusser_invariant(&ms, &pair).unwrap();
        assert!(v.im.abs() < 1e-12 * v.re.abs().max(1.0) && v.re >= 0.0);
        let mixed = FlusserRecipe::new(&[(3, 2, 1), (1, -1, 2), (4, 0, -1)]).unwrap();
        let before = flusser_invariant(&ms, &mixed).unwrap();
        let after = flusser_invariant(&rotate_moments(&ms, 0.7), &mixed).unwrap();
        assert!((before - after).norm() <= 1e-12 * before.norm().max(1.0));
        let missing = FlusserRecipe::new(&[(40, 0, 1)]).unwrap();
        assert!(flusser_invariant(&ms, &missing).is_err());
        let zero = ms.map(|_, _| Complex64::new(0.0, 0.0));
        assert!(flusser_invariant(&zero, &FlusserRecipe::new(&[(1, 0, -1)]).unwrap()).is_err());
    }

    #[test]
    fn noise() {
        let img = Image::constant(128, 0.5).unwrap();
        assert_eq!(add_gaussian_noise(&img, 0.0, 1).unwrap(), img);
        let a = add_gaussian_noise(&img, 0.05, 9).unwrap();
        assert_eq!(a, add_gaussian_noise(&img, 0.05, 9).unwrap());
        let n = a.pixels().len() as f64;
        let d: Vec<f64> = a.pixels().iter().map(|v| v - 0.5).collect();
        let mean = d.iter().sum::<f64>() / n;
        let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        assert!((var - 0.05).abs() < 0.05 * 0.05, "{var}");
        assert!(add_gaussian_noise(&img, -1.0, 0).is_err());
    }
}
