//! The three experiments (calculation accuracy and time, reconstruction,
//! rotation-invariant recognition) at configurable scale, with CSV and JSON
//! reports.
//!
//! Every non-timing value in a report is a deterministic function of the
//! configuration: noise streams are seeded per test image and the engine is
//! independent of the worker count.

mod report;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::MethodSpec;
use crate::engine::{decompose, reconstruct, Interp, Mapping, MomentSet, Rule, Scheme, Strategy};
use crate::error::{MomentError, Result};
use crate::image::{synthetic, Image};
use crate::invariants::{add_gaussian_noise, magnitude_features, nn_classify, rotate_image, FeatureVector};
use crate::io::read_image;
use crate::metrics::{ace_flagged, ccp, decomposition_time, msre_on, ssim_on};

pub use report::{Report, ReportRow, REPORT_VERSION};

fn default_source() -> String {
    "unity".into()
}
fn default_n() -> usize {
    128
}
fn default_variances() -> Vec<f64> {
    vec![0.0]
}
fn default_gallery_size() -> usize {
    10
}
fn default_repeats() -> usize {
    3
}
fn default_rotation_interp() -> Interp {
    Interp::Bilinear
}

/// Configuration shared by the three experiments.
///
/// `image_source` is `unity`, `checker`, `gradient`, `photo` (a seeded
/// synthetic scene), `gallery` (recognition only: `gallery_size` synthetic
/// scenes) or a path: a PGM file, or for recognition a directory of PGM
/// files read in file-name order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub methods: Vec<MethodSpec>,
    #[serde(rename = "K_values", alias = "k_values")]
    pub k_values: Vec<usize>,
    #[serde(default = "default_source")]
    pub image_source: String,
    /// Side of built-in images.
    #[serde(rename = "N", alias = "n", default = "default_n")]
    pub n: usize,
    /// Test rotations in degrees.
    #[serde(default)]
    pub rotations: Vec<f64>,
    #[serde(default = "default_variances")]
    pub noise_variances: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Replaces the experiment's default scheme for every method.
    #[serde(default)]
    pub scheme: Option<Scheme>,
    /// Strategies to run on top of the scheme; empty keeps its own.
    #[serde(default)]
    pub strategies: Vec<Strategy>,
    #[serde(default = "default_gallery_size")]
    pub gallery_size: usize,
    /// Timed runs per decomposition time measurement (median reported).
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default = "default_rotation_interp")]
    pub rotation_interp: Interp,
    /// Directory for reconstructed rasters, if wanted.
    #[serde(default)]
    pub dump_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(methods: Vec<MethodSpec>, k_values: Vec<usize>) -> ExperimentConfig {
        ExperimentConfig {
            methods,
            k_values,
            image_source: default_source(),
            n: default_n(),
            rotations: Vec::new(),
            noise_variances: default_variances(),
            seed: 0,
            scheme: None,
            strategies: Vec::new(),
            gallery_size: default_gallery_size(),
            repeats: default_repeats(),
            rotation_interp: default_rotation_interp(),
            dump_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text).map_err(|e| MomentError::Format(format!("experiment config: {e}")))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() {
            return Err(MomentError::InvalidParameter("config lists no methods".into()));
        }
        if self.k_values.is_empty() {
            return Err(MomentError::InvalidParameter("config lists no K values".into()));
        }
        if self.n < 2 {
            return Err(MomentError::InvalidParameter(format!("N must be >= 2 (got {})", self.n)));
        }
        if self.repeats == 0 {
            return Err(MomentError::InvalidParameter("repeats must be >= 1".into()));
        }
        if let Some(v) = self.noise_variances.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(MomentError::InvalidParameter(format!("noise variance {v} is not >= 0")));
        }
        if let Some(r) = self.rotations.iter().find(|r| !r.is_finite()) {
            return Err(MomentError::InvalidParameter(format!("rotation {r} is not finite")));
        }
        Ok(())
    }

    /// `(method, scheme)` cells: the base scheme with each configured
    /// strategy. Pairings the method does not support are skipped.
    fn cells(&self, base: impl Fn(&MethodSpec) -> Scheme) -> Vec<(MethodSpec, Scheme)> {
        let mut out = Vec::new();
        for method in &self.methods {
            let scheme = self.scheme.unwrap_or_else(|| base(method));
            let variants: Vec<Scheme> = if self.strategies.is_empty() {
                vec![scheme]
            } else {
                self.strategies.iter().map(|&s| with_strategy(scheme, s)).collect()
            };
            for s in variants {
                match s.validate(method) {
                    Ok(()) => out.push((*method, s)),
                    Err(e) => log::warn!("skipping {} under {}: {e}", method.label(), s.label()),
                }
            }
        }
        out
    }
}

/// `scheme` switched to `strategy`, moving between the polar and Cartesian
/// mappings where the strategy requires it.
fn with_strategy(scheme: Scheme, strategy: Strategy) -> Scheme {
    let mapping = match (strategy, scheme.mapping) {
        (Strategy::Fft, _) => Mapping::Polar,
        (Strategy::Symmetric, Mapping::Polar) => Mapping::Incircle,
        (_, m) => m,
    };
    Scheme {
        mapping,
        strategy,
        ..scheme
    }
}

/// Scheme of the accuracy experiment: the FFT for harmonic families, and for
/// the others 3x3 sub-sampling of the incircle raster restricted to the disk,
/// under which a unity raster is exactly the unity function on the disk.
pub fn accuracy_scheme(method: &MethodSpec) -> Scheme {
    if method.family().is_harmonic() {
        Scheme::new(Mapping::Polar, Rule::default(), Strategy::Fft)
    } else {
        Scheme::new(Mapping::Incircle, Rule::default(), Strategy::Recursive).with_strict(true)
    }
}

/// Default scheme of the recognition experiment: the FFT for harmonic
/// families, otherwise one sample per pixel of the incircle raster.
pub fn recognition_scheme(method: &MethodSpec) -> Scheme {
    if method.family().is_harmonic() {
        Scheme::new(Mapping::Polar, Rule::default(), Strategy::Fft)
    } else {
        Scheme::new(Mapping::Incircle, Rule::Zoa, Strategy::Recursive)
    }
}

/// Loads a single image source at side `n`.
pub fn load_image(source: &str, n: usize, seed: u64) -> Result<Image> {
    match source {
        "unity" => synthetic::unity(n),
        "checker" => synthetic::checker(n, 8),
        "gradient" => synthetic::radial_gradient(n),
        "photo" => synthetic::photo_like(n, seed),
        path => read_image(path),
    }
}

/// Loads the gallery of the recognition experiment.
pub fn load_gallery(config: &ExperimentConfig) -> Result<Vec<(String, Image)>> {
    let gallery = if config.image_source == "gallery" {
        synthetic::gallery(config.gallery_size, config.n, config.seed)?
    } else {
        let dir = Path::new(&config.image_source);
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.retain(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("pgm")));
        paths.sort();
        paths
            .into_iter()
            .map(|p| {
                let label = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                Ok((label, read_image(&p)?))
            })
            .collect::<Result<Vec<_>>>()?
    };
    if gallery.len() < 2 {
        return Err(MomentError::InvalidParameter(format!(
            "recognition needs at least 2 gallery images (got {})",
            gallery.len()
        )));
    }
    Ok(gallery)
}

fn row(experiment: &str, method: &MethodSpec, k: usize, scheme: &Scheme, metric: &str, value: f64) -> ReportRow {
    ReportRow {
        experiment: experiment.into(),
        method: method.label(),
        params: method.params(),
        k,
        strategy: scheme.label(),
        metric: metric.into(),
        value,
        flag: String::new(),
    }
}

/// Calculation error and decomposition time on the unity image.
pub fn run_accuracy(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let image = load_image(&config.image_source, config.n, config.seed)?;
    let mut report = Report::new();
    for (method, scheme) in config.cells(accuracy_scheme) {
        for &k in &config.k_values {
            let moments = decompose(&image, &method, k, &scheme)?;
            let ace = ace_flagged(&moments);
            let mut r = row("accuracy", &method, k, &scheme, "ace", ace.value);
            if ace.unstable {
                r.flag = "unstable".into();
            }
            report.rows.push(r);
            let dt = decomposition_time(config.repeats, || decompose(&image, &method, k, &scheme))?;
            let mut r = row("accuracy", &method, k, &scheme, "dt_seconds", dt.as_secs_f64());
            r.flag = "timing".into();
            report.rows.push(r);
        }
    }
    Ok(report)
}

fn file_label(method: &MethodSpec) -> String {
    method
        .label()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '_' })
        .collect()
}

/// Reconstruction error and similarity per method and `K`.
pub fn run_reconstruction(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    if config.k_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(MomentError::InvalidParameter("K values must be sorted ascending".into()));
    }
    let image = load_image(&config.image_source, config.n, config.seed)?;
    let n = image.size();
    if let Some(dir) = &config.dump_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut report = Report::new();
    for (method, scheme) in config.cells(|m| Scheme::default_for(m, 0)) {
        for &k in &config.k_values {
            let moments = decompose(&image, &method, k, &scheme)?;
            let out = reconstruct(&moments, n)?;
            let mut r = row("reconstruction", &method, k, &scheme, "msre", msre_on(&image, &out, scheme.mapping)?);
            if !moments.is_finite() {
                r.flag = "unstable".into();
            }
            report.rows.push(r);
            report.rows.push(row(
                "reconstruction",
                &method,
                k,
                &scheme,
                "ssim",
                ssim_on(&image, &out, scheme.mapping)?,
            ));
            if let Some(dir) = &config.dump_dir {
                let path = dir.join(format!("{}_{}_K{k}.pgm", file_label(&method), scheme.strategy));
                crate::io::write_image(&out, path)?;
            }
        }
    }
    Ok(report)
}

/// Seed of the noise stream of one test image.
fn test_seed(seed: u64, image: usize, rotation: usize, variance: usize) -> u64 {
    let mut s = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in [image, rotation, variance] {
        s = s.wrapping_mul(0x1000_0000_01b3).wrapping_add(v as u64 + 1);
    }
    s
}

fn features(image: &Image, method: &MethodSpec, k: usize, scheme: &Scheme) -> Result<(FeatureVector, MomentSet)> {
    let ms = decompose(image, method, k, scheme)?;
    Ok((magnitude_features(&ms), ms))
}

/// Nearest-neighbour recognition of rotated, noisy copies of the gallery.
///
/// Each gallery image is rotated by every configured angle (0 only when the
/// list is empty) and then degraded with every noise variance. One CCP row
/// is written per method, `K` and variance; its metric reads
/// `ccp@variance=<v>`.
pub fn run_recognition(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let gallery = load_gallery(config)?;
    let rotations = if config.rotations.is_empty() {
        vec![0.0]
    } else {
        config.rotations.clone()
    };
    // Rotated copies are shared by every method and variance.
    let rotated: Vec<Vec<Image>> = gallery
        .iter()
        .map(|(_, img)| {
            rotations
                .iter()
                .map(|&a| rotate_image(img, a, config.rotation_interp))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut report = Report::new();
    for (method, scheme) in config.cells(recognition_scheme) {
        for &k in &config.k_values {
            let train: Vec<(String, FeatureVector)> = gallery
                .par_iter()
                .map(|(label, img)| Ok((label.clone(), features(img, &method, k, &scheme)?.0)))
                .collect::<Result<_>>()?;
            for (vi, &variance) in config.noise_variances.iter().enumerate() {
                let cases: Vec<(usize, usize)> = (0..gallery.len())
                    .flat_map(|i| (0..rotations.len()).map(move |r| (i, r)))
                    .collect();
                let outcome: Vec<(String, bool)> = cases
                    .par_iter()
                    .map(|&(i, r)| {
                        let noisy = add_gaussian_noise(&rotated[i][r], variance, test_seed(config.seed, i, r, vi))?;
                        let (fv, ms) = features(&noisy, &method, k, &scheme)?;
                        Ok((nn_classify(&fv, &train)?.to_string(), ms.is_finite()))
                    })
                    .collect::<Result<_>>()?;
                let predictions: Vec<&str> = outcome.iter().map(|(p, _)| p.as_str()).collect();
                let truth: Vec<&str> = cases.iter().map(|&(i, _)| gallery[i].0.as_str()).collect();
                let mut r = row(
                    "recognition",
                    &method,
                    k,
                    &scheme,
                    &format!("ccp@variance={variance}"),
                    ccp(&predictions, &truth)?,
                );
                if outcome.iter().any(|(_, finite)| !finite) {
                    r.flag = "unstable".into();
                }
                report.rows.push(r);
            }
        }
    }
    Ok(report)
}
