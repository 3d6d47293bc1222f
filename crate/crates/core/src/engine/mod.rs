//! Decomposition of images into moment sets and reconstruction from them.
//!
//! [`decompose`] dispatches on the [`Scheme`]:
//!
//! | mapping | strategy | path |
//! |---|---|---|
//! | incircle / circumcircle | naive | every kernel value by direct summation |
//! | incircle / circumcircle | symmetric | direct summation on one octant, eight-fold folding |
//! | incircle / circumcircle | recursive | radial kernels tabulated per sample (recurrence for Jacobi families) |
//! | polar | naive / recursive | polar pixel tiling with exact angular integrals |
//! | polar | fft | resampling to an `(r^beta, theta)` grid and two FFT passes |
//!
//! All paths are deterministic: partial sums are formed over fixed sample
//! blocks and combined in block order, so the result does not depend on the
//! number of worker threads.

mod cartesian;
mod fft;
mod polar;
mod reconstruct;

use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{order_set, MethodSpec, OrderIndex};
use crate::error::{MomentError, Result};
use crate::image::Image;

pub use crate::geometry::{Interp, Mapping, Rule, Scheme, Strategy};
pub use cartesian::decompose_symmetric;
pub use fft::{decompose_fft, decompose_polar_direct};
pub use reconstruct::{reconstruct, reconstruct_field};

/// Moments `M_nm` of one image, in order-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub method: MethodSpec,
    pub k: usize,
    pub scheme: Scheme,
    /// Side of the decomposed raster.
    pub image_size: usize,
    indices: Vec<OrderIndex>,
    values: Vec<Complex64>,
}

impl MomentSet {
    /// Assembles a moment set; `values` must follow `order_set(method, k)`.
    pub fn from_values(
        method: MethodSpec,
        k: usize,
        scheme: Scheme,
        image_size: usize,
        values: Vec<Complex64>,
    ) -> Result<MomentSet> {
        let indices = order_set(&method, k).indices;
        if indices.len() != values.len() {
            return Err(MomentError::DimensionMismatch {
                expected: indices.len(),
                got: values.len(),
            });
        }
        Ok(MomentSet {
            method,
            k,
            scheme,
            image_size,
            indices,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn indices(&self) -> &[OrderIndex] {
        &self.indices
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, n: i32, m: i32) -> Option<Complex64> {
        self.indices
            .binary_search(&OrderIndex::new(n, m))
            .ok()
            .map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (OrderIndex, Complex64)> + '_ {
        self.indices.iter().copied().zip(self.values.iter().copied())
    }

    /// Whether every coefficient is finite.
    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// `sum |M_nm|^2`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// The coefficients of `S(k)` for `k <= self.k`. Coefficients do not
    /// depend on the bound they were computed under.
    pub fn truncate(&self, k: usize) -> Result<MomentSet> {
        if k > self.k {
            return Err(MomentError::InvalidParameter(format!(
                "cannot truncate a K = {} moment set to K = {k}",
                self.k
            )));
        }
        let values = order_set(&self.method, k)
            .indices
            .iter()
            .map(|idx| self.get(idx.n, idx.m).expect("S(k) is a subset of S(K)"))
            .collect();
        MomentSet::from_values(self.method, k, self.scheme, self.image_size, values)
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(OrderIndex, Complex64) -> Complex64) -> MomentSet {
        let mut out = self.clone();
        for (idx, v) in out.indices.iter().zip(out.values.iter_mut()) {
            *v = f(*idx, *v);
        }
        out
    }
}

/// Work counters of one decomposition.
#[derive(Debug, Default)]
pub struct EvalStats {
    /// Kernel values `V_nm` evaluated at a sample point.
    pub kernel_evals: AtomicU64,
    /// Radial values evaluated (direct or by recurrence).
    pub radial_evals: AtomicU64,
    /// Sample points in the integration domain.
    pub samples: AtomicU64,
}

impl EvalStats {
    pub fn kernel_evals(&self) -> u64 {
        self.kernel_evals.load(Ordering::Relaxed)
    }
    pub fn radial_evals(&self) -> u64 {
        self.radial_evals.load(Ordering::Relaxed)
    }
    pub fn samples(&self) -> u64 {
        self.samples.load(Ordering::Relaxed)
    }
    pub(crate) fn add_kernel(&self, v: u64) {
        self.kernel_evals.fetch_add(v, Ordering::Relaxed);
    }
    pub(crate) fn add_radial(&self, v: u64) {
        self.radial_evals.fetch_add(v, Ordering::Relaxed);
    }
    pub(crate) fn add_samples(&self, v: u64) {
        self.samples.fetch_add(v, Ordering::Relaxed);
    }
}

/// Moments of `image` up to bound `k` under `scheme`.
pub fn decompose(image: &Image, method: &MethodSpec, k: usize, scheme: &Scheme) -> Result<MomentSet> {
    decompose_with_stats(image, method, k, scheme, &EvalStats::default())
}

/// As [`decompose`], recording work counters in `stats`.
pub fn decompose_with_stats(
    image: &Image,
    method: &MethodSpec,
    k: usize,
    scheme: &Scheme,
    stats: &EvalStats,
) -> Result<MomentSet> {
    scheme.validate(method)?;
    let values = match (scheme.mapping, scheme.strategy) {
        (Mapping::Polar, Strategy::Fft) => {
            fft::fft_values(image, method, k, scheme.fft_size_for(k), scheme.interp)?
        }
        (Mapping::Polar, _) => polar::tiling_values(image, method, k, scheme, stats)?,
        (_, Strategy::Naive) => cartesian::naive_values(image, method, k, scheme, stats)?,
        (_, Strategy::Symmetric) => cartesian::symmetric_values(image, method, k, scheme, stats)?,
        (_, Strategy::Recursive) => cartesian::tabulated_values(image, method, k, scheme, stats)?,
        (_, Strategy::Fft) => unreachable!("rejected by Scheme::validate"),
    };
    MomentSet::from_values(*method, k, *scheme, image.size(), values)
}

/// Runs `f` on a dedicated pool of `threads` workers (`0` = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| MomentError::InvalidParameter(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Sums per-block partial vectors in block order.
pub(crate) fn fold_blocks(len: usize, blocks: Vec<Vec<Complex64>>) -> Vec<Complex64> {
    let mut total = vec![Complex64::new(0.0, 0.0); len];
    for block in blocks {
        for (t, v) in total.iter_mut().zip(block) {
            *t += v;
        }
    }
    total
}
