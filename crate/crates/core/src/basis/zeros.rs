use super::method::MethodSpec;
use super::radial::RadialBasis;
use crate::error::{MomentError, Result};

const SAMPLES: usize = 4096;
const REFINE: usize = 32;

/// Number of sign changes of `R_n` on the open interval `(0, 1)`.
///
/// The kernel is sampled at 4096 interior points; every bracketed sign change
/// is then resampled finely so that a pair of nearly coincident zeros inside
/// one coarse step is counted as two rather than zero or one.
pub fn radial_zero_count(method: &MethodSpec, n: i32, m: i32) -> Result<usize> {
    if method.family().has_complex_radial() {
        return Err(MomentError::Unsupported(format!(
            "{} has a complex-valued radial kernel",
            method.label()
        )));
    }
    method.check_order(n, m)?;
    let basis = RadialBasis::new(method, n);
    let eval = |r: f64| basis.direct(n, m, r).re;
    let h = 1.0 / (SAMPLES + 1) as f64;

    let mut count = 0;
    let mut prev_r = h;
    let mut prev = eval(prev_r);
    for i in 2..=SAMPLES {
        let r = i as f64 * h;
        let cur = eval(r);
        if cur == 0.0 {
            continue;
        }
        if prev == 0.0 {
            prev = cur;
            prev_r = r;
            continue;
        }
        if prev.signum() != cur.signum() {
            count += refined_changes(&eval, prev_r, r).max(1);
        }
        prev = cur;
        prev_r = r;
    }
    Ok(count)
}

fn refined_changes(eval: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> usize {
    let mut changes = 0;
    let mut prev = eval(lo);
    for k in 1..=REFINE {
        let cur = eval(lo + (hi - lo) * k as f64 / REFINE as f64);
        if cur != 0.0 && prev != 0.0 && prev.signum() != cur.signum() {
            changes += 1;
        }
        if cur != 0.0 {
            prev = cur;
        }
    }
    changes
}
