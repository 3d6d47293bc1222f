//! Radial and angular kernels of the unit-disk moment families.
//!
//! A kernel factors as `V_nm(r, theta) = R_n(r) * exp(j m theta)`. This module
//! evaluates `R_n` for every family, either by direct summation of the
//! defining formula ([`radial_eval`]) or by a stable recurrence
//! ([`radial_table_recursive`]), and enumerates the order sets `S(K)`.

mod bessel;
mod fractional;
mod method;
mod order;
mod radial;
mod recurrence;
mod zeros;

use num_complex::Complex64;

pub use bessel::{bessel_j, bessel_zero};
pub use fractional::fractionalize;
pub use method::{Family, MethodSpec, DEFAULT_BESSEL_ORDER, DEFAULT_JACOBI_P, DEFAULT_JACOBI_Q};
pub use order::{order_set, order_set_cardinality, OrderIndex, OrderSet};
pub use radial::{HarmonicForm, HarmonicTerm, RadialBasis};
pub use recurrence::{radial_table_recursive, JacobiChain};
pub use zeros::radial_zero_count;

use crate::error::{MomentError, Result};

/// `R_n(r)` by direct summation. `m` matters only for ZM and PZM.
///
/// Fails for `r` outside `[0, 1]`, for an illegal `(n, m)`, and at `r = 0`
/// when the kernel is unbounded there.
pub fn radial_eval(method: &MethodSpec, n: i32, m: i32, r: f64) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(MomentError::InvalidParameter(format!(
            "radius must lie in [0, 1] (got {r})"
        )));
    }
    method.check_order(n, m)?;
    let basis = RadialBasis::new(method, n);
    if r == 0.0 && basis.singular_at_origin(m) {
        return Err(MomentError::Singularity {
            family: method.label(),
            r,
        });
    }
    Ok(basis.direct(n, m, r))
}

/// `exp(j m theta)`.
pub fn angular_eval(m: i32, theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, m as f64 * theta)
}
