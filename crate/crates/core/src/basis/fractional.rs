use num_complex::Complex64;

use crate::error::{MomentError, Result};

/// Fractional-order version of a radial kernel: `r -> sqrt(alpha) * r^(alpha-1) * base(r^alpha)`.
///
/// The weight is the unique factor under which `s = r^alpha` preserves
/// `int_0^1 R_n R_k^* r dr = delta_nk / (2 pi)`.
pub fn fractionalize<F>(base: F, alpha: f64) -> Result<impl Fn(f64) -> Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(MomentError::InvalidParameter(format!(
            "fractional parameter alpha must be > 0 (got {alpha})"
        )));
    }
    let scale = alpha.sqrt();
    Ok(move |r: f64| base(r.powf(alpha)) * (scale * r.powf(alpha - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{radial_eval, Family, MethodSpec};

    #[test]
    fn alpha_one_is_identity() {
        let efm = MethodSpec::new(Family::Efm).unwrap();
        let f = fractionalize(|r| radial_eval(&efm, 3, 0, r).unwrap(), 1.0).unwrap();
        for i in 1..50 {
            let r = i as f64 / 50.0;
            assert_eq!(f(r), radial_eval(&efm, 3, 0, r).unwrap());
        }
    }

    #[test]
    fn efm_at_two_is_pcet() {
        let efm = MethodSpec::new(Family::Efm).unwrap();
        let pcet = MethodSpec::new(Family::Pcet).unwrap();
        for n in [-2, 0, 1, 4] {
            let f = fractionalize(|r| radial_eval(&efm, n, 0, r).unwrap(), 2.0).unwrap();
            for i in 1..50 {
                let r = i as f64 / 50.0;
                let want = radial_eval(&pcet, n, 0, r).unwrap();
                assert!((f(r) - want).norm() < 1e-12, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn rejects_non_positive_alpha() {
        assert!(fractionalize(|_| Complex64::new(1.0, 0.0), 0.0).is_err());
        assert!(fractionalize(|_| Complex64::new(1.0, 0.0), -1.0).is_err());
    }
}
