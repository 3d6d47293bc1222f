//! Stable three-term recurrences for the Jacobi-polynomial kernels.
//!
//! Every Jacobi family can be written as `R(r) = w(r) * p_i(x)` where `p_i`
//! is the orthonormal Jacobi polynomial of degree `i` in `x = 2r - 1`
//! (`x = 2r^2 - 1` for ZM, `x = 2r^alpha - 1` for FJFM) and `w` does not depend
//! on `i`. The kernels therefore obey the orthonormal Jacobi recurrence
//!
//! `x p_i = A_{i+1} p_{i+1} + B_i p_i + A_i p_{i-1}`
//!
//! whose coefficients are bounded for all degrees. The two lowest orders are
//! seeded by direct summation.

use num_complex::Complex64;

use super::method::{Family, MethodSpec};
use super::radial::RadialBasis;
use crate::error::{MomentError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Variable {
    Linear,
    Square,
    Power(f64),
}

/// Recurrence state for the radial kernels of one method sharing one `|m|`.
#[derive(Debug, Clone)]
pub struct JacobiChain {
    basis: RadialBasis,
    m: i32,
    variable: Variable,
    first: i32,
    step: i32,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl JacobiChain {
    /// Chain covering every legal order `n <= n_max` at repetition `m`.
    pub fn new(method: &MethodSpec, m: i32, n_max: i32) -> Result<JacobiChain> {
        let am = m.unsigned_abs() as i32;
        let (alpha_p, beta_p, variable, first, step) = match method.family() {
            Family::Zm => (0.0, am as f64, Variable::Square, am, 2),
            Family::Pzm => (0.0, 2.0 * am as f64 + 1.0, Variable::Linear, am, 1),
            Family::Ofmm => (0.0, 1.0, Variable::Linear, 0, 1),
            Family::Chfm => (0.5, 0.5, Variable::Linear, 0, 1),
            Family::Pjfm => (1.0, 2.0, Variable::Linear, 0, 1),
            Family::Jfm => (method.p() - method.q(), method.q() - 1.0, Variable::Linear, 0, 1),
            Family::Fjfm => (
                method.p() - method.q(),
                method.q() - 1.0,
                Variable::Power(method.alpha()),
                0,
                1,
            ),
            f => {
                return Err(MomentError::Unsupported(format!(
                    "{f} has no Jacobi recurrence"
                )))
            }
        };
        let len = if n_max < first {
            0
        } else {
            ((n_max - first) / step + 1) as usize
        };
        let (a, b) = coefficients(alpha_p, beta_p, len);
        Ok(JacobiChain {
            basis: RadialBasis::new(method, n_max),
            m,
            variable,
            first,
            step,
            a,
            b,
        })
    }

    /// Number of orders covered.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Order `n` of entry `i`.
    pub fn order(&self, i: usize) -> i32 {
        self.first + self.step * i as i32
    }

    /// Writes `R_{order(i)}(r)` into `out[i]` for every entry.
    pub fn fill(&self, r: f64, out: &mut [f64]) {
        let len = self.len();
        debug_assert!(out.len() >= len);
        if len == 0 {
            return;
        }
        out[0] = self.basis.direct(self.first, self.m, r).re;
        if len == 1 {
            return;
        }
        out[1] = self.basis.direct(self.first + self.step, self.m, r).re;
        let x = match self.variable {
            Variable::Linear => 2.0 * r - 1.0,
            Variable::Square => 2.0 * r * r - 1.0,
            Variable::Power(alpha) => 2.0 * r.powf(alpha) - 1.0,
        };
        for i in 1..len - 1 {
            out[i + 1] = ((x - self.b[i]) * out[i] - self.a[i] * out[i - 1]) / self.a[i + 1];
        }
    }
}

/// Recurrence coefficients `A_1..A_{len-1}` (index 0 unused) and
/// `B_0..B_{len-1}` of the orthonormal Jacobi polynomials with weight
/// `(1-x)^a (1+x)^b`.
fn coefficients(a: f64, b: f64, len: usize) -> (Vec<f64>, Vec<f64>) {
    let mut ac = vec![0.0; len];
    let mut bc = vec![0.0; len];
    for i in 0..len {
        let s = i as f64;
        let t = 2.0 * s + a + b;
        bc[i] = if i == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (t * (t + 2.0))
        };
        ac[i] = match i {
            0 => 0.0,
            // The general form is 0/0 when a + b = -1.
            1 => 2.0 / (2.0 + a + b) * ((1.0 + a) * (1.0 + b) / (3.0 + a + b)).sqrt(),
            _ => 2.0 / t * (s * (s + a) * (s + b) * (s + a + b) / ((t - 1.0) * (t + 1.0))).sqrt(),
        };
    }
    (ac, bc)
}

/// Radial values of orders `0..=n_max` at every sample, computed by
/// recurrence. Row `n` is all zeros when `(n, m)` is not a legal index.
pub fn radial_table_recursive(
    method: &MethodSpec,
    m: i32,
    n_max: i32,
    r_samples: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    if n_max < 0 {
        return Err(MomentError::InvalidParameter(format!(
            "n_max must be >= 0 (got {n_max})"
        )));
    }
    let chain = JacobiChain::new(method, m, n_max)?;
    let mut table = vec![vec![Complex64::new(0.0, 0.0); r_samples.len()]; n_max as usize + 1];
    let mut buf = vec![0.0; chain.len()];
    for (j, &r) in r_samples.iter().enumerate() {
        chain.fill(r, &mut buf);
        for (i, v) in buf.iter().enumerate() {
            table[chain.order(i) as usize][j] = Complex64::new(*v, 0.0);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Vec<f64> {
        (1..200).map(|i| i as f64 / 200.0).collect()
    }

    // Order-10 kernels at r = 0.05, 0.3, 0.55, 0.81, 0.97, from 40-digit
    // evaluation of the defining formulas.
    fn order_ten_reference() -> Vec<(MethodSpec, i32, [f64; 5])> {
        vec![
            (MethodSpec::new(Family::Pzm).unwrap(), 0, [-2.7494033811092676245, -0.46379068265363709822, -0.57430748594885168157, -0.5380820650532513, -0.77300993918235187476]),
            (MethodSpec::new(Family::Pzm).unwrap(), 3, [-0.39807649384557946305, 0.87411652205748520691, -0.13578437613262530809, -0.38452906179373002795, -0.75755806715947780109]),
            (MethodSpec::new(Family::Ofmm).unwrap(), 0, [-2.7494033811092676245, -0.46379068265363709822, -0.57430748594885168157, -0.5380820650532513, -0.77300993918235187476]),
            (MethodSpec::new(Family::Pjfm).unwrap(), 0, [-0.77865565835960531511, -0.67757089277127780833, -0.54453259434437846854, -0.32414551178082828035, -0.25240085870371265503]),
            (MethodSpec::new(Family::Chfm).unwrap(), 0, [-2.9552708689583764986, 0.15850980303909111981, -0.27502317385609391191, -0.26963428652361759878, -0.49703116402905457366]),
            (MethodSpec::jfm(3.0, 3.0).unwrap(), 0, [-0.13617083732875528731, -0.85841660028412433664, -0.57557447127031125143, -0.56197434841282787362, -0.78067830729612408081]),
            (MethodSpec::jfm(5.5, 2.5).unwrap(), 0, [-2.8602145568771602319, 0.4819800373203768563, 0.40928469568665691873, 0.5746562230119586656, 0.88671376275895132011]),
            (MethodSpec::fjfm(3.0, 3.0, 2.0).unwrap(), 0, [0.39995141576374794967, -0.84122720701959072516, -0.65837753174730032676, 0.35676396538208510629, 0.10024186144879787587]),
        ]
    }

    #[test]
    fn matches_high_precision_reference() {
        let rs = [0.05, 0.3, 0.55, 0.81, 0.97];
        for (method, m, want) in order_ten_reference() {
            let table = radial_table_recursive(&method, m, 10, &rs).unwrap();
            for (got, want) in table[10].iter().zip(want) {
                assert!((got.re - want).abs() < 1e-12, "{method} m={m}: {} vs {want}", got.re);
            }
        }
    }

    #[test]
    fn agrees_with_direct_summation() {
        // Direct sums of shifted Jacobi polynomials in powers of r cancel
        // heavily (the term moduli grow like 5.8^n), so agreement is bounded
        // by 1e-10 plus the rounding error of the sum itself.
        let methods = [
            MethodSpec::new(Family::Zm).unwrap(),
            MethodSpec::new(Family::Pzm).unwrap(),
            MethodSpec::new(Family::Ofmm).unwrap(),
            MethodSpec::new(Family::Chfm).unwrap(),
            MethodSpec::new(Family::Pjfm).unwrap(),
            MethodSpec::jfm(3.0, 3.0).unwrap(),
            MethodSpec::jfm(5.5, 2.5).unwrap(),
            MethodSpec::fjfm(3.0, 3.0, 0.5).unwrap(),
            MethodSpec::fjfm(4.0, 3.0, 2.0).unwrap(),
        ];
        let rs = grid();
        for method in methods {
            let direct = RadialBasis::new(&method, 10);
            for m in [0, 1, 3] {
                let table = radial_table_recursive(&method, m, 10, &rs).unwrap();
                for n in 0..=10 {
                    if !method.is_legal(n, m) {
                        continue;
                    }
                    for (j, &r) in rs.iter().enumerate() {
                        let d = direct.direct(n, m, r).re;
                        let t = table[n as usize][j].re;
                        let rounding = 32.0 * f64::EPSILON * direct.condition_sum(n, m, r);
                        assert!(
                            (d - t).abs() <= 1e-10 + rounding,
                            "{method} n={n} m={m} r={r}: {d} vs {t}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn well_conditioned_families_agree_tightly() {
        let rs = grid();
        for method in [MethodSpec::new(Family::Zm).unwrap(), MethodSpec::new(Family::Chfm).unwrap()] {
            let direct = RadialBasis::new(&method, 10);
            for m in [0, 2] {
                let table = radial_table_recursive(&method, m, 10, &rs).unwrap();
                for n in 0..=10 {
                    if !method.is_legal(n, m) {
                        continue;
                    }
                    for (j, &r) in rs.iter().enumerate() {
                        let d = direct.direct(n, m, r).re;
                        assert!((d - table[n as usize][j].re).abs() <= 1e-10, "{method} n={n} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn ofmm_first_row_and_jfm_identity() {
        let ofmm = MethodSpec::new(Family::Ofmm).unwrap();
        let t = radial_table_recursive(&ofmm, 0, 5, &[0.5]).unwrap();
        let want = RadialBasis::new(&ofmm, 0).direct(0, 0, 0.5).re;
        assert!((t[0][0].re - want).abs() < 1e-12);

        let jfm = MethodSpec::jfm(2.0, 2.0).unwrap();
        let rs = grid();
        let a = radial_table_recursive(&jfm, 0, 10, &rs).unwrap();
        let b = radial_table_recursive(&ofmm, 0, 10, &rs).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((x - y).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn zm_constant_row() {
        let zm = MethodSpec::new(Family::Zm).unwrap();
        let t = radial_table_recursive(&zm, 0, 0, &[1.0]).unwrap();
        assert!((t[0][0].re - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn illegal_rows_are_zero() {
        let zm = MethodSpec::new(Family::Zm).unwrap();
        let t = radial_table_recursive(&zm, 2, 6, &[0.3, 0.7]).unwrap();
        for n in [0, 1, 3, 5] {
            assert!(t[n].iter().all(|v| v.norm() == 0.0));
        }
        assert!(t[4][0].norm() > 0.0);
    }

    #[test]
    fn harmonic_families_are_unsupported() {
        let pct = MethodSpec::new(Family::Pct).unwrap();
        assert!(matches!(
            radial_table_recursive(&pct, 0, 3, &[0.5]),
            Err(MomentError::Unsupported(_))
        ));
    }
}
