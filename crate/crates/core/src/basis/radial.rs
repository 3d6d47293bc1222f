//! Radial kernels evaluated from their defining formulas.
//!
//! The Jacobi-polynomial sums are evaluated term by term, with each
//! coefficient obtained from its predecessor through the ratio of consecutive
//! factorial/gamma expressions. Nothing here guards against cancellation: at
//! high orders these sums lose all precision, which is exactly the behaviour
//! the recursive tables in [`super::recurrence`] exist to avoid.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::bessel::{bessel_j, bessel_zero};
use super::method::{Family, MethodSpec};

/// One exponential term `c * exp(j*pi*nu*s)` of a harmonic kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    pub nu: i32,
    pub coef: Complex64,
}

/// Harmonic kernels written as `R_n(r) = coef * r^exponent * H_n(r^beta)`
/// where `H_n` is a finite sum of [`HarmonicTerm`]s in `s = r^beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicForm {
    pub beta: f64,
    pub coef: f64,
    pub exponent: f64,
    kind: HarmonicKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum HarmonicKind {
    Exp,
    RadialTrig,
    Cos,
    Sin,
}

impl HarmonicForm {
    pub fn of(method: &MethodSpec) -> Option<HarmonicForm> {
        let (beta, coef, exponent, kind) = match method.family().base() {
            Family::Efm => (1.0, 1.0 / (2.0 * PI).sqrt(), -0.5, HarmonicKind::Exp),
            Family::Rhfm => (1.0, 1.0 / (2.0 * PI).sqrt(), -0.5, HarmonicKind::RadialTrig),
            Family::Pcet => (2.0, 1.0 / PI.sqrt(), 0.0, HarmonicKind::Exp),
            Family::Pct => (2.0, 1.0 / PI.sqrt(), 0.0, HarmonicKind::Cos),
            Family::Pst => (2.0, 1.0 / PI.sqrt(), 0.0, HarmonicKind::Sin),
            _ => return None,
        };
        if method.family().is_fractional() {
            let a = method.alpha();
            Some(HarmonicForm {
                beta: a * beta,
                coef: a.sqrt() * coef,
                exponent: a - 1.0 + a * exponent,
                kind,
            })
        } else {
            Some(HarmonicForm {
                beta,
                coef,
                exponent,
                kind,
            })
        }
    }

    /// Amplitude `coef * r^exponent`.
    pub fn amplitude(&self, r: f64) -> f64 {
        self.coef * r.powf(self.exponent)
    }

    /// `H_n(s)` evaluated from the trigonometric definition.
    pub fn shape(&self, n: i32, s: f64) -> Complex64 {
        let nf = n as f64;
        match self.kind {
            HarmonicKind::Exp => Complex64::from_polar(1.0, 2.0 * PI * nf * s),
            HarmonicKind::RadialTrig => Complex64::new(
                if n == 0 {
                    1.0
                } else if n % 2 == 1 {
                    SQRT_2 * (PI * (nf + 1.0) * s).sin()
                } else {
                    SQRT_2 * (PI * nf * s).cos()
                },
                0.0,
            ),
            HarmonicKind::Cos => Complex64::new(
                if n == 0 {
                    1.0
                } else {
                    SQRT_2 * (nf * PI * s).cos()
                },
                0.0,
            ),
            HarmonicKind::Sin => Complex64::new(SQRT_2 * (nf * PI * s).sin(), 0.0),
        }
    }

    /// `H_n` as a sum of `exp(j*pi*nu*s)` terms.
    pub fn terms(&self, n: i32) -> Vec<HarmonicTerm> {
        let half = Complex64::new(SQRT_2 / 2.0, 0.0);
        // sqrt(2) sin(x) = (sqrt(2)/2j)(e^{jx} - e^{-jx})
        let sin_coef = Complex64::new(0.0, -SQRT_2 / 2.0);
        let one = Complex64::new(1.0, 0.0);
        let pair = |nu: i32, c: Complex64, odd: bool| {
            vec![
                HarmonicTerm { nu, coef: c },
                HarmonicTerm {
                    nu: -nu,
                    coef: if odd { -c } else { c },
                },
            ]
        };
        match self.kind {
            HarmonicKind::Exp => vec![HarmonicTerm { nu: 2 * n, coef: one }],
            HarmonicKind::RadialTrig => {
                if n == 0 {
                    vec![HarmonicTerm { nu: 0, coef: one }]
                } else if n % 2 == 1 {
                    pair(n + 1, sin_coef, true)
                } else {
                    pair(n, half, false)
                }
            }
            HarmonicKind::Cos => {
                if n == 0 {
                    vec![HarmonicTerm { nu: 0, coef: one }]
                } else {
                    pair(n, half, false)
                }
            }
            HarmonicKind::Sin => pair(n, sin_coef, true),
        }
    }

    pub fn eval(&self, n: i32, r: f64) -> Complex64 {
        self.shape(n, r.powf(self.beta)) * self.amplitude(r)
    }
}

/// Per-order data of the Bessel-Fourier kernel: the scaled zero `lambda_n`
/// and the normalisation `1/sqrt(2*pi*a_n)`.
#[derive(Debug, Clone, Copy)]
struct BesselMode {
    lambda: f64,
    scale: f64,
}

/// Evaluates the radial kernels of one method by direct summation.
#[derive(Debug, Clone)]
pub struct RadialBasis {
    method: MethodSpec,
    harmonic: Option<HarmonicForm>,
    bessel: Vec<BesselMode>,
}

impl RadialBasis {
    /// Prepares evaluation of orders up to `n_max` (only BFM needs the bound,
    /// to precompute its Bessel zeros).
    pub fn new(method: &MethodSpec, n_max: i32) -> Self {
        let bessel = if method.family() == Family::Bfm {
            let v = method.bessel_order();
            (0..=n_max.max(0) as usize)
                .map(|n| {
                    let lambda = bessel_zero(v, n + 1);
                    let a = 0.5 * bessel_j(v + 1.0, lambda).powi(2);
                    BesselMode {
                        lambda,
                        scale: 1.0 / (2.0 * PI * a).sqrt(),
                    }
                })
                .collect()
        } else {
            Vec::new()
        };
        RadialBasis {
            method: *method,
            harmonic: HarmonicForm::of(method),
            bessel,
        }
    }

    pub fn method(&self) -> &MethodSpec {
        &self.method
    }

    /// Power of `r` governing the kernel near the origin. Negative means the
    /// kernel is unbounded at `r = 0`.
    pub fn origin_exponent(&self, m: i32) -> f64 {
        if let Some(h) = &self.harmonic {
            return h.exponent;
        }
        let a = self.method.alpha();
        match self.method.family() {
            Family::Zm | Family::Pzm => m.unsigned_abs() as f64,
            Family::Chfm => -0.25,
            Family::Pjfm => 0.5,
            Family::Jfm => 0.5 * (self.method.q() - 2.0),
            Family::Fjfm => a - 1.0 + a * 0.5 * (self.method.q() - 2.0),
            Family::Bfm => self.method.bessel_order(),
            _ => 0.0,
        }
    }

    pub fn singular_at_origin(&self, m: i32) -> bool {
        self.origin_exponent(m) < 0.0
    }

    /// `R_n(r)` from the defining formula. No legality or domain checks.
    pub fn direct(&self, n: i32, m: i32, r: f64) -> Complex64 {
        if let Some(h) = &self.harmonic {
            return h.eval(n, r);
        }
        Complex64::new(self.real_sum(n, m, r, false), 0.0)
    }

    /// Sum of the moduli of the terms of the direct formula, scaled like the
    /// kernel. Bounds the rounding error of [`Self::direct`] at about
    /// `n * eps` times this value. Harmonic kernels return `|R_n(r)|`.
    pub fn condition_sum(&self, n: i32, m: i32, r: f64) -> f64 {
        if let Some(h) = &self.harmonic {
            return h.eval(n, r).norm();
        }
        self.real_sum(n, m, r, true).abs()
    }

    fn real_sum(&self, n: i32, m: i32, r: f64, mag: bool) -> f64 {
        let am = m.unsigned_abs() as i32;
        match self.method.family() {
            Family::Zm => zm_direct(n, am, r, mag),
            Family::Pzm => pzm_direct(n, am, r, mag),
            Family::Ofmm => ofmm_direct(n, r, mag),
            Family::Chfm => chfm_direct(n, r, mag),
            Family::Pjfm => pjfm_direct(n, r, mag),
            Family::Jfm => {
                let (p, q) = (self.method.p(), self.method.q());
                r.powf(0.5 * (q - 2.0)) * jfm_core(p, q, n, r, mag)
            }
            Family::Fjfm => {
                let (p, q, a) = (self.method.p(), self.method.q(), self.method.alpha());
                let s = r.powf(a);
                a.sqrt() * r.powf(self.origin_exponent(m)) * jfm_core(p, q, n, s, mag)
            }
            Family::Bfm => {
                let mode = self.bessel[n as usize];
                let v = mode.scale * bessel_j(self.method.bessel_order(), mode.lambda * r);
                if mag {
                    v.abs()
                } else {
                    v
                }
            }
            _ => unreachable!("harmonic families are handled by HarmonicForm"),
        }
    }

    pub fn harmonic_form(&self) -> Option<&HarmonicForm> {
        self.harmonic.as_ref()
    }
}

/// A summand, or its modulus when accumulating the condition sum.
fn term(c: f64, x: f64, mag: bool) -> f64 {
    if mag {
        (c * x).abs()
    } else {
        c * x
    }
}

pub(crate) fn zm_direct(n: i32, am: i32, r: f64, mag: bool) -> f64 {
    let s = (n - am) / 2;
    let h = (n + am) / 2;
    // c_0 = n! / (h! s!)
    let mut c = 1.0;
    for i in 1..=s {
        c *= (h + i) as f64 / i as f64;
    }
    let mut sum = 0.0;
    for k in 0..=s {
        sum += term(c, r.powi(n - 2 * k), mag);
        c *= -((h - k) as f64 * (s - k) as f64) / ((k + 1) as f64 * (n - k) as f64);
    }
    ((n + 1) as f64 / PI).sqrt() * sum
}

pub(crate) fn pzm_direct(n: i32, am: i32, r: f64, mag: bool) -> f64 {
    let top = n - am;
    // c_0 = (2n+1)! / ((n+|m|+1)! (n-|m|)!)
    let mut c = 1.0;
    for i in 1..=top {
        c *= (n + am + 1 + i) as f64 / i as f64;
    }
    let mut sum = 0.0;
    for k in 0..=top {
        sum += term(c, r.powi(n - k), mag);
        c *= -((n + am + 1 - k) as f64 * (n - am - k) as f64)
            / ((k + 1) as f64 * (2 * n + 1 - k) as f64);
    }
    ((n + 1) as f64 / PI).sqrt() * sum
}

pub(crate) fn ofmm_direct(n: i32, r: f64, mag: bool) -> f64 {
    let mut c = if n % 2 == 0 { 1.0 } else { -1.0 } * (n + 1) as f64;
    let mut sum = 0.0;
    let mut rk = 1.0;
    for k in 0..=n {
        sum += term(c, rk, mag);
        rk *= r;
        c *= -((n + k + 2) as f64 * (n - k) as f64) / ((k + 1) as f64 * (k + 2) as f64);
    }
    ((n + 1) as f64 / PI).sqrt() * sum
}

pub(crate) fn chfm_direct(n: i32, r: f64, mag: bool) -> f64 {
    let t = 4.0 * r - 2.0;
    let mut c = 1.0;
    let mut sum = 0.0;
    for k in 0..=n / 2 {
        sum += term(c, t.powi(n - 2 * k), mag);
        c *= -((n - 2 * k) as f64 * (n - 2 * k - 1) as f64) / ((k + 1) as f64 * (n - k) as f64);
    }
    2.0 / PI * ((1.0 - r) / r).powf(0.25) * sum
}

pub(crate) fn pjfm_direct(n: i32, r: f64, mag: bool) -> f64 {
    let nf = n as f64;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut c = sign * (nf + 1.0) * (nf + 2.0) * (nf + 3.0) / 2.0;
    let mut sum = 0.0;
    let mut rk = 1.0;
    for k in 0..=n {
        sum += term(c, rk, mag);
        rk *= r;
        c *= -((n + k + 4) as f64 * (n - k) as f64) / ((k + 1) as f64 * (k + 3) as f64);
    }
    ((nf + 2.0) * (r - r * r) / (PI * (nf + 3.0) * (nf + 1.0))).sqrt() * sum
}

/// JFM kernel without its `r^((q-2)/2)` factor, with the sign chosen so the
/// leading coefficient is positive.
pub(crate) fn jfm_core(p: f64, q: f64, n: i32, s: f64, mag: bool) -> f64 {
    let mut gq = libm::tgamma(q);
    let mut gp = libm::tgamma(p);
    let mut gpq = libm::tgamma(p - q + 1.0);
    let mut fact = 1.0;
    let g_q0 = gq;
    for i in 0..n {
        let fi = i as f64;
        gq *= q + fi;
        gp *= p + fi;
        gpq *= p - q + 1.0 + fi;
        fact *= fi + 1.0;
    }
    let norm = (p + 2.0 * n as f64) * gq * fact / (2.0 * PI * gp * gpq);
    // a_0 = Gamma(p+n) / (n! Gamma(q))
    let mut a = gp / (fact * g_q0);
    let mut sum = 0.0;
    let mut sk = 1.0;
    for k in 0..=n {
        sum += term(a, sk, mag);
        sk *= s;
        let kf = k as f64;
        a *= -((p + n as f64 + kf) * (n - k) as f64) / ((kf + 1.0) * (q + kf));
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let sign = if mag { 1.0 } else { sign };
    sign * norm.sqrt() * (1.0 - s).powf(0.5 * (p - q)) * sum
}
