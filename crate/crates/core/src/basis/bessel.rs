//! Bessel functions of the first kind of real order, and their positive zeros.

use std::f64::consts::PI;

/// Below this argument the ascending series is used.
const SERIES_LIMIT: f64 = 12.0;

/// `J_v(x)` for `v >= 0`, `x >= 0`.
///
/// Ascending series for small arguments, Miller's backward recurrence with
/// the Neumann-series normalisation otherwise. Absolute accuracy is better
/// than 1e-12 on `[0, 200]`. Negative `x` yields NaN.
pub fn bessel_j(v: f64, x: f64) -> f64 {
    if x.is_nan() || x < 0.0 || v < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return if v == 0.0 { 1.0 } else { 0.0 };
    }
    if x < SERIES_LIMIT || x < v {
        series(v, x)
    } else {
        backward_recurrence(v, x)
    }
}

fn series(v: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let half_sq = half * half;
    let mut term = half.powf(v) / libm::tgamma(v + 1.0);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= -half_sq / (k * (v + k));
        sum += term;
        if (term.abs() <= 1e-17 * sum.abs() && k > half) || k > 500.0 {
            break;
        }
    }
    sum
}

fn backward_recurrence(v: f64, x: f64) -> f64 {
    let whole = v.floor() as usize;
    let frac = v - whole as f64;
    let span = x.max(v);
    let mut start = (span + (160.0 * span).sqrt()) as usize + 20;
    if start % 2 == 1 {
        start += 1;
    }

    // Coefficients of the normalisation sum
    //   (x/2)^frac = sum_i d_i J_{frac+2i}(x),
    // d_0 = Gamma(frac+1), d_i = (frac+2i) Gamma(frac+i) / i!.
    let half_start = start / 2;
    let mut d = Vec::with_capacity(half_start + 1);
    d.push(libm::tgamma(frac + 1.0));
    let mut g = libm::tgamma(frac + 1.0); // Gamma(frac+1)/1!
    for i in 1..=half_start {
        if i > 1 {
            g *= (frac + (i - 1) as f64) / i as f64;
        }
        d.push((frac + 2.0 * i as f64) * g);
    }

    let mut above = 0.0;
    let mut cur = 1e-30;
    let mut sum = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        if k == whole {
            wanted = cur;
        }
        if k % 2 == 0 {
            sum += d[k / 2] * cur;
        }
        let below = 2.0 * (frac + k as f64) / x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            sum *= 1e-250;
            wanted *= 1e-250;
        }
    }
    if whole == 0 {
        wanted = cur;
    }
    sum += d[0] * cur;
    wanted * (0.5 * x).powf(frac) / sum
}

/// The `n`-th positive zero of `J_v` (`n >= 1`), to about 1e-14.
///
/// A McMahon expansion gives the initial guess; a bracket of half-width
/// 1.2 around it (consecutive zeros are more than 2.4 apart) is refined by
/// bisection. If the bracket holds no sign change the zeros are counted by
/// a unit-step scan from the origin instead.
pub fn bessel_zero(v: f64, n: usize) -> f64 {
    assert!(n >= 1, "zeros are numbered from 1");
    let beta = (n as f64 + 0.5 * v - 0.25) * PI;
    let mu = 4.0 * v * v;
    let eb = 8.0 * beta;
    let guess = beta - (mu - 1.0) / eb - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * eb.powi(3));

    let (lo, hi) = (guess - 1.2, guess + 1.2);
    let (flo, fhi) = (bessel_j(v, lo.max(0.0)), bessel_j(v, hi));
    let bracket = if lo > 0.0 && flo * fhi < 0.0 && zeros_below(v, lo) == n - 1 {
        (lo, hi)
    } else {
        scan_bracket(v, n)
    };
    bisect(v, bracket.0, bracket.1)
}

/// Number of zeros of `J_v` on `(0, x)`, by counting sign changes at unit
/// steps. Only used to validate a McMahon bracket.
fn zeros_below(v: f64, x: f64) -> usize {
    let mut count = 0;
    let mut prev = bessel_j(v, 1e-3_f64.min(x * 0.5));
    let mut t = 1.0;
    while t < x {
        let cur = bessel_j(v, t);
        if prev * cur < 0.0 {
            count += 1;
        }
        prev = cur;
        t += 1.0;
    }
    let last = bessel_j(v, x);
    if prev * last < 0.0 {
        count += 1;
    }
    count
}

fn scan_bracket(v: f64, n: usize) -> (f64, f64) {
    let mut count = 0;
    let mut a = 1e-3;
    let mut fa = bessel_j(v, a);
    loop {
        let b = a + 1.0;
        let fb = bessel_j(v, b);
        if fa * fb < 0.0 {
            count += 1;
            if count == n {
                return (a, b);
            }
        }
        a = b;
        fa = fb;
    }
}

fn bisect(v: f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = bessel_j(v, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = bessel_j(v, mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}
