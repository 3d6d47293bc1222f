//! Gauss-Legendre rules on `[-1, 1]`.

use std::f64::consts::PI;

/// Nodes and weights for orders 1 to 10, to 21 significant digits.
#[allow(clippy::excessive_precision)]
const GL_TABLE: [(&[f64], &[f64]); 10] = [
    (
        &[0.0],
        &[2.0],
    ),
    (
        &[-5.77350269189625764509e-1, 5.77350269189625764509e-1],
        &[1.0, 1.0],
    ),
    (
        &[-7.74596669241483377036e-1, 0.0, 7.74596669241483377036e-1],
        &[5.55555555555555555556e-1, 8.88888888888888888889e-1, 5.55555555555555555556e-1],
    ),
    (
        &[-8.61136311594052575224e-1, -3.39981043584856264803e-1, 3.39981043584856264803e-1, 8.61136311594052575224e-1],
        &[3.47854845137453857373e-1, 6.52145154862546142627e-1, 6.52145154862546142627e-1, 3.47854845137453857373e-1],
    ),
    (
        &[-9.06179845938663992798e-1, -5.38469310105683091036e-1, 0.0, 5.38469310105683091036e-1, 9.06179845938663992798e-1],
        &[2.36926885056189087514e-1, 4.78628670499366468041e-1, 5.68888888888888888889e-1, 4.78628670499366468041e-1, 2.36926885056189087514e-1],
    ),
    (
        &[-9.32469514203152027812e-1, -6.61209386466264513661e-1, -2.38619186083196908631e-1, 2.38619186083196908631e-1, 6.61209386466264513661e-1, 9.32469514203152027812e-1],
        &[1.7132449237917034504e-1, 3.6076157304813860757e-1, 4.6791393457269104739e-1, 4.6791393457269104739e-1, 3.6076157304813860757e-1, 1.7132449237917034504e-1],
    ),
    (
        &[-9.49107912342758524526e-1, -7.41531185599394439864e-1, -4.05845151377397166907e-1, 0.0, 4.05845151377397166907e-1, 7.41531185599394439864e-1, 9.49107912342758524526e-1],
        &[1.29484966168869693271e-1, 2.79705391489276667901e-1, 3.8183005050511894495e-1, 4.17959183673469387755e-1, 3.8183005050511894495e-1, 2.79705391489276667901e-1, 1.29484966168869693271e-1],
    ),
    (
        &[-9.60289856497536231684e-1, -7.96666477413626739592e-1, -5.25532409916328985818e-1, -1.83434642495649804939e-1, 1.83434642495649804939e-1, 5.25532409916328985818e-1, 7.96666477413626739592e-1, 9.60289856497536231684e-1],
        &[1.01228536290376259153e-1, 2.22381034453374470544e-1, 3.13706645877887287338e-1, 3.62683783378361982965e-1, 3.62683783378361982965e-1, 3.13706645877887287338e-1, 2.22381034453374470544e-1, 1.01228536290376259153e-1],
    ),
    (
        &[-9.68160239507626089836e-1, -8.36031107326635794299e-1, -6.13371432700590397309e-1, -3.24253423403808929039e-1, 0.0, 3.24253423403808929039e-1, 6.13371432700590397309e-1, 8.36031107326635794299e-1, 9.68160239507626089836e-1],
        &[8.12743883615744119719e-2, 1.80648160694857404058e-1, 2.60610696402935462319e-1, 3.12347077040002840069e-1, 3.30239355001259763165e-1, 3.12347077040002840069e-1, 2.60610696402935462319e-1, 1.80648160694857404058e-1, 8.12743883615744119719e-2],
    ),
    (
        &[-9.73906528517171720078e-1, -8.65063366688984510732e-1, -6.79409568299024406234e-1, -4.33395394129247190799e-1, -1.48874338981631210885e-1, 1.48874338981631210885e-1, 4.33395394129247190799e-1, 6.79409568299024406234e-1, 8.65063366688984510732e-1, 9.73906528517171720078e-1],
        &[6.66713443086881375936e-2, 1.49451349150580593146e-1, 2.19086362515982043996e-1, 2.69266719309996355091e-1, 2.95524224714752870174e-1, 2.95524224714752870174e-1, 2.69266719309996355091e-1, 2.19086362515982043996e-1, 1.49451349150580593146e-1, 6.66713443086881375936e-2],
    ),
];

/// Nodes (ascending) and weights of the `n`-point Gauss-Legendre rule.
///
/// Orders up to 10 come from the table; larger orders are computed by Newton
/// iteration on the Legendre three-term recurrence and mirrored so that the
/// rule is exactly symmetric.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "a quadrature rule needs at least one node");
    if n <= GL_TABLE.len() {
        let (x, w) = GL_TABLE[n - 1];
        return (x.to_vec(), w.to_vec());
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1e-300) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| half * v).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(n: usize, f: impl Fn(f64) -> f64) -> f64 {
        let (x, w) = gauss_legendre(n);
        x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum()
    }

    #[test]
    fn exact_for_polynomials_of_degree_2n_minus_1() {
        for n in 1..=14 {
            let deg = 2 * n - 1;
            for k in 0..=deg {
                let got = integrate(n, |x| x.powi(k as i32));
                let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((got - want).abs() < 1e-14, "n={n} k={k}: {got}");
            }
        }
    }

    #[test]
    fn tables_are_symmetric_and_sum_to_two() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            for i in 0..n {
                assert_eq!(x[i], -x[n - 1 - i]);
                assert_eq!(w[i], w[n - 1 - i]);
            }
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn large_rule_integrates_smooth_functions() {
        let n = 10_000;
        let (x, w) = gauss_legendre(n);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-12, "{s}");
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * (3.0 * x).cos()).sum();
        assert!((got - 2.0 * 3f64.sin() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn newton_matches_table_at_ten() {
        let (tx, tw) = gauss_legendre(10);
        // Force the Newton path by computing order 10 through it directly.
        let nf = 10.0;
        for i in 0..5 {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            for _ in 0..50 {
                let (p, d) = legendre_with_derivative(10, x);
                x -= p / d;
            }
            let (_, d) = legendre_with_derivative(10, x);
            assert!((x - tx[9 - i]).abs() < 1e-15);
            assert!((2.0 / ((1.0 - x * x) * d * d) - tw[9 - i]).abs() < 1e-14);
        }
    }
}
