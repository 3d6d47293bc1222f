#![allow(dead_code)]

use momentkit::basis::{radial_eval, radial_table_recursive, Family, MethodSpec};
use momentkit::geometry::gauss_legendre_on;
use momentkit::Complex64;

/// The twelve classical families with their default parameters.
pub fn classical() -> Vec<MethodSpec> {
    Family::CLASSICAL.iter().map(|&f| MethodSpec::new(f).unwrap()).collect()
}

/// The five fractional families at `alpha`.
pub fn fractional(alpha: f64) -> Vec<MethodSpec> {
    [Family::Fjfm, Family::Grhfm, Family::Gpcet, Family::Gpct, Family::Gpst]
        .iter()
        .map(|&f| MethodSpec::fractional(f, alpha).unwrap())
        .collect()
}

/// Repetitions whose radial kernels differ: all of `0..=n_max` for ZM and
/// PZM, a single representative otherwise.
pub fn repetitions(method: &MethodSpec, n_max: i32) -> Vec<i32> {
    if method.family().radial_depends_on_m() {
        (0..=n_max).collect()
    } else {
        vec![0]
    }
}

/// `R_n(r)` for `n = 0..=n_max` at every sample; recursion for Jacobi
/// families, the defining formula otherwise. Illegal rows are `None`.
pub fn radial_rows(method: &MethodSpec, m: i32, n_max: i32, rs: &[f64]) -> Vec<Option<Vec<Complex64>>> {
    let table = if method.family().is_jacobi() {
        Some(radial_table_recursive(method, m, n_max, rs).unwrap())
    } else {
        None
    };
    (0..=n_max)
        .map(|n| {
            if !method.is_legal(n, m) {
                return None;
            }
            Some(match &table {
                Some(t) => t[n as usize].clone(),
                None => rs.iter().map(|&r| radial_eval(method, n, m, r).unwrap()).collect(),
            })
        })
        .collect()
}

/// `nodes`-point Gauss-Legendre rule on `[0, 1]` in `t` with `r = t^2`.
///
/// Fractional kernels with `alpha < 1` make `R_n R_n'^* r` behave like
/// `r^(alpha - 1)` at the origin, where a rule in `r` converges only like
/// `1 / nodes`; in `t` the integrand is smooth.
pub fn radial_rule(nodes: usize) -> (Vec<f64>, Vec<f64>) {
    let (ts, ws) = gauss_legendre_on(nodes, 0.0, 1.0);
    ts.iter().zip(&ws).map(|(t, w)| (t * t, 2.0 * t * w)).unzip()
}

/// Largest `|int_0^1 R_n R_n'^* r dr - delta / (2 pi)|` over legal
/// `0 <= n, n' <= n_max`, using [`radial_rule`].
pub fn orthonormality_error(method: &MethodSpec, n_max: i32, nodes: usize) -> f64 {
    let (rs, ws) = radial_rule(nodes);
    let mut worst: f64 = 0.0;
    for m in repetitions(method, n_max) {
        let rows = radial_rows(method, m, n_max, &rs);
        for (a, ra) in rows.iter().enumerate() {
            let Some(ra) = ra else { continue };
            for (b, rb) in rows.iter().enumerate().skip(a) {
                let Some(rb) = rb else { continue };
                let mut sum = Complex64::new(0.0, 0.0);
                for j in 0..rs.len() {
                    sum += ra[j] * rb[j].conj() * (ws[j] * rs[j]);
                }
                let target = if a == b { 1.0 / (2.0 * std::f64::consts::PI) } else { 0.0 };
                worst = worst.max((sum - target).norm());
            }
        }
    }
    worst
}

/// Pairs that must coincide pointwise.
pub fn specialization_pairs() -> Vec<(&'static str, MethodSpec, MethodSpec)> {
    let f = |family| MethodSpec::new(family).unwrap();
    let g = |family, alpha| MethodSpec::fractional(family, alpha).unwrap();
    vec![
        ("JFM(2,2) = OFMM", MethodSpec::jfm(2.0, 2.0).unwrap(), f(Family::Ofmm)),
        ("JFM(2,1.5) = CHFM", MethodSpec::jfm(2.0, 1.5).unwrap(), f(Family::Chfm)),
        ("JFM(4,3) = PJFM", MethodSpec::jfm(4.0, 3.0).unwrap(), f(Family::Pjfm)),
        ("FJFM(3,3,1) = JFM(3,3)", MethodSpec::fjfm(3.0, 3.0, 1.0).unwrap(), MethodSpec::jfm(3.0, 3.0).unwrap()),
        ("GPCET(1) = EFM", g(Family::Gpcet, 1.0), f(Family::Efm)),
        ("GPCET(2) = PCET", g(Family::Gpcet, 2.0), f(Family::Pcet)),
        ("GRHFM(1) = RHFM", g(Family::Grhfm, 1.0), f(Family::Rhfm)),
        ("GPCT(1) = PCT", g(Family::Gpct, 1.0), f(Family::Pct)),
        ("GPST(1) = PST", g(Family::Gpst, 1.0), f(Family::Pst)),
    ]
}

/// Largest pointwise radial difference of a pair over `samples` uniform
/// radii in `(0, 1)` and orders `-n_max..=n_max`.
pub fn specialization_gap(a: &MethodSpec, b: &MethodSpec, n_max: i32, samples: usize) -> f64 {
    let rs: Vec<f64> = (0..samples).map(|i| (i as f64 + 0.5) / samples as f64).collect();
    let mut worst: f64 = 0.0;
    for n in -n_max..=n_max {
        if !(a.is_legal(n, 0) && b.is_legal(n, 0)) {
            continue;
        }
        for &r in &rs {
            let d = radial_eval(a, n, 0, r).unwrap() - radial_eval(b, n, 0, r).unwrap();
            worst = worst.max(d.norm());
        }
    }
    worst
}

/// Zero count stated for `(n, m)`, or `None` for complex-valued kernels.
pub fn expected_zero_count(family: Family, n: i32, m: i32) -> Option<usize> {
    let n = n as usize;
    let m = m.unsigned_abs() as usize;
    match family {
        Family::Zm => Some((n - m) / 2),
        Family::Pzm => Some(n - m),
        Family::Pst => Some(n - 1),
        Family::Efm | Family::Pcet => None,
        _ => Some(n),
    }
}
