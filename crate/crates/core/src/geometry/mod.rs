//! Mapping of the pixel raster onto the unit disk and the integration
//! weights of each calculation scheme.
//!
//! Pixel `(i, j)` (1-based column and row) of an `N x N` raster is mapped to a
//! square cell whose centre is `s * (2i - N - 1) / N` horizontally and
//! `s * (2j - N - 1) / N` vertically, with `s = 1` for the incircle mapping
//! and `s = 1/sqrt(2)` for the circumcircle mapping. Centres are therefore
//! symmetric about the origin.

mod polar;
mod quadrature;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{MethodSpec, RadialBasis};
use crate::error::{MomentError, Result};

pub use polar::{polar_grid, resample_to_polar, sample_disk, sample_pixel, Interp, PolarGrid, Ring};
pub use quadrature::{gauss_legendre, gauss_legendre_on};

/// Radius below which a quadrature node of a singular kernel is moved out.
pub const ORIGIN_GUARD: f64 = 1e-12;

/// A mapped pixel: the rectangle `[x - dx/2, x + dx/2] x [y - dy/2, y + dy/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Cell {
    pub fn center_radius(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Largest distance from the origin over the four corners.
    pub fn max_corner_radius(&self) -> f64 {
        let ax = self.x.abs() + 0.5 * self.dx;
        let ay = self.y.abs() + 0.5 * self.dy;
        ax.hypot(ay)
    }

    pub fn area(&self) -> f64 {
        self.dx * self.dy
    }
}

fn check_pixel(i: usize, j: usize, n: usize) -> Result<()> {
    if n == 0 || i == 0 || j == 0 || i > n || j > n {
        return Err(MomentError::InvalidParameter(format!(
            "pixel ({i}, {j}) outside 1..={n}"
        )));
    }
    Ok(())
}

fn mapped_cell(i: usize, j: usize, n: usize, scale: f64) -> Cell {
    let nf = n as f64;
    Cell {
        x: scale * (2.0 * i as f64 - nf - 1.0) / nf,
        y: scale * (2.0 * j as f64 - nf - 1.0) / nf,
        dx: 2.0 * scale / nf,
        dy: 2.0 * scale / nf,
    }
}

/// Incircle mapping: the disk is inscribed in the raster.
pub fn map_incircle(i: usize, j: usize, n: usize) -> Result<Cell> {
    check_pixel(i, j, n)?;
    Ok(mapped_cell(i, j, n, 1.0))
}

/// Circumcircle mapping: the raster is inscribed in the disk.
pub fn map_circumcircle(i: usize, j: usize, n: usize) -> Result<Cell> {
    check_pixel(i, j, n)?;
    Ok(mapped_cell(i, j, n, FRAC_1_SQRT_2))
}

/// How the raster is laid onto the disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mapping {
    Incircle,
    Circumcircle,
    /// Resampling onto a polar tiling of the incircle disk.
    Polar,
}

impl Mapping {
    pub fn is_cartesian(self) -> bool {
        !matches!(self, Mapping::Polar)
    }

    /// Cell of pixel `(i, j)` (1-based). The polar mapping reads the raster
    /// through the incircle geometry.
    pub fn cell(self, i: usize, j: usize, n: usize) -> Result<Cell> {
        match self {
            Mapping::Circumcircle => map_circumcircle(i, j, n),
            Mapping::Incircle | Mapping::Polar => map_incircle(i, j, n),
        }
    }

    /// Half-width of the mapped raster.
    pub fn scale(self) -> f64 {
        match self {
            Mapping::Circumcircle => FRAC_1_SQRT_2,
            Mapping::Incircle | Mapping::Polar => 1.0,
        }
    }
}

/// Integration rule applied within a cell or a polar ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Rule {
    /// Zero-order approximation: one sample at the centre.
    Zoa,
    /// `s x s` sub-cells, each sampled at its centre.
    Upsample(usize),
    /// Tensor-product Gauss-Legendre rule of order `g` per axis.
    Gauss(usize),
}

impl Default for Rule {
    fn default() -> Self {
        Rule::Upsample(3)
    }
}

impl Rule {
    /// Default Gauss order.
    pub const DEFAULT_GAUSS: usize = 5;

    /// One-dimensional nodes in `[-1/2, 1/2]` (fractions of the cell width)
    /// and weights summing to 1.
    pub fn nodes_1d(self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Rule::Zoa => (vec![0.0], vec![1.0]),
            Rule::Upsample(s) => {
                let s = s.max(1);
                let sf = s as f64;
                // Built from both ends so the node set is exactly symmetric.
                let mut x = vec![0.0; s];
                for a in 0..s.div_ceil(2) {
                    let v = (sf - 1.0 - 2.0 * a as f64) / (2.0 * sf);
                    x[a] = -v;
                    x[s - 1 - a] = v;
                }
                (x, vec![1.0 / sf; s])
            }
            Rule::Gauss(g) => {
                let (x, w) = gauss_legendre(g.max(1));
                (
                    x.iter().map(|t| 0.5 * t).collect(),
                    w.iter().map(|v| 0.5 * v).collect(),
                )
            }
        }
    }

    /// Two-dimensional nodes `(u, v, w)` within a cell, `u, v` in `[-1/2, 1/2]`
    /// and weights summing to 1.
    pub fn nodes_2d(self) -> Vec<(f64, f64, f64)> {
        let (x, w) = self.nodes_1d();
        let mut out = Vec::with_capacity(x.len() * x.len());
        for (v, wv) in x.iter().zip(&w) {
            for (u, wu) in x.iter().zip(&w) {
                out.push((*u, *v, wu * wv));
            }
        }
        out
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Rule::Upsample(0) => Err(MomentError::InvalidParameter(
                "up-sampling factor must be >= 1".into(),
            )),
            Rule::Gauss(0) => Err(MomentError::InvalidParameter("Gauss order must be >= 1".into())),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Zoa => f.write_str("zoa"),
            Rule::Upsample(s) => write!(f, "up:{s}"),
            Rule::Gauss(g) => write!(f, "gauss:{g}"),
        }
    }
}

impl FromStr for Rule {
    type Err = MomentError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let bad = || MomentError::InvalidParameter(format!("unknown rule '{s}', expected zoa, up:<s> or gauss:<g>"));
        let rule = match s.split_once(':') {
            None if s == "zoa" => Rule::Zoa,
            None if s == "gauss" => Rule::Gauss(Rule::DEFAULT_GAUSS),
            Some(("up", v)) => Rule::Upsample(v.parse().map_err(|_| bad())?),
            Some(("gauss", v)) => Rule::Gauss(v.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        rule.validate()?;
        Ok(rule)
    }
}

impl From<Rule> for String {
    fn from(r: Rule) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for Rule {
    type Error = MomentError;
    fn try_from(s: String) -> Result<Rule> {
        s.parse()
    }
}

/// How the coefficient sums are organised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every kernel value by direct summation at every sample.
    Naive,
    /// Direct summation on one octant, the rest by symmetry.
    Symmetric,
    /// Radial kernels by recurrence (tabulated direct values for families
    /// without one).
    Recursive,
    /// Harmonic kernels through the fast Fourier transform.
    Fft,
}

macro_rules! lowercase_enum_text {
    ($ty:ty, $what:literal, [$($var:ident => $name:literal),*]) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(<$ty>::$var => $name),* })
            }
        }
        impl FromStr for $ty {
            type Err = MomentError;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok(<$ty>::$var),)*
                    _ => Err(MomentError::InvalidParameter(format!(
                        concat!("unknown ", $what, " '{}', expected one of: {}"),
                        s,
                        [$($name),*].join(", ")
                    ))),
                }
            }
        }
    };
}

lowercase_enum_text!(Mapping, "mapping", [Incircle => "incircle", Circumcircle => "circumcircle", Polar => "polar"]);
lowercase_enum_text!(Strategy, "strategy", [Naive => "naive", Symmetric => "symmetric", Recursive => "recursive", Fft => "fft"]);

/// A complete decomposition configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scheme {
    pub mapping: Mapping,
    pub rule: Rule,
    pub strategy: Strategy,
    /// Drop every sample with `r > 1` instead of extending the kernel.
    #[serde(default)]
    pub strict: bool,
    /// FFT grid size; `max(4K, 2K + 2)` when absent.
    #[serde(default)]
    pub fft_size: Option<usize>,
    /// Ring count of the polar tiling; `N / 2` when absent.
    #[serde(default)]
    pub rings: Option<usize>,
    #[serde(default)]
    pub interp: Interp,
}

impl Scheme {
    pub fn new(mapping: Mapping, rule: Rule, strategy: Strategy) -> Scheme {
        Scheme {
            mapping,
            rule,
            strategy,
            strict: false,
            fft_size: None,
            rings: None,
            interp: Interp::default(),
        }
    }

    /// Jacobi and Bessel families: circumcircle, 3x3 up-sampling, recursion.
    /// Harmonic families: polar resampling and the FFT.
    pub fn default_for(method: &MethodSpec, _k: usize) -> Scheme {
        if method.family().is_harmonic() {
            Scheme::new(Mapping::Polar, Rule::default(), Strategy::Fft)
        } else {
            Scheme::new(Mapping::Circumcircle, Rule::default(), Strategy::Recursive)
        }
    }

    pub fn with_strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn with_fft_size(mut self, m: usize) -> Self {
        self.fft_size = Some(m);
        self
    }

    pub fn with_rings(mut self, rings: usize) -> Self {
        self.rings = Some(rings);
        self
    }

    pub fn with_interp(mut self, interp: Interp) -> Self {
        self.interp = interp;
        self
    }

    /// FFT grid size used at bound `k`.
    pub fn fft_size_for(&self, k: usize) -> usize {
        self.fft_size.unwrap_or((4 * k).max(2 * k + 2))
    }

    /// Checks the scheme against the method.
    pub fn validate(&self, method: &MethodSpec) -> Result<()> {
        self.rule.validate()?;
        match self.strategy {
            Strategy::Fft => {
                if self.mapping != Mapping::Polar {
                    return Err(MomentError::InvalidParameter(
                        "the fft strategy requires the polar mapping".into(),
                    ));
                }
                if !method.family().is_harmonic() {
                    return Err(MomentError::Unsupported(format!(
                        "the fft strategy needs a harmonic family, not {}",
                        method.label()
                    )));
                }
            }
            Strategy::Symmetric if !self.mapping.is_cartesian() => {
                return Err(MomentError::InvalidParameter(
                    "the symmetric strategy requires a Cartesian mapping".into(),
                ));
            }
            _ => {}
        }
        if self.rings == Some(0) {
            return Err(MomentError::InvalidParameter("ring count must be >= 1".into()));
        }
        Ok(())
    }

    /// Compact description, e.g. `circumcircle/up:3/recursive`.
    pub fn label(&self) -> String {
        let mut s = format!("{}/{}/{}", self.mapping, self.rule, self.strategy);
        if self.strict {
            s.push_str("/strict");
        }
        if let Some(m) = self.fft_size {
            s.push_str(&format!("/M={m}"));
        }
        if let Some(u) = self.rings {
            s.push_str(&format!("/U={u}"));
        }
        if self.mapping == Mapping::Polar && self.strategy != Strategy::Fft {
            s.push_str(&format!("/{}", self.interp));
        }
        s
    }
}

/// Moves a radius off the origin when the kernel is singular there.
pub(crate) fn guard_origin(r: f64, singular: bool) -> f64 {
    if singular && r < ORIGIN_GUARD {
        log::warn!("quadrature node at r = {r:e} moved to {ORIGIN_GUARD:e} (singular kernel)");
        ORIGIN_GUARD
    } else {
        r
    }
}

/// `h_nm` of `cell` under `rule`: the integral of `conj(V_nm)` over the cell,
/// with the kernel extended beyond the disk where its formula allows.
pub fn kernel_weight(method: &MethodSpec, n: i32, m: i32, cell: &Cell, rule: Rule) -> Result<Complex64> {
    kernel_weight_masked(method, n, m, cell, rule, false)
}

/// As [`kernel_weight`]; with `strict` every node with `r > 1` is dropped.
/// Without it, nodes beyond the disk where the kernel formula is undefined
/// contribute nothing.
pub fn kernel_weight_masked(
    method: &MethodSpec,
    n: i32,
    m: i32,
    cell: &Cell,
    rule: Rule,
    strict: bool,
) -> Result<Complex64> {
    method.check_order(n, m)?;
    rule.validate()?;
    let basis = RadialBasis::new(method, n);
    let singular = basis.singular_at_origin(m);
    let area = cell.area();
    let mut acc = Complex64::new(0.0, 0.0);
    for (u, v, w) in rule.nodes_2d() {
        let x = cell.x + u * cell.dx;
        let y = cell.y + v * cell.dy;
        let r = x.hypot(y);
        if strict && r > 1.0 {
            continue;
        }
        let r = guard_origin(r, singular);
        let value = basis.direct(n, m, r).conj() * Complex64::from_polar(1.0, -(m as f64) * y.atan2(x));
        if value.re.is_finite() && value.im.is_finite() {
            acc += value * (w * area);
        } else if r <= 1.0 {
            return Err(MomentError::Singularity {
                family: method.label(),
                r,
            });
        }
    }
    Ok(acc)
}

/// `int_a^b exp(-j m theta) d theta`, in closed form.
pub fn angular_integral_exact(m: i32, theta_a: f64, theta_b: f64) -> Complex64 {
    if m == 0 {
        return Complex64::new(theta_b - theta_a, 0.0);
    }
    let mf = m as f64;
    let diff = Complex64::from_polar(1.0, -mf * theta_b) - Complex64::from_polar(1.0, -mf * theta_a);
    Complex64::new(0.0, 1.0) * diff / mf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Family;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn incircle_examples() {
        let c = map_incircle(64, 64, 128).unwrap();
        assert_eq!((c.x, c.y), (-1.0 / 128.0, -1.0 / 128.0));
        assert_eq!(c.dx, 1.0 / 64.0);
        let c = map_incircle(65, 65, 128).unwrap();
        assert_eq!((c.x, c.y), (1.0 / 128.0, 1.0 / 128.0));
        let corner = map_incircle(128, 128, 128).unwrap();
        assert!((corner.x - 127.0 / 128.0).abs() < 1e-15);
        assert!(corner.center_radius() > 1.0);
        assert!(map_incircle(0, 3, 8).is_err());
        assert!(map_incircle(9, 3, 8).is_err());
    }

    #[test]
    fn circumcircle_examples() {
        let n = 128;
        let c = map_circumcircle(n, n, n).unwrap();
        let want = (n as f64 - 1.0) / (SQRT_2 * n as f64);
        assert!((c.x - want).abs() < 1e-15 && (c.y - want).abs() < 1e-15);
        assert!((c.dx - SQRT_2 / n as f64).abs() < 1e-15);
        let mut worst: f64 = 0.0;
        for i in 1..=n {
            for j in 1..=n {
                worst = worst.max(map_circumcircle(i, j, n).unwrap().max_corner_radius());
            }
        }
        assert!(worst <= 1.0 + 1e-15, "{worst}");
    }

    #[test]
    fn incircle_inside_fraction_tends_to_quarter_pi() {
        let n = 512;
        let mut inside = 0usize;
        for i in 1..=n {
            for j in 1..=n {
                if map_incircle(i, j, n).unwrap().max_corner_radius() <= 1.0 {
                    inside += 1;
                }
            }
        }
        let frac = inside as f64 / (n * n) as f64;
        assert!((frac - PI / 4.0).abs() < 0.02, "{frac}");
    }

    #[test]
    fn rule_nodes_are_symmetric() {
        for rule in [Rule::Zoa, Rule::Upsample(3), Rule::Upsample(4), Rule::Gauss(5), Rule::Gauss(6)] {
            let (x, w) = rule.nodes_1d();
            let k = x.len();
            for i in 0..k {
                assert_eq!(x[i], -x[k - 1 - i], "{rule}");
                assert_eq!(w[i], w[k - 1 - i]);
            }
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rule_text_round_trip() {
        for rule in [Rule::Zoa, Rule::Upsample(7), Rule::Gauss(3)] {
            assert_eq!(rule.to_string().parse::<Rule>().unwrap(), rule);
        }
        assert!("up:0".parse::<Rule>().is_err());
        assert!("simpson".parse::<Rule>().is_err());
    }

    #[test]
    fn constant_kernel_weights() {
        let zm = MethodSpec::new(Family::Zm).unwrap();
        let cell = map_incircle(20, 30, 64).unwrap();
        let zoa = kernel_weight(&zm, 0, 0, &cell, Rule::Zoa).unwrap();
        assert!((zoa.re - cell.area() / PI.sqrt()).abs() < 1e-15);
        let up = kernel_weight(&zm, 0, 0, &cell, Rule::Upsample(3)).unwrap();
        assert!((up - zoa).norm() < 1e-15);
    }

    #[test]
    fn gauss_matches_refined_midpoint_oracle() {
        let pct = MethodSpec::new(Family::Pct).unwrap();
        let cell = map_incircle(32, 32, 64).unwrap();
        let g = kernel_weight(&pct, 3, 0, &cell, Rule::Gauss(5)).unwrap();
        let oracle = kernel_weight(&pct, 3, 0, &cell, Rule::Upsample(101)).unwrap();
        assert!((g - oracle).norm() < 1e-9, "{g} vs {oracle}");
    }

    #[test]
    fn upsampling_converges_on_boundary_cell() {
        let pct = MethodSpec::new(Family::Pct).unwrap();
        // A cell straddling the unit circle.
        let n = 64;
        let cell = (1..=n)
            .map(|i| map_incircle(i, n / 2, n).unwrap())
            .find(|c| c.center_radius() < 1.0 && c.max_corner_radius() > 1.0)
            .unwrap();
        let h = |s| kernel_weight(&pct, 5, 1, &cell, Rule::Upsample(s)).unwrap();
        assert!((h(9) - h(27)).norm() < (h(3) - h(9)).norm());
    }

    #[test]
    fn angular_integral_examples() {
        assert!((angular_integral_exact(0, 0.0, PI / 2.0).re - PI / 2.0).abs() < 1e-15);
        let v = angular_integral_exact(1, 0.0, PI);
        assert!((v - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        assert!(angular_integral_exact(1, 0.0, 2.0 * PI).norm() < 1e-15);
    }

    #[test]
    fn scheme_validation() {
        let zm = MethodSpec::new(Family::Zm).unwrap();
        let pcet = MethodSpec::new(Family::Pcet).unwrap();
        let fft = Scheme::new(Mapping::Polar, Rule::Zoa, Strategy::Fft);
        assert!(fft.validate(&pcet).is_ok());
        assert!(fft.validate(&zm).is_err());
        let bad = Scheme::new(Mapping::Incircle, Rule::Zoa, Strategy::Fft);
        assert!(bad.validate(&pcet).is_err());
        let sym = Scheme::new(Mapping::Polar, Rule::Zoa, Strategy::Symmetric);
        assert!(sym.validate(&zm).is_err());
        assert_eq!(Scheme::default_for(&zm, 10).strategy, Strategy::Recursive);
        assert_eq!(Scheme::default_for(&pcet, 10).strategy, Strategy::Fft);
    }
}
