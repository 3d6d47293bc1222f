//! Decomposition over the Cartesian raster (incircle / circumcircle).

use num_complex::Complex64;
use rayon::prelude::*;

use super::{fold_blocks, EvalStats, MomentSet};
use crate::basis::{order_set, Family, JacobiChain, MethodSpec, OrderIndex, RadialBasis};
use crate::error::{MomentError, Result};
use crate::geometry::{guard_origin, Scheme, Strategy};
use crate::image::Image;

/// Sub-sample lattice of a mapped raster. Axis position `a` lies in pixel
/// `pixel[a]` at coordinate `coord[a]` with one-dimensional weight
/// `weight[a]`; the lattice is exactly symmetric: `coord[L-1-a] = -coord[a]`.
pub(crate) struct CartesianGrid {
    pub coord: Vec<f64>,
    pub weight: Vec<f64>,
    pub pixel: Vec<usize>,
    center: Vec<f64>,
    strict: bool,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Sample {
    pub r: f64,
    pub theta: f64,
    /// Weight times intensity.
    pub g: f64,
}

impl CartesianGrid {
    pub fn new(n: usize, scheme: &Scheme) -> Result<CartesianGrid> {
        let cells: Vec<_> = (1..=n)
            .map(|i| scheme.mapping.cell(i, i, n))
            .collect::<Result<_>>()?;
        let (t, w) = scheme.rule.nodes_1d();
        let mut coord = Vec::with_capacity(n * t.len());
        let mut weight = Vec::with_capacity(n * t.len());
        let mut pixel = Vec::with_capacity(n * t.len());
        for (p, cell) in cells.iter().enumerate() {
            for (tv, wv) in t.iter().zip(&w) {
                coord.push(cell.x + tv * cell.dx);
                weight.push(wv * cell.dx);
                pixel.push(p);
            }
        }
        Ok(CartesianGrid {
            coord,
            weight,
            pixel,
            center: cells.iter().map(|c| c.x).collect(),
            strict: scheme.strict,
        })
    }

    pub fn len(&self) -> usize {
        self.coord.len()
    }

    /// Whether sub-sample `(a, b)` (column, row) enters the sums.
    pub fn included(&self, a: usize, b: usize) -> bool {
        if self.strict {
            self.coord[a].hypot(self.coord[b]) <= 1.0
        } else {
            self.center[self.pixel[a]].hypot(self.center[self.pixel[b]]) <= 1.0
        }
    }

    /// Weighted intensity of sub-sample `(a, b)`.
    pub fn g(&self, image: &Image, a: usize, b: usize) -> f64 {
        self.weight[a] * self.weight[b] * image.get(self.pixel[b], self.pixel[a])
    }

    /// Included samples of lattice row `b`, in column order.
    pub fn row(&self, image: &Image, b: usize, singular: bool) -> Vec<Sample> {
        let y = self.coord[b];
        (0..self.len())
            .filter(|&a| self.included(a, b))
            .map(|a| {
                let x = self.coord[a];
                Sample {
                    r: guard_origin(x.hypot(y), singular),
                    theta: y.atan2(x),
                    g: self.g(image, a, b),
                }
            })
            .collect()
    }
}

/// Adds `term` unless it is non-finite outside the disk, where the kernel
/// formula is not defined.
#[inline]
fn accumulate(acc: &mut Complex64, term: Complex64, r: f64) {
    if r > 1.0 && !(term.re.is_finite() && term.im.is_finite()) {
        return;
    }
    *acc += term;
}

fn basis_for(method: &MethodSpec, k: usize) -> RadialBasis {
    RadialBasis::new(method, k as i32)
}

pub(crate) fn naive_values(
    image: &Image,
    method: &MethodSpec,
    k: usize,
    scheme: &Scheme,
    stats: &EvalStats,
) -> Result<Vec<Complex64>> {
    let grid = CartesianGrid::new(image.size(), scheme)?;
    let basis = basis_for(method, k);
    let singular = basis.singular_at_origin(0);
    let samples: Vec<Sample> = (0..grid.len()).flat_map(|b| grid.row(image, b, singular)).collect();
    let indices = order_set(method, k).indices;
    stats.add_samples(samples.len() as u64);
    stats.add_kernel((samples.len() * indices.len()) as u64);
    stats.add_radial((samples.len() * indices.len()) as u64);
    Ok(indices
        .par_iter()
        .map(|idx| {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in &samples {
                let kernel = basis.direct(idx.n, idx.m, s.r).conj()
                    * Complex64::from_polar(1.0, -(idx.m as f64) * s.theta);
                accumulate(&mut acc, kernel * s.g, s.r);
            }
            acc
        })
        .collect())
}

/// One octant representative with the weighted intensities of its orbit.
struct Orbit {
    r: f64,
    theta: f64,
    /// Points at angles theta, pi/2 + theta, pi + theta, 3pi/2 + theta.
    direct: [f64; 4],
    /// Points at angles pi/2 - theta, pi - theta, 3pi/2 - theta, 2pi - theta
    /// (zero on the diagonal, where they coincide with `direct`).
    mirrored: [f64; 4],
}

/// `(-j)^m`.
fn quarter_turn(m: i32) -> Complex64 {
    match m.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Moments with kernel values evaluated on one octant only.
///
/// For a point at angle `theta` the seven symmetric points lie at
/// `pi/2 -+ theta`, `pi -+ theta`, `3pi/2 -+ theta` and `2pi - theta` with the
/// same radius, so their angular factors are `c^k E` or `c^k conj(E)` with
/// `E = exp(-j m theta)` and `c = (-j)^m`.
pub fn decompose_symmetric(image: &Image, method: &MethodSpec, k: usize, scheme: &Scheme) -> Result<MomentSet> {
    let scheme = Scheme {
        strategy: Strategy::Symmetric,
        ..*scheme
    };
    super::decompose(image, method, k, &scheme)
}

pub(crate) fn symmetric_values(
    image: &Image,
    method: &MethodSpec,
    k: usize,
    scheme: &Scheme,
    stats: &EvalStats,
) -> Result<Vec<Complex64>> {
    if image.size() % 2 != 0 {
        return Err(MomentError::InvalidParameter(format!(
            "the symmetric strategy needs an even image size (got {})",
            image.size()
        )));
    }
    let grid = CartesianGrid::new(image.size(), scheme)?;
    let basis = basis_for(method, k);
    let l = grid.len();
    let bar = |a: usize| l - 1 - a;
    let g = |a: usize, b: usize| grid.g(image, a, b);

    let mut orbits = Vec::new();
    let mut sample_count = 0u64;
    for a in l / 2..l {
        for b in l / 2..=a {
            if !grid.included(a, b) {
                continue;
            }
            let (x, y) = (grid.coord[a], grid.coord[b]);
            let diagonal = a == b;
            let direct = [g(a, b), g(bar(b), a), g(bar(a), bar(b)), g(b, bar(a))];
            let mirrored = if diagonal {
                [0.0; 4]
            } else {
                [g(b, a), g(bar(a), b), g(bar(b), bar(a)), g(a, bar(b))]
            };
            sample_count += if diagonal { 4 } else { 8 };
            orbits.push(Orbit {
                r: x.hypot(y),
                theta: y.atan2(x),
                direct,
                mirrored,
            });
        }
    }

    let indices = order_set(method, k).indices;
    stats.add_samples(sample_count);
    stats.add_kernel((orbits.len() * indices.len()) as u64);
    stats.add_radial((orbits.len() * indices.len()) as u64);
    Ok(indices
        .par_iter()
        .map(|idx| {
            let c = quarter_turn(idx.m);
            let c2 = c * c;
            let c3 = c2 * c;
            let mut acc = Complex64::new(0.0, 0.0);
            for o in &orbits {
                let e = Complex64::from_polar(1.0, -(idx.m as f64) * o.theta);
                let radial = basis.direct(idx.n, idx.m, o.r).conj();
                let d = o.direct;
                let s = o.mirrored;
                let direct_sum = c * d[1] + c2 * d[2] + c3 * d[3] + d[0];
                let mirrored_sum = c * s[0] + c2 * s[1] + c3 * s[2] + s[3];
                let term = radial * (e * direct_sum + e.conj() * mirrored_sum);
                accumulate(&mut acc, term, o.r);
            }
            acc
        })
        .collect())
}

/// Radial values of every order needed at one sample, laid out so each
/// coefficient finds its value at a fixed position.
pub(crate) struct RadialTable {
    kind: TableKind,
    /// Position of each coefficient's radial value, and its angular slot.
    slots: Vec<(usize, usize)>,
    width: usize,
    k: i32,
}

enum TableKind {
    /// One recurrence per group; `groups[i]` covers `|m| = i` for ZM/PZM.
    Chains(Vec<(JacobiChain, usize)>),
    /// Direct evaluation of orders `lo..=hi`.
    Direct { basis: RadialBasis, lo: i32, hi: i32 },
}

impl RadialTable {
    pub fn new(method: &MethodSpec, k: usize, indices: &[OrderIndex]) -> Result<RadialTable> {
        let ki = k as i32;
        let family = method.family();
        let (kind, width, pos): (TableKind, usize, Box<dyn Fn(OrderIndex) -> usize>) = if family.is_jacobi() {
            let groups: Vec<i32> = if family.radial_depends_on_m() {
                (0..=ki).collect()
            } else {
                vec![0]
            };
            let mut chains = Vec::new();
            let mut offset = 0;
            let mut offsets = Vec::new();
            for &m in &groups {
                let chain = JacobiChain::new(method, m, ki)?;
                offsets.push(offset);
                let len = chain.len();
                chains.push((chain, offset));
                offset += len;
            }
            let by_m = family.radial_depends_on_m();
            let step = if family == Family::Zm { 2 } else { 1 };
            (
                TableKind::Chains(chains),
                offset,
                Box::new(move |idx: OrderIndex| {
                    let am = idx.m.abs();
                    if by_m {
                        offsets[am as usize] + ((idx.n - am) / step) as usize
                    } else {
                        idx.n as usize
                    }
                }),
            )
        } else {
            let lo = if family.has_complex_radial() { -ki } else { 0 };
            (
                TableKind::Direct {
                    basis: RadialBasis::new(method, ki),
                    lo,
                    hi: ki,
                },
                (ki - lo + 1) as usize,
                Box::new(move |idx: OrderIndex| (idx.n - lo) as usize),
            )
        };
        let slots = indices.iter().map(|&idx| (pos(idx), (idx.m + ki) as usize)).collect();
        Ok(RadialTable { kind, slots, width, k: ki })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Per coefficient: position of its radial value and its angular slot
    /// (`m + K`).
    pub fn slots(&self) -> &[(usize, usize)] {
        &self.slots
    }

    /// Fills `out` (length `width`) with the radial values at `r`.
    pub fn fill(&self, r: f64, out: &mut [Complex64], scratch: &mut Vec<f64>) {
        match &self.kind {
            TableKind::Chains(chains) => {
                for (chain, offset) in chains {
                    scratch.resize(chain.len(), 0.0);
                    chain.fill(r, scratch);
                    for (i, v) in scratch.iter().enumerate() {
                        out[offset + i] = Complex64::new(*v, 0.0);
                    }
                }
            }
            TableKind::Direct { basis, lo, hi } => {
                for n in *lo..=*hi {
                    out[(n - lo) as usize] = basis.direct(n, 0, r);
                }
            }
        }
    }

    /// Adds the contribution of one sample to every coefficient.
    pub fn accumulate(&self, s: &Sample, radial: &[Complex64], angular: &mut [Complex64], acc: &mut [Complex64]) {
        for (m, slot) in (-self.k..=self.k).zip(angular.iter_mut()) {
            *slot = Complex64::from_polar(1.0, -(m as f64) * s.theta);
        }
        for ((pos, ang), a) in self.slots.iter().zip(acc.iter_mut()) {
            let term = radial[*pos].conj() * angular[*ang] * s.g;
            accumulate(a, term, s.r);
        }
    }
}

pub(crate) fn tabulated_values(
    image: &Image,
    method: &MethodSpec,
    k: usize,
    scheme: &Scheme,
    stats: &EvalStats,
) -> Result<Vec<Complex64>> {
    let grid = CartesianGrid::new(image.size(), scheme)?;
    let indices = order_set(method, k).indices;
    let table = RadialTable::new(method, k, &indices)?;
    let singular = RadialBasis::new(method, 0).singular_at_origin(0);
    let blocks: Vec<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|b| {
            let samples = grid.row(image, b, singular);
            let mut acc = vec![Complex64::new(0.0, 0.0); indices.len()];
            let mut radial = vec![Complex64::new(0.0, 0.0); table.width()];
            let mut angular = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
            let mut scratch = Vec::new();
            for s in &samples {
                table.fill(s.r, &mut radial, &mut scratch);
                table.accumulate(s, &radial, &mut angular, &mut acc);
            }
            stats.add_samples(samples.len() as u64);
            stats.add_radial((samples.len() * table.width()) as u64);
            stats.add_kernel((samples.len() * indices.len()) as u64);
            acc
        })
        .collect();
    Ok(fold_blocks(indices.len(), blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decompose, decompose_with_stats, Mapping, Rule};
    use crate::image::synthetic;

    #[test]
    fn lattice_is_symmetric() {
        for rule in [Rule::Zoa, Rule::Upsample(3), Rule::Gauss(4)] {
            let grid = CartesianGrid::new(10, &Scheme::new(Mapping::Circumcircle, rule, Strategy::Naive)).unwrap();
            let l = grid.len();
            for a in 0..l {
                assert_eq!(grid.coord[a], -grid.coord[l - 1 - a]);
                assert_eq!(grid.weight[a], grid.weight[l - 1 - a]);
            }
        }
    }

    #[test]
    fn symmetric_matches_naive() {
        let img = synthetic::photo_like(24, 5).unwrap();
        for (method, mapping, strict) in [
            (MethodSpec::new(Family::Zm).unwrap(), Mapping::Incircle, false),
            (MethodSpec::new(Family::Pcet).unwrap(), Mapping::Circumcircle, false),
            (MethodSpec::new(Family::Pst).unwrap(), Mapping::Incircle, true),
            (MethodSpec::new(Family::Bfm).unwrap(), Mapping::Incircle, false),
        ] {
            let naive = Scheme::new(mapping, Rule::Upsample(2), Strategy::Naive).with_strict(strict);
            let sym = Scheme { strategy: Strategy::Symmetric, ..naive };
            let a = decompose(&img, &method, 6, &naive).unwrap();
            let b = decompose(&img, &method, 6, &sym).unwrap();
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).norm() <= 1e-10, "{method}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn symmetric_counts_about_an_eighth() {
        let img = synthetic::photo_like(32, 1).unwrap();
        let zm = MethodSpec::new(Family::Zm).unwrap();
        let naive = Scheme::new(Mapping::Incircle, Rule::Zoa, Strategy::Naive);
        let sym = Scheme { strategy: Strategy::Symmetric, ..naive };
        let (sa, sb) = (EvalStats::default(), EvalStats::default());
        decompose_with_stats(&img, &zm, 6, &naive, &sa).unwrap();
        decompose_with_stats(&img, &zm, 6, &sym, &sb).unwrap();
        assert_eq!(sa.samples(), sb.samples());
        let ratio = sb.kernel_evals() as f64 / sa.kernel_evals() as f64;
        assert!(ratio < 0.15, "{ratio}");
    }

    #[test]
    fn odd_size_rejected_by_symmetric() {
        let img = Image::constant(9, 0.5).unwrap();
        let zm = MethodSpec::new(Family::Zm).unwrap();
        let scheme = Scheme::new(Mapping::Incircle, Rule::Zoa, Strategy::Symmetric);
        assert!(decompose(&img, &zm, 4, &scheme).is_err());
    }

    #[test]
    fn tabulated_matches_naive_at_low_order() {
        let img = synthetic::photo_like(20, 2).unwrap();
        for method in [
            MethodSpec::new(Family::Zm).unwrap(),
            MethodSpec::new(Family::Pzm).unwrap(),
            MethodSpec::new(Family::Chfm).unwrap(),
            MethodSpec::new(Family::Efm).unwrap(),
            MethodSpec::fjfm(3.0, 3.0, 1.5).unwrap(),
            MethodSpec::new(Family::Bfm).unwrap(),
        ] {
            let naive = Scheme::new(Mapping::Incircle, Rule::Zoa, Strategy::Naive);
            let rec = Scheme { strategy: Strategy::Recursive, ..naive };
            let a = decompose(&img, &method, 5, &naive).unwrap();
            let b = decompose(&img, &method, 5, &rec).unwrap();
            for ((idx, x), y) in a.iter().zip(b.values()) {
                assert!((x - y).norm() <= 1e-10, "{method} {idx:?}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn quarter_turn_powers() {
        use std::f64::consts::FRAC_PI_2;
        for m in -6..=6 {
            let want = Complex64::from_polar(1.0, -(m as f64) * FRAC_PI_2);
            assert!((quarter_turn(m) - want).norm() < 1e-15);
        }
    }
}
