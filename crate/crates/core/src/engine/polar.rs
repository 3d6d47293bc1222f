//! Polar pixel tiling: radial integrals by quadrature over each ring, angular
//! integrals in closed form over each sector.

use num_complex::Complex64;
use rayon::prelude::*;

use super::cartesian::RadialTable;
use super::{fold_blocks, EvalStats};
use crate::basis::{order_set, MethodSpec, RadialBasis};
use crate::error::Result;
use crate::geometry::{angular_integral_exact, guard_origin, polar_grid, resample_to_polar, Scheme, Strategy};
use crate::image::Image;

pub(crate) fn tiling_values(
    image: &Image,
    method: &MethodSpec,
    k: usize,
    scheme: &Scheme,
    stats: &EvalStats,
) -> Result<Vec<Complex64>> {
    let n = image.size();
    let rings = scheme.rings.unwrap_or(n / 2).max(1);
    let grid = resample_to_polar(image, &polar_grid(n, rings)?, scheme.interp)?;
    let indices = order_set(method, k).indices;
    let basis = RadialBasis::new(method, k as i32);
    let singular = basis.singular_at_origin(0);
    let table = match scheme.strategy {
        Strategy::Recursive => Some(RadialTable::new(method, k, &indices)?),
        _ => None,
    };
    let (t, w) = scheme.rule.nodes_1d();
    let ki = k as i32;

    let blocks: Vec<Vec<Complex64>> = grid
        .rings
        .par_iter()
        .map(|ring| {
            // Sum_v f_uv * int_sector exp(-j m theta), for m = -K..K.
            let angular: Vec<Complex64> = (-ki..=ki)
                .map(|m| {
                    (0..ring.sectors)
                        .map(|v| angular_integral_exact(m, ring.bound(v), ring.bound(v + 1)) * ring.values[v])
                        .sum()
                })
                .collect();
            let dr = ring.r_outer - ring.r_inner;
            let mid = ring.radius();
            let mut radial = vec![Complex64::new(0.0, 0.0); indices.len()];
            let mut buf = vec![Complex64::new(0.0, 0.0); table.as_ref().map_or(0, |t| t.width())];
            let mut scratch = Vec::new();
            for (tv, wv) in t.iter().zip(&w) {
                let r = guard_origin(mid + tv * dr, singular);
                let weight = wv * dr * r;
                match &table {
                    Some(table) => {
                        table.fill(r, &mut buf, &mut scratch);
                        for (acc, (pos, _)) in radial.iter_mut().zip(table.slots()) {
                            *acc += buf[*pos].conj() * weight;
                        }
                    }
                    None => {
                        for (acc, idx) in radial.iter_mut().zip(&indices) {
                            *acc += basis.direct(idx.n, idx.m, r).conj() * weight;
                        }
                    }
                }
            }
            stats.add_samples(ring.sectors as u64);
            stats.add_radial((t.len() * indices.len()) as u64);
            stats.add_kernel((ring.sectors * indices.len()) as u64);
            radial
                .iter()
                .zip(&indices)
                .map(|(i, idx)| i * angular[(idx.m + ki) as usize])
                .collect()
        })
        .collect();
    Ok(fold_blocks(indices.len(), blocks))
}
