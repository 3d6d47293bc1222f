//! Image reconstruction `f(r, theta) = Re sum M_nm R_n(r) exp(j m theta)`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::cartesian::RadialTable;
use super::MomentSet;
use crate::basis::RadialBasis;
use crate::error::{MomentError, Result};
use crate::geometry::{guard_origin, Mapping};
use crate::image::Image;

/// Reconstructed intensities at the pixel centres of an `size x size`
/// raster, row-major and unclipped. Pixels outside the unit disk are 0.
///
/// Centres follow the mapping the moments were computed with (incircle for
/// polar schemes).
pub fn reconstruct_field(moments: &MomentSet, size: usize) -> Result<Vec<f64>> {
    if size < 2 {
        return Err(MomentError::InvalidParameter(format!(
            "reconstruction size must be at least 2 (got {size})"
        )));
    }
    let mapping = match moments.scheme.mapping {
        Mapping::Circumcircle => Mapping::Circumcircle,
        _ => Mapping::Incircle,
    };
    let method = &moments.method;
    let k = moments.k;
    let ki = k as i32;
    let table = RadialTable::new(method, k, moments.indices())?;
    let singular = RadialBasis::new(method, 0).singular_at_origin(0);
    let rows: Vec<Vec<f64>> = (1..=size)
        .into_par_iter()
        .map(|j| {
            let mut radial = vec![Complex64::new(0.0, 0.0); table.width()];
            let mut angular = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
            let mut scratch = Vec::new();
            (1..=size)
                .map(|i| {
                    let cell = mapping.cell(i, j, size)?;
                    let r = cell.center_radius();
                    if r > 1.0 {
                        return Ok(0.0);
                    }
                    let r = guard_origin(r, singular);
                    let theta = cell.y.atan2(cell.x);
                    table.fill(r, &mut radial, &mut scratch);
                    for (m, a) in (-ki..=ki).zip(angular.iter_mut()) {
                        *a = Complex64::from_polar(1.0, m as f64 * theta);
                    }
                    Ok(table
                        .slots()
                        .iter()
                        .zip(moments.values())
                        .map(|((pos, ang), v)| (v * radial[*pos] * angular[*ang]).re)
                        .sum())
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(rows.concat())
}

/// [`reconstruct_field`] clipped to `[0, 1]`.
pub fn reconstruct(moments: &MomentSet, size: usize) -> Result<Image> {
    Image::from_clipped(size, &reconstruct_field(moments, size)?)
}
