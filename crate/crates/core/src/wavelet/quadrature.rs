//! Slow quadrature oracle for wavelet coefficients.
//!
//! Evaluates `c_{j,k} = 2^j \int f(x) psi(2^j x - k) dx` by composite
//! trapezoidal quadrature in the wavelet's own coordinate, so the resolution
//! requirement is independent of the scale. Serves as the independent
//! cross-check for the filter-bank path.

use crate::error::{HolderError, Result};
use crate::pyramid::{CoeffPyramid, ScaleCoeffs};
use crate::wavelet::cascade::RenderedWavelet;
use crate::wavelet::meyer::render_meyer_psi;
use crate::wavelet::{WaveletFamily, WaveletSpec};
use rayon::prelude::*;

/// Wavelet samples on a uniform grid starting at `x_start`.
struct PsiTable {
    values: Vec<f64>,
    x_start: f64,
    dx: f64,
}

fn psi_table(spec: &WaveletSpec, resolution_log2: u32) -> Result<PsiTable> {
    match spec.family {
        WaveletFamily::Daubechies(_) => {
            let r = RenderedWavelet::render(spec, resolution_log2)?;
            Ok(PsiTable {
                values: r.psi.clone(),
                x_start: 0.0,
                dx: r.dx(),
            })
        }
        WaveletFamily::MeyerFourier => {
            let (values, x_start, dx) = render_meyer_psi(16, resolution_log2);
            Ok(PsiTable {
                values,
                x_start,
                dx,
            })
        }
    }
}

/// Coefficients by quadrature for scales `j_min..=j_max` with translates
/// `k = 0..2^j` (unit-window convention; pass a periodized callable for
/// windowed signals).
///
/// `resolution_log2` sets the quadrature grid to `2^-resolution_log2` in the
/// wavelet coordinate; fewer than 16 points per unit is refused.
pub fn quadrature_coeffs(
    f: &(dyn Fn(f64) -> f64 + Sync),
    spec: &WaveletSpec,
    j_min: i32,
    j_max: i32,
    resolution_log2: u32,
) -> Result<CoeffPyramid> {
    if j_min > j_max || j_min < 0 {
        return Err(HolderError::Domain(format!(
            "bad scale range [{j_min}, {j_max}]"
        )));
    }
    if resolution_log2 < 4 {
        return Err(HolderError::Accuracy(format!(
            "quadrature needs at least 16 points per unit of the wavelet argument, got 2^{resolution_log2}"
        )));
    }
    if j_max > 26 {
        return Err(HolderError::Domain(format!(
            "quadrature position count 2^{j_max} is impractical; cap is 2^26"
        )));
    }
    let table = psi_table(spec, resolution_log2)?;
    let scales = (j_min..=j_max)
        .map(|j| {
            let pow = (2f64).powi(-j);
            let n_k = 1usize << j;
            let coeffs: Vec<f64> = (0..n_k)
                .into_par_iter()
                .map(|k| {
                    // u-substitution: c_{j,k} = int f((u + k) 2^-j) psi(u) du
                    let mut acc = 0.0;
                    for (i, &psi) in table.values.iter().enumerate() {
                        if psi == 0.0 {
                            continue;
                        }
                        let u = table.x_start + i as f64 * table.dx;
                        let w = if i == 0 || i == table.values.len() - 1 {
                            0.5
                        } else {
                            1.0
                        };
                        acc += w * f((u + k as f64) * pow) * psi;
                    }
                    acc * table.dx
                })
                .collect();
            ScaleCoeffs::new(j, coeffs)
        })
        .collect();
    CoeffPyramid::new(scales)
}
