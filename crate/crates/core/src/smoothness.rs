//! Finite differences, the M-modulus of smoothness and the brute-force oracle
//! estimators of both global indices.
//!
//! Everything here works directly on samples, with shifts restricted to grid
//! multiples; no interpolation is performed. Because the sup over positions is
//! taken on the sampled window only, the results are window-local versions of
//! the global quantities. This discrepancy is inherent to finite data.

use crate::error::{HolderError, Result};
use crate::estimate::{fit_index, EstimateMethod, FitWindow, IndexEstimate};
use crate::signal::{Extension, SampledSignal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Binomial coefficients `C(m, k)` for `k = 0..=m`, as floats.
fn binomial_row(m: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for k in 0..m {
        let next = row[k as usize] * (m - k) as f64 / (k + 1) as f64;
        row.push(next);
    }
    row
}

/// Order-`m` forward difference with step `h = h_steps * dx`, evaluated via
/// the binomial expansion `sum_k (-1)^(m-k) C(m,k) f(x + k h)`.
///
/// Under `Periodic` extension the result has one entry per grid point; under
/// `Clamp` only base points whose stencil fits in the window are returned
/// (length `n - m * h_steps`).
pub fn finite_difference(signal: &SampledSignal, h_steps: usize, m: u32) -> Result<Vec<f64>> {
    let n = signal.len();
    if m == 0 {
        return Err(HolderError::Domain("difference order must be >= 1".into()));
    }
    if h_steps == 0 {
        return Err(HolderError::Domain("shift must be >= 1 grid step".into()));
    }
    let reach = h_steps
        .checked_mul(m as usize)
        .ok_or_else(|| HolderError::Domain("difference stencil overflows".into()))?;
    if reach >= n {
        return Err(HolderError::Domain(format!(
            "stencil spans {reach} steps but the signal has only {n} samples"
        )));
    }
    let coeffs = signed_coeffs(m);
    let v = &signal.values;
    let out = match signal.extension {
        Extension::Periodic => (0..n)
            .map(|i| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * v[(i + k * h_steps) % n])
                    .sum()
            })
            .collect(),
        Extension::Clamp => (0..n - reach)
            .map(|i| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * v[i + k * h_steps])
                    .sum()
            })
            .collect(),
    };
    Ok(out)
}

fn signed_coeffs(m: u32) -> Vec<f64> {
    binomial_row(m)
        .into_iter()
        .enumerate()
        .map(|(k, b)| {
            if (m as usize - k).is_multiple_of(2) {
                b
            } else {
                -b
            }
        })
        .collect()
}

/// Largest admissible shift count for the given radius, capped so that the
/// stencil can still be evaluated somewhere.
fn shift_count(signal: &SampledSignal, r: f64, m: u32) -> Result<usize> {
    let k = (r / signal.dx * (1.0 + 1e-12)).floor() as usize;
    if k == 0 {
        return Err(HolderError::Domain(format!(
            "radius {r} admits no grid shift (dx = {})",
            signal.dx
        )));
    }
    Ok(k.min((signal.len() - 1) / m as usize))
}

fn max_abs_diff(signal: &SampledSignal, h_steps: usize, coeffs: &[f64]) -> f64 {
    let n = signal.len();
    let reach = h_steps * (coeffs.len() - 1);
    let v = &signal.values;
    let fold = |acc: f64, i: usize, wrap: bool| -> f64 {
        let mut d = 0.0;
        for (k, c) in coeffs.iter().enumerate() {
            let idx = i + k * h_steps;
            d += c * if wrap { v[idx % n] } else { v[idx] };
        }
        acc.max(d.abs())
    };
    match signal.extension {
        Extension::Periodic => (0..n).fold(0.0, |acc, i| fold(acc, i, true)),
        Extension::Clamp => (0..n - reach).fold(0.0, |acc, i| fold(acc, i, false)),
    }
}

/// M-modulus of smoothness at radius `r`: the sup over grid shifts
/// `|h| <= r` and over base points of `|Delta_h^M f|`.
///
/// Negative shifts are covered by symmetry (`|Delta_{-h}^M f(x)| =
/// |Delta_h^M f(x - M h)|`), so only positive shifts are scanned.
pub fn modulus_of_smoothness(signal: &SampledSignal, r: f64, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(HolderError::Domain("difference order must be >= 1".into()));
    }
    let k_max = shift_count(signal, r, m)?;
    let coeffs = signed_coeffs(m);
    // Order-independent max reduction; identical to the serial scan.
    let sup = (1..=k_max)
        .into_par_iter()
        .map(|k| max_abs_diff(signal, k, &coeffs))
        .reduce(|| 0.0, f64::max);
    Ok(sup)
}

/// The map `r -> omega_f^M(r)` sampled at dyadic radii `r = 2^-j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProfile {
    pub order_m: u32,
    /// First (coarsest) dyadic scale; radii run `2^-j_min .. 2^-j_max`.
    pub j_min: i32,
    /// Radii in decreasing order.
    pub radii: Vec<f64>,
    /// `omega_f^M(r)` per radius; nonnegative and nondecreasing in `r`.
    pub omega: Vec<f64>,
}

impl ModulusProfile {
    pub fn j_max(&self) -> i32 {
        self.j_min + self.radii.len() as i32 - 1
    }

    /// `(j, omega(2^-j))` pairs.
    pub fn scale_magnitudes(&self) -> Vec<(i32, f64)> {
        self.omega
            .iter()
            .enumerate()
            .map(|(i, &w)| (self.j_min + i as i32, w))
            .collect()
    }

    /// Validates nonnegativity, monotonicity in `r` and the doubling bound
    /// `omega(2r) <= 2^M omega(r)` on adjacent dyadic pairs.
    pub fn check_invariants(&self) -> Result<()> {
        let pow = (2f64).powi(self.order_m as i32);
        for (i, &w) in self.omega.iter().enumerate() {
            if w < 0.0 || !w.is_finite() {
                return Err(HolderError::Domain(format!("omega[{i}] = {w} invalid")));
            }
            if i > 0 {
                let coarser = self.omega[i - 1];
                if w > coarser * (1.0 + 1e-12) {
                    return Err(HolderError::Domain(format!(
                        "omega not monotone at radius index {i}"
                    )));
                }
                if coarser > pow * w * (1.0 + 1e-9) + 1e-300 && w > 0.0 {
                    return Err(HolderError::Domain(format!(
                        "doubling bound 2^M violated at radius index {i}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Profile of the modulus over `j in [j_min, j_max]`.
///
/// All shifts are scanned once and folded into prefix maxima, so the cost is
/// that of the finest radius alone.
pub fn modulus_profile(
    signal: &SampledSignal,
    m: u32,
    j_min: i32,
    j_max: i32,
) -> Result<ModulusProfile> {
    if j_min > j_max {
        return Err(HolderError::Domain(format!(
            "empty scale range [{j_min}, {j_max}]"
        )));
    }
    let r_coarse = (2f64).powi(-j_min);
    let r_fine = (2f64).powi(-j_max);
    if r_fine < signal.dx * (1.0 - 1e-12) {
        return Err(HolderError::Domain(format!(
            "finest radius 2^-{j_max} is below the grid step {}",
            signal.dx
        )));
    }
    let k_coarse = shift_count(signal, r_coarse, m)?;
    let coeffs = signed_coeffs(m);
    let per_shift: Vec<f64> = (1..=k_coarse)
        .into_par_iter()
        .map(|k| max_abs_diff(signal, k, &coeffs))
        .collect();
    // prefix_max[k-1] = sup over shifts 1..=k
    let mut prefix_max = per_shift;
    for i in 1..prefix_max.len() {
        prefix_max[i] = prefix_max[i].max(prefix_max[i - 1]);
    }

    let mut radii = Vec::new();
    let mut omega = Vec::new();
    for j in j_min..=j_max {
        let r = (2f64).powi(-j);
        let k = shift_count(signal, r, m)?;
        radii.push(r);
        omega.push(prefix_max[k - 1]);
    }
    let profile = ModulusProfile {
        order_m: m,
        j_min,
        radii,
        omega,
    };
    profile.check_invariants()?;
    Ok(profile)
}

/// Finite-scale surrogate of the liminf in the lower-index definition:
/// minimum per-scale chord slope over the window, with a regression slope as
/// diagnostic. Zero entries are skipped and logged.
pub fn oracle_lower_index(
    profile: &ModulusProfile,
    window: Option<FitWindow>,
) -> Result<IndexEstimate> {
    let w = window.unwrap_or(FitWindow::new(profile.j_min, profile.j_max()));
    fit_index(EstimateMethod::OracleLower, &profile.scale_magnitudes(), w)
}

/// Finite-scale surrogate of the limsup: maximum per-scale chord slope.
pub fn oracle_upper_index(
    profile: &ModulusProfile,
    window: Option<FitWindow>,
) -> Result<IndexEstimate> {
    let w = window.unwrap_or(FitWindow::new(profile.j_min, profile.j_max()));
    fit_index(EstimateMethod::OracleUpper, &profile.scale_magnitudes(), w)
}
