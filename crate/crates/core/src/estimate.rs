//! Index estimates and the shared log-log fitting machinery.
//!
//! An estimate carries two readings of the same per-scale data: the min/max of
//! per-scale chord slopes `log2 m_j / (-j)` (exact for power laws, sensitive to
//! oscillation between scales) and an ordinary least-squares slope that is
//! immune to a constant prefactor. Which one is the better finite-scale proxy
//! for a liminf/limsup depends on the data, so both are always reported.

use crate::error::{HolderError, Result};
use serde::{Deserialize, Serialize};

/// Which estimator produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMethod {
    OracleLower,
    OracleUpper,
    WaveletLower,
    WaveletUpper,
}

impl EstimateMethod {
    /// Lower-index methods take the minimum chord slope, upper-index methods
    /// the maximum.
    pub fn takes_min(self) -> bool {
        matches!(
            self,
            EstimateMethod::OracleLower | EstimateMethod::WaveletLower
        )
    }
}

/// Inclusive scale window `[lo, hi]` used for a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitWindow {
    pub lo: i32,
    pub hi: i32,
}

impl FitWindow {
    pub fn new(lo: i32, hi: i32) -> Self {
        FitWindow { lo, hi }
    }

    pub fn contains(&self, j: i32) -> bool {
        self.lo <= j && j <= self.hi
    }
}

/// Fit diagnostics attached to every estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// Least-squares slope of `log2 m_j` against `-j` over the window.
    pub regression_slope: f64,
    pub regression_intercept: f64,
    /// Root-mean-square residual of the regression, in log2 units.
    pub residual_rms: f64,
    /// Scales inside the window whose magnitude was zero and therefore
    /// excluded from the fit.
    pub skipped_scales: Vec<i32>,
    /// Set when scales were skipped: the chord extrema then describe only the
    /// surviving scales and are not a faithful limsup/liminf surrogate.
    pub non_representative: bool,
}

/// An exponent estimate with its method, window and per-scale log data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEstimate {
    /// Min (lower methods) or max (upper methods) of the per-scale chord
    /// slopes `log2 m_j / (-j)` over the fit window.
    pub value: f64,
    pub method: EstimateMethod,
    pub fit_window: FitWindow,
    /// `(j, log2 m_j)` for every scale that entered the fit.
    pub logdata: Vec<(i32, f64)>,
    pub diagnostics: FitDiagnostics,
}

/// Ordinary least-squares fit of `y = slope * x + intercept`.
/// Returns `(slope, intercept, residual_rms)`.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        let intercept = points.first().map(|p| p.1).unwrap_or(0.0);
        return (0.0, intercept, 0.0);
    }
    let sum_x: f64 = points.iter().map(|p| p.0).sum();
    let sum_y: f64 = points.iter().map(|p| p.1).sum();
    let sum_xx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sum_xy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sum_xx - sum_x * sum_x;
    let slope = if denom.abs() < 1e-12 {
        0.0
    } else {
        (n * sum_xy - sum_x * sum_y) / denom
    };
    let intercept = (sum_y - slope * sum_x) / n;
    let ss_res: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    (slope, intercept, (ss_res / n).sqrt())
}

/// Build an [`IndexEstimate`] from per-scale magnitudes.
///
/// `magnitudes` holds `(j, m_j)` pairs; entries with `m_j = 0` inside the
/// window are skipped and recorded. Scales `j <= 0` never enter (the chord
/// slope is undefined at `j = 0`). Errors when nothing of the window survives.
pub fn fit_index(
    method: EstimateMethod,
    magnitudes: &[(i32, f64)],
    window: FitWindow,
) -> Result<IndexEstimate> {
    if window.lo > window.hi {
        return Err(HolderError::Estimation(format!(
            "empty fit window [{}, {}]",
            window.lo, window.hi
        )));
    }
    let mut logdata = Vec::new();
    let mut skipped = Vec::new();
    for &(j, m) in magnitudes {
        if !window.contains(j) || j <= 0 {
            continue;
        }
        if m > 0.0 {
            logdata.push((j, m.log2()));
        } else {
            skipped.push(j);
        }
    }
    if logdata.is_empty() {
        return Err(HolderError::Estimation(format!(
            "no positive magnitudes in fit window [{}, {}]",
            window.lo, window.hi
        )));
    }

    let chords: Vec<f64> = logdata.iter().map(|&(j, lg)| lg / -(j as f64)).collect();
    let value = if method.takes_min() {
        chords.iter().cloned().fold(f64::INFINITY, f64::min)
    } else {
        chords.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    };

    let pts: Vec<(f64, f64)> = logdata.iter().map(|&(j, lg)| (-(j as f64), lg)).collect();
    let (slope, intercept, residual_rms) = least_squares(&pts);

    let non_representative = !skipped.is_empty();
    Ok(IndexEstimate {
        value,
        method,
        fit_window: window,
        logdata,
        diagnostics: FitDiagnostics {
            regression_slope: slope,
            regression_intercept: intercept,
            residual_rms,
            skipped_scales: skipped,
            non_representative,
        },
    })
}
