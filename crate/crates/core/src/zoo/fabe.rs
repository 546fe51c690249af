//! Lacunary sine series over geometric scale blocks `j_n = floor(growth^n)`:
//! within block `(j_n, j_{n+1}]` the term at frequency `2^j pi` carries
//! amplitude `inf(2^{-j_n a}, 2^{j_{n+1}(1-a)} 2^{-j}) / j^e`.
//!
//! The series is uniformly Holder of every order below `a` yet its value at
//! `2^-l` stays above `c 2^{-a l} l^{1-e}`: the logarithmic excess is what the
//! plain power-law envelope cannot see.

use crate::error::{HolderError, Result};
use crate::pyramid::CoeffPyramid;
use crate::signal::{Extension, SampledSignal};
use crate::wavelet::meyer::trig_series_meyer_pyramid;
use crate::wavelet::{Phase, TrigSeries, TrigTerm};
use serde::{Deserialize, Serialize};

/// Parameters of the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FabeParams {
    pub alpha: f64,
    pub epsilon: f64,
    /// Block growth base, > 1.
    pub beta_growth: f64,
    /// Blocks `n = 0..=n_max` are included.
    pub n_max: u32,
}

/// Assembled series plus bookkeeping.
#[derive(Debug, Clone)]
pub struct FabeFunction {
    pub params: FabeParams,
    /// `j_0 .. j_{n_max+1}`.
    pub block_seq: Vec<i32>,
    pub series: TrigSeries,
    /// Set when the frequency cap removed terms.
    pub truncated_at: Option<i32>,
}

/// Default frequency-exponent cap (`2^30` is far past any desk-scale grid).
pub const FABE_FREQ_CAP: i32 = 30;

impl FabeFunction {
    pub fn build(params: FabeParams, freq_cap: i32) -> Result<Self> {
        if !(params.alpha > 0.0 && params.alpha < 1.0) {
            return Err(HolderError::Domain(format!(
                "alpha must be in (0,1), got {}",
                params.alpha
            )));
        }
        if !(params.epsilon > 0.0 && params.epsilon < 1.0) {
            return Err(HolderError::Domain(format!(
                "epsilon must be in (0,1), got {}",
                params.epsilon
            )));
        }
        if params.beta_growth <= 1.0 {
            return Err(HolderError::Domain(format!(
                "growth base must exceed 1, got {}",
                params.beta_growth
            )));
        }
        let mut block_seq = Vec::new();
        for n in 0..=(params.n_max + 1) {
            let v = params.beta_growth.powi(n as i32).floor();
            if v > 1e17 {
                return Err(HolderError::Truncation(format!(
                    "block boundary floor(growth^{n}) = {v:.3e} overflows; feasible n_max: {}",
                    n.saturating_sub(1)
                )));
            }
            let v = v as i64;
            if let Some(&prev) = block_seq.last() {
                if v <= prev {
                    return Err(HolderError::Domain(format!(
                        "block boundaries must be strictly increasing; growth {} stalls at n = {n}",
                        params.beta_growth
                    )));
                }
            }
            block_seq.push(v);
        }

        let mut terms = Vec::new();
        let mut truncated_at = None;
        for n in 0..=params.n_max as usize {
            let j_n = block_seq[n];
            let j_next = block_seq[n + 1];
            for j in (j_n + 1)..=j_next {
                if j > freq_cap as i64 {
                    truncated_at = Some(freq_cap);
                    break;
                }
                let envelope = (2f64)
                    .powf(-(j_n as f64) * params.alpha)
                    .min((2f64).powf(j_next as f64 * (1.0 - params.alpha) - j as f64));
                terms.push(TrigTerm {
                    freq_exp: j as i32,
                    amplitude: envelope * (j as f64).powf(-params.epsilon),
                    phase: Phase::Sin,
                });
            }
        }
        let series = TrigSeries::new(terms)?;
        Ok(FabeFunction {
            params,
            block_seq: block_seq.into_iter().map(|v| v as i32).collect(),
            series,
            truncated_at,
        })
    }

    /// Value at the dyadic point `2^-l`, summing only frequencies below `l`
    /// (terms with `j >= l` vanish exactly at dyadic arguments).
    pub fn value_at_dyadic(&self, l: i32) -> f64 {
        self.series
            .terms
            .iter()
            .filter(|t| t.freq_exp < l)
            .map(|t| {
                let arg = std::f64::consts::PI * (2f64).powi(t.freq_exp - l);
                t.amplitude * arg.sin()
            })
            .sum()
    }

    /// Render on `[0, 1)`; every term has frequency exponent >= 2, so the
    /// unit window is a whole number of periods and the periodic extension
    /// is exact.
    pub fn render(&self, n_samples: usize) -> Result<SampledSignal> {
        let dx = 1.0 / n_samples as f64;
        SampledSignal::from_fn(
            |x| self.series.eval(x),
            n_samples,
            0.0,
            dx,
            Extension::Periodic,
        )
    }

    /// Exact Meyer coefficient pyramid of the truncated series.
    pub fn meyer_pyramid(&self, j_min: i32, j_max: i32) -> CoeffPyramid {
        trig_series_meyer_pyramid(&self.series, j_min, j_max)
    }

    /// The block envelope `inf(2^{-j_n a}, 2^{j_{n+1}(1-a)} 2^{-j})` at
    /// frequency exponent `j`, without the `j^-e` factor.
    pub fn envelope(&self, j: i32) -> f64 {
        for n in 0..self.block_seq.len() - 1 {
            let j_n = self.block_seq[n];
            let j_next = self.block_seq[n + 1];
            if j > j_n && j <= j_next {
                return (2f64)
                    .powf(-(j_n as f64) * self.params.alpha)
                    .min((2f64).powf(j_next as f64 * (1.0 - self.params.alpha) - j as f64));
            }
        }
        0.0
    }
}

/// Series plus rendered samples with default caps.
pub fn fabe_signal(params: FabeParams, n_samples: usize) -> Result<(SampledSignal, TrigSeries)> {
    let f = FabeFunction::build(params, FABE_FREQ_CAP)?;
    let s = f.render(n_samples)?;
    Ok((s, f.series))
}
