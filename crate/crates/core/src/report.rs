//! Analysis orchestration and the serialized report.

use crate::error::{HolderError, Result};
use crate::estimate::{FitWindow, IndexEstimate};
use crate::estimators::{
    default_fit_window, irregularity_criterion, lower_index_wavelet, naive_upper_index,
    upper_index_wavelet,
};
use crate::io::Provenance;
use crate::pyramid::CoeffPyramid;
use crate::signal::SampledSignal;
use crate::smoothness::{modulus_profile, oracle_lower_index, oracle_upper_index};
use crate::wavelet::quadrature::quadrature_coeffs;
use crate::wavelet::transform::dwt_pyramid;
use crate::wavelet::{WaveletFamily, WaveletSpec};
use crate::witness::{criterion_equivalence_check, default_c_grid};
use serde::{Deserialize, Serialize};

/// Difference-order policy: fixed, or raised until the estimate separates
/// from the order (capped at 5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MPolicy {
    Auto,
    Fixed(u32),
}

impl MPolicy {
    pub fn parse(text: &str) -> Result<Self> {
        if text == "auto" {
            return Ok(MPolicy::Auto);
        }
        text.parse::<u32>()
            .ok()
            .filter(|&m| m >= 1)
            .map(MPolicy::Fixed)
            .ok_or_else(|| {
                HolderError::Parse(format!("bad M policy '{text}' (auto or integer >= 1)"))
            })
    }
}

pub const M_CAP: u32 = 5;

/// Analysis options; `None` windows fall back to defaults derived from the
/// available scales.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub wavelet: WaveletSpec,
    pub m_policy: MPolicy,
    /// Window for wavelet-side fits.
    pub window: Option<FitWindow>,
    /// Window for the modulus-side fits.
    pub oracle_window: Option<FitWindow>,
    /// Include seam-affected coefficients in the per-scale sups.
    pub include_seam: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            wavelet: WaveletSpec::daubechies(4).expect("db4 exists"),
            m_policy: MPolicy::Auto,
            window: None,
            oracle_window: None,
            include_seam: false,
        }
    }
}

/// What was analyzed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InputDescriptor {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

/// Estimates block of the report; absent entries were not computable.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct EstimateSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_lower: Option<IndexEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_upper: Option<IndexEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet_lower: Option<IndexEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet_upper: Option<IndexEstimate>,
    /// Raw-coefficient limsup surrogate, reported for comparison with the
    /// criterion-based `wavelet_upper`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub naive_upper: Option<IndexEstimate>,
}

/// Compressed criterion trace for the report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionSummary {
    pub m: u32,
    pub j_min: i32,
    pub j_max: i32,
    /// `(j, log2 criterion(j))` rows with positive values.
    pub log2_values: Vec<(i32, f64)>,
}

/// Witness-search outcome at one `(alpha, C)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub alpha: f64,
    pub c: f64,
    pub witness_found: bool,
}

/// Full analysis output; schema versioned, deterministic for fixed inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub input: InputDescriptor,
    pub wavelet: String,
    pub m_used: u32,
    pub m_policy: String,
    pub estimates: EstimateSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<CriterionSummary>,
    pub witness_outcomes: Vec<WitnessSummary>,
    pub warnings: Vec<String>,
    /// Set when no estimate could be produced (e.g. an all-zero signal).
    pub degenerate: bool,
}

fn wavelet_name(spec: &WaveletSpec) -> String {
    match spec.family {
        WaveletFamily::Daubechies(n) => format!("daubechies:{n}"),
        WaveletFamily::MeyerFourier => "meyer".into(),
    }
}

fn m_policy_name(p: MPolicy) -> String {
    match p {
        MPolicy::Auto => "auto".into(),
        MPolicy::Fixed(m) => m.to_string(),
    }
}

/// Slope read at the fine end of the fit data (consecutive chord between the
/// last two scales): the escalation statistic for the auto order policy,
/// insensitive to the saturation of coarse radii.
fn fine_end_slope(est: &IndexEstimate) -> f64 {
    let n = est.logdata.len();
    if n < 2 {
        return est.diagnostics.regression_slope;
    }
    let (j1, l1) = est.logdata[n - 2];
    let (j2, l2) = est.logdata[n - 1];
    (l1 - l2) / (j2 - j1) as f64
}

/// Pick the difference order. Auto starts at 1 and bumps while the measured
/// slope crowds the order from below (`est >= M - 0.1`), mirroring
/// `M = floor(alpha) + 1`; capped at `M_CAP`.
fn resolve_m<E>(policy: MPolicy, warnings: &mut Vec<String>, mut estimate: E) -> Result<u32>
where
    E: FnMut(u32) -> Result<f64>,
{
    match policy {
        MPolicy::Fixed(m) => Ok(m),
        MPolicy::Auto => {
            let mut m = 1;
            loop {
                let est = estimate(m)?;
                if est < m as f64 - 0.1 {
                    return Ok(m);
                }
                if m >= M_CAP {
                    warnings.push(format!(
                        "estimate {est:.3} still crowds M = {m}; M capped at {M_CAP}"
                    ));
                    return Ok(m);
                }
                m += 1;
            }
        }
    }
}

fn default_oracle_range(signal: &SampledSignal) -> (i32, i32) {
    // radii from 1/4 of the window down to 32 grid steps: any finer and the
    // shift set is too sparse to realize the sup
    let j_fine = (1.0 / (32.0 * signal.dx)).log2().floor() as i32;
    (2, j_fine.max(3))
}

/// Quadrature pyramid of the sample interpolant in window coordinates, for
/// wavelets without a filter bank. Scales are capped at 10 octaves to keep
/// the slow path tractable.
fn meyer_signal_pyramid(signal: &SampledSignal, spec: &WaveletSpec) -> Result<CoeffPyramid> {
    let n = signal.len();
    let j_hi = ((n as f64).log2().floor() as i32 - 2).clamp(2, 10);
    let values = signal.values.clone();
    let extension = signal.extension;
    let f = move |u: f64| -> f64 {
        // linear interpolation of the samples at window coordinate u
        let pos = u * values.len() as f64;
        let i = pos.floor();
        let t = pos - i;
        let n = values.len() as isize;
        let at = |k: isize| -> f64 {
            match extension {
                crate::signal::Extension::Periodic => values[k.rem_euclid(n) as usize],
                crate::signal::Extension::Clamp => values[k.clamp(0, n - 1) as usize],
            }
        };
        let i = i as isize;
        at(i) * (1.0 - t) + at(i + 1) * t
    };
    quadrature_coeffs(&f, spec, 2, j_hi, 10)
}

/// Full pipeline on a sampled signal: modulus oracle plus the filter-bank
/// estimates when the length is a power of two.
pub fn analyze_signal(
    signal: &SampledSignal,
    opts: &AnalyzeOptions,
    descriptor: InputDescriptor,
) -> Result<AnalysisReport> {
    let mut warnings = Vec::new();
    let (j_lo, j_hi) = default_oracle_range(signal);
    let oracle_window = opts.oracle_window.unwrap_or(FitWindow::new(j_lo, j_hi));

    let m = resolve_m(opts.m_policy, &mut warnings, |m| {
        let profile = modulus_profile(signal, m, oracle_window.lo.min(2), oracle_window.hi)?;
        match oracle_lower_index(&profile, Some(oracle_window)) {
            Ok(est) => Ok(fine_end_slope(&est)),
            // an all-zero profile pins nothing; M = 1 is as good as any
            Err(HolderError::Estimation(_)) => Ok(0.0),
            Err(e) => Err(e),
        }
    })?;

    let mut estimates = EstimateSet::default();
    match modulus_profile(signal, m, oracle_window.lo.min(2), oracle_window.hi) {
        Ok(profile) => {
            estimates.oracle_lower = oracle_lower_index(&profile, Some(oracle_window)).ok();
            estimates.oracle_upper = oracle_upper_index(&profile, Some(oracle_window)).ok();
        }
        Err(e) => warnings.push(format!("modulus profile unavailable: {e}")),
    }

    let mut criterion = None;
    let mut witness_outcomes = Vec::new();
    let pyramid = match opts.wavelet.family {
        WaveletFamily::Daubechies(_) if signal.len().is_power_of_two() => {
            let j_sig = signal.len().trailing_zeros() as i32;
            Some(dwt_pyramid(signal, &opts.wavelet, 0, j_sig - 1, opts.include_seam)?.pyramid)
        }
        WaveletFamily::Daubechies(_) => {
            warnings.push(format!(
                "length {} is not a power of two; wavelet estimates skipped",
                signal.len()
            ));
            None
        }
        // band-limited wavelet: no filter bank; integrate the sample
        // interpolant at a handful of octaves
        WaveletFamily::MeyerFourier => Some(meyer_signal_pyramid(signal, &opts.wavelet)?),
    };
    if let Some(pyr) = &pyramid {
        let window = opts.window.unwrap_or_else(|| default_fit_window(pyr, m));
        estimates.wavelet_lower = lower_index_wavelet(pyr, window).ok();
        estimates.wavelet_upper = upper_index_wavelet(pyr, m, window).ok();
        estimates.naive_upper = naive_upper_index(pyr, window).ok();
        criterion = Some(summarize_criterion(pyr, m));
        witness_outcomes = witness_scan(pyr, &estimates, m);
    }

    let degenerate = estimates.oracle_lower.is_none() && estimates.wavelet_lower.is_none();
    if degenerate {
        warnings.push("no estimate could be produced (degenerate input)".into());
    }
    Ok(AnalysisReport {
        schema: 1,
        input: descriptor,
        wavelet: wavelet_name(&opts.wavelet),
        m_used: m,
        m_policy: m_policy_name(opts.m_policy),
        estimates,
        criterion,
        witness_outcomes,
        warnings,
        degenerate,
    })
}

/// Estimator-only pipeline on a prebuilt pyramid.
pub fn analyze_pyramid(
    pyramid: &CoeffPyramid,
    opts: &AnalyzeOptions,
    descriptor: InputDescriptor,
) -> Result<AnalysisReport> {
    let mut warnings = Vec::new();
    let m = resolve_m(opts.m_policy, &mut warnings, |m| {
        let window = opts
            .window
            .unwrap_or_else(|| default_fit_window(pyramid, m));
        match lower_index_wavelet(pyramid, window) {
            Ok(est) => Ok(fine_end_slope(&est)),
            Err(HolderError::Estimation(_)) => Ok(0.0),
            Err(e) => Err(e),
        }
    })?;
    let window = opts
        .window
        .unwrap_or_else(|| default_fit_window(pyramid, m));

    let estimates = EstimateSet {
        wavelet_lower: lower_index_wavelet(pyramid, window).ok(),
        wavelet_upper: upper_index_wavelet(pyramid, m, window).ok(),
        naive_upper: naive_upper_index(pyramid, window).ok(),
        ..EstimateSet::default()
    };
    let criterion = Some(summarize_criterion(pyramid, m));
    let witness_outcomes = witness_scan(pyramid, &estimates, m);

    let degenerate = estimates.wavelet_lower.is_none() && estimates.wavelet_upper.is_none();
    if degenerate {
        warnings.push("no estimate could be produced (all-zero pyramid)".into());
    }
    Ok(AnalysisReport {
        schema: 1,
        input: descriptor,
        wavelet: wavelet_name(&opts.wavelet),
        m_used: m,
        m_policy: m_policy_name(opts.m_policy),
        estimates,
        criterion,
        witness_outcomes,
        warnings,
        degenerate,
    })
}

fn summarize_criterion(pyramid: &CoeffPyramid, m: u32) -> CriterionSummary {
    let trace = irregularity_criterion(pyramid, m);
    CriterionSummary {
        m,
        j_min: pyramid.j_min,
        j_max: pyramid.j_max,
        log2_values: trace
            .rows
            .iter()
            .filter(|r| r.value > 0.0)
            .map(|r| (r.j, r.value.log2()))
            .collect(),
    }
}

/// Witness-search outcomes at the estimated exponents across the default
/// constant grid.
fn witness_scan(pyramid: &CoeffPyramid, estimates: &EstimateSet, m: u32) -> Vec<WitnessSummary> {
    let mut alphas = Vec::new();
    if let Some(e) = &estimates.wavelet_lower {
        alphas.push(e.value);
    }
    if let Some(e) = &estimates.wavelet_upper {
        if !alphas.iter().any(|a| (a - e.value).abs() < 1e-9) {
            alphas.push(e.value);
        }
    }
    let mut out = Vec::new();
    for alpha in alphas {
        if !(alpha > 0.0 && alpha < m as f64) || pyramid.j_min < 0 {
            continue;
        }
        if let Ok(rep) = criterion_equivalence_check(pyramid, alpha, m, &default_c_grid()) {
            for o in rep.outcomes {
                out.push(WitnessSummary {
                    alpha,
                    c: o.c,
                    witness_found: o.witness_found,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Extension;
    use crate::zoo::weierstrass;

    fn desc(n: usize) -> InputDescriptor {
        InputDescriptor {
            kind: "signal".into(),
            path: None,
            length: n,
            x0: None,
            dx: None,
            provenance: None,
        }
    }

    #[test]
    fn zero_signal_report_is_degenerate() {
        let s =
            SampledSignal::new(vec![0.0; 1024], 0.0, 1.0 / 1024.0, Extension::Periodic).unwrap();
        let rep = analyze_signal(&s, &AnalyzeOptions::default(), desc(1024)).unwrap();
        assert!(rep.degenerate);
        assert!(rep.estimates.oracle_lower.is_none());
        assert!(rep.estimates.wavelet_lower.is_none());
    }

    #[test]
    fn weierstrass_report_recovers_the_index() {
        let s = weierstrass((2f64).powf(-0.5), 2, None, 1 << 13).unwrap();
        let rep = analyze_signal(&s, &AnalyzeOptions::default(), desc(1 << 13)).unwrap();
        assert!(!rep.degenerate);
        assert_eq!(rep.m_used, 1);
        let ol = rep.estimates.oracle_lower.unwrap();
        assert!((ol.diagnostics.regression_slope - 0.5).abs() < 0.06);
        let wl = rep.estimates.wavelet_lower.unwrap();
        assert!((wl.diagnostics.regression_slope - 0.5).abs() < 0.06);
    }

    #[test]
    fn smooth_signal_saturates_the_m_cap() {
        let s = weierstrass(0.5, 2, Some(1), 1 << 12).unwrap();
        let rep = analyze_signal(&s, &AnalyzeOptions::default(), desc(1 << 12)).unwrap();
        assert_eq!(rep.m_used, M_CAP);
        assert!(rep.warnings.iter().any(|w| w.contains("capped")));
    }

    #[test]
    fn report_json_round_trips() {
        let s = weierstrass(0.5, 2, None, 1 << 10).unwrap();
        let rep = analyze_signal(&s, &AnalyzeOptions::default(), desc(1 << 10)).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string(&back).unwrap();
        assert_eq!(text, again);
        assert_eq!(rep.schema, 1);
    }

    #[test]
    fn m_policy_parsing() {
        assert_eq!(MPolicy::parse("auto").unwrap(), MPolicy::Auto);
        assert_eq!(MPolicy::parse("3").unwrap(), MPolicy::Fixed(3));
        assert!(MPolicy::parse("0").is_err());
        assert!(MPolicy::parse("x").is_err());
    }

    #[test]
    fn meyer_route_estimates_through_quadrature() {
        let s = weierstrass((2f64).powf(-0.5), 2, None, 1 << 12).unwrap();
        let opts = AnalyzeOptions {
            wavelet: crate::wavelet::WaveletSpec::meyer(),
            ..AnalyzeOptions::default()
        };
        let rep = analyze_signal(&s, &opts, desc(1 << 12)).unwrap();
        assert_eq!(rep.wavelet, "meyer");
        let wl = rep
            .estimates
            .wavelet_lower
            .expect("meyer route produced estimates");
        assert!(
            (wl.diagnostics.regression_slope - 0.5).abs() < 0.08,
            "slope {}",
            wl.diagnostics.regression_slope
        );
    }

    #[test]
    fn non_power_of_two_length_keeps_the_oracle_route() {
        let s = SampledSignal::from_fn(
            |x| (50.0 * x).sin(),
            3000,
            0.0,
            1.0 / 3000.0,
            Extension::Clamp,
        )
        .unwrap();
        let rep = analyze_signal(&s, &AnalyzeOptions::default(), desc(3000)).unwrap();
        assert!(rep.estimates.oracle_lower.is_some());
        assert!(rep.estimates.wavelet_lower.is_none());
        assert!(rep.warnings.iter().any(|w| w.contains("power of two")));
        assert!(!rep.degenerate);
    }
}
