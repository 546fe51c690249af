//! A compactly supported lacunary construction built from translated wavelet
//! bumps at positions `x_j = 2^{-(j - l0)}`.
//!
//! The function carries three term families per block `[j_n, j_{n+1})` of the
//! doubly exponential scale recursion, with the auxiliary split point
//! `j_{n,a} = floor(2^{j_n alpha})`:
//!
//! * head  (`j_n <= j <= j_{n,a}`):        `2^{-j_n a}   sum_{l=j+2}^{j_{n,a}}  l^-e psi(2^l (x - x_j))`
//! * bridge(`j_{n,a} < j < j_{n+1}`):      `2^{j_{n+1}(1-a)} sum_{l=j+2}^{j_{n+1}} 2^-l l^-e psi(...)`
//! * tail  (`j_{n,a} < j < j_{n+1}`):      `2^{-j_{n+1} a} sum_{l=j_{n+1}}^{j_{n+1,a}} l^-e psi(...)`
//!
//! Bundle supports are pairwise disjoint, so probe values at `x_j` factor
//! through `psi(0)` and the wavelet coefficients are exactly the term
//! amplitudes. Everything here is deterministic.

use crate::error::{HolderError, Result};
use crate::pyramid::{CoeffPyramid, ScaleCoeffs};
use crate::signal::{Extension, SampledSignal};
use crate::theta::doubly_exponential_sequence;
use crate::wavelet::cascade::RenderedWavelet;
use crate::wavelet::WaveletSpec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Parameters of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cex1Params {
    pub alpha: f64,
    pub epsilon: f64,
    pub ell0: u32,
    /// Number of blocks of the scale recursion to include.
    pub truncation_n: u32,
}

/// Irregularity exponent of the construction:
/// `max(alpha epsilon, alpha epsilon / ((1 - alpha) + alpha epsilon))`,
/// always strictly below `alpha`.
pub fn cex1_beta(alpha: f64, epsilon: f64) -> f64 {
    let ae = alpha * epsilon;
    ae.max(ae / ((1.0 - alpha) + ae))
}

/// Term family tags, in the block order above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cex1Family {
    Head,
    Bridge,
    Tail,
}

/// One wavelet bump `amplitude * psi(2^ell (x - 2^{-(j - l0)}))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cex1Term {
    pub block: u32,
    pub family: Cex1Family,
    pub j: i64,
    pub ell: i64,
    pub amplitude: f64,
}

/// The assembled construction with its rendered wavelet.
#[derive(Debug)]
pub struct Cex1Function {
    pub params: Cex1Params,
    /// `j_1 .. j_{N+1}` of the block recursion.
    pub seq: Vec<i64>,
    /// `j_{n,a} = floor(2^{j_n alpha})` per sequence entry (saturating).
    pub seq_alpha: Vec<i64>,
    /// Scale cap applied to the tail sums that the recursion makes
    /// astronomically long; families cut by the cap are listed in
    /// `truncated`.
    pub ell_cap: i64,
    pub truncated: Vec<String>,
    wavelet: RenderedWavelet,
    /// Terms grouped by position index `j`.
    bundles: BTreeMap<i64, Vec<Cex1Term>>,
}

fn floor_pow2(exp: f64) -> i64 {
    let v = (2f64).powf(exp).floor();
    if v >= i64::MAX as f64 {
        i64::MAX
    } else {
        v as i64
    }
}

impl Cex1Function {
    /// Assemble the construction with `daubechies(n_moments)` rendered by
    /// cascade refinement. `ell_cap` bounds the stored scale range.
    pub fn build(params: Cex1Params, n_moments: u32, ell_cap: i64) -> Result<Self> {
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
        let spec = WaveletSpec::daubechies(n_moments)?;
        let wavelet = RenderedWavelet::render(&spec, 12)?;
        if wavelet.support_exponent() > params.ell0 {
            return Err(HolderError::Domain(format!(
                "wavelet support exceeds [-2^{0}, 2^{0}]; increase ell0 or lower the moment count",
                params.ell0
            )));
        }
        if wavelet.psi_at_zero_centered().abs() <= 1e-6 {
            return Err(HolderError::Domain("psi(0) is numerically zero".into()));
        }

        let mut bundles: BTreeMap<i64, Vec<Cex1Term>> = BTreeMap::new();
        let mut truncated = Vec::new();
        let mut seq = Vec::new();
        let mut seq_alpha = Vec::new();
        if params.truncation_n > 0 {
            let s = doubly_exponential_sequence(
                params.ell0,
                params.alpha,
                params.truncation_n as usize,
                1 << 40,
            )?;
            seq = s.as_slice().iter().map(|&j| j as i64).collect();
            seq_alpha = seq
                .iter()
                .map(|&j| floor_pow2(j as f64 * params.alpha))
                .collect();

            let mut push = |term: Cex1Term| {
                bundles.entry(term.j).or_default().push(term);
            };
            let e = params.epsilon;
            for n in 1..=params.truncation_n as usize {
                let j_n = seq[n - 1];
                let j_next = seq[n];
                let ja_n = seq_alpha[n - 1];
                let ja_next = seq_alpha[n];
                let head_coef = (2f64).powf(-(j_n as f64) * params.alpha);
                for j in j_n..=ja_n.min(ell_cap) {
                    for ell in (j + 2)..=ja_n.min(ell_cap) {
                        push(Cex1Term {
                            block: n as u32,
                            family: Cex1Family::Head,
                            j,
                            ell,
                            amplitude: head_coef * (ell as f64).powf(-e),
                        });
                    }
                }
                if ja_n > ell_cap {
                    truncated.push(format!(
                        "block {n} head cut at scale {ell_cap} (full range {ja_n})"
                    ));
                }
                let bridge_coef = (2f64).powf(j_next as f64 * (1.0 - params.alpha));
                let tail_coef = (2f64).powf(-(j_next as f64) * params.alpha);
                for j in (ja_n + 1).max(j_n)..=(j_next - 1).min(ell_cap) {
                    for ell in (j + 2)..=j_next.min(ell_cap) {
                        push(Cex1Term {
                            block: n as u32,
                            family: Cex1Family::Bridge,
                            j,
                            ell,
                            amplitude: bridge_coef
                                * (2f64).powi(-(ell as i32))
                                * (ell as f64).powf(-e),
                        });
                    }
                    for ell in j_next..=ja_next.min(ell_cap) {
                        push(Cex1Term {
                            block: n as u32,
                            family: Cex1Family::Tail,
                            j,
                            ell,
                            amplitude: tail_coef * (ell as f64).powf(-e),
                        });
                    }
                }
                if ja_next > ell_cap {
                    truncated.push(format!(
                        "block {n} tail cut at scale {ell_cap} (full range {ja_next})"
                    ));
                }
            }
        }
        Ok(Cex1Function {
            params,
            seq,
            seq_alpha,
            ell_cap,
            truncated,
            wavelet,
            bundles,
        })
    }

    /// `psi(0)` of the centered wavelet; every probe value is a positive
    /// multiple of it.
    pub fn psi_zero(&self) -> f64 {
        self.wavelet.psi_at_zero_centered()
    }

    /// Probe position `x_j = 2^{-(j - l0)}`.
    pub fn position(&self, j: i64) -> f64 {
        (2f64).powi((self.params.ell0 as i64 - j) as i32)
    }

    /// Sum of term amplitudes at position `j` (empty bundles give 0).
    pub fn bundle_amplitude(&self, j: i64) -> f64 {
        self.bundles
            .get(&j)
            .map(|terms| terms.iter().map(|t| t.amplitude).sum())
            .unwrap_or(0.0)
    }

    /// Position indices carrying at least one term.
    pub fn bundle_positions(&self) -> Vec<i64> {
        self.bundles.keys().copied().collect()
    }

    /// Closed-form probe `f(x_j) = psi(0) * bundle_amplitude(j)`, using the
    /// disjointness of bundle supports.
    pub fn probe(&self, j: i64) -> f64 {
        self.psi_zero() * self.bundle_amplitude(j)
    }

    /// Pointwise evaluation by summing the bumps whose support can contain
    /// `x`; cross-checks `probe` through an independent route.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        // bundle j lives within |x - x_j| <= 2^{l0 - j - 2}
        let j_near = (self.params.ell0 as f64 - x.log2()).round() as i64;
        let mut acc = 0.0;
        for j in (j_near - 2)..=(j_near + 2) {
            if let Some(terms) = self.bundles.get(&j) {
                let x_j = self.position(j);
                if (x - x_j).abs() > (2f64).powi((self.params.ell0 as i64 - j - 2) as i32) {
                    continue;
                }
                for t in terms {
                    let arg = (2f64).powi(t.ell as i32) * (x - x_j);
                    if arg.abs() <= (2f64).powi(self.params.ell0 as i32) {
                        acc += t.amplitude * self.wavelet.psi_centered_at(arg);
                    }
                }
            }
        }
        acc
    }

    /// Checks that nonzero samples of distinct bundles never overlap on the
    /// given grid.
    pub fn supports_disjoint(&self) -> bool {
        let mut intervals: Vec<(f64, f64)> = self
            .bundles
            .keys()
            .map(|&j| {
                let r = (2f64).powi((self.params.ell0 as i64 - j - 2) as i32);
                let x_j = self.position(j);
                (x_j - r, x_j + r)
            })
            .collect();
        intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        intervals.windows(2).all(|w| w[0].1 <= w[1].0)
    }

    /// Exact sup-magnitude pyramid: each bump is a basis function, so `s_l`
    /// is the largest amplitude among terms at scale `l` (scales without
    /// terms are zero). Scales run from the smallest term scale to `j_cap`.
    pub fn pyramid(&self, j_cap: i32) -> Result<CoeffPyramid> {
        let mut by_scale: BTreeMap<i64, f64> = BTreeMap::new();
        for terms in self.bundles.values() {
            for t in terms {
                if t.ell <= j_cap as i64 {
                    let e = by_scale.entry(t.ell).or_insert(0.0);
                    *e = e.max(t.amplitude);
                }
            }
        }
        let j_lo = *by_scale
            .keys()
            .next()
            .ok_or_else(|| HolderError::Domain("construction has no terms".into()))?
            as i32;
        let scales = (j_lo..=j_cap)
            .map(|j| {
                let s = by_scale.get(&(j as i64)).copied().unwrap_or(0.0);
                ScaleCoeffs::new(j, vec![s])
            })
            .collect();
        CoeffPyramid::new(scales)
    }

    /// Render on `[0, 2)` (clamped extension; the construction is supported
    /// inside the window).
    pub fn render(&self, n_samples: usize) -> Result<SampledSignal> {
        let dx = 2.0 / n_samples as f64;
        SampledSignal::from_fn(|x| self.eval(x), n_samples, 0.0, dx, Extension::Clamp)
    }
}

/// Rendered construction with the default `daubechies(4)` and scale cap 220.
pub fn cex1_signal(params: Cex1Params, n_samples: usize) -> Result<SampledSignal> {
    Cex1Function::build(params, 4, 220)?.render(n_samples)
}
