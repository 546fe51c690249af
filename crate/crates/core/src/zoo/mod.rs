//! Built-in test signals: monofractal references and the lacunary
//! constructions whose lower-bound inequalities are the verifiable content of
//! the estimators' edge cases.

pub mod cex1;
pub mod fabe;

use crate::error::{HolderError, Result};
use crate::pyramid::{CoeffPyramid, ScaleCoeffs};
use crate::signal::{Extension, SampledSignal};
use serde::{Deserialize, Serialize};

/// Weierstrass-type sum `sum_n a^n cos(b^n pi x)` rendered on `[0, 1)` with
/// clamp extension: the modulus oracle never extrapolates, and the filter
/// bank periodizes internally with the wrap seam flagged. Keeping the window
/// at one unit spends the whole sample budget on resolvable octaves.
///
/// `n_terms = None` truncates once `a^n < 1e-12`.
pub fn weierstrass(
    a: f64,
    b: u32,
    n_terms: Option<u32>,
    n_samples: usize,
) -> Result<SampledSignal> {
    if !(0.0 < a && a < 1.0) {
        return Err(HolderError::Domain(format!(
            "amplitude ratio must be in (0,1), got {a}"
        )));
    }
    if b < 2 {
        return Err(HolderError::Domain(format!(
            "frequency base must be >= 2, got {b}"
        )));
    }
    let terms = n_terms.unwrap_or_else(|| {
        let mut n = 1u32;
        while a.powi(n as i32) >= 1e-12 && n < 64 {
            n += 1;
        }
        n
    });
    let dx = 1.0 / n_samples as f64;
    let b_f = b as f64;
    // b^n pi overflows f64 well past any resolvable frequency; cap the
    // term count at what the grid can represent plus a margin.
    let max_terms = ((f64::MAX.log2() / b_f.log2()) as u32)
        .saturating_sub(8)
        .min(1000);
    let terms = terms.min(max_terms);
    SampledSignal::from_fn(
        |x| {
            (0..terms)
                .map(|n| a.powi(n as i32) * (b_f.powi(n as i32) * std::f64::consts::PI * x).cos())
                .sum()
        },
        n_samples,
        0.0,
        dx,
        Extension::Clamp,
    )
}

/// Common index predicted for the Weierstrass sum: `-log a / log b`.
pub fn weierstrass_predicted_index(a: f64, b: u32) -> f64 {
    -a.ln() / (b as f64).ln()
}

/// Parameter warnings surfaced by generators (non-fatal).
pub fn weierstrass_warnings(a: f64, b: u32) -> Vec<String> {
    let mut w = Vec::new();
    if a * b as f64 <= 1.0 {
        w.push(format!(
            "a*b = {} <= 1: the sum is differentiable and both indices sit at or above 1",
            a * b as f64
        ));
    }
    w
}

/// Which scales of a synthetic pyramid carry coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockPattern {
    /// Every scale alive: an exact power law.
    AllAlive,
    /// Alive on even scales, dead on odd ones.
    Alternating,
    /// Alive only at `j = 2^n`: geometrically widening dead gaps.
    PowersOfTwo,
    /// Explicit alive mask starting at the pyramid's first scale.
    Custom(Vec<bool>),
}

impl BlockPattern {
    fn alive(&self, j: i32, j_min: i32) -> bool {
        match self {
            BlockPattern::AllAlive => true,
            BlockPattern::Alternating => j % 2 == 0,
            BlockPattern::PowersOfTwo => j > 0 && (j as u32).is_power_of_two(),
            BlockPattern::Custom(mask) => mask.get((j - j_min) as usize).copied().unwrap_or(false),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "all-alive" | "all" => Ok(BlockPattern::AllAlive),
            "alternating" => Ok(BlockPattern::Alternating),
            "powers-of-two" | "pow2" => Ok(BlockPattern::PowersOfTwo),
            _ => Err(HolderError::Parse(format!(
                "unknown block pattern '{text}' (all-alive | alternating | powers-of-two)"
            ))),
        }
    }
}

/// Synthetic lacunary pyramid: `s_j = 2^{-j alpha}` on alive scales, zero on
/// dead ones; one nonzero coefficient per alive scale. Deterministic.
pub fn gap_pyramid(
    envelope_alpha: f64,
    pattern: &BlockPattern,
    j_min: i32,
    j_max: i32,
) -> Result<CoeffPyramid> {
    if j_min > j_max || j_min < 0 {
        return Err(HolderError::Domain(format!(
            "bad scale range [{j_min}, {j_max}]"
        )));
    }
    if envelope_alpha <= 0.0 || envelope_alpha.is_nan() {
        return Err(HolderError::Domain(format!(
            "envelope exponent must be positive, got {envelope_alpha}"
        )));
    }
    let scales = (j_min..=j_max)
        .map(|j| {
            let v = if pattern.alive(j, j_min) {
                (2f64).powf(-envelope_alpha * j as f64)
            } else {
                0.0
            };
            ScaleCoeffs::new(j, vec![v])
        })
        .collect();
    CoeffPyramid::new(scales)
}
