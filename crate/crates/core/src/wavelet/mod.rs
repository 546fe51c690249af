//! Wavelet machinery: filter banks, cascade rendering, slow quadrature and the
//! Fourier-domain Meyer construction.
//!
//! Everything is one-dimensional. Coefficients follow the sup-amplitude
//! convention `c_{j,k} = 2^j \int f(x) psi(2^j x - k) dx`, which keeps a
//! power-law amplitude envelope flat in `j` and is the right normalization for
//! regularity analysis; conversions from the orthonormal filter bank multiply
//! by `2^{j/2}`.

pub mod cascade;
pub mod filters;
pub mod meyer;
pub mod quadrature;
pub mod transform;

use crate::error::{HolderError, Result};
use serde::{Deserialize, Serialize};

/// Wavelet family selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WaveletFamily {
    /// Compactly supported orthonormal wavelet with `n` vanishing moments.
    Daubechies(u32),
    /// Band-limited Meyer wavelet, handled in the Fourier domain.
    MeyerFourier,
}

/// A validated wavelet choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub family: WaveletFamily,
    /// Holder smoothness of psi; estimators require this to exceed the
    /// exponents being measured.
    pub regularity_gamma: f64,
    /// Low-pass filter taps (empty for Meyer).
    pub taps: Vec<f64>,
}

impl WaveletSpec {
    pub fn daubechies(n: u32) -> Result<Self> {
        let taps = filters::daubechies_taps(n)?;
        filters::check_orthonormal(&taps, 1e-12)?;
        Ok(WaveletSpec {
            family: WaveletFamily::Daubechies(n),
            regularity_gamma: filters::daubechies_regularity(n),
            taps,
        })
    }

    pub fn meyer() -> Self {
        // Schwartz-class wavelet; any finite gamma tag works, pick one well
        // above every exponent this crate estimates.
        WaveletSpec {
            family: WaveletFamily::MeyerFourier,
            regularity_gamma: 100.0,
            taps: Vec::new(),
        }
    }

    pub fn vanishing_moments(&self) -> Option<u32> {
        match self.family {
            WaveletFamily::Daubechies(n) => Some(n),
            WaveletFamily::MeyerFourier => None,
        }
    }

    /// Parse `daubechies:N` / `dbN` / `meyer`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        if t == "meyer" {
            return Ok(WaveletSpec::meyer());
        }
        let n = if let Some(rest) = t.strip_prefix("daubechies:") {
            rest.parse::<u32>().ok()
        } else {
            t.strip_prefix("db")
                .and_then(|rest| rest.parse::<u32>().ok())
        };
        match n {
            Some(n) => WaveletSpec::daubechies(n),
            None => Err(HolderError::Parse(format!(
                "unknown wavelet '{text}' (expected daubechies:N, dbN or meyer)"
            ))),
        }
    }
}

/// Phase of a trigonometric term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Sin,
    Cos,
}

/// One term `amplitude * sin/cos(2^freq_exp * pi * x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigTerm {
    pub freq_exp: i32,
    pub amplitude: f64,
    pub phase: Phase,
}

/// A finite sum of dyadic-frequency sines and cosines, ordered by frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub terms: Vec<TrigTerm>,
}

impl TrigSeries {
    /// Terms must come in strictly increasing frequency with finite
    /// amplitudes.
    pub fn new(terms: Vec<TrigTerm>) -> Result<Self> {
        for w in terms.windows(2) {
            if w[1].freq_exp <= w[0].freq_exp {
                return Err(HolderError::Domain(format!(
                    "trig series frequencies must be strictly increasing ({} then {})",
                    w[0].freq_exp, w[1].freq_exp
                )));
            }
        }
        if let Some(t) = terms.iter().find(|t| !t.amplitude.is_finite()) {
            return Err(HolderError::Domain(format!(
                "non-finite amplitude at frequency exponent {}",
                t.freq_exp
            )));
        }
        Ok(TrigSeries { terms })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let arg = (2f64).powi(t.freq_exp) * std::f64::consts::PI * x;
                t.amplitude
                    * match t.phase {
                        Phase::Sin => arg.sin(),
                        Phase::Cos => arg.cos(),
                    }
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}
