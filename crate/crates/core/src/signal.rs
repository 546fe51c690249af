//! Uniformly sampled signals and their boundary rules.

use crate::error::{HolderError, Result};
use serde::{Deserialize, Serialize};

/// Boundary rule used when a difference stencil leaves the sampled window.
///
/// `Periodic` wraps indices modulo the signal length, so every grid point is a
/// valid base point. `Clamp` restricts evaluation to base points whose whole
/// stencil lies inside the window; nothing is extrapolated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    Periodic,
    Clamp,
}

/// Uniform samples of a bounded function on an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSignal {
    pub values: Vec<f64>,
    /// Domain origin.
    pub x0: f64,
    /// Grid step, strictly positive.
    pub dx: f64,
    pub extension: Extension,
}

impl SampledSignal {
    /// Build a signal, validating the basic invariants: at least two finite
    /// samples and a positive grid step.
    pub fn new(values: Vec<f64>, x0: f64, dx: f64, extension: Extension) -> Result<Self> {
        if values.len() < 2 {
            return Err(HolderError::Domain(format!(
                "signal needs at least 2 samples, got {}",
                values.len()
            )));
        }
        if dx.is_nan() || dx <= 0.0 || !dx.is_finite() {
            return Err(HolderError::Domain(format!(
                "grid step must be > 0, got {dx}"
            )));
        }
        if !x0.is_finite() {
            return Err(HolderError::Domain(format!(
                "origin must be finite, got {x0}"
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(HolderError::Domain(format!(
                "sample {bad} is not finite ({})",
                values[bad]
            )));
        }
        Ok(SampledSignal {
            values,
            x0,
            dx,
            extension,
        })
    }

    /// Convenience constructor sampling `f` on `n` points starting at `x0`.
    pub fn from_fn(
        f: impl Fn(f64) -> f64,
        n: usize,
        x0: f64,
        dx: f64,
        extension: Extension,
    ) -> Result<Self> {
        let values = (0..n).map(|i| f(x0 + i as f64 * dx)).collect();
        SampledSignal::new(values, x0, dx, extension)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Length of the sampled window in physical units.
    pub fn window_length(&self) -> f64 {
        self.len() as f64 * self.dx
    }

    /// Grid coordinate of sample `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    /// Sample lookup with periodic index wrapping.
    pub fn value_wrapped(&self, i: isize) -> f64 {
        let n = self.values.len() as isize;
        self.values[i.rem_euclid(n) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_and_degenerate_signals() {
        assert!(SampledSignal::new(vec![1.0], 0.0, 0.1, Extension::Periodic).is_err());
        assert!(SampledSignal::new(vec![1.0, 2.0], 0.0, 0.0, Extension::Periodic).is_err());
        assert!(SampledSignal::new(vec![1.0, f64::NAN], 0.0, 0.1, Extension::Periodic).is_err());
        assert!(SampledSignal::new(vec![1.0, f64::INFINITY], 0.0, 0.1, Extension::Clamp).is_err());
    }

    #[test]
    fn wrapped_lookup() {
        let s = SampledSignal::new(vec![1.0, 2.0, 3.0], 0.0, 1.0, Extension::Periodic).unwrap();
        assert_eq!(s.value_wrapped(-1), 3.0);
        assert_eq!(s.value_wrapped(3), 1.0);
        assert_eq!(s.value_wrapped(4), 2.0);
    }
}
