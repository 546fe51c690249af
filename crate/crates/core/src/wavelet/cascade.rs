//! Cascade rendering of compactly supported scaling functions and wavelets.
//!
//! Values are exact at dyadic points: the scaling function is first solved at
//! the integers (eigenvector of the refinement matrix), then the two-scale
//! relation fills in each finer dyadic level. No iteration-to-convergence is
//! involved past the integer solve.

use crate::error::{HolderError, Result};
use crate::wavelet::filters::highpass_taps;
use crate::wavelet::{WaveletFamily, WaveletSpec};

/// A wavelet pair sampled on a dyadic grid over its support `[0, L-1]`.
#[derive(Debug, Clone)]
pub struct RenderedWavelet {
    /// Grid spacing is `2^-resolution_log2`.
    pub resolution_log2: u32,
    /// Filter length; support of both phi and psi is `[0, len-1]`.
    pub filter_len: usize,
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    /// Integer shift `c` such that `psi(x + c)` straddles the origin with
    /// `|psi(c)| > 1e-6`.
    pub center: i64,
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Scaling-function values at integer points `0..L-1` via power iteration on
/// the refinement matrix, normalized to sum to one.
fn phi_at_integers(taps: &[f64]) -> Result<Vec<f64>> {
    let l = taps.len();
    if l < 4 {
        return Err(HolderError::Domain(
            "cascade rendering needs at least 2 vanishing moments".into(),
        ));
    }
    let dim = l - 2; // interior integers 1..=l-2; phi vanishes at 0 and l-1
    let mut v = vec![1.0 / dim as f64; dim];
    let mut next = vec![0.0; dim];
    for _ in 0..200 {
        for (r, slot) in next.iter_mut().enumerate() {
            let k = r as isize + 1;
            let mut acc = 0.0;
            for (c, &val) in v.iter().enumerate() {
                let kp = c as isize + 1;
                let m = 2 * k - kp;
                if m >= 0 && (m as usize) < l {
                    acc += SQRT2 * taps[m as usize] * val;
                }
            }
            *slot = acc;
        }
        let sum: f64 = next.iter().sum();
        if sum.abs() < 1e-300 {
            return Err(HolderError::Domain("refinement iteration collapsed".into()));
        }
        for x in &mut next {
            *x /= sum;
        }
        std::mem::swap(&mut v, &mut next);
    }
    let mut phi = vec![0.0; l];
    phi[1..l - 1].copy_from_slice(&v);
    Ok(phi)
}

fn refine_phi(taps: &[f64], res: u32) -> Result<Vec<f64>> {
    let l = taps.len();
    let mut phi = phi_at_integers(taps)?;
    for lev in 1..=res {
        let prev_len = (l - 1) * (1usize << (lev - 1)) + 1;
        debug_assert_eq!(phi.len(), prev_len);
        let new_len = (l - 1) * (1usize << lev) + 1;
        let mut fine = vec![0.0; new_len];
        for (i, slot) in fine.iter_mut().enumerate() {
            if i % 2 == 0 {
                *slot = phi[i / 2];
            } else {
                // x = i * 2^-lev; 2x - m sits at index i - m * 2^(lev-1) on
                // the previous grid.
                let mut acc = 0.0;
                for (m, &h) in taps.iter().enumerate() {
                    let idx = i as isize - (m as isize) * (1isize << (lev - 1));
                    if idx >= 0 && (idx as usize) < prev_len {
                        acc += SQRT2 * h * phi[idx as usize];
                    }
                }
                *slot = acc;
            }
        }
        phi = fine;
    }
    Ok(phi)
}

fn synthesize_psi(taps: &[f64], phi: &[f64], res: u32) -> Vec<f64> {
    let l = taps.len();
    let g = highpass_taps(taps);
    let n = (l - 1) * (1usize << res) + 1;
    let mut psi = vec![0.0; n];
    for (i, slot) in psi.iter_mut().enumerate() {
        // x = i * 2^-res; 2x - m sits at index 2i - m * 2^res on the phi grid.
        let mut acc = 0.0;
        for (m, &gm) in g.iter().enumerate() {
            let idx = 2 * i as isize - (m as isize) * (1isize << res);
            if idx >= 0 && (idx as usize) < phi.len() {
                acc += SQRT2 * gm * phi[idx as usize];
            }
        }
        *slot = acc;
    }
    psi
}

fn pick_center(psi: &[f64], res: u32, l: usize) -> Result<i64> {
    let mid = (l - 1) / 2;
    let candidates = [mid, mid + 1, mid.saturating_sub(1), mid + 2];
    for &c in &candidates {
        if c > 0 && c < l - 1 {
            let v = psi[c << res];
            if v.abs() > 1e-6 {
                return Ok(c as i64);
            }
        }
    }
    Err(HolderError::Domain(
        "wavelet is numerically zero at every candidate center".into(),
    ))
}

impl RenderedWavelet {
    /// Render `phi` and `psi` for a Daubechies spec on a grid of spacing
    /// `2^-resolution_log2`.
    pub fn render(spec: &WaveletSpec, resolution_log2: u32) -> Result<Self> {
        match spec.family {
            WaveletFamily::Daubechies(_) => {}
            WaveletFamily::MeyerFourier => {
                return Err(HolderError::Domain(
                    "cascade rendering applies to compactly supported wavelets; use the Fourier synthesis for Meyer".into(),
                ))
            }
        }
        let taps = &spec.taps;
        let phi = refine_phi(taps, resolution_log2)?;
        let psi = synthesize_psi(taps, &phi, resolution_log2);
        let center = pick_center(&psi, resolution_log2, taps.len())?;
        Ok(RenderedWavelet {
            resolution_log2,
            filter_len: taps.len(),
            phi,
            psi,
            center,
        })
    }

    /// Grid spacing.
    pub fn dx(&self) -> f64 {
        (2f64).powi(-(self.resolution_log2 as i32))
    }

    fn interp(samples: &[f64], pos: f64) -> f64 {
        if pos <= 0.0 || pos >= (samples.len() - 1) as f64 {
            return 0.0;
        }
        let i = pos.floor() as usize;
        let t = pos - i as f64;
        samples[i] * (1.0 - t) + samples[i + 1] * t
    }

    /// `psi(x)` on the raw support `[0, L-1]`, linearly interpolated.
    pub fn psi_at(&self, x: f64) -> f64 {
        Self::interp(&self.psi, x * (1u64 << self.resolution_log2) as f64)
    }

    /// `phi(x)` on `[0, L-1]`.
    pub fn phi_at(&self, x: f64) -> f64 {
        Self::interp(&self.phi, x * (1u64 << self.resolution_log2) as f64)
    }

    /// Centered wavelet `psi_c(x) = psi(x + center)`; support straddles 0 and
    /// `psi_c(0) != 0`.
    pub fn psi_centered_at(&self, x: f64) -> f64 {
        self.psi_at(x + self.center as f64)
    }

    /// Value of the centered wavelet at the origin (grid-exact).
    pub fn psi_at_zero_centered(&self) -> f64 {
        self.psi[(self.center as usize) << self.resolution_log2]
    }

    /// Support of the centered wavelet.
    pub fn centered_support(&self) -> (f64, f64) {
        (
            -(self.center as f64),
            (self.filter_len - 1) as f64 - self.center as f64,
        )
    }

    /// Smallest `l0` with `supp(psi_centered) in [-2^l0, 2^l0]`.
    pub fn support_exponent(&self) -> u32 {
        let (lo, hi) = self.centered_support();
        let half = lo.abs().max(hi.abs());
        half.log2().ceil().max(0.0) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::WaveletSpec;

    fn render(n: u32) -> RenderedWavelet {
        RenderedWavelet::render(&WaveletSpec::daubechies(n).unwrap(), 10).unwrap()
    }

    #[test]
    fn phi_integrates_to_one_and_psi_to_zero() {
        for n in [2, 4, 6] {
            let r = render(n);
            let dx = r.dx();
            let int_phi: f64 = r.phi.iter().sum::<f64>() * dx;
            let int_psi: f64 = r.psi.iter().sum::<f64>() * dx;
            assert!((int_phi - 1.0).abs() < 1e-8, "db{n} int phi = {int_phi}");
            assert!(int_psi.abs() < 1e-8, "db{n} int psi = {int_psi}");
        }
    }

    #[test]
    fn psi_has_unit_l2_norm() {
        for n in [2, 4, 8] {
            let r = render(n);
            let dx = r.dx();
            let norm: f64 = r.psi.iter().map(|v| v * v).sum::<f64>() * dx;
            assert!((norm - 1.0).abs() < 2e-3, "db{n} ||psi||^2 = {norm}");
        }
    }

    #[test]
    fn psi_first_moments_vanish() {
        // N vanishing moments: int x^q psi(x) dx = 0 for q < N.
        let r = render(4);
        let dx = r.dx();
        for q in 0..4 {
            let m: f64 = r
                .psi
                .iter()
                .enumerate()
                .map(|(i, v)| (i as f64 * dx).powi(q) * v)
                .sum::<f64>()
                * dx;
            assert!(m.abs() < 2e-4, "moment {q} = {m}");
        }
    }

    #[test]
    fn centered_wavelet_is_nonzero_at_origin() {
        for n in [2, 4, 6, 8] {
            let r = render(n);
            assert!(r.psi_at_zero_centered().abs() > 1e-6, "db{n}");
            let (lo, hi) = r.centered_support();
            assert!(lo < 0.0 && hi > 0.0);
            let bound = (2f64).powi(r.support_exponent() as i32);
            assert!(-lo <= bound && hi <= bound);
        }
    }

    #[test]
    fn interpolation_matches_grid_points() {
        let r = render(4);
        let dx = r.dx();
        for i in [1usize, 37, 512, 1000] {
            if i < r.psi.len() {
                assert_eq!(r.psi_at(i as f64 * dx), r.psi[i]);
            }
        }
        assert_eq!(r.psi_at(-0.5), 0.0);
        assert_eq!(r.psi_at(7.5), 0.0);
    }

    #[test]
    fn meyer_spec_is_rejected() {
        assert!(RenderedWavelet::render(&WaveletSpec::meyer(), 8).is_err());
    }
}
