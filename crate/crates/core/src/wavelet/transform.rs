//! Periodized orthonormal filter-bank transform.
//!
//! The analysis runs on `a_J = samples * 2^{-J/2}` so that the internal arrays
//! are orthonormal-basis coefficients; detail output at scale `j` is rescaled
//! by `2^{j/2}` into the sup-amplitude convention. Scales are relative to the
//! sampled window, i.e. scale `j` corresponds to `2^j` translates across the
//! window.
//!
//! Coefficients whose dependency interval wraps around the periodic seam are
//! flagged per scale and excluded from `s_j` by default; a signal that is
//! genuinely periodic on its window has no seam artifacts, flagged or not.

use crate::error::{HolderError, Result};
use crate::pyramid::{CoeffPyramid, ScaleCoeffs};
use crate::signal::SampledSignal;
use crate::wavelet::filters::highpass_taps;
use crate::wavelet::{WaveletFamily, WaveletSpec};

/// Full output of the analysis filter bank: the detail pyramid plus the
/// coarse approximation needed for reconstruction.
#[derive(Debug, Clone)]
pub struct DwtDecomposition {
    pub pyramid: CoeffPyramid,
    /// Orthonormal approximation coefficients at the coarsest level
    /// (`2^j_min` values).
    pub approx: Vec<f64>,
    /// `log2` of the signal length.
    pub j_signal: i32,
    taps: Vec<f64>,
}

fn log2_exact(n: usize) -> Option<u32> {
    if n.is_power_of_two() {
        Some(n.trailing_zeros())
    } else {
        None
    }
}

/// One analysis step: returns `(approx, detail)` at half length, periodized.
fn analysis_step(a: &[f64], h: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let half = n / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut sa = 0.0;
        let mut sd = 0.0;
        for (m, (&hm, &gm)) in h.iter().zip(g).enumerate() {
            let v = a[(2 * k + m) % n];
            sa += hm * v;
            sd += gm * v;
        }
        approx[k] = sa;
        detail[k] = sd;
    }
    (approx, detail)
}

/// Width, in original samples, of the dependency interval of a depth-`d`
/// coefficient: `(L-1)(2^d - 2) + L`.
fn dependency_width(filter_len: usize, depth: u32) -> u128 {
    let l = filter_len as u128;
    (l - 1) * ((1u128 << depth) - 2) + l
}

/// Seam mask at depth `d`: coefficient `k` is flagged when its dependency
/// interval `[2^d k, 2^d k + W_d)` wraps past the signal end.
fn seam_mask(n: usize, filter_len: usize, depth: u32, len_at_depth: usize) -> Vec<bool> {
    let w = dependency_width(filter_len, depth);
    let stride = 1u128 << depth;
    (0..len_at_depth)
        .map(|k| stride * k as u128 + w > n as u128)
        .collect()
}

/// Orthonormal filter-bank detail coefficients over scales `[j_min, j_max]`,
/// rescaled to the sup-amplitude normalization.
pub fn dwt_pyramid(
    signal: &SampledSignal,
    spec: &WaveletSpec,
    j_min: i32,
    j_max: i32,
    include_seam: bool,
) -> Result<DwtDecomposition> {
    let n = signal.len();
    let j_sig = log2_exact(n).ok_or_else(|| {
        HolderError::Domain(format!("filter bank needs a power-of-two length, got {n}"))
    })? as i32;
    match spec.family {
        WaveletFamily::Daubechies(_) => {}
        WaveletFamily::MeyerFourier => return Err(HolderError::Domain(
            "the filter bank path needs a compactly supported wavelet; use quadrature for Meyer"
                .into(),
        )),
    }
    if j_min > j_max {
        return Err(HolderError::Domain(format!(
            "empty scale range [{j_min}, {j_max}]"
        )));
    }
    // j_max <= J - 1 bounds the span: a range of K octaves needs at least
    // 2^(K+1) samples, with the full-depth decomposition (j_min = 0) allowed.
    if j_min < 0 || j_max > j_sig - 1 {
        return Err(HolderError::Domain(format!(
            "scale range [{j_min}, {j_max}] exceeds the available octaves [0, {}]",
            j_sig - 1
        )));
    }

    let h = &spec.taps;
    let g = highpass_taps(h);
    let scale_in = (2f64).powf(-(j_sig as f64) / 2.0);
    let mut a: Vec<f64> = signal.values.iter().map(|v| v * scale_in).collect();

    let mut scales: Vec<ScaleCoeffs> = Vec::new();
    let depth_max = (j_sig - j_min) as u32;
    for depth in 1..=depth_max {
        let (approx, detail) = analysis_step(&a, h, &g);
        a = approx;
        let j = j_sig - depth as i32;
        if j > j_max {
            continue;
        }
        let conv = (2f64).powf(j as f64 / 2.0);
        let coeffs: Vec<f64> = detail.iter().map(|d| d * conv).collect();
        let seam = seam_mask(n, h.len(), depth, coeffs.len());
        scales.push(ScaleCoeffs::with_seam(j, coeffs, seam, include_seam));
    }
    scales.reverse();
    Ok(DwtDecomposition {
        pyramid: CoeffPyramid::new(scales)?,
        approx: a,
        j_signal: j_sig,
        taps: h.clone(),
    })
}

/// Invert a full decomposition (`j_max = j_signal - 1`) back to samples.
pub fn reconstruct(dec: &DwtDecomposition) -> Result<Vec<f64>> {
    let j_sig = dec.j_signal;
    if dec.pyramid.j_max != j_sig - 1 {
        return Err(HolderError::Domain(
            "reconstruction needs every scale up to j_signal - 1".into(),
        ));
    }
    let h = &dec.taps;
    let g = highpass_taps(h);
    let mut a = dec.approx.clone();
    for scale in &dec.pyramid.scales {
        let conv = (2f64).powf(scale.j as f64 / 2.0);
        let detail: Vec<f64> = scale.coeffs.iter().map(|c| c / conv).collect();
        if detail.len() != a.len() {
            return Err(HolderError::Domain(format!(
                "scale {} holds {} coefficients, expected {}",
                scale.j,
                detail.len(),
                a.len()
            )));
        }
        let n_next = 2 * a.len();
        let mut next = vec![0.0; n_next];
        for k in 0..a.len() {
            for (m, (&hm, &gm)) in h.iter().zip(&g).enumerate() {
                let idx = (2 * k + m) % n_next;
                next[idx] += hm * a[k] + gm * detail[k];
            }
        }
        a = next;
    }
    let scale_out = (2f64).powf(j_sig as f64 / 2.0);
    Ok(a.into_iter().map(|v| v * scale_out).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::Extension;
    use crate::wavelet::cascade::RenderedWavelet;

    fn spec() -> WaveletSpec {
        WaveletSpec::daubechies(4).unwrap()
    }

    fn unit_signal(f: impl Fn(f64) -> f64, n: usize) -> SampledSignal {
        SampledSignal::from_fn(f, n, 0.0, 1.0 / n as f64, Extension::Periodic).unwrap()
    }

    #[test]
    fn zero_signal_gives_zero_pyramid() {
        let s = unit_signal(|_| 0.0, 256);
        let dec = dwt_pyramid(&s, &spec(), 2, 7, false).unwrap();
        for sc in &dec.pyramid.scales {
            assert_eq!(sc.sup, 0.0);
            assert!(sc.coeffs.iter().all(|&c| c == 0.0));
        }
    }

    #[test]
    fn non_power_of_two_is_rejected() {
        let s = SampledSignal::from_fn(|x| x, 100, 0.0, 0.01, Extension::Periodic).unwrap();
        assert!(dwt_pyramid(&s, &spec(), 1, 4, false).is_err());
    }

    #[test]
    fn octave_range_is_validated() {
        let s = unit_signal(|x| x, 64);
        assert!(dwt_pyramid(&s, &spec(), 0, 6, false).is_err());
        assert!(dwt_pyramid(&s, &spec(), -1, 4, false).is_err());
        assert!(dwt_pyramid(&s, &spec(), 4, 2, false).is_err());
    }

    #[test]
    fn perfect_reconstruction() {
        let n = 512;
        let s = unit_signal(|x| (7.0 * x).sin() + 0.4 * (41.0 * x * x).cos() + x, n);
        for moments in [2, 4, 8] {
            let spec = WaveletSpec::daubechies(moments).unwrap();
            let dec = dwt_pyramid(&s, &spec, 0, 8, true).unwrap();
            let rec = reconstruct(&dec).unwrap();
            let scale = s.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            for (u, v) in s.values.iter().zip(&rec) {
                assert!((u - v).abs() <= 1e-10 * scale, "db{moments}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn reconstruction_needs_the_full_scale_range() {
        let s = unit_signal(|x| (9.0 * x).sin(), 256);
        let dec = dwt_pyramid(&s, &spec(), 2, 5, true).unwrap();
        assert!(reconstruct(&dec).is_err());
    }

    #[test]
    fn rendered_wavelet_dominates_its_own_scale() {
        // f(x) = psi(2^j0 x - k0) on the unit window: s_{j0} should dwarf
        // every other scale.
        let n = 1usize << 12;
        let w = RenderedWavelet::render(&spec(), 12).unwrap();
        let j0 = 5;
        let k0 = 7.0;
        let s = unit_signal(|x| w.psi_at((2f64).powi(j0) * x - k0), n);
        let dec = dwt_pyramid(&s, &spec(), 2, 9, false).unwrap();
        let s_j0 = dec.pyramid.sup_at(j0).unwrap();
        for (j, sup) in dec.pyramid.sup_magnitudes() {
            if j != j0 {
                assert!(
                    s_j0 >= 10.0 * sup,
                    "scale {j}: sup {sup} too close to s_j0 {s_j0}"
                );
            }
        }
        // In the sup-amplitude convention the matching coefficient is ~1.
        assert!((s_j0 - 1.0).abs() < 0.05, "s_j0 = {s_j0}");
    }

    #[test]
    fn linear_signal_vanishes_away_from_seam() {
        // f(x) = x is not periodic; interior coefficients still vanish for
        // N >= 2 vanishing moments while the seam carries the jump.
        let n = 1024;
        let s = unit_signal(|x| x, n);
        let dec = dwt_pyramid(&s, &spec(), 3, 9, true).unwrap();
        for sc in &dec.pyramid.scales {
            let seam = sc.seam.as_ref().unwrap();
            let mut seam_max = 0.0f64;
            for (c, &flagged) in sc.coeffs.iter().zip(seam) {
                if flagged {
                    seam_max = seam_max.max(c.abs());
                } else {
                    assert!(
                        c.abs() <= 1e-8,
                        "interior coefficient {c} at scale {}",
                        sc.j
                    );
                }
            }
            assert!(
                seam_max > 1e-4,
                "seam should carry the wrap jump at scale {}",
                sc.j
            );
        }
    }

    #[test]
    fn seam_exclusion_changes_sup_for_nonperiodic_input() {
        let n = 1024;
        let s = unit_signal(|x| x, n);
        let with = dwt_pyramid(&s, &spec(), 4, 8, true).unwrap();
        let without = dwt_pyramid(&s, &spec(), 4, 8, false).unwrap();
        for (a, b) in with.pyramid.scales.iter().zip(&without.pyramid.scales) {
            assert!(a.sup > 1e3 * b.sup.max(1e-300), "scale {}", a.j);
        }
    }
}
