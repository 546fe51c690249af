//! Fourier-domain Meyer wavelet and closed-form coefficients of
//! dyadic-frequency trigonometric series.
//!
//! The Fourier transform convention is `psi_hat(xi) = int psi(x) e^{-i x xi} dx`,
//! giving `psi_hat(xi) = e^{i xi / 2} b(|xi|)` with `b` supported on
//! `[2pi/3, 8pi/3]` and built from the degree-7 polynomial ramp
//! `nu(x) = x^4 (35 - 84x + 70x^2 - 20x^3)`.

use crate::pyramid::{CoeffPyramid, ScaleCoeffs};
use crate::wavelet::{Phase, TrigSeries};
use num_complex::Complex64;
use std::f64::consts::PI;

/// C^3 auxiliary ramp: 0 below 0, 1 above 1, `nu(x) + nu(1 - x) = 1`.
pub fn meyer_nu(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x)
    }
}

/// Modulus `b(|xi|) = |psi_hat(xi)|`.
pub fn meyer_psi_hat_abs(xi: f64) -> f64 {
    let a = xi.abs();
    let third = 2.0 * PI / 3.0;
    if a <= third || a >= 4.0 * third {
        0.0
    } else if a <= 2.0 * third {
        (PI / 2.0 * meyer_nu(3.0 * a / (2.0 * PI) - 1.0)).sin()
    } else {
        (PI / 2.0 * meyer_nu(3.0 * a / (4.0 * PI) - 1.0)).cos()
    }
}

/// Meyer wavelet Fourier transform; 0 outside
/// `[-8pi/3, -2pi/3] U [2pi/3, 8pi/3]`.
pub fn meyer_psi_hat(xi: f64) -> Complex64 {
    let b = meyer_psi_hat_abs(xi);
    if b == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(b, xi / 2.0)
}

/// Real-space Meyer wavelet by Fourier synthesis:
/// `psi(x) = (1/pi) int_{2pi/3}^{8pi/3} b(xi) cos((x + 1/2) xi) dxi`,
/// sampled on `[-half_width, half_width + 1]` with spacing
/// `2^-resolution_log2`. Returns `(values, x_start, dx)`.
pub fn render_meyer_psi(half_width: u32, resolution_log2: u32) -> (Vec<f64>, f64, f64) {
    let dx = (2f64).powi(-(resolution_log2 as i32));
    let x_start = -(half_width as f64);
    let x_end = half_width as f64 + 1.0;
    let n = ((x_end - x_start) / dx).round() as usize + 1;

    // Simpson quadrature over the support of b.
    let xi_lo = 2.0 * PI / 3.0;
    let xi_hi = 8.0 * PI / 3.0;
    let m = 4096; // even
    let dxi = (xi_hi - xi_lo) / m as f64;
    let nodes: Vec<(f64, f64)> = (0..=m)
        .map(|i| {
            let xi = xi_lo + i as f64 * dxi;
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (xi, w * meyer_psi_hat_abs(xi))
        })
        .collect();

    let values = (0..n)
        .map(|i| {
            let x = x_start + i as f64 * dx;
            let s: f64 = nodes
                .iter()
                .map(|&(xi, wb)| wb * ((x + 0.5) * xi).cos())
                .sum();
            s * dxi / 3.0 / PI
        })
        .collect();
    (values, x_start, dx)
}

/// Closed-form Meyer coefficient `c_{l,k}` of a dyadic trigonometric series,
/// via `psi_hat` evaluations at `2^{j-l} pi`. Only terms with `j - l` in
/// `{0, 1}` can contribute, so the sum has at most two live terms per scale.
pub fn trig_series_coeffs_meyer(series: &TrigSeries, ell: i32, k: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for term in &series.terms {
        let d = term.freq_exp - ell;
        // b vanishes unless 2^d fits in [2/3, 8/3]
        if !(0..=1).contains(&d) {
            continue;
        }
        let theta = (2f64).powi(d) * PI;
        let hat = meyer_psi_hat(theta);
        let rot = Complex64::from_polar(1.0, theta * k as f64);
        let plus = rot * hat.conj();
        let minus = rot.conj() * hat;
        let contrib = match term.phase {
            // sin: (e^{i theta k} conj(psi_hat) - e^{-i theta k} psi_hat) / 2i
            Phase::Sin => (plus - minus) / Complex64::new(0.0, 2.0),
            // cos: (e^{i theta k} conj(psi_hat) + e^{-i theta k} psi_hat) / 2
            Phase::Cos => (plus + minus) / 2.0,
        };
        acc += term.amplitude * contrib;
    }
    acc
}

/// Exact sup-magnitude pyramid of a dyadic trigonometric series under the
/// Meyer basis. `|c_{l,k}|` is k-independent (the only live evaluation points
/// are `pi` and `2pi`), so a handful of translates represents each scale.
pub fn trig_series_meyer_pyramid(series: &TrigSeries, j_min: i32, j_max: i32) -> CoeffPyramid {
    let scales = (j_min..=j_max)
        .map(|j| {
            let coeffs: Vec<f64> = (0..4)
                .map(|k| {
                    let c = trig_series_coeffs_meyer(series, j, k);
                    debug_assert!(c.im.abs() < 1e-12 * c.re.abs().max(1.0));
                    c.re
                })
                .collect();
            ScaleCoeffs::new(j, coeffs)
        })
        .collect();
    CoeffPyramid::new(scales).expect("contiguous by construction")
}
