//! Estimation of the lower and upper global Holder indices of sampled 1-D
//! signals.
//!
//! Two routes are implemented side by side:
//!
//! * a brute-force oracle that evaluates the M-modulus of smoothness
//!   (sup of order-M finite differences over positions and shifts) at dyadic
//!   radii and reads both indices from its log-log decay
//!   ([`smoothness`]);
//! * wavelet estimators working on per-scale sup magnitudes
//!   `s_j = ||c_{j,.}||_inf` in the sup-amplitude normalization: coefficient
//!   decay for the lower index, and a gap-filling criterion
//!   `max(sup_{l>=j} s_l, 2^{-jM} sup_{l<=j} 2^{lM} s_l)` for the upper
//!   index, which stays meaningful on lacunary pyramids whose raw
//!   coefficients vanish on whole scale blocks ([`estimators`]).
//!
//! The supporting cast: orthogonal filter banks, cascade rendering, a slow
//! quadrature oracle and the Fourier-domain Meyer wavelet ([`wavelet`]);
//! modulus-of-continuity envelopes over scale sequences and the weak-Holder
//! witness search ([`theta`], [`witness`]); generators for monofractal and
//! lacunary test signals with closed-form expectations ([`zoo`]); analysis
//! reports, file formats and named verification suites ([`report`], [`io`],
//! [`verify`]).

pub mod error;
pub mod estimate;
pub mod estimators;
pub mod io;
pub mod pyramid;
pub mod report;
pub mod signal;
pub mod smoothness;
pub mod theta;
pub mod verify;
pub mod wavelet;
pub mod witness;
pub mod zoo;

pub use error::{HolderError, Result};
pub use estimate::{EstimateMethod, FitWindow, IndexEstimate};
pub use pyramid::{CoeffPyramid, Normalization, ScaleCoeffs};
pub use signal::{Extension, SampledSignal};
