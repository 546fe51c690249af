//! Per-scale wavelet coefficient pyramids in the sup-amplitude (L-infinity)
//! normalization `c_{j,k} = 2^j \int f(x) psi(2^j x - k) dx`.

use crate::error::{HolderError, Result};
use serde::{Deserialize, Serialize};

/// Normalization tag carried by every pyramid. Only the L-infinity convention
/// is produced; the tag exists so serialized pyramids are self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    Linf,
}

/// Coefficients of one scale. `sup` is `max_k |c_k|` over the positions that
/// count: transforms with a periodic seam may exclude wrap-affected positions
/// (marked in `seam`) from the sup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleCoeffs {
    pub j: i32,
    pub coeffs: Vec<f64>,
    pub sup: f64,
    /// Positions whose support wraps around the window seam; excluded from
    /// `sup` when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seam: Option<Vec<bool>>,
}

impl ScaleCoeffs {
    pub fn new(j: i32, coeffs: Vec<f64>) -> Self {
        let sup = coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
        ScaleCoeffs {
            j,
            coeffs,
            sup,
            seam: None,
        }
    }

    /// Sup over non-seam positions unless `include_seam`; a scale whose every
    /// position is seam-affected keeps the full sup (it is all boundary).
    pub fn with_seam(j: i32, coeffs: Vec<f64>, seam: Vec<bool>, include_seam: bool) -> Self {
        let exclude = !include_seam && seam.iter().any(|&s| !s);
        let sup = coeffs
            .iter()
            .zip(&seam)
            .filter(|(_, &s)| !exclude || !s)
            .fold(0.0f64, |a, (c, _)| a.max(c.abs()));
        ScaleCoeffs {
            j,
            coeffs,
            sup,
            seam: Some(seam),
        }
    }
}

/// Per-scale coefficient arrays plus the per-scale sup magnitudes
/// `s_j = ||c_{j,.}||_inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffPyramid {
    pub j_min: i32,
    pub j_max: i32,
    pub normalization: Normalization,
    pub scales: Vec<ScaleCoeffs>,
}

impl CoeffPyramid {
    /// Assemble from per-scale data; scales must be contiguous `j_min..=j_max`.
    pub fn new(scales: Vec<ScaleCoeffs>) -> Result<Self> {
        if scales.is_empty() {
            return Err(HolderError::Domain(
                "pyramid needs at least one scale".into(),
            ));
        }
        let j_min = scales.first().unwrap().j;
        let j_max = scales.last().unwrap().j;
        for (i, s) in scales.iter().enumerate() {
            if s.j != j_min + i as i32 {
                return Err(HolderError::Domain(format!(
                    "scales must be contiguous; expected j = {}, got {}",
                    j_min + i as i32,
                    s.j
                )));
            }
            // NaN would slip through max-folds unnoticed and break
            // serialization much later
            if let Some(bad) = s.coeffs.iter().position(|c| !c.is_finite()) {
                return Err(HolderError::Domain(format!(
                    "coefficient {bad} at scale {} is not finite",
                    s.j
                )));
            }
        }
        Ok(CoeffPyramid {
            j_min,
            j_max,
            normalization: Normalization::Linf,
            scales,
        })
    }

    /// Pyramid holding only sup magnitudes, one synthetic coefficient per
    /// scale. Used by generators that know `s_j` in closed form.
    pub fn from_sups(j_min: i32, sups: &[f64]) -> Result<Self> {
        let scales = sups
            .iter()
            .enumerate()
            .map(|(i, &s)| ScaleCoeffs::new(j_min + i as i32, vec![s]))
            .collect();
        CoeffPyramid::new(scales)
    }

    pub fn n_scales(&self) -> usize {
        self.scales.len()
    }

    /// `s_j` for a stored scale.
    pub fn sup_at(&self, j: i32) -> Option<f64> {
        if j < self.j_min || j > self.j_max {
            return None;
        }
        Some(self.scales[(j - self.j_min) as usize].sup)
    }

    /// `(j, s_j)` for all stored scales.
    pub fn sup_magnitudes(&self) -> Vec<(i32, f64)> {
        self.scales.iter().map(|s| (s.j, s.sup)).collect()
    }

    /// Checks `s_j >= 0` and, for scales without a seam mask, that the sup
    /// matches the stored coefficients.
    pub fn check_invariants(&self) -> Result<()> {
        for s in &self.scales {
            if s.sup.is_nan() || s.sup < 0.0 {
                return Err(HolderError::Domain(format!(
                    "sup at scale {} is {}",
                    s.j, s.sup
                )));
            }
            if s.seam.is_none() && !s.coeffs.is_empty() {
                let m = s.coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs()));
                if (m - s.sup).abs() > 1e-12 * m.max(1.0) {
                    return Err(HolderError::Domain(format!(
                        "sup at scale {} ({}) does not match coefficients ({m})",
                        s.j, s.sup
                    )));
                }
            }
        }
        Ok(())
    }

    /// Multiply every coefficient and sup by `lambda`.
    pub fn scaled(&self, lambda: f64) -> CoeffPyramid {
        let mut out = self.clone();
        for s in &mut out.scales {
            for c in &mut s.coeffs {
                *c *= lambda;
            }
            s.sup *= lambda.abs();
        }
        out
    }
}

/// Serialized form: `{j_min, j_max, normalization, scales: [{j, coeffs, sup}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct PyramidFile {
    j_min: i32,
    j_max: i32,
    normalization: Normalization,
    scales: Vec<PyramidFileScale>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PyramidFileScale {
    j: i32,
    coeffs: Vec<f64>,
    sup: f64,
}

/// Serialize to the documented JSON schema. Seam masks are not part of the
/// format; the stored sup already reflects any exclusion.
pub fn pyramid_to_json(p: &CoeffPyramid) -> String {
    let file = PyramidFile {
        j_min: p.j_min,
        j_max: p.j_max,
        normalization: p.normalization,
        scales: p
            .scales
            .iter()
            .map(|s| PyramidFileScale {
                j: s.j,
                coeffs: s.coeffs.clone(),
                sup: s.sup,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("pyramid serialization cannot fail")
}

pub fn pyramid_from_json(text: &str) -> Result<CoeffPyramid> {
    let file: PyramidFile =
        serde_json::from_str(text).map_err(|e| HolderError::Parse(format!("pyramid JSON: {e}")))?;
    let scales = file
        .scales
        .into_iter()
        .map(|s| ScaleCoeffs {
            j: s.j,
            coeffs: s.coeffs,
            sup: s.sup,
            seam: None,
        })
        .collect();
    let p = CoeffPyramid::new(scales)?;
    if p.j_min != file.j_min || p.j_max != file.j_max {
        return Err(HolderError::Parse(format!(
            "pyramid header [{}, {}] does not match scales [{}, {}]",
            file.j_min, file.j_max, p.j_min, p.j_max
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn contiguity_is_enforced() {
        let scales = vec![
            ScaleCoeffs::new(1, vec![1.0]),
            ScaleCoeffs::new(3, vec![0.5]),
        ];
        assert!(CoeffPyramid::new(scales).is_err());
    }

    #[test]
    fn non_finite_coefficients_are_rejected() {
        let scales = vec![ScaleCoeffs::new(0, vec![1.0, f64::NAN])];
        assert!(CoeffPyramid::new(scales).is_err());
        let scales = vec![ScaleCoeffs::new(0, vec![f64::INFINITY])];
        assert!(CoeffPyramid::new(scales).is_err());
    }

    #[test]
    fn sup_excludes_seam_positions() {
        let s = ScaleCoeffs::with_seam(2, vec![5.0, 0.25, 0.5], vec![true, false, false], false);
        assert_eq!(s.sup, 0.5);
        let s = ScaleCoeffs::with_seam(2, vec![5.0, 0.25, 0.5], vec![true, false, false], true);
        assert_eq!(s.sup, 5.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// JSON round trip preserves every coefficient bit-exactly.
        #[test]
        fn json_round_trip(j_min in -2i32..6, vals in proptest::collection::vec(
            proptest::collection::vec(-1e3f64..1e3, 1..6), 1..6)
        ) {
            let scales: Vec<ScaleCoeffs> = vals
                .iter()
                .enumerate()
                .map(|(i, v)| ScaleCoeffs::new(j_min + i as i32, v.clone()))
                .collect();
            let p = CoeffPyramid::new(scales).unwrap();
            let q = pyramid_from_json(&pyramid_to_json(&p)).unwrap();
            prop_assert_eq!(p, q);
        }
    }
}
