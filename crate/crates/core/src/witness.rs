//! Weak-Holder witness search over a stored pyramid, and the finite-scale
//! equivalence between witness failure and the criterion lower bound.
//!
//! A witness for `(alpha, M, C)` is a strictly increasing head sequence
//! `j_1 < j_2 < ...` starting at the first stored scale such that every scale
//! `j` in the block `[j_n, j_{n+1})` satisfies
//! `s_j <= C inf(2^{-j_n alpha}, 2^{(M-alpha) j_{n+1}} 2^{-jM})`,
//! with the block after the last head closed at the virtual scale
//! `j_max + 1` (the window cannot constrain heads beyond its end).
//!
//! On a finite window this notion collapses to a two-sided threshold: a
//! witness exists iff `C >= C_min`, where `C_min` is the larger of the two
//! criterion branches read at the window edges,
//!
//! ```text
//! C_min = max( 2^{j_min alpha} * sup_l s_l,
//!              2^{-(M-alpha)(j_max+1)} * sup_l 2^{lM} s_l ).
//! ```
//!
//! Both directions are elementary: any witness bounds every `s_j` through its
//! block head (whose loosest bound is the one at `j_min`) and every
//! `2^{jM} s_j` through its block end (loosest at `j_max + 1`); conversely
//! `C >= C_min` makes the single-block sequence valid. The decay content of
//! the infinite statement (heads recur forever) is not observable in a
//! window, so the search reports levels, not asymptotics. The greedy
//! construction below still plants every admissible intermediate head, which
//! keeps the returned sequence informative, and `verify_witness` re-checks the
//! defining inequality independently.

use crate::error::{HolderError, Result};
use crate::estimators::irregularity_criterion;
use crate::pyramid::CoeffPyramid;
use crate::theta::ScaleSequence;
use serde::{Deserialize, Serialize};

const REL_TOL: f64 = 1e-9;

/// `log2 C_min`: the least constant (in log2) admitting a witness.
/// `-inf` for an all-zero pyramid (every constant works).
pub fn witness_threshold_log2(pyramid: &CoeffPyramid, alpha: f64, m: u32) -> f64 {
    let m_f = m as f64;
    let j_min = pyramid.j_min as f64;
    let j_virt = (pyramid.j_max + 1) as f64;
    let mut tail_branch = f64::NEG_INFINITY;
    let mut head_branch = f64::NEG_INFINITY;
    for (j, s) in pyramid.sup_magnitudes() {
        if s > 0.0 {
            let lg = s.log2();
            tail_branch = tail_branch.max(lg + j_min * alpha);
            head_branch = head_branch.max(lg + (j as f64) * m_f - (m_f - alpha) * j_virt);
        }
    }
    tail_branch.max(head_branch)
}

fn validate(pyramid: &CoeffPyramid, alpha: f64, m: u32, c: f64) -> Result<()> {
    if m == 0 {
        return Err(HolderError::Domain("difference order must be >= 1".into()));
    }
    if alpha.is_nan() || alpha <= 0.0 || alpha >= m as f64 {
        return Err(HolderError::Domain(format!(
            "alpha must lie in (0, M), got alpha = {alpha}, M = {m}"
        )));
    }
    if c.is_nan() || c <= 0.0 {
        return Err(HolderError::Domain(format!(
            "constant must be > 0, got {c}"
        )));
    }
    if pyramid.j_min < 0 {
        return Err(HolderError::Domain(format!(
            "witness search needs nonnegative scales, pyramid starts at {}",
            pyramid.j_min
        )));
    }
    Ok(())
}

/// Greedy witness search. Returns the head sequence or `None` when no
/// sequence exists at this constant.
///
/// Heads are planted at every scale that can legally start a new block: the
/// remaining tail must fit under the head's envelope and the pending block
/// must satisfy its end constraint at the new head. Scales with `s_j = 0`
/// never become heads (they constrain nothing), which keeps the returned
/// sequence aligned with the envelope-carrying scales.
pub fn weak_holder_witness(
    pyramid: &CoeffPyramid,
    alpha: f64,
    m: u32,
    c: f64,
) -> Result<Option<ScaleSequence>> {
    validate(pyramid, alpha, m, c)?;
    let log_c = c.log2();
    let thr = witness_threshold_log2(pyramid, alpha, m);
    if log_c < thr - REL_TOL {
        return Ok(None);
    }

    let m_f = m as f64;
    let sups = pyramid.sup_magnitudes();
    let n = sups.len();
    // suffix_tail[i] = max over l >= i of log2 s_l
    let mut suffix_tail = vec![f64::NEG_INFINITY; n];
    let mut acc = f64::NEG_INFINITY;
    for i in (0..n).rev() {
        if sups[i].1 > 0.0 {
            acc = acc.max(sups[i].1.log2());
        }
        suffix_tail[i] = acc;
    }

    let mut heads = vec![pyramid.j_min];
    // max over the pending block of log2(2^{jM} s_j)
    let mut block_head_max = f64::NEG_INFINITY;
    for (i, &(j, s)) in sups.iter().enumerate() {
        let plantable = i > 0
            && s > 0.0
            && suffix_tail[i] <= log_c - alpha * j as f64 + REL_TOL
            && block_head_max <= log_c + (m_f - alpha) * j as f64 + REL_TOL;
        if plantable {
            heads.push(j);
            block_head_max = f64::NEG_INFINITY;
        }
        if s > 0.0 {
            block_head_max = block_head_max.max(s.log2() + m_f * j as f64);
        }
    }
    let seq = ScaleSequence::new(heads)?;
    debug_assert!(verify_witness(pyramid, alpha, m, c, &seq));
    Ok(Some(seq))
}

/// Independent check of the defining block inequality for a candidate head
/// sequence (first head at `j_min`, final block closed at `j_max + 1`).
pub fn verify_witness(
    pyramid: &CoeffPyramid,
    alpha: f64,
    m: u32,
    c: f64,
    seq: &ScaleSequence,
) -> bool {
    if seq.first() != pyramid.j_min {
        return false;
    }
    let m_f = m as f64;
    let log_c = c.log2();
    let heads = seq.as_slice();
    for (j, s) in pyramid.sup_magnitudes() {
        if s == 0.0 {
            continue;
        }
        let block = match heads.iter().rposition(|&h| h <= j) {
            Some(b) => b,
            None => return false,
        };
        let j_n = heads[block] as f64;
        let j_next = heads.get(block + 1).copied().unwrap_or(pyramid.j_max + 1) as f64;
        let bound = (log_c - j_n * alpha).min(log_c + (m_f - alpha) * j_next - m_f * j as f64);
        if s.log2() > bound + 2.0 * REL_TOL {
            return false;
        }
    }
    true
}

/// Outcome of the witness search at one constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessOutcome {
    pub c: f64,
    pub witness_found: bool,
    pub sequence_len: Option<usize>,
    /// Whether the search outcome matches the threshold prediction.
    pub agrees: bool,
}

/// Report of the finite-scale witness/criterion equivalence check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub alpha: f64,
    pub m: u32,
    /// `log2 C_min` from the criterion branches at the window edges;
    /// `None` for an all-zero pyramid (witness exists for every constant).
    pub threshold_log2: Option<f64>,
    /// Smallest grid constant admitting a witness.
    pub witnessing_c: Option<f64>,
    /// `min_j log2(criterion(j)) + j alpha`: the interior criterion fit,
    /// reported as a diagnostic alongside the edge threshold.
    pub interior_fit_log2: Option<f64>,
    pub outcomes: Vec<WitnessOutcome>,
    pub all_agree: bool,
}

/// Default constant grid `2^-10 .. 2^4`.
pub fn default_c_grid() -> Vec<f64> {
    (-10..=4).map(|e| (2f64).powi(e)).collect()
}

/// Runs the witness search across `c_grid` and checks each outcome against
/// the criterion-side threshold `C_min` (the two branch sups read at the
/// window edges). Every returned sequence is re-checked against the defining
/// block inequality by `verify_witness`, so a found witness is confirmed
/// through an independent route; disagreement on any constant is a bug in one
/// of the routes and the report records it.
pub fn criterion_equivalence_check(
    pyramid: &CoeffPyramid,
    alpha: f64,
    m: u32,
    c_grid: &[f64],
) -> Result<EquivalenceReport> {
    if c_grid.is_empty() {
        return Err(HolderError::Domain("constant grid cannot be empty".into()));
    }
    validate(pyramid, alpha, m, c_grid[0])?;
    let thr = witness_threshold_log2(pyramid, alpha, m);
    let trace = irregularity_criterion(pyramid, m);
    let interior = trace
        .rows
        .iter()
        .filter(|r| r.value > 0.0)
        .map(|r| r.value.log2() + alpha * r.j as f64)
        .fold(f64::INFINITY, f64::min);

    let mut outcomes = Vec::new();
    let mut witnessing_c = None;
    let mut all_agree = true;
    for &c in c_grid {
        let found = weak_holder_witness(pyramid, alpha, m, c)?;
        let predicted = c.log2() >= thr - REL_TOL;
        let confirmed = found
            .as_ref()
            .map(|seq| verify_witness(pyramid, alpha, m, c, seq))
            .unwrap_or(true);
        let agrees = found.is_some() == predicted && confirmed;
        if found.is_some() && witnessing_c.is_none() {
            witnessing_c = Some(c);
        }
        all_agree &= agrees;
        outcomes.push(WitnessOutcome {
            c,
            witness_found: found.is_some(),
            sequence_len: found.map(|s| s.len()),
            agrees,
        });
    }
    Ok(EquivalenceReport {
        alpha,
        m,
        threshold_log2: if thr.is_finite() { Some(thr) } else { None },
        witnessing_c,
        interior_fit_log2: if interior.is_finite() {
            Some(interior)
        } else {
            None
        },
        outcomes,
        all_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn power_law(alpha: f64, j_min: i32, j_max: i32) -> CoeffPyramid {
        let sups: Vec<f64> = (j_min..=j_max)
            .map(|j| (2f64).powf(-alpha * j as f64))
            .collect();
        CoeffPyramid::from_sups(j_min, &sups).unwrap()
    }

    #[test]
    fn power_law_threshold_is_one() {
        // s_j = 2^{-j alpha}: no witness below C = 1, witness from C = 1 on.
        let p = power_law(0.5, 0, 20);
        let thr = witness_threshold_log2(&p, 0.5, 1);
        assert!(thr.abs() < 1e-12, "log2 C_min = {thr}");
        assert!(weak_holder_witness(&p, 0.5, 1, 0.5).unwrap().is_none());
        let w = weak_holder_witness(&p, 0.5, 1, 1.0).unwrap().unwrap();
        assert!(verify_witness(&p, 0.5, 1, 1.0, &w));
    }

    #[test]
    fn all_zero_pyramid_admits_every_constant() {
        let p = CoeffPyramid::from_sups(1, &[0.0; 16]).unwrap();
        for c in [1e-6, 0.01, 1.0, 100.0] {
            let w = weak_holder_witness(&p, 0.5, 1, c).unwrap();
            assert!(w.is_some());
        }
        let rep = criterion_equivalence_check(&p, 0.5, 1, &default_c_grid()).unwrap();
        assert!(rep.all_agree);
        assert!(rep.threshold_log2.is_none());
        assert!(rep.interior_fit_log2.is_none());
        assert_eq!(rep.witnessing_c, Some((2f64).powi(-10)));
    }

    #[test]
    fn lacunary_envelope_returns_its_own_heads() {
        // s_j = 2^{-j alpha} exactly at j = 2^n, zero elsewhere: the heads
        // 2, 4, 8, 16 are returned for C >= 1.
        let alpha = 0.5;
        let j_min = 2;
        let j_max = 20;
        let alive: Vec<i32> = vec![2, 4, 8, 16];
        let sups: Vec<f64> = (j_min..=j_max)
            .map(|j| {
                if alive.contains(&j) {
                    (2f64).powf(-alpha * j as f64)
                } else {
                    0.0
                }
            })
            .collect();
        let p = CoeffPyramid::from_sups(j_min, &sups).unwrap();
        for c in [1.0, 2.0] {
            let w = weak_holder_witness(&p, alpha, 1, c).unwrap().unwrap();
            assert_eq!(w.as_slice(), &[2, 4, 8, 16], "c = {c}");
            assert!(verify_witness(&p, alpha, 1, c, &w));
        }
        // Direct check of the defining inequality on the canonical sequence:
        // equality at block heads, trivial inside blocks.
        let seq = ScaleSequence::new(alive).unwrap();
        assert!(verify_witness(&p, alpha, 1, 1.0, &seq));
    }

    #[test]
    fn verify_rejects_bad_sequences() {
        let p = power_law(0.5, 0, 12);
        // sequence not starting at j_min
        let seq = ScaleSequence::new(vec![3, 6]).unwrap();
        assert!(!verify_witness(&p, 0.5, 1, 1.0, &seq));
        // constant too small
        let seq = ScaleSequence::new(vec![0, 4, 8]).unwrap();
        assert!(!verify_witness(&p, 0.5, 1, 0.25, &seq));
    }

    #[test]
    fn equivalence_on_power_law() {
        let p = power_law(0.5, 0, 20);
        let rep = criterion_equivalence_check(&p, 0.5, 1, &default_c_grid()).unwrap();
        assert!(rep.all_agree);
        assert_eq!(rep.witnessing_c, Some(1.0));
        // interior criterion fit: criterion(j) = 2^{-j alpha} exactly -> C' = 1
        assert!(rep.interior_fit_log2.unwrap().abs() < 1e-9);
        for o in &rep.outcomes {
            assert_eq!(o.witness_found, o.c >= 1.0 - 1e-12, "c = {}", o.c);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Greedy search agrees with the closed-form threshold on random
        /// log-uniform pyramids, and returned sequences verify.
        #[test]
        fn search_matches_threshold(
            logs in proptest::collection::vec(-20.0f64..4.0, 6..20),
            zeros in proptest::collection::vec(proptest::bool::weighted(0.3), 6..20),
            alpha_frac in 0.1f64..0.9,
            m in 1u32..4,
        ) {
            let n = logs.len().min(zeros.len());
            let sups: Vec<f64> = (0..n)
                .map(|i| if zeros[i] { 0.0 } else { (2f64).powf(logs[i]) })
                .collect();
            let p = CoeffPyramid::from_sups(1, &sups).unwrap();
            let alpha = alpha_frac * m as f64;
            let rep = criterion_equivalence_check(&p, alpha, m, &default_c_grid()).unwrap();
            prop_assert!(rep.all_agree, "{rep:?}");
            for o in &rep.outcomes {
                if o.witness_found {
                    let w = weak_holder_witness(&p, alpha, m, o.c).unwrap().unwrap();
                    prop_assert!(verify_witness(&p, alpha, m, o.c, &w));
                }
            }
        }
    }
}
