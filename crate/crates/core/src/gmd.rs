//! Generalized minimum distance decoding of a single component code.
//!
//! The decoder erases the `m` least reliable positions for each `m` in the
//! erasure profile, runs error-erasure decoding on every trial vector and
//! keeps the candidate with the smallest generalized distance.

use crate::bch::{ComponentCode, DecodeStatus, Flips};

/// Channel reliabilities `|L_i|` of one component word together with the
/// normalized values `α_i = |L_i| / max_j |L_j|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityVector {
    pub values: Vec<f64>,
    pub alphas: Vec<f64>,
}

impl ReliabilityVector {
    /// From soft values; only magnitudes are used. An all-zero vector gets
    /// `α_i = 1` everywhere.
    pub fn from_soft(soft: &[f64]) -> Self {
        let values: Vec<f64> = soft.iter().map(|v| v.abs()).collect();
        let alphas = normalized(&values);
        Self { values, alphas }
    }

    pub fn uniform(n: usize) -> Self {
        Self { values: vec![1.0; n], alphas: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn normalized(values: &[f64]) -> Vec<f64> {
    let max = values.iter().fold(0.0f64, |a, &b| a.max(b));
    if max > 0.0 {
        values.iter().map(|v| v / max).collect()
    } else {
        vec![1.0; values.len()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmdOutcome {
    pub status: DecodeStatus,
    /// Winning codeword, or the hard input on failure.
    pub word: Vec<u8>,
    /// Number of error-erasure attempts made (always `t + 1`).
    pub trials_attempted: usize,
    /// Distinct candidate codewords scored.
    pub candidates: usize,
    /// Generalized distance of the winner.
    pub metric: Option<f64>,
}

/// Erasure counts used by GMD: `d−1, d−3, …` down to 2 (odd `d`) or 3
/// (even `d`). The unerased trial is not included.
pub fn erasure_profile(d_min: usize) -> Vec<usize> {
    (2..d_min).rev().step_by(2).collect()
}

/// `Σ_{r_i = ĉ_i} (1 − α_i) + Σ_{r_i ≠ ĉ_i} (1 + α_i)`.
pub fn generalized_distance(r: &[u8], c_hat: &[u8], alphas: &[f64]) -> f64 {
    r.iter().zip(c_hat).zip(alphas).map(|((&a, &b), &alpha)| if a == b { 1.0 - alpha } else { 1.0 + alpha }).sum()
}

/// Indices of the `count` smallest reliabilities, ties toward the lower
/// index, in ascending reliability order.
pub fn least_reliable(values: &[f64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    let count = count.min(values.len());
    let cmp = |a: &usize, b: &usize| values[*a].total_cmp(&values[*b]).then(a.cmp(b));
    if count == 0 {
        return Vec::new();
    }
    if count < idx.len() {
        idx.select_nth_unstable_by(count - 1, cmp);
        idx.truncate(count);
    }
    idx.sort_unstable_by(cmp);
    idx
}

/// Result of the allocation-light GMD kernel.
#[derive(Clone, Debug)]
pub struct GmdFlips {
    pub flips: Flips,
    pub metric: f64,
    pub candidates: usize,
}

/// GMD decoding returning the positions to flip in `r`. `reliabilities`
/// are the magnitudes `|L_i|`.
pub fn gmd_flips(code: &ComponentCode, r: &[u8], reliabilities: &[f64]) -> (Option<GmdFlips>, usize) {
    let profile = erasure_profile(code.d_min());
    let ranked = least_reliable(reliabilities, profile.first().copied().unwrap_or(0));
    let max = reliabilities.iter().fold(0.0f64, |a, &b| a.max(b));
    let alpha = |i: usize| if max > 0.0 { reliabilities[i] / max } else { 1.0 };
    // Metric of r itself; each flip at i adds (1+α_i) − (1−α_i) = 2α_i.
    let base: f64 = (0..r.len()).map(|i| 1.0 - alpha(i)).sum();

    let syn = code.syndrome(r);
    let mut best: Option<GmdFlips> = None;
    let mut seen: Vec<Flips> = Vec::with_capacity(profile.len() + 1);
    let mut trials = 0;
    // Fewer erasures first so that ties keep the better-supported candidate.
    let erasure_counts = std::iter::once(0).chain(profile.iter().rev().copied());
    for m in erasure_counts {
        trials += 1;
        let Some(flips) = code.error_erasure_flips_from(r, &syn, &ranked[..m]) else { continue };
        if seen.contains(&flips) {
            continue;
        }
        let metric = base + flips.iter().map(|&i| 2.0 * alpha(i)).sum::<f64>();
        seen.push(flips.clone());
        if best.as_ref().is_none_or(|b| metric < b.metric) {
            best = Some(GmdFlips { flips, metric, candidates: 0 });
        }
    }
    if let Some(b) = best.as_mut() {
        b.candidates = seen.len();
    }
    (best, trials)
}

/// GMD decoding of hard word `r` with reliabilities `rel`.
pub fn gmd_decode(code: &ComponentCode, r: &[u8], rel: &ReliabilityVector) -> GmdOutcome {
    assert_eq!(r.len(), rel.len(), "reliability vector length");
    let (best, trials) = gmd_flips(code, r, &rel.values);
    let mut word = r.to_vec();
    match best {
        Some(b) => {
            for &p in &b.flips {
                word[p] ^= 1;
            }
            GmdOutcome {
                status: DecodeStatus::Corrected,
                word,
                trials_attempted: trials,
                candidates: b.candidates,
                metric: Some(b.metric),
            }
        }
        None => {
            GmdOutcome { status: DecodeStatus::Failure, word, trials_attempted: trials, candidates: 0, metric: None }
        }
    }
}
