//! Chase–Pyndiah turbo product decoding.
//!
//! Soft values follow the crate convention (positive favours bit 0). The
//! channel LLRs are normalized by their mean magnitude before decoding so
//! that the classic α/β schedules, defined for unit-energy BPSK, apply.

use crate::bch::{ComponentCode, Flips};
use crate::error::Error;
use crate::gmd::least_reliable;
use crate::product::{hard_bit, CodeArray, DecoderResult, LlrMatrix, OpCounters, ProductCode};

#[derive(Clone, Debug, PartialEq)]
pub struct ChaseConfig {
    /// Number of least reliable positions toggled; `2^p` test patterns.
    pub p: usize,
    /// Extrinsic weight per half-iteration (0-based); the last entry repeats.
    pub alpha: Vec<f64>,
    /// Reliability assigned when no competitor exists, per half-iteration.
    pub beta: Vec<f64>,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        Self { p: 4, alpha: vec![0.2, 0.3, 0.5, 0.7, 0.9, 1.0], beta: vec![0.2, 0.4, 0.6, 0.8, 1.0] }
    }
}

impl ChaseConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.p == 0 || self.p > 12 {
            return Err(Error::InvalidConfig(format!("chase p={} outside [1, 12]", self.p)));
        }
        if self.alpha.is_empty() || self.beta.is_empty() {
            return Err(Error::InvalidConfig("empty alpha/beta schedule".into()));
        }
        Ok(())
    }

    pub fn test_patterns(&self) -> usize {
        1 << self.p
    }

    pub fn alpha_at(&self, half_iter: usize) -> f64 {
        self.alpha[half_iter.min(self.alpha.len() - 1)]
    }

    pub fn beta_at(&self, half_iter: usize) -> f64 {
        self.beta[half_iter.min(self.beta.len() - 1)]
    }
}

/// Output of one Chase–Pyndiah component decoding.
#[derive(Clone, Debug, PartialEq)]
pub struct ChaseOutput {
    /// Extrinsic values `W`, before `α` is applied; all zero when no
    /// candidate was found.
    pub extrinsic: Vec<f64>,
    /// Decision codeword, if any test pattern decoded.
    pub decision: Option<Vec<u8>>,
    pub bdd_calls: usize,
}

struct Candidate {
    /// Positions where the candidate differs from the hard input, sorted.
    diff: Flips,
    metric: f64,
}

/// SISO decoding of one component word.
pub fn chase_pyndiah_component(
    code: &ComponentCode,
    soft_in: &[f64],
    cfg: &ChaseConfig,
    half_iter: usize,
) -> ChaseOutput {
    let n = soft_in.len();
    let hard: Vec<u8> = soft_in.iter().map(|&v| hard_bit(v)).collect();
    let rel: Vec<f64> = soft_in.iter().map(|v| v.abs()).collect();
    let lrp = least_reliable(&rel, cfg.p);
    let base = code.syndrome(&hard);

    let mut cands: Vec<Candidate> = Vec::with_capacity(cfg.test_patterns());
    for pattern in 0..1usize << lrp.len() {
        let mut syn = base;
        let mut toggled = Flips::new();
        for (b, &pos) in lrp.iter().enumerate() {
            if pattern >> b & 1 == 1 {
                code.toggle_syndrome(&mut syn, pos);
                toggled.push(pos);
            }
        }
        if !code.is_extended() {
            syn.parity = 0;
        }
        let Some(flips) = code.decode_syndrome(&syn) else { continue };
        let mut diff: Flips = toggled.iter().copied().filter(|p| !flips.contains(p)).collect();
        diff.extend(flips.iter().copied().filter(|p| !toggled.contains(p)));
        diff.sort_unstable();
        if cands.iter().any(|c| c.diff == diff) {
            continue;
        }
        // Correlation discrepancy: equivalent to Euclidean distance ordering.
        let metric = diff.iter().map(|&p| rel[p]).sum();
        cands.push(Candidate { diff, metric });
    }
    let bdd_calls = 1 << lrp.len();

    let beta = cfg.beta_at(half_iter);
    let Some(best_idx) = (0..cands.len()).min_by(|&a, &b| cands[a].metric.total_cmp(&cands[b].metric)) else {
        return ChaseOutput { extrinsic: vec![0.0; n], decision: None, bdd_calls };
    };
    let best = &cands[best_idx];
    let mut decision = hard.clone();
    for &p in &best.diff {
        decision[p] ^= 1;
    }
    // Best competitor metric per position: candidates disagreeing with the
    // decision there.
    let mut competitor = vec![f64::INFINITY; n];
    for (idx, c) in cands.iter().enumerate() {
        if idx == best_idx {
            continue;
        }
        for p in sym_diff(&c.diff, &best.diff) {
            if c.metric < competitor[p] {
                competitor[p] = c.metric;
            }
        }
    }
    let extrinsic = (0..n)
        .map(|j| {
            let d = if decision[j] == 0 { 1.0 } else { -1.0 };
            if competitor[j].is_finite() {
                // Soft output (M(C) − M(D))·d_j, minus the input.
                (competitor[j] - best.metric) * d - soft_in[j]
            } else {
                beta * d
            }
        })
        .collect();
    ChaseOutput { extrinsic, decision: Some(decision), bdd_calls }
}

fn sym_diff<'a>(a: &'a Flips, b: &'a Flips) -> impl Iterator<Item = usize> + 'a {
    a.iter().copied().filter(move |p| !b.contains(p)).chain(b.iter().copied().filter(move |p| !a.contains(p)))
}

/// Turbo product decoding: row then column half-iterations with soft input
/// `L' + α·W`, where `L'` is the normalized channel LLR and `W` the
/// previous half-iteration's extrinsic array.
pub fn tpd_decode(pc: &ProductCode, llr: &LlrMatrix, cfg: &ChaseConfig, max_iterations: usize) -> DecoderResult {
    let n = pc.n();
    let code = pc.component();
    let mean_abs = llr.values().iter().map(|v| v.abs()).sum::<f64>() / (n * n) as f64;
    let scale = if mean_abs > 0.0 { 1.0 / mean_abs } else { 1.0 };
    let channel: Vec<f64> = llr.values().iter().map(|v| v * scale).collect();
    let mut extrinsic = vec![0.0; n * n];
    let mut next_ext = vec![0.0; n * n];
    let mut total = channel.clone();
    let mut ops = OpCounters::default();
    let mut soft_in = vec![0.0; n];
    let mut decisions = CodeArray::zeros(n);
    let mut iterations_used = 0;
    let mut converged = false;

    for l in 0..max_iterations {
        iterations_used = l + 1;
        for (h, rows) in [(2 * l, true), (2 * l + 1, false)] {
            for c in 0..n {
                let idx = |p: usize| if rows { c * n + p } else { p * n + c };
                for (p, s) in soft_in.iter_mut().enumerate() {
                    *s = channel[idx(p)] + extrinsic[idx(p)];
                }
                let out = chase_pyndiah_component(code, &soft_in, cfg, h);
                ops.bdd_calls += out.bdd_calls as u64;
                ops.message_updates += n as u64;
                for p in 0..n {
                    next_ext[idx(p)] = out.extrinsic[p];
                    total[idx(p)] = soft_in[p] + out.extrinsic[p];
                }
            }
            let alpha = cfg.alpha_at(h);
            for (e, &w) in extrinsic.iter_mut().zip(&next_ext) {
                *e = alpha * w;
            }
        }
        decisions = CodeArray::from_bits(n, total.iter().map(|&v| hard_bit(v)).collect()).expect("n*n soft values");
        if pc.is_codeword(&decisions) {
            converged = true;
            break;
        }
    }
    DecoderResult { array: decisions, iterations_used, converged, ops }
}
