//! Scaled-reliability decoders.
//!
//! Both decoders combine the component decision `μ̄ ∈ {+1, −1, 0}` (bipolar
//! decoded bit, or 0 on failure) with the channel LLR as `w_ℓ·μ̄ + L`.
//! iBDD-SR passes the hard decision of that sum between component codes;
//! iGMDD-SR passes the sum itself.

use crate::gmd::gmd_flips;

use super::{bipolar, hard_bit, CodeArray, DecoderResult, LlrMatrix, OpCounters, ProductCode, ScalingSchedule};

/// Binary message `B(w·μ̄ + L)`. A zero sum resolves to the channel
/// decision `B(L)`.
#[inline]
pub fn sr_message(w: f64, mu_bar: f64, llr: f64) -> u8 {
    let v = w * mu_bar + llr;
    if v > 0.0 {
        0
    } else if v < 0.0 {
        1
    } else {
        hard_bit(llr)
    }
}

#[inline]
fn soft_message(w: f64, mu_bar: f64, llr: f64) -> f64 {
    w * mu_bar + llr
}

#[inline]
fn soft_hard(v: f64, llr: f64) -> u8 {
    if v == 0.0 {
        hard_bit(llr)
    } else {
        hard_bit(v)
    }
}

/// iBDD with scaled reliability; exchanged messages are binary.
pub fn ibdd_sr(pc: &ProductCode, llr: &LlrMatrix, schedule: &ScalingSchedule, max_iterations: usize) -> DecoderResult {
    let n = pc.n();
    let code = pc.component();
    let mut msg = llr.hard_decisions();
    let mut out = msg.clone();
    let mut ops = OpCounters::default();
    let mut buf = vec![0u8; n];
    let mut iterations_used = 0;
    let mut converged = false;

    for l in 1..=max_iterations {
        iterations_used = l;
        let w = schedule.at(l);
        for i in 0..n {
            ops.bdd_calls += 1;
            ops.message_updates += n as u64;
            let row = msg.row(i);
            match code.bdd_flips(row) {
                Some(flips) => {
                    buf.copy_from_slice(row);
                    for &p in &flips {
                        buf[p] ^= 1;
                    }
                    for j in 0..n {
                        out.set(i, j, sr_message(w, bipolar(buf[j]), llr.get(i, j)));
                    }
                }
                None => {
                    for j in 0..n {
                        out.set(i, j, hard_bit(llr.get(i, j)));
                    }
                }
            }
        }
        std::mem::swap(&mut msg, &mut out);
        for j in 0..n {
            ops.bdd_calls += 1;
            ops.message_updates += n as u64;
            msg.col_into(j, &mut buf);
            match code.bdd_flips(&buf) {
                Some(flips) => {
                    for &p in &flips {
                        buf[p] ^= 1;
                    }
                    for i in 0..n {
                        out.set(i, j, sr_message(w, bipolar(buf[i]), llr.get(i, j)));
                    }
                }
                None => {
                    for i in 0..n {
                        out.set(i, j, hard_bit(llr.get(i, j)));
                    }
                }
            }
        }
        std::mem::swap(&mut msg, &mut out);
        if pc.is_codeword(&msg) {
            converged = true;
            break;
        }
    }
    DecoderResult { array: msg, iterations_used, converged, ops }
}

/// Iterative GMD decoding with scaled reliability; exchanged messages are
/// real-valued.
pub fn igmdd_sr(pc: &ProductCode, llr: &LlrMatrix, schedule: &ScalingSchedule, max_iterations: usize) -> DecoderResult {
    igmdd_sr_traced(pc, llr, schedule, max_iterations, |_, _| {})
}

/// Which half of an iteration a message matrix belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfIteration {
    Rows(usize),
    Columns(usize),
}

/// [`igmdd_sr`] with a callback receiving every component-input matrix
/// (row-major, `n × n`) before the corresponding half-iteration.
pub fn igmdd_sr_traced<F>(
    pc: &ProductCode,
    llr: &LlrMatrix,
    schedule: &ScalingSchedule,
    max_iterations: usize,
    mut trace: F,
) -> DecoderResult
where
    F: FnMut(HalfIteration, &[f64]),
{
    let n = pc.n();
    let code = pc.component();
    let mut soft: Vec<f64> = llr.values().to_vec();
    let mut next = soft.clone();
    let mut ops = OpCounters::default();
    let mut hard = vec![0u8; n];
    let mut rel = vec![0f64; n];
    let mut iterations_used = 0;
    let mut converged = false;
    let mut decisions = CodeArray::zeros(n);

    for l in 1..=max_iterations {
        iterations_used = l;
        let w = schedule.at(l);
        for pass in [HalfIteration::Rows(l), HalfIteration::Columns(l)] {
            trace(pass, &soft);
            let rows = matches!(pass, HalfIteration::Rows(_));
            for c in 0..n {
                let idx = |p: usize| if rows { c * n + p } else { p * n + c };
                for p in 0..n {
                    let k = idx(p);
                    hard[p] = soft_hard(soft[k], llr.values[k]);
                    rel[p] = soft[k].abs();
                }
                let (best, trials) = gmd_flips(code, &hard, &rel);
                ops.error_erasure_calls += trials as u64;
                ops.message_updates += n as u64;
                match best {
                    Some(b) => {
                        ops.distance_evaluations += b.candidates as u64;
                        for &p in &b.flips {
                            hard[p] ^= 1;
                        }
                        for p in 0..n {
                            let k = idx(p);
                            next[k] = soft_message(w, bipolar(hard[p]), llr.values[k]);
                        }
                    }
                    None => {
                        for p in 0..n {
                            let k = idx(p);
                            next[k] = llr.values[k];
                        }
                    }
                }
            }
            std::mem::swap(&mut soft, &mut next);
        }
        for (k, d) in decisions.bits.iter_mut().enumerate() {
            *d = soft_hard(soft[k], llr.values[k]);
        }
        if pc.is_codeword(&decisions) {
            converged = true;
            break;
        }
    }
    DecoderResult { array: decisions, iterations_used, converged, ops }
}
