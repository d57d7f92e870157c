//! Binary-input AWGN capacity limits, for soft (unquantized) and hard
//! (BSC) channel outputs.

use crate::channel::{ebno_to_sigma2, q_function};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapacityMode {
    /// Hard decisions: binary symmetric channel with crossover `Q(1/σ)`.
    Hard,
    /// Soft outputs: binary-input AWGN channel.
    Soft,
}

impl CapacityMode {
    pub fn label(self) -> &'static str {
        match self {
            CapacityMode::Hard => "HD",
            CapacityMode::Soft => "SD",
        }
    }
}

fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `1 − h2(Q(1/σ))` bits per channel use.
pub fn hd_capacity(sigma: f64) -> f64 {
    1.0 - binary_entropy(q_function(1.0 / sigma))
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Capacity of the bi-AWGN channel with unit-amplitude inputs and noise
/// standard deviation `sigma`:
/// `1 − E[log2(1 + exp(−2Y/σ²))]`, `Y ~ N(1, σ²)`.
pub fn bi_awgn_capacity(sigma: f64) -> f64 {
    let s2 = sigma * sigma;
    let norm = 1.0 / (2.0 * std::f64::consts::PI * s2).sqrt();
    let f = |y: f64| {
        let d = y - 1.0;
        norm * (-d * d / (2.0 * s2)).exp() * softplus(-2.0 * y / s2) / std::f64::consts::LN_2
    };
    let (a, b) = (1.0 - 16.0 * sigma, 1.0 + 16.0 * sigma);
    1.0 - adaptive_simpson(&f, a, b, 1e-13, 50)
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn capacity_at(mode: CapacityMode, ebno_db: f64, rate: f64) -> f64 {
    let sigma = ebno_to_sigma2(ebno_db, rate).sqrt();
    match mode {
        CapacityMode::Hard => hd_capacity(sigma),
        CapacityMode::Soft => bi_awgn_capacity(sigma),
    }
}

/// Smallest Eb/N0 (dB) at which the channel capacity reaches `rate`.
pub fn capacity_threshold_db(rate: f64, mode: CapacityMode) -> f64 {
    assert!(rate > 0.0 && rate < 1.0, "rate must lie in (0, 1)");
    let (mut lo, mut hi) = (-10.0f64, 30.0f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if capacity_at(mode, mid, rate) >= rate {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Distance in dB between an operating point and the capacity threshold.
pub fn capacity_gap(rate: f64, ebno_db_at_target: f64, mode: CapacityMode) -> f64 {
    ebno_db_at_target - capacity_threshold_db(rate, mode)
}
