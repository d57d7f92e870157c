//! Binary-input AWGN channel with BPSK mapping `x = (−1)^c`.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;

use crate::error::Error;
use crate::product::{CodeArray, LlrMatrix};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub ebno_db: f64,
    pub rate: f64,
    /// Noise variance `(2·R·Eb/N0)^−1`.
    pub sigma2: f64,
}

impl ChannelParams {
    pub fn new(ebno_db: f64, rate: f64) -> Result<Self, Error> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidConfig(format!("code rate {rate} outside (0, 1]")));
        }
        if !ebno_db.is_finite() {
            return Err(Error::InvalidConfig(format!("Eb/N0 {ebno_db} dB is not finite")));
        }
        let sigma2 = ebno_to_sigma2(ebno_db, rate);
        Ok(Self { ebno_db, rate, sigma2 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// Raw bit error probability of hard decisions, `Q(1/σ)`.
    pub fn raw_ber(&self) -> f64 {
        q_function(1.0 / self.sigma())
    }
}

pub fn ebno_to_sigma2(ebno_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))
}

pub fn sigma2_to_ebno_db(sigma2: f64, rate: f64) -> f64 {
    10.0 * (1.0 / (2.0 * rate * sigma2)).log10()
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `(−1)^c` elementwise.
pub fn modulate(c: &CodeArray) -> Vec<f64> {
    c.bits().iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// `y = x + z` with `z ~ N(0, σ²)` i.i.d.
pub fn transmit<R: Rng + ?Sized>(x: &[f64], params: &ChannelParams, rng: &mut R) -> Vec<f64> {
    let sigma = params.sigma();
    x.iter().map(|&xi| xi + sigma * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// `L = 2y/σ²`.
pub fn llr(y: &[f64], n: usize, params: &ChannelParams) -> Result<LlrMatrix, Error> {
    let scale = 2.0 / params.sigma2;
    LlrMatrix::new(n, y.iter().map(|&v| scale * v).collect())
}

/// Hard decisions `B(L)`, with `B(0) = 0`.
pub fn hard_decide(l: &LlrMatrix) -> CodeArray {
    l.hard_decisions()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sigma2_at_four_db() {
        let p = ChannelParams::new(4.0, 0.8622).unwrap();
        let expected = 1.0 / (2.0 * 0.8622 * 10f64.powf(0.4));
        assert!((p.sigma2 - expected).abs() < 1e-15);
        assert!((p.sigma2 - 0.2309).abs() < 5e-5);
        assert!((sigma2_to_ebno_db(p.sigma2, 0.8622) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn modulation_and_llr_signs() {
        let mut c = CodeArray::zeros(2);
        c.set(0, 1, 1);
        let x = modulate(&c);
        assert_eq!(x, vec![1.0, -1.0, 1.0, 1.0]);
        let p = ChannelParams::new(3.0, 0.5).unwrap();
        let l = llr(&x, 2, &p).unwrap();
        assert_eq!(hard_decide(&l), c);
        let zero = llr(&[0.0; 4], 2, &p).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        let l3 = llr(&x.iter().map(|v| 3.0 * v).collect::<Vec<_>>(), 2, &p).unwrap();
        for (a, b) in l3.values().iter().zip(l.values()) {
            assert!((a - 3.0 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn noise_variance() {
        let p = ChannelParams::new(4.0, 0.8622).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let y = transmit(&vec![0.0; n], &p, &mut rng);
        let mean = y.iter().sum::<f64>() / n as f64;
        let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((var / p.sigma2 - 1.0).abs() < 0.01, "var {var} vs {}", p.sigma2);
    }

    #[test]
    fn rejects_bad_rate() {
        assert!(ChannelParams::new(1.0, 0.0).is_err());
        assert!(ChannelParams::new(1.0, 1.5).is_err());
        assert!(ChannelParams::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn q_function_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        // Q(1) = 0.158655253931457
        assert!((q_function(1.0) / 0.158_655_253_931_457_07 - 1.0).abs() < 1e-10);
        assert!((q_function(3.0) / 1.349_898_031_630_095_9e-3 - 1.0).abs() < 1e-10);
    }
}
