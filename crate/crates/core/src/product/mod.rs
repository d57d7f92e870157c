//! Two-dimensional product codes and their iterative decoders.
//!
//! Arrays are `n × n`, row-major. Row `i` and column `j` are codewords of
//! the same component code. Every decoder processes all rows, then all
//! columns; one such pair is one iteration.
//!
//! LLR sign convention, used crate-wide: bit `b` is sent as `(−1)^b`, so a
//! positive LLR supports bit 0.

mod anchor;
mod ibdd;
mod scaled;

pub use anchor::anchor_decode_with_state;
pub use anchor::{anchor_decode, AnchorState, ComponentStatus};
pub use ibdd::{ibdd, ideal_ibdd};
pub use scaled::{ibdd_sr, igmdd_sr, igmdd_sr_traced, sr_message, HalfIteration};

use rand::Rng;

use crate::bch::ComponentCode;
use crate::error::Error;

/// Index of a component code: rows are `0..n`, columns `n..2n`.
pub type ComponentId = usize;

#[derive(Clone, Debug)]
pub struct ProductCode {
    component: ComponentCode,
}

impl ProductCode {
    pub fn new(component: ComponentCode) -> Self {
        Self { component }
    }

    pub fn component(&self) -> &ComponentCode {
        &self.component
    }

    pub fn n(&self) -> usize {
        self.component.n()
    }

    pub fn k(&self) -> usize {
        self.component.k()
    }

    /// `k² / n²`.
    pub fn rate(&self) -> f64 {
        let r = self.k() as f64 / self.n() as f64;
        r * r
    }

    /// Systematic encoding of a `k × k` row-major information block: rows
    /// first, then every column.
    pub fn encode(&self, info: &[u8]) -> Result<CodeArray, Error> {
        let (n, k) = (self.n(), self.k());
        if info.len() != k * k {
            return Err(Error::LengthMismatch { expected: k * k, got: info.len() });
        }
        let pos = self.component.message_positions();
        let mut array = CodeArray::zeros(n);
        for (i, msg) in info.chunks(k).enumerate() {
            let row = self.component.encode(msg)?;
            array.row_mut(pos.start + i).copy_from_slice(&row);
        }
        let mut msg = vec![0u8; k];
        for j in 0..n {
            for (m, i) in msg.iter_mut().zip(pos.clone()) {
                *m = array.get(i, j);
            }
            let col = self.component.encode(&msg)?;
            array.set_col(j, &col);
        }
        Ok(array)
    }

    /// Same as [`encode`](Self::encode) but columns first.
    pub fn encode_columns_first(&self, info: &[u8]) -> Result<CodeArray, Error> {
        let k = self.k();
        if info.len() != k * k {
            return Err(Error::LengthMismatch { expected: k * k, got: info.len() });
        }
        let mut t = vec![0u8; k * k];
        for i in 0..k {
            for j in 0..k {
                t[j * k + i] = info[i * k + j];
            }
        }
        Ok(self.encode(&t)?.transposed())
    }

    pub fn random_codeword<R: Rng + ?Sized>(&self, rng: &mut R) -> CodeArray {
        let k = self.k();
        let info: Vec<u8> = (0..k * k).map(|_| rng.gen_range(0..=1u8)).collect();
        self.encode(&info).expect("info length is k*k")
    }

    /// True iff every row and column is a component codeword.
    pub fn is_codeword(&self, array: &CodeArray) -> bool {
        let n = self.n();
        if array.n() != n {
            return false;
        }
        let mut col = vec![0u8; n];
        (0..n).all(|i| self.component.is_codeword(array.row(i)))
            && (0..n).all(|j| {
                array.col_into(j, &mut col);
                self.component.is_codeword(&col)
            })
    }
}

/// An `n × n` binary array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeArray {
    n: usize,
    bits: Vec<u8>,
}

impl CodeArray {
    pub fn zeros(n: usize) -> Self {
        Self { n, bits: vec![0; n * n] }
    }

    pub fn from_bits(n: usize, bits: Vec<u8>) -> Result<Self, Error> {
        if bits.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: bits.len() });
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.bits[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: u8) {
        self.bits[i * self.n + j] = b;
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] ^= 1;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.bits[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u8] {
        &mut self.bits[i * self.n..(i + 1) * self.n]
    }

    pub fn col_into(&self, j: usize, out: &mut [u8]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.bits[i * self.n + j];
        }
    }

    pub fn set_col(&mut self, j: usize, col: &[u8]) {
        for (i, &b) in col.iter().enumerate() {
            self.bits[i * self.n + j] = b;
        }
    }

    pub fn transposed(&self) -> Self {
        let n = self.n;
        let mut bits = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                bits[j * n + i] = self.bits[i * n + j];
            }
        }
        Self { n, bits }
    }

    pub fn hamming_distance(&self, other: &CodeArray) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }
}

/// An `n × n` matrix of channel LLRs.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrMatrix {
    n: usize,
    values: Vec<f64>,
}

impl LlrMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self, Error> {
        if values.len() != n * n {
            return Err(Error::LengthMismatch { expected: n * n, got: values.len() });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite LLR {v}")));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Elementwise hard decision; `B(0) = 0`.
    pub fn hard_decisions(&self) -> CodeArray {
        CodeArray { n: self.n, bits: self.values.iter().map(|&v| hard_bit(v)).collect() }
    }
}

/// `B(v)`: 0 for `v ≥ 0`, 1 for `v < 0`.
#[inline]
pub fn hard_bit(v: f64) -> u8 {
    (v < 0.0) as u8
}

/// Bipolar image `(−1)^b` of a bit.
#[inline]
pub fn bipolar(b: u8) -> f64 {
    if b == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Per-iteration weights `w_1 … w_ℓmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingSchedule(Vec<f64>);

impl ScalingSchedule {
    pub fn new(w: Vec<f64>) -> Result<Self, Error> {
        if w.is_empty() {
            return Err(Error::InvalidConfig("empty scaling schedule".into()));
        }
        if let Some(v) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidConfig(format!("scaling weight {v} is not positive")));
        }
        Ok(Self(w))
    }

    pub fn constant(w: f64, iterations: usize) -> Result<Self, Error> {
        Self::new(vec![w; iterations])
    }

    pub fn weights(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight for 1-based iteration `l`; the last entry repeats if the
    /// schedule is shorter than the iteration count.
    pub fn at(&self, l: usize) -> f64 {
        self.0[(l.max(1) - 1).min(self.0.len() - 1)]
    }

    pub fn is_monotone(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Operation counts collected while decoding one frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub bdd_calls: u64,
    pub error_erasure_calls: u64,
    pub distance_evaluations: u64,
    pub message_updates: u64,
}

impl std::ops::AddAssign for OpCounters {
    fn add_assign(&mut self, o: Self) {
        self.bdd_calls += o.bdd_calls;
        self.error_erasure_calls += o.error_erasure_calls;
        self.distance_evaluations += o.distance_evaluations;
        self.message_updates += o.message_updates;
    }
}

#[derive(Clone, Debug)]
pub struct DecoderResult {
    pub array: CodeArray,
    pub iterations_used: usize,
    /// The final array is a product codeword.
    pub converged: bool,
    pub ops: OpCounters,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> ProductCode {
        ProductCode::new(ComponentCode::ebch(4, 2).unwrap())
    }

    #[test]
    fn encode_zero_and_random() {
        let pc = small();
        assert_eq!(pc.n(), 16);
        assert_eq!(pc.k(), 7);
        let zero = pc.encode(&vec![0; 49]).unwrap();
        assert_eq!(zero, CodeArray::zeros(16));
        assert!(pc.is_codeword(&zero));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let info: Vec<u8> = (0..49).map(|_| rng.gen_range(0..=1)).collect();
            let a = pc.encode(&info).unwrap();
            assert!(pc.is_codeword(&a));
            assert_eq!(a, pc.encode_columns_first(&info).unwrap());
            let mut b = a.clone();
            b.flip(rng.gen_range(0..16), rng.gen_range(0..16));
            assert!(!pc.is_codeword(&b));
        }
    }

    #[test]
    fn rate_of_the_256_code() {
        let pc = ProductCode::new(ComponentCode::ebch(8, 2).unwrap());
        assert!((pc.rate() - 239.0f64.powi(2) / 256.0f64.powi(2)).abs() < 1e-15);
    }

    #[test]
    fn schedule_validation() {
        assert!(ScalingSchedule::new(vec![]).is_err());
        assert!(ScalingSchedule::new(vec![1.0, 0.0]).is_err());
        let s = ScalingSchedule::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(s.at(1), 1.0);
        assert_eq!(s.at(5), 2.0);
        assert!(s.is_monotone());
        assert!(!ScalingSchedule::new(vec![2.0, 1.0]).unwrap().is_monotone());
    }

    #[test]
    fn hard_bit_convention() {
        assert_eq!(hard_bit(3.0), 0);
        assert_eq!(hard_bit(-3.0), 1);
        assert_eq!(hard_bit(0.0), 0);
        assert_eq!(bipolar(0), 1.0);
        assert_eq!(bipolar(1), -1.0);
    }
}
