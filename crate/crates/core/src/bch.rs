//! Binary (extended) BCH component codes.
//!
//! Bit vectors are `&[u8]` slices holding 0/1, one byte per bit. Index `p`
//! of the unextended part is the coefficient of `x^p`; when the code is
//! extended, index `n − 1` carries the overall parity bit. Systematic
//! codewords place the parity checks at indices `0..n0−k` and the message
//! at `n0−k..n0`.

use smallvec::SmallVec;

use crate::error::Error;
use crate::gf::{FieldElement, FieldSpec};

/// Largest supported error-correcting capability.
pub const MAX_T: usize = 8;

/// Positions changed by a decoder, ascending.
pub type Flips = SmallVec<[usize; 8]>;

/// Odd-indexed power-sum syndromes `S_1, S_3, …, S_{2t−1}` plus the
/// overall parity of all `n` bits. Even syndromes follow by squaring.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Syndrome {
    pub odd: [FieldElement; MAX_T],
    pub parity: u8,
}

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.parity == 0 && self.odd.iter().all(|&s| s == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Corrected,
    Failure,
}

/// Result of one component decoding. On failure `word` echoes the input and
/// `flips` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub word: Vec<u8>,
    pub flips: Flips,
}

impl DecodeOutcome {
    fn from_flips(r: &[u8], flips: Option<Flips>) -> Self {
        let mut word = r.to_vec();
        match flips {
            Some(flips) => {
                for &p in &flips {
                    word[p] ^= 1;
                }
                Self { status: DecodeStatus::Corrected, word, flips }
            }
            None => Self { status: DecodeStatus::Failure, word, flips: Flips::new() },
        }
    }

    pub fn is_corrected(&self) -> bool {
        self.status == DecodeStatus::Corrected
    }
}

/// An (n, k, d_min) binary BCH code, optionally extended by an overall
/// parity bit.
#[derive(Clone, Debug)]
pub struct ComponentCode {
    field: FieldSpec,
    n: usize,
    n0: usize,
    k: usize,
    d_min: usize,
    t: usize,
    extended: bool,
    /// Generator polynomial coefficients, lowest degree first.
    generator: Vec<u8>,
    /// `cols[p*t + j] = α^{(2j+1)p}`: syndrome contribution of position `p`.
    cols: Vec<FieldElement>,
    /// For t = 2: `quad_root[c]` solves `u² + u = c`, or `u16::MAX` if none.
    quad_root: Vec<u16>,
}

impl ComponentCode {
    /// Narrow-sense primitive BCH code of designed capability `t_design`,
    /// extended by a parity bit when `extend` is set.
    pub fn new(field: FieldSpec, t_design: usize, extend: bool) -> Result<Self, Error> {
        if t_design == 0 || t_design > MAX_T {
            return Err(Error::UnsupportedParameters(format!("designed capability t={t_design} outside [1, {MAX_T}]")));
        }
        let n0 = field.order();
        // g(x) = lcm of minimal polynomials of α, α^3, …, α^(2t−1).
        let mut seen_polys: Vec<u64> = Vec::new();
        let mut generator: Vec<u8> = vec![1];
        for j in 0..t_design {
            let mp = field.minimal_poly(field.alpha_pow((2 * j + 1) as i64));
            if seen_polys.contains(&mp) {
                continue;
            }
            seen_polys.push(mp);
            generator = poly_mul_gf2(&generator, mp);
        }
        let deg = generator.len() - 1;
        if deg >= n0 {
            return Err(Error::UnsupportedParameters(format!(
                "t={t_design} leaves no information bits in a length-{n0} BCH code"
            )));
        }
        let k = n0 - deg;
        let d_base = 2 * t_design + 1;
        let (n, d_min) = if extend { (n0 + 1, d_base + 1) } else { (n0, d_base) };
        let t = (d_min - 1) / 2;

        let mut cols = vec![0; n0 * t];
        for p in 0..n0 {
            for j in 0..t {
                cols[p * t + j] = field.alpha_pow(((2 * j + 1) * p) as i64);
            }
        }
        let quad_root = if t == 2 {
            let mut tab = vec![u16::MAX; field.size()];
            for u in 0..field.size() as u16 {
                let c = field.square(u) ^ u;
                if tab[c as usize] == u16::MAX {
                    tab[c as usize] = u;
                }
            }
            tab
        } else {
            Vec::new()
        };

        Ok(Self { field, n, n0, k, d_min, t, extended: extend, generator, cols, quad_root })
    }

    /// The (2^m, 2^m−1−deg g, 2t+2) extended code over the default field.
    pub fn ebch(m: u32, t_design: usize) -> Result<Self, Error> {
        Self::new(FieldSpec::with_default_poly(m)?, t_design, true)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn d_min(&self) -> usize {
        self.d_min
    }
    pub fn t(&self) -> usize {
        self.t
    }
    pub fn is_extended(&self) -> bool {
        self.extended
    }
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
    /// Coefficients of g(x), lowest degree first.
    pub fn generator(&self) -> &[u8] {
        &self.generator
    }
    /// Positions holding message bits in a systematic codeword.
    pub fn message_positions(&self) -> std::ops::Range<usize> {
        self.n0 - self.k..self.n0
    }

    fn check_len(&self, len: usize) -> Result<(), Error> {
        if len != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    /// Systematic encoding of a `k`-bit message.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>, Error> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch { expected: self.k, got: message.len() });
        }
        let r = self.n0 - self.k;
        let mut word = vec![0u8; self.n];
        word[r..self.n0].copy_from_slice(message);
        // Remainder of x^r·m(x) mod g(x), long division from the top.
        let mut rem = word[..self.n0].to_vec();
        for i in (r..self.n0).rev() {
            if rem[i] & 1 == 1 {
                for (j, &g) in self.generator.iter().enumerate() {
                    rem[i - r + j] ^= g;
                }
            }
        }
        word[..r].copy_from_slice(&rem[..r]);
        if self.extended {
            word[self.n0] = word[..self.n0].iter().fold(0, |a, &b| a ^ b);
        }
        Ok(word)
    }

    /// Adds position `p`'s contribution to `syn`.
    #[inline]
    pub fn toggle_syndrome(&self, syn: &mut Syndrome, p: usize) {
        syn.parity ^= 1;
        if p < self.n0 {
            let c = &self.cols[p * self.t..(p + 1) * self.t];
            for (s, &v) in syn.odd.iter_mut().zip(c) {
                *s ^= v;
            }
        }
    }

    pub fn syndrome(&self, r: &[u8]) -> Syndrome {
        debug_assert_eq!(r.len(), self.n);
        let mut syn = Syndrome::default();
        for (p, &b) in r.iter().enumerate() {
            if b != 0 {
                self.toggle_syndrome(&mut syn, p);
            }
        }
        if !self.extended {
            syn.parity = 0;
        }
        syn
    }

    pub fn is_codeword(&self, r: &[u8]) -> bool {
        self.syndrome(r).is_zero()
    }

    /// Error positions implied by a syndrome under bounded distance
    /// decoding, or `None` if no codeword lies within distance `t`.
    pub fn decode_syndrome(&self, syn: &Syndrome) -> Option<Flips> {
        let mut flips = if self.t == 2 { self.locate_t2(syn.odd[0], syn.odd[1])? } else { self.locate_bm(syn)? };
        if self.extended {
            let parity_after = syn.parity ^ (flips.len() as u8 & 1);
            if parity_after == 1 {
                if flips.len() + 1 > self.t {
                    return None;
                }
                flips.push(self.n0);
            }
        }
        Some(flips)
    }

    /// Closed-form locator for double-error-correcting codes.
    fn locate_t2(&self, s1: FieldElement, s3: FieldElement) -> Option<Flips> {
        let f = &self.field;
        let mut flips = Flips::new();
        if s1 == 0 {
            return (s3 == 0).then_some(flips);
        }
        let s1_cubed = f.mul(f.square(s1), s1);
        if s3 == s1_cubed {
            flips.push(f.log(s1)?);
            return Some(flips);
        }
        // Error locators X1, X2 are the roots of y² + S1·y + σ2 with
        // σ2 = (S3 + S1³)/S1. Substituting y = S1·u gives u² + u = σ2/S1².
        let sigma2 = f.div(s3 ^ s1_cubed, s1).ok()?;
        let c = f.div(sigma2, f.square(s1)).ok()?;
        let u = self.quad_root[c as usize];
        if u == u16::MAX {
            return None;
        }
        let x1 = f.mul(s1, u);
        let x2 = f.mul(s1, u ^ 1);
        let (p1, p2) = (f.log(x1)?, f.log(x2)?);
        flips.push(p1.min(p2));
        flips.push(p1.max(p2));
        Some(flips)
    }

    /// Berlekamp–Massey followed by a Chien search over the `n0` positions.
    fn locate_bm(&self, syn: &Syndrome) -> Option<Flips> {
        let f = &self.field;
        let t = self.t;
        if syn.odd[..t].iter().all(|&s| s == 0) {
            return Some(Flips::new());
        }
        // Full syndrome sequence S_1..S_2t, with S_2j = S_j².
        let mut s = vec![0 as FieldElement; 2 * t + 1];
        for j in 1..=2 * t {
            s[j] = if j % 2 == 1 { syn.odd[(j - 1) / 2] } else { f.square(s[j / 2]) };
        }
        let mut c: Vec<FieldElement> = vec![0; 2 * t + 2];
        let mut b: Vec<FieldElement> = vec![0; 2 * t + 2];
        c[0] = 1;
        b[0] = 1;
        let (mut l, mut shift, mut bd) = (0usize, 1usize, 1 as FieldElement);
        for step in 0..2 * t {
            let mut d = s[step + 1];
            for i in 1..=l {
                d ^= f.mul(c[i], s[step + 1 - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = f.div(d, bd).ok()?;
            let prev = c.clone();
            for i in 0..c.len() - shift {
                c[i + shift] ^= f.mul(coef, b[i]);
            }
            if 2 * l <= step {
                l = step + 1 - l;
                b = prev;
                bd = d;
                shift = 1;
            } else {
                shift += 1;
            }
        }
        if l > t || c[l] == 0 {
            return None;
        }
        let mut flips = Flips::new();
        for p in 0..self.n0 {
            // σ(α^{-p}) = Σ c_i α^{-ip}
            let mut acc = 0;
            for (i, &ci) in c[..=l].iter().enumerate() {
                if ci != 0 {
                    acc ^= f.mul(ci, f.alpha_pow(-((i * p) as i64)));
                }
            }
            if acc == 0 {
                flips.push(p);
            }
        }
        (flips.len() == l).then_some(flips)
    }

    /// Bounded distance decoding: positions to flip, `None` on failure.
    #[inline]
    pub fn bdd_flips(&self, r: &[u8]) -> Option<Flips> {
        self.decode_syndrome(&self.syndrome(r))
    }

    /// Bounded distance decoding. Returns the unique codeword within
    /// distance `t` of `r` (which may be a miscorrection), or a failure
    /// echoing `r`.
    pub fn bdd(&self, r: &[u8]) -> Result<DecodeOutcome, Error> {
        self.check_len(r.len())?;
        Ok(DecodeOutcome::from_flips(r, self.bdd_flips(r)))
    }

    /// Two-fill error-erasure decoding: positions to flip relative to `r`.
    pub fn error_erasure_flips(&self, r: &[u8], erasures: &[usize]) -> Option<Flips> {
        let base = self.syndrome(r);
        self.error_erasure_flips_from(r, &base, erasures)
    }

    /// As [`error_erasure_flips`](Self::error_erasure_flips) with the
    /// syndrome of `r` already computed.
    pub fn error_erasure_flips_from(&self, r: &[u8], base: &Syndrome, erasures: &[usize]) -> Option<Flips> {
        let s = erasures.len();
        if s == 0 {
            return self.decode_syndrome(base);
        }
        let mut best: Option<(usize, Flips)> = None;
        for fill in [0u8, 1u8] {
            let mut syn = *base;
            // Positions where the filled vector differs from r.
            let mut filled: Flips = Flips::new();
            for &p in erasures {
                if r[p] != fill {
                    self.toggle_syndrome(&mut syn, p);
                    filled.push(p);
                }
            }
            if !self.extended {
                syn.parity = 0;
            }
            let Some(dec) = self.decode_syndrome(&syn) else { continue };
            let errors = dec.iter().filter(|p| !erasures.contains(p)).count();
            if 2 * errors + s > self.d_min - 1 {
                continue;
            }
            if best.as_ref().is_some_and(|(e, _)| *e <= errors) {
                continue;
            }
            let mut flips = sym_diff(&filled, &dec);
            flips.sort_unstable();
            best = Some((errors, flips));
        }
        best.map(|(_, f)| f)
    }

    /// Algebraic error-erasure decoding. Succeeds whenever the channel
    /// introduced `e` errors outside the erased set with `2e + s < d_min`.
    pub fn error_erasure_decode(&self, r: &[u8], erasures: &[usize]) -> Result<DecodeOutcome, Error> {
        self.check_len(r.len())?;
        if erasures.len() >= self.d_min {
            return Err(Error::TooManyErasures { erasures: erasures.len(), d_min: self.d_min });
        }
        if let Some(&p) = erasures.iter().find(|&&p| p >= self.n) {
            return Err(Error::LengthMismatch { expected: self.n, got: p + 1 });
        }
        Ok(DecodeOutcome::from_flips(r, self.error_erasure_flips(r, erasures)))
    }

    /// BDD with a genie that turns every miscorrection into a failure.
    pub fn genie_bdd(&self, r: &[u8], c_true: &[u8]) -> Result<DecodeOutcome, Error> {
        self.check_len(r.len())?;
        self.check_len(c_true.len())?;
        Ok(DecodeOutcome::from_flips(r, self.genie_flips(r, c_true)))
    }

    #[inline]
    pub fn genie_flips(&self, r: &[u8], c_true: &[u8]) -> Option<Flips> {
        let flips = self.bdd_flips(r)?;
        let on_truth = r.iter().zip(c_true).enumerate().all(|(p, (&a, &b))| {
            let flipped = flips.contains(&p);
            (a ^ flipped as u8) == b
        });
        on_truth.then_some(flips)
    }
}

fn poly_mul_gf2(a: &[u8], b: u64) -> Vec<u8> {
    let deg_b = 63 - b.leading_zeros() as usize;
    let mut out = vec![0u8; a.len() + deg_b];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for j in 0..=deg_b {
            out[i + j] ^= (b >> j & 1) as u8;
        }
    }
    out
}

fn sym_diff(a: &Flips, b: &Flips) -> Flips {
    let mut out: Flips = a.iter().copied().filter(|p| !b.contains(p)).collect();
    out.extend(b.iter().copied().filter(|p| !a.contains(p)));
    out
}
