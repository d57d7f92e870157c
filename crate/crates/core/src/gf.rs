//! Table-driven arithmetic over GF(2^m), 2 ≤ m ≤ 10.
//!
//! Elements are stored as `u16` in polynomial basis: bit `i` is the
//! coefficient of `x^i`. Addition is XOR; multiplication goes through the
//! log/antilog tables built from a primitive polynomial.

use crate::error::Error;

/// Element of GF(2^m) in polynomial basis. Always `< 2^m`.
pub type FieldElement = u16;

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 10;

/// Default primitive polynomials indexed by degree, bit-packed (bit m set).
const DEFAULT_POLYS: [u32; 11] =
    [0, 0, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10001001, 0b1_0001_1101, 0b10_0001_0001, 0b100_0000_1001];

/// A finite field GF(2^m) together with its log/antilog tables.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    m: u32,
    primitive_poly: u32,
    /// `log[x]` for nonzero `x`; `log[0]` is unused.
    log: Vec<u16>,
    /// `exp[i] = α^i` for `0 ≤ i < 2·order`, doubled so products need no reduction.
    exp: Vec<FieldElement>,
}

impl FieldSpec {
    /// Builds GF(2^m) from a bit-packed primitive polynomial of degree `m`.
    pub fn new(m: u32, primitive_poly: u32) -> Result<Self, Error> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&m) {
            return Err(Error::UnsupportedParameters(format!(
                "field degree m={m} outside [{MIN_DEGREE}, {MAX_DEGREE}]"
            )));
        }
        if primitive_poly >> m != 1 {
            return Err(Error::UnsupportedParameters(format!(
                "polynomial {primitive_poly:#b} does not have degree {m}"
            )));
        }
        let size = 1usize << m;
        let order = size - 1;
        let mut exp = vec![0u16; 2 * order];
        let mut log = vec![0u16; size];
        let mut seen = vec![false; size];
        let mut x: u32 = 1;
        for i in 0..order {
            if seen[x as usize] {
                // α returned to an earlier power before visiting every element.
                return Err(Error::NotPrimitive { poly: primitive_poly, orbit: i });
            }
            seen[x as usize] = true;
            exp[i] = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive_poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive { poly: primitive_poly, orbit: order });
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, primitive_poly, log, exp })
    }

    /// GF(2^m) with the conventional primitive polynomial for that degree
    /// (`x^8+x^4+x^3+x^2+1` for m = 8).
    pub fn with_default_poly(m: u32) -> Result<Self, Error> {
        let poly = DEFAULT_POLYS.get(m as usize).copied().unwrap_or(0);
        Self::new(m, poly)
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of field elements, 2^m.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Order of the multiplicative group, 2^m − 1.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, Error> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a as usize] as usize;
        Ok(self.exp[(self.order() - l) % self.order()])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, Error> {
        if b == 0 {
            return Err(Error::DivisionByZero);
        }
        if a == 0 {
            return Ok(0);
        }
        let order = self.order();
        let l = self.log[a as usize] as usize + order - self.log[b as usize] as usize;
        Ok(self.exp[l % order])
    }

    /// α^e for any integer exponent (reduced mod 2^m − 1).
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> FieldElement {
        let order = self.order() as i64;
        self.exp[e.rem_euclid(order) as usize]
    }

    /// a^e; `0^0` is taken to be 1.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.order() as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// Discrete log of a nonzero element.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize] as usize)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Carry-less product reduced modulo the primitive polynomial. Independent
    /// of the tables; used as a cross-check.
    pub fn mul_slow(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let mut acc: u32 = 0;
        let (a, b) = (a as u32, b as u32);
        for i in 0..self.m {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for bit in (self.m..2 * self.m).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= self.primitive_poly << (bit - self.m);
            }
        }
        acc as FieldElement
    }

    /// Minimal polynomial of `β` over GF(2), bit-packed.
    pub fn minimal_poly(&self, beta: FieldElement) -> u64 {
        // Conjugacy class of β: β, β², β⁴, ...
        let mut conj = vec![beta];
        let mut c = self.square(beta);
        while c != beta {
            conj.push(c);
            c = self.square(c);
        }
        // Product of (x + β_i) with coefficients in GF(2^m); they collapse to GF(2).
        let mut coeffs: Vec<FieldElement> = vec![1];
        for &root in &conj {
            let mut next = vec![0; coeffs.len() + 1];
            for (i, &ci) in coeffs.iter().enumerate() {
                next[i + 1] ^= ci;
                next[i] ^= self.mul(ci, root);
            }
            coeffs = next;
        }
        coeffs.iter().enumerate().fold(0u64, |acc, (i, &c)| {
            debug_assert!(c <= 1);
            acc | ((c as u64 & 1) << i)
        })
    }
}
