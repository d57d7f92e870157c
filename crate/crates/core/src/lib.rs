//! Iterative algebraic decoding of binary product codes.
//!
//! The crate provides extended-BCH component codes with bounded distance,
//! error-erasure and GMD decoding, a family of iterative product decoders
//! (iBDD, anchor decoding, iBDD-SR, iGMDD-SR, genie-aided iBDD), a
//! Chase–Pyndiah turbo product decoder, and a bi-AWGN Monte Carlo harness.

pub mod bch;
pub mod channel;
pub mod error;
pub mod gf;
pub mod gmd;
pub mod harness;
pub mod product;
pub mod tpd;

pub use error::Error;
