//! Homophonic coding over GF(2) for systems that encode for error
//! correction first and encrypt with a stream cipher second.
//!
//! The crate provides the building blocks of that pipeline and of its
//! cryptanalysis:
//!
//! - [`gf2`]: dense bit-packed vectors/matrices, inversion, rank, and a
//!   replayable Gaussian-elimination engine;
//! - [`ecc`]: systematic linear block codes with syndrome decoding;
//! - [`homophonic`]: the invertible randomized encoder that mixes random
//!   bits into every transmitted block, plus its design-criteria validator;
//! - [`keystream`]: the linearized keystream generator `x(t) = k * S^t`;
//! - [`channel`]: end-to-end transmitter/BSC/receiver simulation with ARQ;
//! - [`attack`]: the chosen-plaintext reduction of key recovery to LPN,
//!   noise-bound estimation, and brute-force recovery at small key sizes.
//!
//! Everything is `no_std` (with `alloc`); file formats are string-based so
//! IO stays in the caller.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod attack;
pub mod channel;
pub mod ecc;
pub mod gf2;
pub mod homophonic;
pub mod keystream;

pub use gf2::{BitMatrix, BitVec};
