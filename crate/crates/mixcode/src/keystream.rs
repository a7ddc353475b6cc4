//! Linearized keystream generator: block t of the pad is k·Sᵗ for a fixed
//! public n×n matrix S and secret key k. Consecutive blocks are computed
//! incrementally, one matrix multiply per step.

use alloc::vec::Vec;
use core::fmt;

use rand_core::{RngCore, SeedableRng};

use crate::gf2::{vec_mat_mul, BitMatrix, BitVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    NotSquare,
    KeyLengthMismatch { key: usize, state: usize },
    /// A singular S collapses the keystream into a shrinking subspace.
    Singular,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare => write!(f, "state matrix must be square"),
            Error::KeyLengthMismatch { key, state } => {
                write!(f, "key length {key} does not match state dimension {state}")
            }
            Error::Singular => write!(f, "state matrix must be invertible"),
        }
    }
}

impl core::error::Error for Error {}

/// Keystream state: the matrix `S`, the key, a memo of the last power of
/// `S`, and the next unused block index. One instance per session; clones
/// are independent.
#[derive(Debug, Clone)]
pub struct LinearKeystream {
    s: BitMatrix,
    key: BitVec,
    cached_power: Option<(u64, BitMatrix)>,
    next_t: u64,
}

impl LinearKeystream {
    pub fn new(s: BitMatrix, key: BitVec) -> Result<Self, Error> {
        if s.rows() != s.cols() {
            return Err(Error::NotSquare);
        }
        if key.len() != s.rows() {
            return Err(Error::KeyLengthMismatch { key: key.len(), state: s.rows() });
        }
        if s.rank() != s.rows() {
            return Err(Error::Singular);
        }
        Ok(Self { s, key, cached_power: None, next_t: 1 })
    }

    pub fn s(&self) -> &BitMatrix {
        &self.s
    }

    pub fn key(&self) -> &BitVec {
        &self.key
    }

    /// Hands out the next unused block index, starting at 1. Every
    /// physical transmission consumes one index; none is ever reused.
    pub fn next_index(&mut self) -> u64 {
        let t = self.next_t;
        self.next_t += 1;
        t
    }

    /// `k · Sᵗ`.
    ///
    /// # Panics
    ///
    /// Panics when `t == 0`.
    pub fn keystream_at(&mut self, t: u64) -> BitVec {
        vec_mat_mul(&self.key.clone(), self.power(t))
    }

    /// The columns of `Sᵗ`; column i is the coefficient vector of the key
    /// in keystream bit i.
    ///
    /// # Panics
    ///
    /// Panics when `t == 0`.
    pub fn state_columns(&mut self, t: u64) -> Vec<BitVec> {
        let p = self.power(t);
        (0..p.cols()).map(|j| p.column(j)).collect()
    }

    /// Computes `Sᵗ`, stepping forward from the memo when `t` is at or
    /// past it and restarting from `S` otherwise.
    fn power(&mut self, t: u64) -> &BitMatrix {
        assert!(t >= 1, "block index starts at 1");
        let restart = match &self.cached_power {
            Some((cached_t, _)) => *cached_t > t,
            None => true,
        };
        if restart {
            self.cached_power = Some((1, self.s.clone()));
        }
        let (mut cur_t, mut cur) = self.cached_power.take().unwrap();
        while cur_t < t {
            cur = cur.mat_mul(&self.s);
            cur_t += 1;
        }
        self.cached_power = Some((cur_t, cur));
        &self.cached_power.as_ref().unwrap().1
    }
}

/// Deterministically generates an invertible n×n matrix from `seed` by
/// composing random row swaps and row additions on the identity.
///
/// # Panics
///
/// Panics when `n == 0`.
pub fn random_state_matrix(n: usize, seed: u64) -> BitMatrix {
    assert!(n >= 1, "state dimension must be positive");
    let mut m = BitMatrix::identity(n);
    if n == 1 {
        return m;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2 * n * n {
        let i = (rng.next_u32() as usize) % n;
        let mut j = (rng.next_u32() as usize) % n;
        while j == i {
            j = (rng.next_u32() as usize) % n;
        }
        if rng.next_u32() & 1 == 0 {
            m.swap_rows(i, j);
        } else {
            let src = m.row(j).clone();
            let mut dst = m.row(i).clone();
            dst.xor_assign(&src);
            m.set_row(i, dst);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_matrix_is_deterministic_and_invertible() {
        for seed in 0..100 {
            let m = random_state_matrix(7, seed);
            assert_eq!(m, random_state_matrix(7, seed));
            assert_eq!(m.rank(), 7, "seed {seed}");
        }
    }

    #[test]
    fn one_dimensional_state_is_the_unit() {
        assert_eq!(random_state_matrix(1, 42), BitMatrix::identity(1));
    }

    #[test]
    fn identity_state_repeats_the_key() {
        let key: BitVec = "1010101".parse().unwrap();
        let mut ks = LinearKeystream::new(BitMatrix::identity(7), key.clone()).unwrap();
        for t in 1..=5 {
            assert_eq!(ks.keystream_at(t), key);
        }
    }

    #[test]
    fn zero_key_gives_zero_stream() {
        let mut ks =
            LinearKeystream::new(random_state_matrix(7, 3), BitVec::zeros(7)).unwrap();
        for t in 1..=5 {
            assert!(ks.keystream_at(t).is_zero());
        }
    }

    #[test]
    fn third_block_matches_stepwise_products() {
        let s = random_state_matrix(7, 9);
        let key: BitVec = "1100101".parse().unwrap();
        let mut ks = LinearKeystream::new(s.clone(), key.clone()).unwrap();
        let expected = vec_mat_mul(&vec_mat_mul(&vec_mat_mul(&key, &s), &s), &s);
        assert_eq!(ks.keystream_at(3), expected);
    }

    #[test]
    fn recurrence_holds_over_a_long_run() {
        let s = random_state_matrix(5, 21);
        let key: BitVec = "10111".parse().unwrap();
        let mut ks = LinearKeystream::new(s.clone(), key).unwrap();
        let mut prev = ks.keystream_at(1);
        for t in 2..=100 {
            let next = ks.keystream_at(t);
            assert_eq!(next, vec_mat_mul(&prev, &s), "t={t}");
            prev = next;
        }
    }

    #[test]
    fn state_columns_reassemble_the_stream() {
        let s = random_state_matrix(6, 5);
        let key: BitVec = "011010".parse().unwrap();
        let mut ks = LinearKeystream::new(s.clone(), key.clone()).unwrap();
        for t in [1, 2, 7] {
            let cols = ks.state_columns(t);
            let stream = ks.keystream_at(t);
            assert_eq!(cols.len(), 6);
            for (i, col) in cols.iter().enumerate() {
                assert_eq!(key.dot(col), stream.get(i), "t={t} bit {i}");
            }
        }
        assert_eq!(ks.state_columns(1), (0..6).map(|j| s.column(j)).collect::<Vec<_>>());
    }

    #[test]
    fn memo_survives_rewinds() {
        let s = random_state_matrix(6, 17);
        let key: BitVec = "111001".parse().unwrap();
        let mut fresh = LinearKeystream::new(s.clone(), key.clone()).unwrap();
        let expected: Vec<BitVec> = (1..=8).map(|t| fresh.keystream_at(t)).collect();

        let mut ks = LinearKeystream::new(s, key).unwrap();
        for (t, want) in [(3u64, 2usize), (4, 3), (1, 0), (8, 7), (8, 7), (2, 1)] {
            assert_eq!(ks.keystream_at(t), expected[want], "t={t}");
        }
    }

    #[test]
    fn indices_are_sequential() {
        let mut ks = LinearKeystream::new(BitMatrix::identity(3), BitVec::zeros(3)).unwrap();
        assert_eq!(ks.next_index(), 1);
        assert_eq!(ks.next_index(), 2);
        assert_eq!(ks.next_index(), 3);
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        let singular = BitMatrix::zeros(3, 3);
        assert_eq!(
            LinearKeystream::new(singular, BitVec::zeros(3)).unwrap_err(),
            Error::Singular
        );
        assert_eq!(
            LinearKeystream::new(BitMatrix::identity(3), BitVec::zeros(4)).unwrap_err(),
            Error::KeyLengthMismatch { key: 4, state: 3 }
        );
        assert_eq!(
            LinearKeystream::new(BitMatrix::zeros(2, 3), BitVec::zeros(2)).unwrap_err(),
            Error::NotSquare
        );
    }
}
