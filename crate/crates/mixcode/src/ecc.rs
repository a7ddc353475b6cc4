//! Systematic binary linear block codes with bounded-distance syndrome
//! decoding. The decoder reports failure instead of guessing, so an ARQ
//! layer above it can ask for retransmission.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::gf2::{vec_mat_mul, BitMatrix, BitVec};

/// Largest supported number of parity bits; the syndrome table has
/// `2^(n-m)` entries and is enumerated exhaustively.
pub const MAX_PARITY_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The generator is not `[I | R]`: no identity block in the first
    /// `m` columns.
    NotSystematic,
    /// `n - m` exceeds [`MAX_PARITY_BITS`]; the syndrome table would not
    /// fit in memory.
    SyndromeSpaceTooLarge { parity_bits: usize },
    /// Received word whose syndrome has no correctable coset leader.
    DecodeFailure,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSystematic => write!(f, "generator is not in systematic form"),
            Error::SyndromeSpaceTooLarge { parity_bits } => write!(
                f,
                "{parity_bits} parity bits exceed the {MAX_PARITY_BITS}-bit syndrome table cap"
            ),
            Error::DecodeFailure => write!(f, "syndrome outside the correctable range"),
        }
    }
}

impl core::error::Error for Error {}

/// A systematic (m, n) binary linear block code with a full coset-leader
/// table for syndrome decoding.
#[derive(Clone, Debug)]
pub struct LinearBlockCode {
    m: usize,
    n: usize,
    generator: BitMatrix,
    parity_check: BitMatrix,
    /// Minimal-weight error pattern per syndrome, indexed by the syndrome
    /// packed big-endian.
    syndrome_table: Vec<BitVec>,
    t_capability: usize,
}

impl LinearBlockCode {
    /// The (7, 4) Hamming code in systematic form.
    pub fn hamming_7_4() -> Self {
        let generator = BitMatrix::from_rows(vec![
            "1000110".parse().unwrap(),
            "0100101".parse().unwrap(),
            "0010011".parse().unwrap(),
            "0001111".parse().unwrap(),
        ]);
        Self::from_generator(generator).expect("hamming(7,4) generator is systematic")
    }

    /// Assembles the code whose systematic generator is
    /// `[[I, 0, P], [0, I, Q]]`, i.e. `P` stacked on `Q` as the parity
    /// block next to an identity.
    ///
    /// # Panics
    ///
    /// Panics unless `p_block` and `q_block` have the same column count.
    pub fn from_systematic_parity(p_block: &BitMatrix, q_block: &BitMatrix) -> Result<Self, Error> {
        assert_eq!(p_block.cols(), q_block.cols(), "parity block column mismatch");
        let m = p_block.rows() + q_block.rows();
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut e = BitVec::zeros(m);
            e.set(i, true);
            let tail = if i < p_block.rows() {
                p_block.row(i)
            } else {
                q_block.row(i - p_block.rows())
            };
            rows.push(e.concat(tail));
        }
        Self::from_generator(BitMatrix::from_rows(rows))
    }

    /// Builds a code from a systematic generator `[I | R]`, deriving the
    /// parity-check matrix `[R^T | I]` and the coset-leader table.
    pub fn from_generator(generator: BitMatrix) -> Result<Self, Error> {
        let m = generator.rows();
        let n = generator.cols();
        assert!(m <= n, "generator wider than tall required");
        for i in 0..m {
            for j in 0..m {
                if generator.get(i, j) != (i == j) {
                    return Err(Error::NotSystematic);
                }
            }
        }
        let parity_bits = n - m;
        if parity_bits > MAX_PARITY_BITS {
            return Err(Error::SyndromeSpaceTooLarge { parity_bits });
        }

        // H = [R^T | I], so G * H^T = R + R = 0.
        let mut h_rows = Vec::with_capacity(parity_bits);
        for j in 0..parity_bits {
            let mut row = BitVec::zeros(n);
            for i in 0..m {
                row.set(i, generator.get(i, m + j));
            }
            row.set(m + j, true);
            h_rows.push(row);
        }
        let parity_check = if parity_bits == 0 {
            BitMatrix::zeros(0, n)
        } else {
            BitMatrix::from_rows(h_rows)
        };

        let (syndrome_table, t_capability) = build_coset_leaders(&parity_check, n);
        Ok(Self {
            m,
            n,
            generator,
            parity_check,
            syndrome_table,
            t_capability,
        })
    }

    pub fn message_len(&self) -> usize {
        self.m
    }

    pub fn codeword_len(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// Error weight up to which decoding is guaranteed correct.
    pub fn t_capability(&self) -> usize {
        self.t_capability
    }

    /// Encodes `msg` as `msg * G`.
    ///
    /// # Panics
    ///
    /// Panics unless `msg.len() == m`.
    pub fn encode(&self, msg: &BitVec) -> BitVec {
        assert_eq!(msg.len(), self.m, "message length mismatch");
        vec_mat_mul(msg, &self.generator)
    }

    /// Bounded-distance decoding: corrects the minimal-weight error pattern
    /// for the received syndrome and returns the message together with the
    /// corrected weight. Fails when that pattern is heavier than
    /// [`t_capability`](Self::t_capability), signalling the caller to NACK.
    ///
    /// # Panics
    ///
    /// Panics unless `word.len() == n`.
    pub fn decode(&self, word: &BitVec) -> Result<(BitVec, usize), Error> {
        assert_eq!(word.len(), self.n, "word length mismatch");
        if self.n == self.m {
            return Ok((word.clone(), 0));
        }
        let syndrome = self.syndrome_of(word);
        let leader = &self.syndrome_table[syndrome.to_u64_be() as usize];
        let weight = leader.weight();
        if weight > self.t_capability {
            return Err(Error::DecodeFailure);
        }
        let mut corrected = word.clone();
        corrected.xor_assign(leader);
        Ok((corrected.slice(0..self.m), weight))
    }

    /// `word * H^T`.
    pub fn syndrome_of(&self, word: &BitVec) -> BitVec {
        let mut s = BitVec::zeros(self.parity_check.rows());
        for j in 0..self.parity_check.rows() {
            s.set(j, self.parity_check.row(j).dot(word));
        }
        s
    }
}

/// Enumerates error patterns by increasing weight, first-writer-wins per
/// syndrome, until every syndrome has a leader. Returns the table and the
/// largest weight `t` such that no two patterns of weight <= `t` collide.
fn build_coset_leaders(parity_check: &BitMatrix, n: usize) -> (Vec<BitVec>, usize) {
    let parity_bits = parity_check.rows();
    let table_len = 1usize << parity_bits;
    let mut table: Vec<Option<BitVec>> = vec![None; table_len];
    let mut filled = 0usize;
    let mut t_capability = 0usize;
    let mut collision_seen = false;

    let mut pattern = BitVec::zeros(n);
    table[0] = Some(pattern.clone());
    filled += 1;

    for weight in 1..=n {
        if filled == table_len || collision_seen {
            break;
        }
        let mut support: Vec<usize> = (0..weight).collect();
        loop {
            pattern = BitVec::zeros(n);
            for &i in &support {
                pattern.set(i, true);
            }
            let mut syndrome = BitVec::zeros(parity_bits);
            for j in 0..parity_bits {
                syndrome.set(j, parity_check.row(j).dot(&pattern));
            }
            let idx = syndrome.to_u64_be() as usize;
            if table[idx].is_none() {
                table[idx] = Some(pattern.clone());
                filled += 1;
            } else {
                collision_seen = true;
            }
            if !next_combination(&mut support, n) {
                break;
            }
        }
        if !collision_seen {
            t_capability = weight;
        }
    }

    // Any still-unfilled syndromes (possible only when enumeration stopped
    // at a collision weight) get leaders by continuing the sweep; they are
    // beyond t_capability and only matter for reporting failure weight.
    if filled < table_len {
        'outer: for weight in 1..=n {
            let mut support: Vec<usize> = (0..weight).collect();
            loop {
                let mut pattern = BitVec::zeros(n);
                for &i in &support {
                    pattern.set(i, true);
                }
                let mut syndrome = BitVec::zeros(parity_bits);
                for j in 0..parity_bits {
                    syndrome.set(j, parity_check.row(j).dot(&pattern));
                }
                let idx = syndrome.to_u64_be() as usize;
                if table[idx].is_none() {
                    table[idx] = Some(pattern);
                    filled += 1;
                    if filled == table_len {
                        break 'outer;
                    }
                }
                if !next_combination(&mut support, n) {
                    break;
                }
            }
        }
    }

    let table = table
        .into_iter()
        .map(|e| e.expect("full-rank parity check reaches every syndrome"))
        .collect();
    (table, t_capability)
}

/// Advances `support` to the next k-combination of `0..n` in lexicographic
/// order; returns false after the last one.
fn next_combination(support: &mut [usize], n: usize) -> bool {
    let k = support.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    loop {
        if i == 0 {
            return false;
        }
        i -= 1;
        if support[i] != i + n - k {
            break;
        }
    }
    support[i] += 1;
    for j in i + 1..k {
        support[j] = support[j - 1] + 1;
    }
    true
}
