//! Chosen-plaintext key recovery. With all-zero plaintext, each received
//! word gives n linear equations in the key and that block's randomness.
//! Eliminating the randomness block by block leaves equations in the key
//! alone, each the XOR of several noisy originals, i.e. an LPN instance
//! whose noise rate grows with the number of equations folded together.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use rand_core::SeedableRng;

use crate::channel::{bernoulli, TransmissionRecord};
use crate::gf2::{BitMatrix, BitVec};

/// Brute-force key search is capped at 2^24 candidates.
pub const MAX_BRUTE_FORCE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The sample set is unusable; the string says why.
    Transcript { problem: &'static str },
    /// Key length beyond [`MAX_BRUTE_FORCE_BITS`].
    TooLarge { n: usize },
    /// No equations to score candidates against.
    EmptyInstance,
    Parse { line: usize, problem: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Transcript { problem } => write!(f, "bad transcript: {problem}"),
            Error::TooLarge { n } => {
                write!(f, "{n}-bit key exceeds the {MAX_BRUTE_FORCE_BITS}-bit search cap")
            }
            Error::EmptyInstance => write!(f, "instance has no equations"),
            Error::Parse { line, problem } => write!(f, "LPN CSV line {line}: {problem}"),
        }
    }
}

impl core::error::Error for Error {}

/// Everything the eavesdropper has: the received words of a zero-plaintext
/// session plus the public system description.
#[derive(Debug, Clone)]
pub struct CpaTranscript {
    z_samples: Vec<BitVec>,
    g: BitMatrix,
    s: BitMatrix,
    p: f64,
    tau: usize,
}

impl CpaTranscript {
    /// `z_samples[i]` is the word received at block index `t = i + 1`.
    pub fn new(
        z_samples: Vec<BitVec>,
        g: BitMatrix,
        s: BitMatrix,
        p: f64,
    ) -> Result<Self, Error> {
        let n = s.rows();
        if s.cols() != n {
            return Err(Error::Transcript { problem: "state matrix must be square" });
        }
        if g.cols() != n || g.rows() == 0 || g.rows() >= n {
            return Err(Error::Transcript { problem: "G must be m x n with 0 < m < n" });
        }
        if !(0.0..0.5).contains(&p) {
            return Err(Error::Transcript { problem: "p must lie in [0, 0.5)" });
        }
        if z_samples.iter().any(|z| z.len() != n) {
            return Err(Error::Transcript { problem: "sample length must equal n" });
        }
        let tau = z_samples.len();
        Ok(Self { z_samples, g, s, p, tau })
    }

    /// Builds the eavesdropper's view from session records. The records
    /// must carry all-zero plaintext and serial block indices: the attack
    /// model assumes it knows which power of S masked each sample.
    pub fn from_records(
        records: &[TransmissionRecord],
        g: BitMatrix,
        s: BitMatrix,
        p: f64,
    ) -> Result<Self, Error> {
        let mut z_samples = Vec::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if !r.a.is_zero() {
                return Err(Error::Transcript {
                    problem: "plaintext must be all-zero (chosen-plaintext mode)",
                });
            }
            if r.t != i as u64 + 1 {
                return Err(Error::Transcript { problem: "block indices must be serial from 1" });
            }
            z_samples.push(r.z.clone());
        }
        Self::new(z_samples, g, s, p)
    }

    pub fn z_samples(&self) -> &[BitVec] {
        &self.z_samples
    }

    pub fn g(&self) -> &BitMatrix {
        &self.g
    }

    pub fn s(&self) -> &BitMatrix {
        &self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tau(&self) -> usize {
        self.tau
    }
}

/// A learning-parity-with-noise instance over the n-bit key: equations
/// `<key | rows[j]> = rhs[j]`, each wrong with probability at least
/// `epsilon_bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpnInstance {
    pub rows: Vec<BitVec>,
    pub rhs: BitVec,
    /// How many original (single-noise-bit) equations were XORed together
    /// to produce each row.
    pub combo_weights: Vec<usize>,
    /// Noise lower bound from the lightest fold actually produced.
    pub epsilon_bound: f64,
    /// Key length.
    pub n: usize,
    /// Samples the instance was distilled from.
    pub tau: usize,
    /// Block indices whose randomness block had unexpected rank; their
    /// equations are kept but the per-sample equation count is off.
    pub degenerate_ts: Vec<u64>,
}

/// The amplified noise rate after folding `w + 1` equations, each carrying
/// independent Bernoulli(p) noise: `(1 - (1-2p)^(w+1)) / 2`.
///
/// # Panics
///
/// Panics unless `0 <= p < 0.5`.
pub fn noise_lower_bound(p: f64, w: usize) -> f64 {
    assert!((0.0..0.5).contains(&p), "crossover probability out of range");
    let mut q = 1.0;
    for _ in 0..=w {
        q *= 1.0 - 2.0 * p;
    }
    (1.0 - q) / 2.0
}

/// Monte-Carlo estimate of Pr(XOR of `fold` independent Bernoulli(p) bits
/// is 1); the sampling oracle behind [`noise_lower_bound`].
///
/// # Panics
///
/// Panics unless `fold >= 1` and `trials >= 1`.
pub fn xor_fold_estimate(p: f64, fold: usize, trials: usize, seed: u64) -> f64 {
    assert!(fold >= 1, "fold must be positive");
    assert!(trials >= 1, "trials must be positive");
    assert!((0.0..0.5).contains(&p), "crossover probability out of range");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut ones = 0usize;
    for _ in 0..trials {
        let mut acc = false;
        for _ in 0..fold {
            acc ^= bernoulli(&mut rng, p);
        }
        if acc {
            ones += 1;
        }
    }
    ones as f64 / trials as f64
}

/// Distills the transcript into an LPN instance on the key.
///
/// Per sample t: codeword bit j contributes the equation
/// `<u | G*_j> + <k | S^t_j> = z_j` over the m−ℓ randomness bits and the
/// key, where `G*_j` is column j of the last m−ℓ rows of G. Eliminating
/// the randomness columns leaves n−m+ℓ equations in the key alone; the
/// right-hand sides fold the same z-bits the row operations folded.
///
/// # Panics
///
/// Panics unless `1 <= l < m`.
pub fn eliminate_randomness(transcript: &CpaTranscript, l: usize) -> LpnInstance {
    let n = transcript.s.rows();
    let m = transcript.g.rows();
    assert!(l >= 1 && l < m, "l must satisfy 1 <= l < m");
    let r = m - l;

    let mut rows = Vec::new();
    let mut rhs = BitVec::zeros(0);
    let mut combo_weights = Vec::new();
    let mut degenerate_ts = Vec::new();

    let mut s_pow = transcript.s.clone();
    for (idx, z) in transcript.z_samples.iter().enumerate() {
        if idx > 0 {
            s_pow = s_pow.mat_mul(&transcript.s);
        }
        let mut sys_rows = Vec::with_capacity(n);
        for j in 0..n {
            let mut row = BitVec::zeros(r + n);
            for i in 0..r {
                row.set(i, transcript.g.get(l + i, j));
            }
            for i in 0..n {
                row.set(r + i, s_pow.get(i, j));
            }
            sys_rows.push(row);
        }
        let system = BitMatrix::from_rows(sys_rows);
        let eliminate_cols: Vec<usize> = (0..r).collect();
        let (reduced, record) = system.eliminate(&eliminate_cols);
        if record.eliminated_count != r {
            degenerate_ts.push(idx as u64 + 1);
        }
        for (j, mask) in record.row_ops.iter().enumerate() {
            rows.push(reduced.row(j).slice(r..r + n));
            rhs.push(mask.dot(z));
            combo_weights.push(mask.weight());
        }
    }

    let w_effective = combo_weights.iter().copied().min().map_or(0, |c| c - 1);
    LpnInstance {
        rows,
        rhs,
        combo_weights,
        epsilon_bound: noise_lower_bound(transcript.p, w_effective),
        n,
        tau: transcript.tau,
        degenerate_ts,
    }
}

/// Fraction of equations the true key fails to satisfy; 0.0 on an empty
/// instance. Diagnostic only: a real attacker has no key to test.
pub fn empirical_noise(instance: &LpnInstance, true_key: &BitVec) -> f64 {
    if instance.rows.is_empty() {
        return 0.0;
    }
    let wrong = instance
        .rows
        .iter()
        .enumerate()
        .filter(|(j, row)| true_key.dot(row) != instance.rhs.get(*j))
        .count();
    wrong as f64 / instance.rows.len() as f64
}

/// Scores every candidate key against all equations and returns the one
/// satisfying the most, with its agreement fraction. Ties break to the
/// lexicographically smallest key.
pub fn brute_force_recover(instance: &LpnInstance) -> Result<(BitVec, f64), Error> {
    let n = instance.n;
    if n > MAX_BRUTE_FORCE_BITS {
        return Err(Error::TooLarge { n });
    }
    if instance.rows.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let equations: Vec<(u64, u64)> = instance
        .rows
        .iter()
        .enumerate()
        .map(|(j, row)| (row.to_u64_be(), instance.rhs.get(j) as u64))
        .collect();

    let mut best: Option<(u64, usize)> = None;
    for candidate in 0..1u64 << n {
        let mut satisfied = 0usize;
        for &(row, d) in &equations {
            if ((candidate & row).count_ones() as u64 & 1) == d {
                satisfied += 1;
            }
        }
        if best.map_or(true, |(_, s)| satisfied > s) {
            best = Some((candidate, satisfied));
        }
    }
    let (key, satisfied) = best.expect("candidate space is non-empty");
    Ok((
        BitVec::from_u64_be(key, n),
        satisfied as f64 / equations.len() as f64,
    ))
}

impl LpnInstance {
    /// CSV export: a header with the instance parameters, then one line
    /// per equation as `<coefficient bits>,<rhs>,<combo_weight>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "n={},epsilon={},tau={},rows={}",
            self.n,
            self.epsilon_bound,
            self.tau,
            self.rows.len()
        )
        .unwrap();
        for (j, row) in self.rows.iter().enumerate() {
            writeln!(out, "{},{},{}", row, self.rhs.get(j) as u8, self.combo_weights[j]).unwrap();
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output. Degeneracy flags are not
    /// part of the schema and come back empty.
    pub fn from_csv(text: &str) -> Result<Self, Error> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, problem: "empty file" })?;

        let (mut n, mut epsilon, mut tau, mut declared) = (None, None, None, None);
        for token in header.split(',') {
            let (key, value) = token
                .split_once('=')
                .ok_or(Error::Parse { line: 1, problem: "malformed header token" })?;
            match key.trim() {
                "n" => n = value.parse().ok(),
                "epsilon" => epsilon = value.parse().ok(),
                "tau" => tau = value.parse().ok(),
                "rows" => declared = value.parse().ok(),
                _ => return Err(Error::Parse { line: 1, problem: "unknown header key" }),
            }
        }
        let n: usize = n.ok_or(Error::Parse { line: 1, problem: "header missing or bad n" })?;
        let epsilon: f64 =
            epsilon.ok_or(Error::Parse { line: 1, problem: "header missing or bad epsilon" })?;
        let tau: usize =
            tau.ok_or(Error::Parse { line: 1, problem: "header missing or bad tau" })?;
        let declared: usize =
            declared.ok_or(Error::Parse { line: 1, problem: "header missing or bad rows" })?;

        let mut rows = Vec::with_capacity(declared);
        let mut rhs = BitVec::zeros(0);
        let mut combo_weights = Vec::with_capacity(declared);
        for (i, line) in lines {
            let line_no = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fail = |problem| Error::Parse { line: line_no, problem };
            let mut fields = line.split(',');
            let bits = fields.next().ok_or(fail("missing coefficients"))?;
            let d = fields.next().ok_or(fail("missing rhs"))?;
            let weight = fields.next().ok_or(fail("missing combo_weight"))?;
            if fields.next().is_some() {
                return Err(fail("too many fields"));
            }
            let row: BitVec = bits.parse().map_err(|_| fail("bad coefficient bits"))?;
            if row.len() != n {
                return Err(fail("coefficient count differs from header n"));
            }
            rows.push(row);
            rhs.push(match d {
                "0" => false,
                "1" => true,
                _ => return Err(fail("rhs must be 0 or 1")),
            });
            combo_weights.push(weight.parse().map_err(|_| fail("bad combo_weight"))?);
        }
        if rows.len() != declared {
            return Err(Error::Parse { line: 1, problem: "row count differs from header" });
        }
        Ok(Self {
            rows,
            rhs,
            combo_weights,
            epsilon_bound: epsilon,
            n,
            tau,
            degenerate_ts: Vec::new(),
        })
    }
}
