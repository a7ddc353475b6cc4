//! Binary symmetric channel and the ARQ transmission loop: homophonic
//! encode, ECC encode, keystream XOR, noisy channel, receiver decode,
//! ACK/NACK. A passive eavesdropper sees every physical transmission,
//! including retransmitted blocks, so all attempts are recorded.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use rand_core::{RngCore, SeedableRng};

use crate::ecc::LinearBlockCode;
use crate::gf2::BitVec;
use crate::homophonic::{HomophonicCode, SystemParams};
use crate::keystream::LinearKeystream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A block was never acknowledged within the retry budget.
    RetryExhausted { block: usize, attempts: usize },
    Parse { line: usize, problem: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RetryExhausted { block, attempts } => {
                write!(f, "block {block} not acknowledged after {attempts} attempts")
            }
            Error::Parse { line, problem } => write!(f, "record file line {line}: {problem}"),
        }
    }
}

impl core::error::Error for Error {}

/// Where each block's plaintext comes from. `Zero` is the chosen-plaintext
/// setting: the attacker knows a = 0 for every block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaintextSource {
    Zero,
    Random,
}

impl fmt::Display for PlaintextSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlaintextSource::Zero => "zero",
            PlaintextSource::Random => "random",
        })
    }
}

impl core::str::FromStr for PlaintextSource {
    type Err = &'static str;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zero" => Ok(PlaintextSource::Zero),
            "random" => Ok(PlaintextSource::Random),
            _ => Err("plaintext source must be `zero` or `random`"),
        }
    }
}

/// One physical transmission: everything both endpoints and the
/// eavesdropper could log about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionRecord {
    /// Keystream block index; unique per physical transmission.
    pub t: u64,
    pub a: BitVec,
    pub u: BitVec,
    /// What the transmitter put on the wire.
    pub y: BitVec,
    /// Channel noise, so z = y ⊕ v.
    pub v: BitVec,
    /// What the receiver (and the eavesdropper) saw.
    pub z: BitVec,
    /// Whether the receiver recovered exactly the transmitted plaintext.
    pub ack: bool,
    /// 1-based attempt ordinal within this record's block.
    pub attempts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionConfig {
    pub params: SystemParams,
    pub seed: u64,
    /// Number of acknowledged blocks to deliver.
    pub tau: usize,
    /// Maximum attempts per block before the session aborts.
    pub max_retries: usize,
    pub plaintext_source: PlaintextSource,
}

/// Session metadata carried in the record file header; enough to replay
/// the session or to mount the chosen-plaintext attack on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SessionMeta {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub mode: PlaintextSource,
}

/// Flips each bit of `word` independently with probability `p`; returns
/// the flipped word and the noise pattern.
///
/// # Panics
///
/// Panics unless `0 <= p < 0.5`.
pub fn bsc(word: &BitVec, p: f64, rng: &mut impl RngCore) -> (BitVec, BitVec) {
    assert!((0.0..0.5).contains(&p), "crossover probability out of range");
    let mut noise = BitVec::zeros(word.len());
    for i in 0..word.len() {
        noise.set(i, bernoulli(rng, p));
    }
    let mut out = word.clone();
    out.xor_assign(&noise);
    (out, noise)
}

/// One draw with success probability `p`, burning exactly one `u64`.
pub(crate) fn bernoulli(rng: &mut impl RngCore, p: f64) -> bool {
    ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) < p
}

/// Encodes one block: draws fresh randomness `u`, claims the next
/// keystream index, and returns the wire word `y` together with `u` and
/// the index used.
///
/// # Panics
///
/// Panics on dimension mismatches between `code`, `ecc`, and `ks`.
pub fn transmit(
    code: &HomophonicCode,
    ecc: &LinearBlockCode,
    ks: &mut LinearKeystream,
    a: &BitVec,
    rng: &mut impl RngCore,
) -> (BitVec, BitVec, u64) {
    let u = BitVec::random(code.m() - code.l(), rng);
    let t = ks.next_index();
    let mut y = ecc.encode(&code.encode_h(a, &u));
    y.xor_assign(&ks.keystream_at(t));
    (y, u, t)
}

/// What the receiver reports back on the feedback link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReceiveOutcome {
    Recovered(BitVec),
    Nack,
}

/// Receiver pipeline: strip the keystream, ECC-decode, homophonic-decode.
/// `Nack` only on ECC decode failure; a silent mis-correction still
/// yields `Recovered` (of the wrong plaintext), exactly as a real
/// receiver would behave.
pub fn receive(
    code: &HomophonicCode,
    ecc: &LinearBlockCode,
    ks: &mut LinearKeystream,
    z: &BitVec,
    t: u64,
) -> ReceiveOutcome {
    let mut word = z.clone();
    word.xor_assign(&ks.keystream_at(t));
    match ecc.decode(&word) {
        Ok((msg, _)) => {
            let (a, _u) = code.decode_h(&msg);
            ReceiveOutcome::Recovered(a)
        }
        Err(_) => ReceiveOutcome::Nack,
    }
}

/// Runs an ARQ session until `tau` blocks are acknowledged, logging every
/// physical transmission. The acknowledgement compares the recovered
/// plaintext against the transmitted one (the simulation is omniscient;
/// a real deployment would carry a checksum).
///
/// Randomness is split into one stream per role (u draws, channel noise,
/// plaintext), so sessions with equal seeds see identical noise even when
/// the code differs.
///
/// # Panics
///
/// Panics when `cfg`, `code`, `ecc`, and `ks` disagree on dimensions, or
/// when `tau` or `max_retries` is zero.
pub fn run_session(
    cfg: &SessionConfig,
    code: &HomophonicCode,
    ecc: &LinearBlockCode,
    ks: &mut LinearKeystream,
) -> Result<Vec<TransmissionRecord>, Error> {
    let params = &cfg.params;
    assert_eq!(code.m(), params.m, "code/params m mismatch");
    assert_eq!(code.l(), params.l, "code/params l mismatch");
    assert_eq!(ecc.message_len(), params.m, "ecc/params m mismatch");
    assert_eq!(ecc.codeword_len(), params.n, "ecc/params n mismatch");
    assert_eq!(ks.key().len(), params.n, "key/params n mismatch");
    assert!(cfg.tau >= 1, "tau must be positive");
    assert!(cfg.max_retries >= 1, "max_retries must be positive");

    let mut u_rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    u_rng.set_stream(1);
    let mut v_rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    v_rng.set_stream(2);
    let mut a_rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
    a_rng.set_stream(3);

    let mut records = Vec::new();
    for block in 0..cfg.tau {
        let a = match cfg.plaintext_source {
            PlaintextSource::Zero => BitVec::zeros(params.l),
            PlaintextSource::Random => BitVec::random(params.l, &mut a_rng),
        };
        let mut attempt = 0usize;
        loop {
            attempt += 1;
            if attempt > cfg.max_retries {
                return Err(Error::RetryExhausted { block, attempts: cfg.max_retries });
            }
            let (y, u, t) = transmit(code, ecc, ks, &a, &mut u_rng);
            let (z, v) = bsc(&y, params.p, &mut v_rng);
            let ack = match receive(code, ecc, ks, &z, t) {
                ReceiveOutcome::Recovered(got) => got == a,
                ReceiveOutcome::Nack => false,
            };
            records.push(TransmissionRecord {
                t,
                a: a.clone(),
                u,
                y,
                v,
                z,
                ack,
                attempts: attempt,
            });
            if ack {
                break;
            }
        }
    }
    Ok(records)
}

/// Serializes a session to the line-oriented record file: a `#` header
/// with the session parameters, then one line per physical transmission
/// (`t attempts ack a u y v z`, bit fields hex-packed MSB-first).
pub fn records_to_text(meta: &SessionMeta, records: &[TransmissionRecord]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# l={} m={} n={} p={} seed={} mode={}",
        meta.l, meta.m, meta.n, meta.p, meta.seed, meta.mode
    )
    .unwrap();
    for r in records {
        writeln!(
            out,
            "{} {} {} {} {} {} {} {}",
            r.t,
            r.attempts,
            r.ack as u8,
            to_hex(&r.a),
            to_hex(&r.u),
            to_hex(&r.y),
            to_hex(&r.v),
            to_hex(&r.z)
        )
        .unwrap();
    }
    out
}

/// Parses [`records_to_text`] output. Bit-field widths come from the
/// header; padding bits in the hex packing must be zero.
pub fn records_from_text(text: &str) -> Result<(SessionMeta, Vec<TransmissionRecord>), Error> {
    let mut lines = text.lines().enumerate();
    let (header_line, header) = loop {
        match lines.next() {
            Some((i, l)) if !l.trim().is_empty() => break (i + 1, l),
            Some(_) => continue,
            None => return Err(Error::Parse { line: 1, problem: "empty file" }),
        }
    };
    let meta = parse_header(header).map_err(|problem| Error::Parse { line: header_line, problem })?;

    let mut records = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(Error::Parse { line: line_no, problem: "expected 8 fields" });
        }
        let fail = |problem| Error::Parse { line: line_no, problem };
        let t = fields[0].parse().map_err(|_| fail("bad block index"))?;
        let attempts = fields[1].parse().map_err(|_| fail("bad attempt count"))?;
        let ack = match fields[2] {
            "0" => false,
            "1" => true,
            _ => return Err(fail("ack must be 0 or 1")),
        };
        records.push(TransmissionRecord {
            t,
            attempts,
            ack,
            a: from_hex(fields[3], meta.l).map_err(fail)?,
            u: from_hex(fields[4], meta.m - meta.l).map_err(fail)?,
            y: from_hex(fields[5], meta.n).map_err(fail)?,
            v: from_hex(fields[6], meta.n).map_err(fail)?,
            z: from_hex(fields[7], meta.n).map_err(fail)?,
        });
    }
    Ok((meta, records))
}

/// `t,attempts,ack` CSV over all physical transmissions.
pub fn summary_csv(records: &[TransmissionRecord]) -> String {
    let mut out = String::from("t,attempts,ack\n");
    for r in records {
        writeln!(out, "{},{},{}", r.t, r.attempts, r.ack as u8).unwrap();
    }
    out
}

fn parse_header(line: &str) -> Result<SessionMeta, &'static str> {
    let rest = line.strip_prefix('#').ok_or("header must start with #")?;
    let (mut l, mut m, mut n) = (None, None, None);
    let (mut p, mut seed, mut mode) = (None, None, None);
    for token in rest.split_whitespace() {
        let (key, value) = token.split_once('=').ok_or("malformed header token")?;
        match key {
            "l" => l = Some(value.parse().map_err(|_| "bad l")?),
            "m" => m = Some(value.parse().map_err(|_| "bad m")?),
            "n" => n = Some(value.parse().map_err(|_| "bad n")?),
            "p" => p = Some(value.parse().map_err(|_| "bad p")?),
            "seed" => seed = Some(value.parse().map_err(|_| "bad seed")?),
            "mode" => mode = Some(value.parse()?),
            _ => return Err("unknown header key"),
        }
    }
    let meta = SessionMeta {
        l: l.ok_or("header missing l")?,
        m: m.ok_or("header missing m")?,
        n: n.ok_or("header missing n")?,
        p: p.ok_or("header missing p")?,
        seed: seed.ok_or("header missing seed")?,
        mode: mode.ok_or("header missing mode")?,
    };
    if meta.l == 0 || meta.l >= meta.m || meta.m >= meta.n {
        return Err("header dimensions must satisfy 0 < l < m < n");
    }
    Ok(meta)
}

fn to_hex(v: &BitVec) -> String {
    let nibbles = v.len().div_ceil(4);
    let mut s = String::with_capacity(nibbles);
    for k in 0..nibbles {
        let mut val = 0u32;
        for b in 0..4 {
            let i = 4 * k + b;
            if i < v.len() && v.get(i) {
                val |= 1 << (3 - b);
            }
        }
        s.push(char::from_digit(val, 16).unwrap());
    }
    s
}

fn from_hex(s: &str, len: usize) -> Result<BitVec, &'static str> {
    if s.len() != len.div_ceil(4) {
        return Err("hex field has wrong length");
    }
    let mut v = BitVec::zeros(len);
    for (k, ch) in s.chars().enumerate() {
        let val = ch.to_digit(16).ok_or("invalid hex digit")?;
        for b in 0..4 {
            let i = 4 * k + b;
            let bit = val & (1 << (3 - b)) != 0;
            if i < len {
                v.set(i, bit);
            } else if bit {
                return Err("nonzero padding bits in hex field");
            }
        }
    }
    Ok(v)
}
