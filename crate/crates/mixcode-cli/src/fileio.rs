//! Loaders and serializers shared by the commands.

use crate::fail::Failure;
use mixcode::ecc::LinearBlockCode;
use mixcode::homophonic::CriteriaReport;
use mixcode::keystream::random_state_matrix;
use mixcode::{BitMatrix, BitVec};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub fn read_matrix(path: &Path) -> Result<BitMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    BitMatrix::from_text(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Reads a bit string from the first non-empty line of `path`.
pub fn read_bits(path: &Path, expect_len: usize) -> Result<BitVec, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| Failure::Input(format!("{}: empty bit file", path.display())))?;
    let bits: BitVec = line
        .trim()
        .parse()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if bits.len() != expect_len {
        return Err(Failure::Input(format!(
            "{}: expected {expect_len} bits, found {}",
            path.display(),
            bits.len()
        )));
    }
    Ok(bits)
}

/// Resolves an ECC spec: the literal `hamming74` or a generator matrix file.
pub fn load_ecc(spec: &str) -> Result<LinearBlockCode, Failure> {
    if spec == "hamming74" {
        return Ok(LinearBlockCode::hamming_7_4());
    }
    let generator = read_matrix(Path::new(spec))?;
    LinearBlockCode::from_generator(generator)
        .map_err(|e| Failure::Input(format!("{spec}: {e}")))
}

/// Resolves a state matrix from a file or a seed; exactly one is given.
pub fn load_state_matrix(
    path: Option<&PathBuf>,
    seed: Option<u64>,
    n: usize,
) -> Result<BitMatrix, Failure> {
    let s = match (path, seed) {
        (Some(p), None) => read_matrix(p)?,
        (None, Some(seed)) => random_state_matrix(n, seed),
        _ => unreachable!("clap enforces exactly one source"),
    };
    if s.rows() != n || s.cols() != n {
        return Err(Failure::Input(format!(
            "state matrix must be {n}x{n}, got {}x{}",
            s.rows(),
            s.cols()
        )));
    }
    Ok(s)
}

/// Resolves a key from a file or a seed; exactly one is given.
pub fn load_key(path: Option<&PathBuf>, seed: Option<u64>, n: usize) -> Result<BitVec, Failure> {
    match (path, seed) {
        (Some(p), None) => read_bits(p, n),
        (None, Some(seed)) => Ok(BitVec::random(n, &mut ChaCha8Rng::seed_from_u64(seed))),
        _ => unreachable!("clap enforces exactly one source"),
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn report_to_json(report: &CriteriaReport) -> Value {
    json!({
        "invertible": report.invertible,
        "mixing_ok": report.mixing_ok,
        "min_column_weight": report.min_column_weight,
        "g_star": report.g_star.to_text(),
        "g_star_rank": report.g_star_rank,
        "passes_strict": report.passes_strict,
        "passes_lenient": report.passes_lenient,
        "density_g_h": report.density_g_h,
        "density_g": report.density_g,
        "density_g_h_inv": report.density_g_h_inv,
    })
}
