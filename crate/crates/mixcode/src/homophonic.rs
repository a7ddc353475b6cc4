//! Randomized homophonic encoding: an invertible m×m map that blends ℓ
//! plaintext bits with m−ℓ uniformly random bits before error-correction
//! coding, so that every transmitted bit depends on fresh randomness.
//!
//! The generic construction places the blocks as
//!
//! ```text
//!         [ 0      I_l ]
//!   G_H = [ I_{m-l} G4 ]
//! ```
//!
//! which is always invertible; the design freedom sits entirely in the
//! (m−ℓ)×ℓ block `G4`.

use alloc::vec::Vec;
use core::fmt;

use crate::ecc::LinearBlockCode;
use crate::gf2::{vec_mat_mul, BitMatrix, BitVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Parameter set violates a structural constraint; the string names it.
    InvalidParams { constraint: &'static str },
    /// Parameters are well-formed but no code with the requested weight
    /// exists under the generic layout.
    InfeasibleParams { constraint: &'static str },
    /// The supplied matrix has no inverse, so it cannot decode.
    NotInvertible,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { constraint } => write!(f, "invalid parameters: {constraint}"),
            Error::InfeasibleParams { constraint } => {
                write!(f, "infeasible parameters: {constraint}")
            }
            Error::NotInvertible => write!(f, "matrix is not invertible"),
        }
    }
}

impl core::error::Error for Error {}

/// Block-level system parameters shared by the encoder, the channel
/// simulation, and the attack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Codeword length.
    pub n: usize,
    /// ECC message length (homophonic output width).
    pub m: usize,
    /// Plaintext bits per block.
    pub l: usize,
    /// Minimum column weight demanded of the mixing block.
    pub w: usize,
    /// BSC crossover probability.
    pub p: f64,
}

impl SystemParams {
    /// Validates `l <= m <= 2l`, `m < n`, and `p` in `[0, 0.5)`.
    pub fn new(n: usize, m: usize, l: usize, w: usize, p: f64) -> Result<Self, Error> {
        if l == 0 {
            return Err(Error::InvalidParams { constraint: "l must be at least 1" });
        }
        if m < l {
            return Err(Error::InvalidParams { constraint: "m must be at least l" });
        }
        if m > 2 * l {
            return Err(Error::InvalidParams {
                constraint: "m must not exceed 2l (at most as many random bits as data bits)",
            });
        }
        if n <= m {
            return Err(Error::InvalidParams { constraint: "n must exceed m" });
        }
        if !(0.0..0.5).contains(&p) {
            return Err(Error::InvalidParams { constraint: "p must lie in [0, 0.5)" });
        }
        Ok(Self { n, m, l, w, p })
    }
}

/// An invertible homophonic encoder together with its cached inverse.
#[derive(Debug, Clone)]
pub struct HomophonicCode {
    g_h: BitMatrix,
    g_h_inv: BitMatrix,
    g_h4: BitMatrix,
    l: usize,
    m: usize,
    w: usize,
}

/// The five construction criteria evaluated against a concrete matrix and
/// ECC: invertibility, mixing (no plaintext bit reaches the channel
/// unmasked), column weight, dependability (rank of the randomness image
/// G*), and sparsity metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub invertible: bool,
    /// No zero column in the mixing block `G4`.
    pub mixing_ok: bool,
    /// Minimum Hamming weight over the columns of `G4`.
    pub min_column_weight: usize,
    /// The last m−ℓ rows of G = G_H·G_ECC: the image of the random bits.
    pub g_star: BitMatrix,
    pub g_star_rank: usize,
    /// All criteria met with rank(G*) ≥ w+1.
    pub passes_strict: bool,
    /// All criteria met with the relaxed rank(G*) ≥ w.
    pub passes_lenient: bool,
    pub density_g_h: f64,
    pub density_g: f64,
    /// `None` when G_H is singular and no inverse exists.
    pub density_g_h_inv: Option<f64>,
}

impl HomophonicCode {
    /// Deterministic generic construction. `G4` starts as `[A | I_{m-l}]`
    /// with unit columns in `A` per the rank recipe, then every column is
    /// raised to weight `max(w, 1)` by XOR-ing in pre-raise columns.
    ///
    /// # Panics
    ///
    /// Panics when `params` and `ecc` disagree on (m, n).
    pub fn build_generic(params: &SystemParams, ecc: &LinearBlockCode) -> Result<Self, Error> {
        let (l, m, w) = (params.l, params.m, params.w);
        if m == l {
            return Err(Error::InfeasibleParams {
                constraint: "m must exceed l: the scheme needs at least one random bit",
            });
        }
        let r = m - l;
        if w > r {
            return Err(Error::InfeasibleParams {
                constraint: "w exceeds m - l, the height of G4: no column can reach that weight",
            });
        }
        assert_eq!(params.m, ecc.message_len(), "params/ecc message length mismatch");
        assert_eq!(params.n, ecc.codeword_len(), "params/ecc codeword length mismatch");

        let a_cols = 2 * l - m;
        let k = (w + 1 + l).saturating_sub(m).min(a_cols).min(r);

        // Step 1: A is zero except for k unit columns; the identity block
        // they come from sits against the bottom of A when it fits.
        let mut g4 = BitMatrix::zeros(r, l);
        let base = r.saturating_sub(a_cols);
        for c in 0..k {
            g4.set(base + c, c, true);
        }
        for i in 0..r {
            g4.set(i, a_cols + i, true);
        }

        // Step 2: raise column weights against a snapshot of the step-1
        // columns; XOR-ing fixed columns is rank-preserving.
        let target = w.max(1);
        let snapshot: Vec<BitVec> = (0..l).map(|c| g4.column(c)).collect();
        for c in 0..l {
            let mut col = g4.column(c);
            let mut attempts = 0usize;
            while col.weight() < target {
                if attempts >= l {
                    return Err(Error::InfeasibleParams {
                        constraint: "column weight target unreachable by combining columns",
                    });
                }
                let before = col.weight();
                for (d, snap) in snapshot.iter().enumerate() {
                    if d == c {
                        continue;
                    }
                    let mut candidate = col.clone();
                    candidate.xor_assign(snap);
                    if candidate.weight() > before {
                        col = candidate;
                        break;
                    }
                }
                if col.weight() == before {
                    return Err(Error::InfeasibleParams {
                        constraint: "column weight target unreachable by combining columns",
                    });
                }
                attempts += 1;
            }
            for i in 0..r {
                g4.set(i, c, col.get(i));
            }
        }

        let g_h = assemble(&g4, l, m);
        let g_h_inv = g_h.invert().expect("generic layout is always invertible");
        Ok(Self { g_h, g_h_inv, g_h4: g4, l, m, w })
    }

    /// Wraps an existing invertible m×m matrix. The `G4` block is read
    /// positionally (rows ℓ.., columns m−ℓ..); the matrix need not follow
    /// the generic layout.
    pub fn from_matrix(g_h: BitMatrix, l: usize, w: usize) -> Result<Self, Error> {
        let m = g_h.rows();
        if g_h.cols() != m {
            return Err(Error::InvalidParams { constraint: "G_H must be square" });
        }
        if l == 0 || l >= m {
            return Err(Error::InvalidParams { constraint: "l must satisfy 1 <= l < m" });
        }
        let g_h_inv = g_h.invert().map_err(|_| Error::NotInvertible)?;
        let g_h4 = extract_g4(&g_h, l);
        Ok(Self { g_h, g_h_inv, g_h4, l, m, w })
    }

    pub fn g_h(&self) -> &BitMatrix {
        &self.g_h
    }

    pub fn g_h_inv(&self) -> &BitMatrix {
        &self.g_h_inv
    }

    pub fn g_h4(&self) -> &BitMatrix {
        &self.g_h4
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// `[a || u] · G_H`.
    ///
    /// # Panics
    ///
    /// Panics unless `a.len() == l` and `u.len() == m - l`.
    pub fn encode_h(&self, a: &BitVec, u: &BitVec) -> BitVec {
        assert_eq!(a.len(), self.l, "plaintext length mismatch");
        assert_eq!(u.len(), self.m - self.l, "randomness length mismatch");
        vec_mat_mul(&a.concat(u), &self.g_h)
    }

    /// Inverts [`encode_h`](Self::encode_h), returning `(a, u)`.
    ///
    /// # Panics
    ///
    /// Panics unless `word.len() == m`.
    pub fn decode_h(&self, word: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(word.len(), self.m, "word length mismatch");
        let x = vec_mat_mul(word, &self.g_h_inv);
        (x.slice(0..self.l), x.slice(self.l..self.m))
    }

    /// `G = G_H · G_ECC`, the combined m×n generator the eavesdropper sees.
    ///
    /// # Panics
    ///
    /// Panics unless `ecc.message_len() == m`.
    pub fn compose(&self, ecc: &LinearBlockCode) -> BitMatrix {
        assert_eq!(ecc.message_len(), self.m, "ecc message length mismatch");
        self.g_h.mat_mul(ecc.generator())
    }

    /// Evaluates the construction criteria of this code against `ecc`.
    pub fn validate(&self, ecc: &LinearBlockCode) -> CriteriaReport {
        evaluate_criteria(&self.g_h, self.l, self.w, ecc)
    }
}

/// Criteria evaluation on a raw matrix, usable even when it is singular
/// or does not follow the generic layout; a bad code yields a failing
/// report rather than an error.
///
/// # Panics
///
/// Panics unless `g_h` is square with `ecc.message_len()` rows and
/// `1 <= l < m`.
pub fn evaluate_criteria(
    g_h: &BitMatrix,
    l: usize,
    w: usize,
    ecc: &LinearBlockCode,
) -> CriteriaReport {
    let m = g_h.rows();
    assert_eq!(g_h.cols(), m, "G_H must be square");
    assert_eq!(ecc.message_len(), m, "ecc message length mismatch");
    assert!(l >= 1 && l < m, "l must satisfy 1 <= l < m");

    let inverse = g_h.invert().ok();
    let g4 = extract_g4(g_h, l);
    let min_column_weight = (0..g4.cols()).map(|c| g4.column(c).weight()).min().unwrap_or(0);
    let mixing_ok = (0..g4.cols()).all(|c| !g4.column(c).is_zero());

    let g = g_h.mat_mul(ecc.generator());
    let g_star_rows: Vec<BitVec> = (l..m).map(|i| g.row(i).clone()).collect();
    let g_star = BitMatrix::from_rows(g_star_rows);
    let g_star_rank = g_star.rank();

    let base = inverse.is_some() && mixing_ok && min_column_weight >= w;
    CriteriaReport {
        invertible: inverse.is_some(),
        mixing_ok,
        min_column_weight,
        g_star,
        g_star_rank,
        passes_strict: base && g_star_rank >= w + 1,
        passes_lenient: base && g_star_rank >= w,
        density_g_h: g_h.density(),
        density_g: g.density(),
        density_g_h_inv: inverse.map(|inv| inv.density()),
    }
}

fn assemble(g4: &BitMatrix, l: usize, m: usize) -> BitMatrix {
    let r = m - l;
    let mut g_h = BitMatrix::zeros(m, m);
    for i in 0..l {
        g_h.set(i, r + i, true);
    }
    for i in 0..r {
        g_h.set(l + i, i, true);
        for j in 0..l {
            g_h.set(l + i, r + j, g4.get(i, j));
        }
    }
    g_h
}

fn extract_g4(g_h: &BitMatrix, l: usize) -> BitMatrix {
    let m = g_h.rows();
    let r = m - l;
    let rows = (l..m).map(|i| g_h.row(i).slice(r..m)).collect();
    BitMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    fn mat(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_rows(rows.iter().map(|r| bv(r)).collect())
    }

    fn params(w: usize) -> SystemParams {
        SystemParams::new(7, 4, 2, w, 0.05).unwrap()
    }

    fn hamming() -> LinearBlockCode {
        LinearBlockCode::hamming_7_4()
    }

    #[test]
    fn weight_one_build_is_the_double_identity_layout() {
        let code = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        assert_eq!(code.g_h(), &mat(&["0010", "0001", "1010", "0101"]));
        assert_eq!(code.g_h4(), &BitMatrix::identity(2));
        assert_eq!(code.g_h_inv(), &mat(&["1010", "0101", "1000", "0100"]));
    }

    #[test]
    fn weight_two_build_fills_the_mixing_block() {
        let code = HomophonicCode::build_generic(&params(2), &hamming()).unwrap();
        assert_eq!(code.g_h(), &mat(&["0010", "0001", "1011", "0111"]));
        assert_eq!(code.g_h_inv(), &mat(&["1110", "1101", "1000", "0100"]));
    }

    #[test]
    fn built_inverse_really_inverts() {
        for w in 0..=2 {
            let code = HomophonicCode::build_generic(&params(w), &hamming()).unwrap();
            assert_eq!(code.g_h().mat_mul(code.g_h_inv()), BitMatrix::identity(4));
        }
    }

    #[test]
    fn weight_one_code_passes_strict() {
        let code = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        let report = code.validate(&hamming());
        assert!(report.invertible);
        assert!(report.mixing_ok);
        assert_eq!(report.min_column_weight, 1);
        assert_eq!(report.g_star_rank, 2);
        assert!(report.passes_strict);
        assert!(report.passes_lenient);
    }

    #[test]
    fn weight_two_code_passes_lenient_only() {
        let code = HomophonicCode::build_generic(&params(2), &hamming()).unwrap();
        let report = code.validate(&hamming());
        assert_eq!(report.min_column_weight, 2);
        assert_eq!(report.g_star_rank, 2);
        assert!(!report.passes_strict);
        assert!(report.passes_lenient);
    }

    #[test]
    fn g_star_is_the_randomness_image() {
        let code = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        let report = code.validate(&hamming());
        assert_eq!(report.g_star, mat(&["1010101", "0101010"]));

        let code = HomophonicCode::build_generic(&params(2), &hamming()).unwrap();
        let report = code.validate(&hamming());
        assert_eq!(report.g_star, mat(&["1011010", "0111001"]));
    }

    #[test]
    fn compose_matches_hand_products() {
        let code = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        assert_eq!(
            code.compose(&hamming()),
            mat(&["0010011", "0001111", "1010101", "0101010"])
        );
        let code = HomophonicCode::build_generic(&params(2), &hamming()).unwrap();
        assert_eq!(
            code.compose(&hamming()),
            mat(&["0010011", "0001111", "1011010", "0111001"])
        );
    }

    #[test]
    fn encode_blends_plaintext_with_randomness() {
        let code = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        assert_eq!(code.encode_h(&bv("10"), &bv("11")), bv("1101"));
        assert_eq!(code.encode_h(&bv("00"), &bv("00")), bv("0000"));
    }

    #[test]
    fn encode_equals_direct_product_exhaustively() {
        let code = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        for bits in 0..16u64 {
            let x = BitVec::from_u64_be(bits, 4);
            let a = x.slice(0..2);
            let u = x.slice(2..4);
            assert_eq!(code.encode_h(&a, &u), vec_mat_mul(&x, code.g_h()));
        }
    }

    #[test]
    fn decode_inverts_encode_exhaustively() {
        for w in [1, 2] {
            let code = HomophonicCode::build_generic(&params(w), &hamming()).unwrap();
            for bits in 0..16u64 {
                let x = BitVec::from_u64_be(bits, 4);
                let a = x.slice(0..2);
                let u = x.slice(2..4);
                assert_eq!(code.decode_h(&code.encode_h(&a, &u)), (a, u));
            }
        }
    }

    #[test]
    fn zero_word_decodes_to_zeros() {
        let code = HomophonicCode::build_generic(&params(2), &hamming()).unwrap();
        assert_eq!(code.decode_h(&bv("0000")), (bv("00"), bv("00")));
    }

    #[test]
    fn zero_mixing_column_fails_the_report() {
        // Invertible, but the third output position carries no randomness.
        let g_h = mat(&["0010", "0001", "1000", "0101"]);
        let report = evaluate_criteria(&g_h, 2, 1, &hamming());
        assert!(report.invertible);
        assert!(!report.mixing_ok);
        assert_eq!(report.min_column_weight, 0);
        assert!(!report.passes_strict);
        assert!(!report.passes_lenient);
    }

    #[test]
    fn singular_matrix_reports_instead_of_erroring() {
        let g_h = mat(&["0010", "0010", "1010", "0101"]);
        let report = evaluate_criteria(&g_h, 2, 1, &hamming());
        assert!(!report.invertible);
        assert_eq!(report.density_g_h_inv, None);
        assert!(!report.passes_strict);

        assert_eq!(
            HomophonicCode::from_matrix(g_h, 2, 1).unwrap_err(),
            Error::NotInvertible
        );
    }

    #[test]
    fn params_reject_structural_violations() {
        assert!(SystemParams::new(7, 5, 2, 1, 0.05).is_err()); // m > 2l
        assert!(SystemParams::new(4, 4, 2, 1, 0.05).is_err()); // n == m
        assert!(SystemParams::new(7, 4, 2, 1, 0.5).is_err()); // p too high
        assert!(SystemParams::new(7, 1, 2, 1, 0.05).is_err()); // m < l
        assert!(SystemParams::new(7, 4, 2, 1, 0.0).is_ok());
    }

    #[test]
    fn infeasible_builds_are_rejected() {
        let p = SystemParams::new(7, 4, 4, 1, 0.05).unwrap();
        let ecc = hamming();
        assert!(matches!(
            HomophonicCode::build_generic(&p, &ecc),
            Err(Error::InfeasibleParams { .. })
        ));

        let p = SystemParams::new(7, 4, 2, 3, 0.05).unwrap();
        assert!(matches!(
            HomophonicCode::build_generic(&p, &ecc),
            Err(Error::InfeasibleParams { .. })
        ));
    }

    #[test]
    fn raising_weight_densifies_the_inverse() {
        let sparse = HomophonicCode::build_generic(&params(1), &hamming()).unwrap();
        let dense = HomophonicCode::build_generic(&params(2), &hamming()).unwrap();
        let d1 = sparse.validate(&hamming()).density_g_h_inv.unwrap();
        let d2 = dense.validate(&hamming()).density_g_h_inv.unwrap();
        assert!(d2 > d1, "expected denser inverse at higher w: {d2} <= {d1}");
    }

    #[test]
    fn builds_across_the_feasible_grid_keep_full_rank() {
        // A (5, 8) systematic code exercises m < 2l and a non-empty A block.
        let p_block = BitMatrix::from_rows(vec![bv("110"), bv("011")]);
        let q_block = BitMatrix::from_rows(vec![bv("101"), bv("111"), bv("100")]);
        let ecc = LinearBlockCode::from_systematic_parity(&p_block, &q_block).unwrap();
        for w in 0..=2 {
            let params = SystemParams::new(8, 5, 3, w, 0.1).unwrap();
            let code = HomophonicCode::build_generic(&params, &ecc).unwrap();
            let report = code.validate(&ecc);
            assert_eq!(report.g_star_rank, 2, "w={w}");
            assert!(report.min_column_weight >= w.max(1), "w={w}");
            assert!(report.mixing_ok);
            assert_eq!(report.passes_strict, w + 1 <= 2, "w={w}");
            assert!(report.passes_lenient, "w={w}");
        }
    }
}
