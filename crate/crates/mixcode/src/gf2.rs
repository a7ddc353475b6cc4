//! Dense bit-packed vectors and matrices over GF(2): multiplication,
//! inversion, rank, and a Gaussian-elimination engine that records its row
//! operations so they can be replayed on parallel right-hand sides.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::ops::Range;
use core::str::FromStr;

use rand_core::RngCore;

/// Errors from GF(2) linear algebra and the matrix text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Square matrix with rank below its dimension.
    NotInvertible,
    /// Text-format parse failure at the given 1-based line.
    Parse { line: usize, problem: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotInvertible => write!(f, "matrix is not invertible"),
            Error::Parse { line, problem } => write!(f, "parse error on line {line}: {problem}"),
        }
    }
}

impl core::error::Error for Error {}

/// A row vector of bits. Index 0 is the leftmost bit as printed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// Returns the all-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Returns a vector of `len` independent fair coin flips.
    pub fn random(len: usize, rng: &mut impl RngCore) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, rng.next_u32() & 1 == 1);
        }
        v
    }

    /// Builds a vector of length `len` from the low `len` bits of `value`,
    /// most significant bit first, so numeric order equals lexicographic
    /// order of the printed bits.
    ///
    /// # Panics
    ///
    /// Panics if `len > 64`.
    pub fn from_u64_be(value: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, (value >> (len - 1 - i)) & 1 == 1);
        }
        v
    }

    /// Packs the bits into a `u64`, index 0 as the most significant bit.
    ///
    /// # Panics
    ///
    /// Panics if the vector is longer than 64 bits.
    pub fn to_u64_be(&self) -> u64 {
        assert!(self.len <= 64);
        let mut value = 0;
        for i in 0..self.len {
            value = (value << 1) | u64::from(self.get(i));
        }
        value
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// # Panics
    ///
    /// Panics if `index >= len`.
    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index >> 6] >> (index & 63)) & 1 == 1
    }

    /// # Panics
    ///
    /// Panics if `index >= len`.
    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index & 63);
        if value {
            self.words[index >> 6] |= mask;
        } else {
            self.words[index >> 6] &= !mask;
        }
    }

    /// Appends one bit.
    pub fn push(&mut self, value: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    /// XORs `other` into `self`.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2): parity of the AND of the two vectors.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let mut parity = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            parity ^= (a & b).count_ones();
        }
        parity & 1 == 1
    }

    /// Number of set bits.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    /// Copies out the sub-vector `range`.
    ///
    /// # Panics
    ///
    /// Panics if the range is out of bounds.
    pub fn slice(&self, range: Range<usize>) -> BitVec {
        assert!(range.start <= range.end && range.end <= self.len);
        let mut v = BitVec::zeros(range.len());
        for (out, i) in range.enumerate() {
            v.set(out, self.get(i));
        }
        v
    }

    /// Returns `self` followed by `other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut v = self.clone();
        for bit in other.iter() {
            v.push(bit);
        }
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_char(if bit { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut v = BitVec::zeros(0);
        for c in s.chars() {
            match c {
                '0' => v.push(false),
                '1' => v.push(true),
                _ => {
                    return Err(Error::Parse {
                        line: 1,
                        problem: "expected only '0' or '1'",
                    })
                }
            }
        }
        Ok(v)
    }
}

/// Row vector times matrix: XOR of the matrix rows selected by `v`.
///
/// # Panics
///
/// Panics unless `v.len() == m.rows()`.
pub fn vec_mat_mul(v: &BitVec, m: &BitMatrix) -> BitVec {
    assert_eq!(v.len(), m.rows(), "vector/matrix dimension mismatch");
    let mut out = BitVec::zeros(m.cols());
    for i in 0..m.rows() {
        if v.get(i) {
            out.xor_assign(m.row(i));
        }
    }
    out
}

/// A dense binary matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Assembles a matrix from equal-length rows.
    ///
    /// # Panics
    ///
    /// Panics if the rows have differing lengths or `rows` is empty.
    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        assert!(!rows.is_empty(), "from_rows needs at least one row");
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// # Panics
    ///
    /// Panics if either index is out of range.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows, "row {row} out of range {}", self.rows);
        self.data[row].get(col)
    }

    /// # Panics
    ///
    /// Panics if either index is out of range.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows, "row {row} out of range {}", self.rows);
        self.data[row].set(col, value);
    }

    pub fn row(&self, row: usize) -> &BitVec {
        &self.data[row]
    }

    /// # Panics
    ///
    /// Panics unless the replacement has exactly `cols` bits.
    pub fn set_row(&mut self, row: usize, value: BitVec) {
        assert_eq!(value.len(), self.cols, "row length mismatch");
        self.data[row] = value;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    /// Copies out column `col` as a vector of `rows` bits.
    pub fn column(&self, col: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            v.set(i, self.get(i, col));
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Matrix product over GF(2).
    ///
    /// # Panics
    ///
    /// Panics unless `self.cols() == rhs.rows()`.
    pub fn mat_mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let data = self.data.iter().map(|r| vec_mat_mul(r, rhs)).collect();
        BitMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    /// Inverse by Gauss-Jordan reduction of `[self | I]`.
    ///
    /// # Panics
    ///
    /// Panics if the matrix is not square.
    pub fn invert(&self) -> Result<BitMatrix, Error> {
        assert_eq!(self.rows, self.cols, "invert needs a square matrix");
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.get(r, col));
            let pivot = pivot.ok_or(Error::NotInvertible)?;
            work.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            for r in 0..n {
                if r != col && work.get(r, col) {
                    let (wp, ip) = (work.data[col].clone(), inv.data[col].clone());
                    work.data[r].xor_assign(&wp);
                    inv.data[r].xor_assign(&ip);
                }
            }
        }
        Ok(inv)
    }

    /// Row rank over GF(2), computed by destructive reduction of a copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut r = 0;
        for col in 0..work.cols {
            let Some(pivot) = (r..work.rows).find(|&i| work.get(i, col)) else {
                continue;
            };
            work.swap_rows(r, pivot);
            for i in r + 1..work.rows {
                if work.get(i, col) {
                    let pr = work.data[r].clone();
                    work.data[i].xor_assign(&pr);
                }
            }
            r += 1;
            if r == work.rows {
                break;
            }
        }
        r
    }

    /// Fraction of entries equal to 1.
    pub fn density(&self) -> f64 {
        let ones: usize = self.data.iter().map(BitVec::weight).sum();
        ones as f64 / (self.rows * self.cols) as f64
    }

    /// Zeroes the given columns by Gaussian elimination and returns the
    /// surviving rows together with a replayable [`EliminationRecord`].
    ///
    /// For each target column the pivot is the lowest-index row, not yet
    /// consumed as a pivot, holding a 1 there; the pivot row is XORed into
    /// every other unconsumed row with a 1 in that column. Columns already
    /// all-zero among unconsumed rows need no pivot. The reduced matrix is
    /// the unconsumed rows in input order; they are zero in every target
    /// column.
    ///
    /// # Panics
    ///
    /// Panics if a column index is out of range or repeated.
    pub fn eliminate(&self, eliminate_cols: &[usize]) -> (BitMatrix, EliminationRecord) {
        let mut seen = vec![false; self.cols];
        for &c in eliminate_cols {
            assert!(c < self.cols, "column {c} out of range {}", self.cols);
            assert!(!seen[c], "column {c} repeated");
            seen[c] = true;
        }

        let mut work = self.clone();
        // masks[i] tracks which input rows were XORed into row i.
        let mut masks: Vec<BitVec> = (0..self.rows)
            .map(|i| {
                let mut m = BitVec::zeros(self.rows);
                m.set(i, true);
                m
            })
            .collect();
        let mut is_pivot = vec![false; self.rows];
        let mut pivot_columns = Vec::new();

        for &col in eliminate_cols {
            let Some(pivot) = (0..self.rows).find(|&r| !is_pivot[r] && work.get(r, col)) else {
                continue;
            };
            is_pivot[pivot] = true;
            pivot_columns.push(col);
            for r in 0..self.rows {
                if !is_pivot[r] && work.get(r, col) {
                    let (wp, mp) = (work.data[pivot].clone(), masks[pivot].clone());
                    work.data[r].xor_assign(&wp);
                    masks[r].xor_assign(&mp);
                }
            }
        }

        let mut reduced_rows = Vec::new();
        let mut row_ops = Vec::new();
        for r in 0..self.rows {
            if !is_pivot[r] {
                reduced_rows.push(work.data[r].clone());
                row_ops.push(masks[r].clone());
            }
        }
        let eliminated_count = pivot_columns.len();
        let reduced = BitMatrix {
            rows: reduced_rows.len(),
            cols: self.cols,
            data: reduced_rows,
        };
        (
            reduced,
            EliminationRecord {
                pivot_columns,
                row_ops,
                eliminated_count,
            },
        )
    }

    /// Serializes to the text exchange format: a `ROWS COLS` header line,
    /// then one line of '0'/'1' characters per row.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.rows, self.cols);
        for r in &self.data {
            let _ = writeln!(s, "{r}");
        }
        s
    }

    /// Parses the text exchange format produced by [`BitMatrix::to_text`].
    pub fn from_text(text: &str) -> Result<BitMatrix, Error> {
        let mut lines = text.lines().map(|l| l.trim_end_matches('\r'));
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            problem: "missing header line",
        })?;
        let mut parts = header.split_whitespace();
        let parse_dim = |s: Option<&str>| {
            s.and_then(|v| v.parse::<usize>().ok()).ok_or(Error::Parse {
                line: 1,
                problem: "header must be 'ROWS COLS'",
            })
        };
        let rows = parse_dim(parts.next())?;
        let cols = parse_dim(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: 1,
                problem: "header must be 'ROWS COLS'",
            });
        }
        let mut data = Vec::with_capacity(rows);
        for i in 0..rows {
            let line = lines.next().ok_or(Error::Parse {
                line: i + 2,
                problem: "missing row",
            })?;
            let row: BitVec = line.parse().map_err(|_| Error::Parse {
                line: i + 2,
                problem: "expected only '0' or '1'",
            })?;
            if row.len() != cols {
                return Err(Error::Parse {
                    line: i + 2,
                    problem: "row length does not match header",
                });
            }
            data.push(row);
        }
        if lines.any(|l| !l.is_empty()) {
            return Err(Error::Parse {
                line: rows + 2,
                problem: "trailing content after last row",
            });
        }
        Ok(BitMatrix { rows, cols, data })
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// The row operations performed by [`BitMatrix::eliminate`], replayable on
/// the input matrix or on any parallel right-hand side.
#[derive(Clone, Debug)]
pub struct EliminationRecord {
    /// Columns that received a pivot, in elimination order.
    pub pivot_columns: Vec<usize>,
    /// One mask per output row over the input rows: bit `i` is set iff
    /// input row `i` was XORed into that output row (own row included).
    pub row_ops: Vec<BitVec>,
    /// Number of pivots consumed, i.e. unknowns actually removed.
    pub eliminated_count: usize,
}

impl EliminationRecord {
    /// Reapplies the recorded row operations to `input`, reproducing the
    /// reduced matrix.
    ///
    /// # Panics
    ///
    /// Panics unless `input` has as many rows as the original system.
    pub fn replay(&self, input: &BitMatrix) -> BitMatrix {
        let data: Vec<BitVec> = self
            .row_ops
            .iter()
            .map(|mask| {
                assert_eq!(mask.len(), input.rows(), "row count mismatch");
                let mut acc = BitVec::zeros(input.cols());
                for i in 0..input.rows() {
                    if mask.get(i) {
                        acc.xor_assign(input.row(i));
                    }
                }
                acc
            })
            .collect();
        BitMatrix {
            rows: data.len(),
            cols: input.cols(),
            data,
        }
    }

    /// Folds a right-hand-side vector (one bit per input row) into one bit
    /// per output row, applying the same XORs as the elimination.
    ///
    /// # Panics
    ///
    /// Panics unless `rhs` has one bit per input row.
    pub fn fold_vec(&self, rhs: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.row_ops.len());
        for (j, mask) in self.row_ops.iter().enumerate() {
            out.set(j, mask.dot(rhs));
        }
        out
    }

    /// Number of input rows XORed together to form output row `j`.
    pub fn combo_weight(&self, j: usize) -> usize {
        self.row_ops[j].weight()
    }
}
