//! Dense matrices over arbitrary-precision integers.
//!
//! [`IntMatrix`] is the workhorse for every exact computation in the crate.
//! [`HalfIntMatrix`] carries the few matrices whose entries lie in `½ℤ`.
//!
//! The text format shared with the `snf` subcommand is
//!
//! ```text
//! rows cols
//! a11 a12 ...
//! ...
//! ```
//!
//! with arbitrary-precision decimal entries and LF line endings.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("empty matrix input")]
    Empty,
    #[error("malformed header {0:?}: expected \"rows cols\"")]
    BadHeader(String),
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    ZeroDimension { rows: usize, cols: usize },
    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("invalid integer entry {0:?}")]
    BadEntry(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Dense row-major matrix of [`BigInt`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from nested rows of anything convertible to `BigInt`.
    ///
    /// Panics on ragged input; meant for literals in code and tests.
    pub fn from_rows<T, R>(rows: &[R]) -> Self
    where
        T: Into<BigInt> + Clone,
        R: AsRef<[T]>,
    {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(n * m);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), m, "ragged rows");
            entries.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: n, cols: m, entries }
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(diag: &[T]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn checked_add(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    fn zip_with(
        &self,
        rhs: &IntMatrix,
        f: impl Fn(&BigInt, &BigInt) -> BigInt,
    ) -> Result<IntMatrix, MatrixError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Entries `(i, i)` for `i < min(rows, cols)`.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// True when every row and every column holds exactly one nonzero entry, equal to ±1.
    pub fn is_signed_monomial(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let unit = |e: &BigInt| e.abs().is_one();
        let rows_ok = (0..self.rows).all(|i| {
            let nz: Vec<_> = self.row(i).iter().filter(|e| !e.is_zero()).collect();
            nz.len() == 1 && unit(nz[0])
        });
        let cols_ok = (0..self.cols).all(|j| {
            let nz: Vec<_> = (0..self.rows).map(|i| &self[(i, j)]).filter(|e| !e.is_zero()).collect();
            nz.len() == 1 && unit(nz[0])
        });
        rows_ok && cols_ok
    }

    /// Deletes the listed rows and columns (indices into the original matrix).
    pub fn minor_without(&self, drop_rows: &[usize], drop_cols: &[usize]) -> IntMatrix {
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !drop_rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !drop_cols.contains(j)).collect();
        self.select(&keep_r, &keep_c)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block_diagonal(blocks: &[IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.entries[src * self.cols + j] * k;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.entries[i * self.cols + src] * k;
            self.entries[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[i * self.cols + j];
            *e = -std::mem::take(e);
        }
    }

    /// Replaces rows `a`, `b` by `(x·ra + y·rb, z·ra + w·rb)`.
    pub(crate) fn combine_rows(&mut self, a: usize, b: usize, [x, y, z, w]: [&BigInt; 4]) {
        for j in 0..self.cols {
            let ra = self.entries[a * self.cols + j].clone();
            let rb = self.entries[b * self.cols + j].clone();
            self.entries[a * self.cols + j] = x * &ra + y * &rb;
            self.entries[b * self.cols + j] = z * &ra + w * &rb;
        }
    }

    /// Renders the shared text format (header line, then one line per row).
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse_text(s: &str) -> Result<Self, MatrixError> {
        s.parse()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix shape mismatch")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, MatrixError> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(MatrixError::Empty)?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        let (rows, cols) = match dims.as_slice() {
            [r, c] => (
                r.parse::<usize>().map_err(|_| MatrixError::BadHeader(header.to_string()))?,
                c.parse::<usize>().map_err(|_| MatrixError::BadHeader(header.to_string()))?,
            ),
            _ => return Err(MatrixError::BadHeader(header.to_string())),
        };
        if rows == 0 || cols == 0 {
            return Err(MatrixError::ZeroDimension { rows, cols });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        let mut seen_rows = 0;
        for (i, line) in lines.enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != cols {
                return Err(MatrixError::RowLength {
                    row: i + 1,
                    expected: cols,
                    found: toks.len(),
                });
            }
            for t in toks {
                entries.push(t.parse::<BigInt>().map_err(|_| MatrixError::BadEntry(t.to_string()))?);
            }
            seen_rows += 1;
        }
        if seen_rows != rows {
            return Err(MatrixError::EntryCount {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        IntMatrix::from_entries(rows, cols, entries)
    }
}

/// A matrix with entries in `½ℤ`, stored as integer numerators over 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntMatrix {
    numerators: IntMatrix,
}

impl HalfIntMatrix {
    pub fn from_numerators(numerators: IntMatrix) -> Self {
        HalfIntMatrix { numerators }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        HalfIntMatrix {
            numerators: m.scale(&BigInt::from(2)),
        }
    }

    pub fn numerators(&self) -> &IntMatrix {
        &self.numerators
    }

    pub fn rows(&self) -> usize {
        self.numerators.rows()
    }

    pub fn cols(&self) -> usize {
        self.numerators.cols()
    }

    /// Integer-by-half-integer product: `lhs · self`.
    pub fn left_mul(&self, lhs: &IntMatrix) -> HalfIntMatrix {
        HalfIntMatrix {
            numerators: lhs * &self.numerators,
        }
    }

    /// `self · rhs` for an integer `rhs`.
    pub fn right_mul(&self, rhs: &IntMatrix) -> HalfIntMatrix {
        HalfIntMatrix {
            numerators: &self.numerators * rhs,
        }
    }

    /// Product of two half-integer matrices, if it again lies in `½ℤ`.
    pub fn mul_half(&self, rhs: &HalfIntMatrix) -> Option<HalfIntMatrix> {
        let quarter = &self.numerators * &rhs.numerators;
        let two = BigInt::from(2);
        halve(&quarter, &two).map(|numerators| HalfIntMatrix { numerators })
    }

    pub fn add(&self, rhs: &HalfIntMatrix) -> HalfIntMatrix {
        HalfIntMatrix {
            numerators: self.numerators.checked_add(&rhs.numerators).expect("shape mismatch"),
        }
    }

    pub fn sub(&self, rhs: &HalfIntMatrix) -> HalfIntMatrix {
        HalfIntMatrix {
            numerators: self.numerators.checked_sub(&rhs.numerators).expect("shape mismatch"),
        }
    }

    pub fn scale(&self, k: &BigInt) -> HalfIntMatrix {
        HalfIntMatrix {
            numerators: self.numerators.scale(k),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.numerators.entries().iter().all(|e| e.is_even())
    }

    /// The exact integer matrix, or `None` if some entry has a half.
    pub fn to_integral(&self) -> Option<IntMatrix> {
        halve(&self.numerators, &BigInt::from(2))
    }
}

fn halve(m: &IntMatrix, two: &BigInt) -> Option<IntMatrix> {
    let mut entries = Vec::with_capacity(m.entries().len());
    for e in m.entries() {
        let (quo, rem) = e.div_rem(two);
        if !rem.is_zero() {
            return None;
        }
        entries.push(quo);
    }
    IntMatrix::from_entries(m.rows(), m.cols(), entries).ok()
}
