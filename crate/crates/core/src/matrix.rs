//! Dense matrices of arbitrary-precision integers. Every operation is exact;
//! there is no floating-point or fixed-width fallback anywhere in this module.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals, rank_rows};

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::MatrixParse(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Convenience constructor from machine integers; panics on a length mismatch.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Single-column matrix holding `v`.
    pub fn column(v: Vec<BigInt>) -> Self {
        IntMatrix {
            rows: v.len(),
            cols: 1,
            entries: v,
        }
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

    pub fn entry(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.entries[r * self.cols + c]
    }

    pub(crate) fn entry_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        assert!(r < self.rows, "row out of bounds");
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [BigInt] {
        assert!(r < self.rows, "row out of bounds");
        &mut self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Mutable views of two distinct rows at once.
    pub(crate) fn row_pair_mut(&mut self, i: usize, j: usize) -> (&mut [BigInt], &mut [BigInt]) {
        assert!(i != j && i < self.rows && j < self.rows, "bad row pair");
        let cols = self.cols;
        if i < j {
            let (head, tail) = self.entries.split_at_mut(j * cols);
            (&mut head[i * cols..(i + 1) * cols], &mut tail[..cols])
        } else {
            let (head, tail) = self.entries.split_at_mut(i * cols);
            (&mut tail[..cols], &mut head[j * cols..(j + 1) * cols])
        }
    }

    pub(crate) fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// New matrix whose row `i` is `self`'s row `perm[i]`.
    pub(crate) fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        let mut entries = Vec::with_capacity(self.entries.len());
        for &src in perm {
            entries.extend_from_slice(self.row(src));
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// New matrix whose column `j` is `self`'s column `perm[j]`.
    pub(crate) fn permute_cols(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.cols);
        Self::from_fn(self.rows, self.cols, |r, c| self.entry(r, perm[c]).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.entry(c, r).clone())
    }

    pub fn is_diagonal(&self) -> bool {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c && !self.entry(r, c).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Diagonal entries, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.entry(i, i).clone())
            .collect()
    }

    pub fn trace(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok((0..self.rows).map(|i| self.entry(i, i)).sum())
    }

    /// Exact matrix product.
    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_mul_shape(rhs)?;
        #[cfg(feature = "parallel")]
        {
            Ok(self.mul_par(rhs))
        }
        #[cfg(not(feature = "parallel"))]
        {
            Ok(self.mul_seq_unchecked(rhs))
        }
    }

    /// Sequential variant of [`IntMatrix::mul`].
    pub fn mul_seq(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_mul_shape(rhs)?;
        Ok(self.mul_seq_unchecked(rhs))
    }

    fn check_mul_shape(&self, rhs: &IntMatrix) -> Result<()> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        Ok(())
    }

    fn mul_row_into(&self, r: usize, rhs: &IntMatrix, out: &mut [BigInt]) {
        for k in 0..self.cols {
            let a = self.entry(r, k);
            if a.is_zero() {
                continue;
            }
            let b_row = rhs.row(k);
            if a.is_one() {
                for (o, b) in out.iter_mut().zip(b_row) {
                    *o += b;
                }
            } else {
                for (o, b) in out.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
    }

    fn mul_seq_unchecked(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let row = &mut out.entries[r * rhs.cols..(r + 1) * rhs.cols];
            self.mul_row_into(r, rhs, row);
        }
        out
    }

    #[cfg(feature = "parallel")]
    fn mul_par(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        out.entries
            .par_chunks_mut(rhs.cols)
            .enumerate()
            .for_each(|(r, row)| self.mul_row_into(r, rhs, row));
        out
    }

    /// Kronecker product; block (i, j) of the result is `self[i, j] * rhs`.
    ///
    /// The row and column indices of the result follow the mixed-radix
    /// convention with the left factor most significant, so n-fold powers of
    /// an n x n matrix line up with the lexicographic transversal order.
    pub fn kronecker(&self, rhs: &IntMatrix) -> IntMatrix {
        #[cfg(feature = "parallel")]
        {
            self.kronecker_par(rhs)
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.kronecker_seq(rhs)
        }
    }

    /// Sequential variant of [`IntMatrix::kronecker`].
    pub fn kronecker_seq(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r in 0..out.rows {
            let row = &mut out.entries[r * out.cols..(r + 1) * out.cols];
            Self::kron_row_into(self, rhs, r, row);
        }
        out
    }

    #[cfg(feature = "parallel")]
    fn kronecker_par(&self, rhs: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        let out_cols = out.cols;
        out.entries
            .par_chunks_mut(out_cols)
            .enumerate()
            .for_each(|(r, row)| Self::kron_row_into(self, rhs, r, row));
        out
    }

    fn kron_row_into(a: &IntMatrix, b: &IntMatrix, r: usize, out: &mut [BigInt]) {
        let (ra, rb) = (r / b.rows, r % b.rows);
        for ca in 0..a.cols {
            let x = a.entry(ra, ca);
            if x.is_zero() {
                continue;
            }
            let dst = &mut out[ca * b.cols..(ca + 1) * b.cols];
            if x.is_one() {
                dst.clone_from_slice(b.row(rb));
            } else {
                for (o, y) in dst.iter_mut().zip(b.row(rb)) {
                    *o = x * y;
                }
            }
        }
    }

    /// `k`-fold Kronecker power; the zeroth power is the 1x1 identity.
    pub fn kronecker_power(&self, k: usize) -> IntMatrix {
        let mut out = IntMatrix::identity(1);
        for _ in 0..k {
            out = out.kronecker(self);
        }
        out
    }

    /// Exact determinant by fraction-free (division-exact) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        #[cfg(feature = "parallel")]
        {
            self.determinant_impl(true)
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.determinant_impl(false)
        }
    }

    /// Sequential variant of [`IntMatrix::determinant`].
    pub fn determinant_seq(&self) -> Result<BigInt> {
        self.determinant_impl(false)
    }

    fn determinant_impl(&self, _parallel: bool) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                m.swap(k, swap);
                negate = !negate;
            }
            let (head, tail) = m.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let update = |row: &mut Vec<BigInt>| {
                for j in k + 1..n {
                    let num = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                    debug_assert!((&num % &prev).is_zero());
                    row[j] = num / &prev;
                }
                row[k] = BigInt::zero();
            };
            #[cfg(feature = "parallel")]
            {
                if _parallel {
                    tail.par_iter_mut().for_each(update);
                } else {
                    tail.iter_mut().for_each(update);
                }
            }
            #[cfg(not(feature = "parallel"))]
            {
                tail.iter_mut().for_each(update);
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Rank of the matrix with entries interpreted in the given field.
    pub fn rank_over_field(&self, spec: &FieldSpec) -> usize {
        match spec {
            FieldSpec::Rationals => {
                let f = Rationals;
                rank_rows(
                    &f,
                    self.cols,
                    (0..self.rows).map(|r| self.row(r).iter().map(|z| f.embed_int(z)).collect()),
                )
            }
            FieldSpec::PrimeField(p) => {
                let f = PrimeField::new(*p).expect("FieldSpec carries a checked prime");
                rank_rows(
                    &f,
                    self.cols,
                    (0..self.rows).map(|r| self.row(r).iter().map(|z| f.embed_int(z)).collect()),
                )
            }
        }
    }

    /// Serializes to the plain-text format: a `rows cols` header line, then
    /// one line of space-separated decimal entries per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the plain-text format produced by [`IntMatrix::to_text`].
    /// Whitespace is treated uniformly, so line breaks are not significant.
    pub fn parse_text(s: &str) -> Result<Self> {
        let mut tokens = s.split_whitespace();
        let rows: usize = tokens
            .next()
            .ok_or_else(|| Error::MatrixParse("empty input".into()))?
            .parse()
            .map_err(|e| Error::MatrixParse(format!("bad row count: {e}")))?;
        let cols: usize = tokens
            .next()
            .ok_or_else(|| Error::MatrixParse("missing column count".into()))?
            .parse()
            .map_err(|e| Error::MatrixParse(format!("bad column count: {e}")))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows * cols {
            let tok = tokens
                .next()
                .ok_or_else(|| Error::MatrixParse(format!("expected {} entries, got {i}", rows * cols)))?;
            let v: BigInt = tok
                .parse()
                .map_err(|e| Error::MatrixParse(format!("bad entry '{tok}': {e}")))?;
            entries.push(v);
        }
        if let Some(extra) = tokens.next() {
            return Err(Error::MatrixParse(format!(
                "trailing data after {} entries: '{extra}'",
                rows * cols
            )));
        }
        IntMatrix::from_entries(rows, cols, entries)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        if self.rows * self.cols <= 64 {
            write!(f, "\n{}", self.to_text())?;
        }
        Ok(())
    }
}

/// Quotient and remainder with the remainder balanced into
/// `(-|d|/2, |d|/2]`; keeps elimination entries small.
pub(crate) fn balanced_div(a: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(!d.is_zero());
    let m = d.abs();
    let mut r = num_integer::Integer::mod_floor(a, &m);
    let twice: BigInt = &r * 2;
    if twice > m {
        r -= &m;
    }
    let q = (a - &r) / d;
    (q, r)
}
