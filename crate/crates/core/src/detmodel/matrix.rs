use std::fmt;

use super::LevelVector;

/// Dense matrix over GF(2).
///
/// Row `i` and column `j` are 0-based. When a matrix maps level vectors,
/// row `i` is output level `i + 1` and column `j` is input level `j + 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BinaryMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must share one length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v & 1 == 1);
            }
        }
        m
    }

    /// Builds a matrix whose row `i` has bit `j` of `masks[i]` in column `j`.
    pub fn from_row_masks(masks: &[u128], cols: usize) -> Self {
        assert!(cols <= 128);
        let mut m = Self::zeros(masks.len(), cols);
        for (i, &mask) in masks.iter().enumerate() {
            assert!(cols == 128 || mask >> cols == 0, "mask wider than matrix");
            for j in 0..cols {
                if mask >> j & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        let v = self.get(i, j);
        self.set(i, j, !v);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Row `i` as a bit mask; only valid when `cols <= 128`.
    pub fn row_mask(&self, i: usize) -> u128 {
        assert!(self.cols <= 128);
        let w = self.row_words(i);
        let lo = w.first().copied().unwrap_or(0) as u128;
        let hi = w.get(1).copied().unwrap_or(0) as u128;
        lo | hi << 64
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, j)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, rhs: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = rhs.row_words(k).to_vec();
                    let dst = &mut out.data[i * out.words..(i + 1) * out.words];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &BinaryMatrix) -> BinaryMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(&rhs.data) {
            *d ^= s;
        }
        out
    }

    pub fn mul_vec(&self, v: &LevelVector) -> LevelVector {
        assert_eq!(self.cols, v.len(), "vector length {} does not match {} columns", v.len(), self.cols);
        let bits = (0..self.rows)
            .map(|i| (0..self.cols).filter(|&j| self.get(i, j) && v.bit(j + 1)).count() % 2 == 1)
            .collect();
        LevelVector::from_bits(bits)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> BinaryMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (n, &j) in cols.iter().enumerate() {
                out.set(i, n, self.get(i, j));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row_words(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / 64, col % 64);
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] >> b & 1 == 1 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `self * x = rhs`. Returns `None` unless the system is consistent
    /// and the solution is unique (full column rank).
    pub fn solve(&self, rhs: &LevelVector) -> Option<LevelVector> {
        assert_eq!(rhs.len(), self.rows, "right-hand side has wrong length");
        let n = self.cols;
        let mut aug = Self::zeros(self.rows, n + 1);
        for i in 0..self.rows {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n, rhs.bit(i + 1));
        }
        let mut rows: Vec<Vec<u64>> = (0..aug.rows).map(|i| aug.row_words(i).to_vec()).collect();
        let mut pivots = Vec::with_capacity(n);
        let mut rank = 0;
        for col in 0..n {
            let (w, b) = (col / 64, col % 64);
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
                return None;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] >> b & 1 == 1 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(rank);
            rank += 1;
        }
        let (w, b) = (n / 64, n % 64);
        if rows[rank..].iter().any(|row| row[w] >> b & 1 == 1) {
            return None;
        }
        let bits = pivots.iter().map(|&r| rows[r][w] >> b & 1 == 1).collect();
        Some(LevelVector::from_bits(bits))
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for i in (0..self.rows).rev() {
            let row: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Rank of a set of vectors given as bit masks.
pub fn rank_of_masks(masks: impl IntoIterator<Item = u128>) -> usize {
    let mut basis = [0u128; 128];
    let mut rank = 0;
    for mut v in masks {
        while v != 0 {
            let top = 127 - v.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = v;
                rank += 1;
                break;
            }
            v ^= basis[top];
        }
    }
    rank
}
