use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: alloc::vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.data[i * size + i] = BigInt::one();
        }
        m
    }

    /// Builds from row slices; all rows must have length `cols`.
    pub fn from_rows<R: AsRef<[i64]>>(rows: usize, cols: usize, entries: &[R]) -> Self {
        assert_eq!(entries.len(), rows, "row count");
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "row length");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self { rows, cols, data }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> BigInt>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`.
    pub(crate) fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * &self.data[source * self.cols + j];
            self.data[target * self.cols + j] += delta;
        }
    }

    /// `col[target] += factor * col[source]`.
    pub(crate) fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * &self.data[i * self.cols + source];
            self.data[i * self.cols + target] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, row: usize) {
        for j in 0..self.cols {
            let x = core::mem::take(&mut self.data[row * self.cols + j]);
            self.data[row * self.cols + j] = -x;
        }
    }

    /// Rank over `Z/2` of the entrywise reduction.
    pub fn rank_mod2(&self) -> usize {
        let two = BigInt::from(2);
        let mut bits: Vec<Vec<bool>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| !(self.get(i, j) % &two).is_zero()).collect())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| bits[r][col]) else {
                continue;
            };
            bits.swap(rank, pivot);
            for r in 0..self.rows {
                if r != rank && bits[r][col] {
                    for c in col..self.cols {
                        let v = bits[rank][c];
                        bits[r][c] ^= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}
