//! Dense matrices over arbitrary-precision rationals.
//!
//! Everything in this module is exact; there is no floating point anywhere.
//! Empty matrices (zero rows or zero columns) are first-class values and
//! behave as identities for stacking.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::RatlinError;

/// Arbitrary-precision rational scalar. Always stored reduced with a
/// positive denominator; the canonical zero is 0/1.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer matrix literal, row-major.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
    }

    /// Column vector from integer entries.
    pub fn col_from_i64(entries: &[i64]) -> Self {
        Self::from_fn(entries.len(), 1, |i, _| rat(entries[i]))
    }

    /// Row vector from integer entries.
    pub fn row_from_i64(entries: &[i64]) -> Self {
        Self::from_fn(1, entries.len(), |_, j| rat(entries[j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn row(&self, i: usize) -> Self {
        Self::from_fn(1, self.cols, |_, j| self[(i, j)].clone())
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn column_vec(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Columns `lo..hi` as a new matrix.
    pub fn columns(&self, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= self.cols);
        Self::from_fn(self.rows, hi - lo, |i, j| self[(i, lo + j)].clone())
    }

    /// Rows `lo..hi` as a new matrix.
    pub fn row_slice(&self, lo: usize, hi: usize) -> Self {
        assert!(lo <= hi && hi <= self.rows);
        Self::from_fn(hi - lo, self.cols, |i, j| self[(lo + i, j)].clone())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] + &other[(i, j)]
        })
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| {
            &self[(i, j)] - &other[(i, j)]
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    let cur = &out[(i, j)] + prod;
                    out[(i, j)] = cur;
                }
            }
        }
        out
    }

    /// Matrix power, exact. `pow(0)` is the identity.
    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)].clone()).sum()
    }

    /// Horizontal stack `[self | other]`. Empty blocks are identities for
    /// stacking provided row counts agree (0-row with 0-row, etc.).
    pub fn hstack(&self, other: &Self) -> Self {
        if self.cols == 0 && self.rows == 0 {
            return other.clone();
        }
        if other.cols == 0 && other.rows == 0 {
            return self.clone();
        }
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical stack `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        if self.rows == 0 && self.cols == 0 {
            return other.clone();
        }
        if other.rows == 0 && other.cols == 0 {
            return self.clone();
        }
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn vstack_all(blocks: &[&Self]) -> Self {
        let mut it = blocks.iter();
        let first = it.next().expect("vstack_all needs at least one block");
        it.fold((*first).clone(), |acc, b| acc.vstack(b))
    }

    /// Exact rank by fraction-free Bareiss elimination on an integer scaling
    /// of the matrix.
    pub fn rank(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        // Clear denominators row by row; row scaling does not change rank.
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let lcm = (0..self.cols).fold(BigInt::one(), |acc, j| {
                    acc.lcm(self[(i, j)].denom())
                });
                (0..self.cols)
                    .map(|j| {
                        let v = &self[(i, j)];
                        v.numer() * (&lcm / v.denom())
                    })
                    .collect()
            })
            .collect();

        let (rows, cols) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        let mut col = 0usize;
        while rank < rows && col < cols {
            // Pivot: first nonzero entry in this column at or below `rank`.
            let pivot_row = (rank..rows).find(|&i| !m[i][col].is_zero());
            let Some(p) = pivot_row else {
                col += 1;
                continue;
            };
            m.swap(rank, p);
            for i in rank + 1..rows {
                for j in col + 1..cols {
                    let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                    m[i][j] = &num / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r >= m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(r, j)].clone();
                    m[(r, j)] = tmp;
                }
            }
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &(&factor * &m[(r, j)]);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Canonical basis of the kernel: columns `b` with `self * b = 0`,
    /// `cols - rank` of them.
    pub fn nullspace_basis(&self) -> Self {
        if self.cols == 0 {
            return Self::zeros(0, 0);
        }
        if self.rows == 0 {
            return Self::identity(self.cols);
        }
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = Rat::one();
            for (pi, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = -r[(pi, fc)].clone();
            }
        }
        basis
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(Self::zeros(0, 0));
        }
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.columns(n, 2 * n))
    }

    /// Right inverse `G` with `self * G = I`, via `Fᵀ(FFᵀ)⁻¹`.
    pub fn right_inverse(&self) -> Result<Self, RatlinError> {
        let gram = self.mul(&self.transpose());
        let inv = gram.inverse().ok_or(RatlinError::NotFullRowRank)?;
        Ok(self.transpose().mul(&inv))
    }

    /// Block matrix `[B, AB, ..., A^{n-1}B]`.
    pub fn controllability_matrix(a: &Self, b: &Self) -> Result<Self, RatlinError> {
        if !a.is_square() || a.rows() != b.rows() {
            return Err(RatlinError::ShapeMismatch {
                what: "controllability matrix expects square A and conforming B".into(),
            });
        }
        let n = a.rows();
        let mut block = b.clone();
        let mut out = b.clone();
        for _ in 1..n {
            block = a.mul(&block);
            out = out.hstack(&block);
        }
        if n == 0 {
            out = Self::zeros(0, 0);
        }
        Ok(out)
    }

    /// Stacked matrix `[C; CA; ...; CA^{n-1}]`.
    pub fn observability_matrix(a: &Self, c: &Self) -> Result<Self, RatlinError> {
        if !a.is_square() || a.rows() != c.cols() {
            return Err(RatlinError::ShapeMismatch {
                what: "observability matrix expects square A and conforming C".into(),
            });
        }
        let n = a.rows();
        let mut block = c.clone();
        let mut out = c.clone();
        for _ in 1..n {
            block = block.mul(a);
            out = out.vstack(&block);
        }
        if n == 0 {
            out = Self::zeros(0, 0);
        }
        Ok(out)
    }
}
