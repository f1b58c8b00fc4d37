//! Prime-field arithmetic and dense matrices over `F_q`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// The prime field `F_q`. Elements are the residues `0..q` as `u32`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Field {
    q: u32,
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 || !is_prime(q) {
            return Err(Error::Validation(format!("field size {q} is not a prime")));
        }
        if q > 1 << 15 {
            return Err(Error::Validation(format!("field size {q} is too large")));
        }
        Ok(Field { q })
    }

    pub fn order(self) -> u32 {
        self.q
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.q - b) % self.q
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.q - a) % self.q
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.q
    }

    /// Multiplicative inverse; `a` must be non-zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "zero has no inverse");
        self.pow(a, self.q - 2)
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut acc = 1 % self.q;
        a %= self.q;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn nonzero(self) -> impl Iterator<Item = u32> {
        1..self.q
    }

    /// `Σ a_t b_t`.
    pub fn dot(self, a: &[u32], b: &[u32]) -> u32 {
        let s: u64 = a.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
        (s % self.q as u64) as u32
    }

    /// `a + c·b`, entrywise.
    pub fn axpy(self, a: &[u32], c: u32, b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| (x + c * y) % self.q).collect()
    }

    pub fn scale(self, c: u32, v: &[u32]) -> Vec<u32> {
        v.iter().map(|&x| x * c % self.q).collect()
    }
}

fn is_prime(q: u32) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// A dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}×{} over F_{}]", self.rows, self.cols, self.field.q)?;
        f.debug_list().entries(self.row_iter()).finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.row_iter())
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced modulo `q`.
    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        let data = data.into_iter().map(|x| x % field.q).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Validation(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(Self::from_data(field, rows.len(), cols, rows.concat()))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.q;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not compose");
        let q = self.field.q as u64;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let s: u64 = (0..self.cols)
                    .map(|k| self.get(r, k) as u64 * other.get(k, c) as u64)
                    .sum();
                out.data[r * other.cols + c] = (s % q) as u32;
            }
        }
        out
    }

    /// `M·v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "vector length does not match matrix");
        self.row_iter().map(|row| self.field.dot(row, v)).collect()
    }

    /// `v·M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.rows, v.len(), "vector length does not match matrix");
        let mut out = vec![0u32; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a != 0 {
                out = self.field.axpy(&out, a, self.row(r));
            }
        }
        out
    }

    /// Reduced row-echelon form with zero rows removed, plus pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            for k in 0..cols {
                m.swap(r * cols + k, p * cols + k);
            }
            let inv = f.inv(m[r * cols + c]);
            for k in 0..cols {
                m[r * cols + k] = f.mul(m[r * cols + k], inv);
            }
            for i in 0..rows {
                let factor = m[i * cols + c];
                if i != r && factor != 0 {
                    for k in 0..cols {
                        m[i * cols + k] = f.sub(m[i * cols + k], f.mul(factor, m[r * cols + k]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r * cols);
        (Matrix::from_data(f, r, cols, m), pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c));
            }
        }
        Some(inv)
    }

    /// A basis (as rows, in RREF) of `{x : M·x = 0}`.
    pub fn right_kernel(&self) -> Matrix {
        let f = self.field;
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u32; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(red.get(r, fc));
            }
            basis.push(v);
        }
        let m = Matrix::from_data(f, basis.len(), self.cols, basis.concat());
        m.rref().0
    }

    /// Solves `x·M = b` for a row vector `x`, if possible.
    pub fn solve_left(&self, b: &[u32]) -> Option<Vec<u32>> {
        // x·M = b  ⟺  Mᵀ·xᵀ = bᵀ
        let f = self.field;
        let t = self.transpose();
        let n = t.cols;
        let mut aug = Matrix::zeros(f, t.rows, n + 1);
        for r in 0..t.rows {
            for c in 0..n {
                aug.set(r, c, t.get(r, c));
            }
            aug.set(r, n, b[r]);
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![0u32; n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(r, n);
        }
        Some(x)
    }

    /// Every `rows×cols` matrix, in lexicographic order of the row-major data.
    pub fn all(field: Field, rows: usize, cols: usize) -> impl Iterator<Item = Matrix> {
        let len = rows * cols;
        let total = (field.q as u64).checked_pow(len as u32).expect("too many matrices");
        (0..total).map(move |mut code| {
            let mut data = vec![0u32; len];
            for slot in data.iter_mut().rev() {
                *slot = (code % field.q as u64) as u32;
                code /= field.q as u64;
            }
            Matrix::from_data(field, rows, cols, data)
        })
    }

    /// `GL_k(F_q)` in lexicographic order.
    pub fn invertible(field: Field, k: usize) -> Vec<Matrix> {
        Self::all(field, k, k).filter(Matrix::is_invertible).collect()
    }
}

/// `|GL_k(F_q)| = ∏_{i<k} (q^k − q^i)`.
pub fn gl_order(q: u32, k: usize) -> u128 {
    let q = q as u128;
    (0..k as u32).map(|i| q.pow(k as u32) - q.pow(i)).product()
}
