//! Dense matrices over F_p. Dimensions stay small (at most `2g`), so a flat
//! row-major `Vec<u64>` and cubic algorithms are all that is needed.

use crate::arith::{inv_mod, mul_mod};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p = {}, {}x{})", self.p, self.rows, self.cols)?;
        for r in self.to_rows() {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn scalar(p: u64, n: usize, c: u64) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, c % p);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            p,
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&v| v % p).collect(),
        }
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(p: u64, columns: &[Vec<u64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(p, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.cols.max(1)).map(<[u64]>::to_vec).take(self.rows).collect()
    }

    pub fn p(&self) -> u64 {
        self.p
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + mul_mod(a, other.get(k, j), p)) % p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| (acc + mul_mod(self.get(i, j), v[j], self.p)) % self.p))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o = (*o + v) % self.p;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (o, v) in out.data.iter_mut().zip(&other.data) {
            *o = (*o + self.p - v) % self.p;
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o = mul_mod(*o, c % self.p, self.p);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Row echelon reduction; returns the reduced matrix, pivot columns and
    /// the determinant factor accumulated from swaps and scalings.
    fn row_reduce(&self) -> (Self, Vec<usize>, u64) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = 1u64;
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                det = 0;
                continue;
            };
            if piv != row {
                for j in 0..m.cols {
                    let (a, b) = (m.get(row, j), m.get(piv, j));
                    m.set(row, j, b);
                    m.set(piv, j, a);
                }
                det = (p - det) % p;
            }
            let lead = m.get(row, col);
            det = mul_mod(det, lead, p);
            let inv = inv_mod(lead, p).expect("nonzero pivot");
            for j in 0..m.cols {
                let v = mul_mod(m.get(row, j), inv, p);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row {
                    let f = m.get(r, col);
                    if f != 0 {
                        for j in 0..m.cols {
                            let v = (m.get(r, j) + p - mul_mod(f, m.get(row, j), p)) % p;
                            m.set(r, j, v);
                        }
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if pivots.len() < m.rows.min(m.cols) {
            det = 0;
        }
        (m, pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    pub fn det(&self) -> u64 {
        assert!(self.is_square());
        let (_, pivots, det) = self.row_reduce();
        if pivots.len() == self.rows {
            det
        } else {
            0
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (red, pivots, _) = aug.row_reduce();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, red.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// Basis of the right null space `{v : Mv = 0}`.
    pub fn null_space(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let (red, pivots, _) = self.row_reduce();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - red.get(r, f)) % p;
                }
                v
            })
            .collect()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }
}
